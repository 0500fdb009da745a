#pragma once

#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sim.hpp"

namespace sseek {

// One row per robot per decimated step. Column order is part of the
// external interface; see README.
inline void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << std::setprecision(17);
    const int m = trace.records.empty()
                      ? 2
                      : static_cast<int>(trace.records.front().p.size());
    out << "t,robot";
    for (int k = 0; k < m; ++k) out << ",p_" << static_cast<char>('x' + k);
    out << ",alpha,sigma_reading";
    for (int k = 0; k < m; ++k) out << ",xhat_" << static_cast<char>('x' + k);
    for (int k = 0; k < m; ++k) out << ",mu_c_" << static_cast<char>('x' + k);
    out << ",delta,active\n";
    for (const auto& r : trace.records) {
        out << r.t << ',' << r.id;
        for (int k = 0; k < m; ++k) out << ',' << r.p[k];
        out << ',' << r.alpha << ',' << r.sigma_reading;
        for (int k = 0; k < m; ++k) out << ',' << r.x_hat[k];
        for (int k = 0; k < m; ++k) out << ',' << r.mu_c[k];
        out << ',' << r.delta << ',' << (r.active ? 1 : 0) << '\n';
    }
}

// Per-step swarm-level aggregates, written for every step regardless of the
// per-robot decimation.
inline void write_aggregates_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << std::setprecision(17);
    const int m = trace.aggregates.empty()
                      ? 2
                      : static_cast<int>(trace.aggregates.front().centroid.size());
    out << "t";
    for (int k = 0; k < m; ++k)
        out << ",centroid_" << static_cast<char>('x' + k);
    out << ",dist_to_source,formation_err,max_deformation,sigma_centroid,"
           "max_abs_delta,active\n";
    for (const auto& a : trace.aggregates) {
        out << a.t;
        for (int k = 0; k < m; ++k) out << ',' << a.centroid[k];
        out << ',' << a.dist_to_source << ',' << a.formation_err << ','
            << a.max_deformation << ',' << a.sigma_centroid << ','
            << a.max_abs_delta << ',' << a.active_count << '\n';
    }
}

inline void write_metrics_json(const Trace& trace, double epsilon_ball,
                               const std::string& path) {
    const Metrics m = Simulator::metrics(trace, epsilon_ball);
    nlohmann::json j{{"final_dist", m.final_dist},
                     {"entry_time", m.entry_time},
                     {"stays_inside", m.stays_inside},
                     {"max_deformation", m.max_deformation},
                     {"max_abs_delta_tail", m.max_abs_delta_tail},
                     {"survivors", m.survivors},
                     {"epsilon_ball", epsilon_ball},
                     {"t_warm", trace.t_warm},
                     {"initial_spread", trace.d0},
                     {"trace_hash", trace.hash}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace sseek
