#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ascent.hpp"
#include "control.hpp"
#include "deployment.hpp"
#include "estimator.hpp"
#include "field.hpp"
#include "graph.hpp"

namespace sseek {

enum class RobotModel { single_integrator, unicycle };

struct RemovalEvent {
    double time = 0.0;
    int robot = 0;  // original robot id
};

struct Scenario {
    std::shared_ptr<ScalarField> field;
    std::optional<Graph> graph;
    std::vector<Eigen::VectorXd> positions0;
    std::vector<double> headings0;  // unicycles only
    RobotModel model = RobotModel::single_integrator;
    ControlGains gains;
    double eps_x = 0.5;
    double eps_mu = 0.001;
    double dt = 0.01;
    double horizon = 10.0;
    double epsilon_ball = 1.0;
    double floor = -1.0;   // direction-validity floor; <0 derives the default
    double t_warm = -1.0;  // motion-freeze window; <0 derives the default
    bool oracle_direction = false;
    std::vector<RemovalEvent> events;
    std::uint64_t seed = 0;
    int decimate = 1;
};

// Thrown when integration produces NaN/Inf or an event breaks the network.
struct SimDivergence : std::runtime_error {
    long step;
    explicit SimDivergence(const std::string& msg, long step_index)
        : std::runtime_error(msg), step(step_index) {}
};

struct RobotRecord {
    double t = 0.0;
    int id = 0;  // original id, stable across removals
    Eigen::VectorXd p;
    double alpha = 0.0;
    double sigma_reading = 0.0;
    Eigen::VectorXd x_hat;
    Eigen::VectorXd mu_c;
    double delta = 0.0;
    bool active = true;
};

struct AggregateRecord {
    double t = 0.0;
    Eigen::VectorXd centroid;
    double dist_to_source = 0.0;
    double sigma_centroid = 0.0;
    double formation_err = 0.0;
    double max_deformation = 0.0;
    double max_abs_delta = 0.0;
    int active_count = 0;
};

struct Trace {
    std::vector<RobotRecord> records;       // decimated, one row per robot
    std::vector<AggregateRecord> aggregates;  // every step
    std::uint64_t hash = 0;
    double d0 = 0.0;       // initial spread
    double t_warm = 0.0;   // resolved warm-start window
    double floor = 0.0;    // resolved direction floor
};

struct Metrics {
    double final_dist = 0.0;
    double entry_time = -1.0;  // first time the centroid enters for good
    bool stays_inside = false;
    double max_deformation = 0.0;
    double max_abs_delta_tail = 0.0;  // over the last quarter of the run
    int survivors = 0;
};

namespace detail {

inline void fnv_mix(std::uint64_t& h, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
}

inline Eigen::VectorXd centroid_of(const std::vector<Eigen::VectorXd>& p) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(p[0].size());
    for (const auto& pi : p) c += pi;
    return c / static_cast<double>(p.size());
}

}  // namespace detail

class Simulator {
  public:
    explicit Simulator(Scenario s) : s_(std::move(s)) { validate(); }

    Trace run() {
        Trace trace;
        auto positions = s_.positions0;
        auto headings = s_.headings0;
        Graph graph = *s_.graph;
        std::vector<int> ids(positions.size());
        std::iota(ids.begin(), ids.end(), 0);
        const int m = static_cast<int>(positions[0].size());

        const Eigen::VectorXd pc0 = detail::centroid_of(positions);
        const Deployment x0_all = from_positions(positions);
        double d0 = 0.0;
        for (const auto& xi : x0_all.coords) d0 = std::max(d0, xi.norm());
        trace.d0 = d0;

        s_.field->set_time(0.0);
        const double floor =
            s_.floor >= 0.0 ? s_.floor
                            : 1e-9 * std::abs(s_.field->value(pc0)) * d0;
        const double lam2 = spectrum(graph).lambda2;
        double t_warm = s_.t_warm;
        if (t_warm < 0.0)
            t_warm = s_.oracle_direction
                         ? 0.0
                         : 10.0 * std::max(s_.eps_x, s_.eps_mu) / lam2;
        trace.t_warm = t_warm;
        trace.floor = floor;

        std::optional<Estimators> est;
        if (!s_.oracle_direction)
            est.emplace(graph, m, s_.eps_x, s_.eps_mu, s_.dt);

        // Desired shape for the formation term: the initial deployment.
        std::vector<Eigen::VectorXd> p_star = positions;
        // Initial centroid-relative coords per original id, for deformation.
        std::vector<Eigen::VectorXd> x0_by_id(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
            x0_by_id[i] = x0_all.coords[i];

        auto events = s_.events;
        std::size_t next_event = 0;
        const long n_steps = static_cast<long>(std::llround(
            s_.horizon / s_.dt));

        std::uint64_t hash = 1469598103934665603ull;
        std::vector<Eigen::Vector2d> last_dir(
            positions.size(), Eigen::Vector2d::Zero());
        std::vector<bool> dir_valid(positions.size(), false);
        std::vector<double> deltas(positions.size(), 0.0);

        for (long step = 0; step <= n_steps; ++step) {
            const double t = step * s_.dt;
            const int n = static_cast<int>(positions.size());

            // (1) field clock and per-robot readings
            s_.field->set_time(t);
            Eigen::VectorXd sigma(n);
            for (int i = 0; i < n; ++i) sigma[i] = s_.field->value(positions[i]);

            // (2)-(4) estimation layers, or the oracle shortcut
            std::vector<Eigen::VectorXd> dir(n);
            std::vector<bool> valid(n, false);
            if (s_.oracle_direction) {
                const Eigen::VectorXd pc = detail::centroid_of(positions);
                const Eigen::VectorXd l = L_sigma(*s_.field, pc,
                                                  from_positions(positions));
                const bool ok = l.norm() >= floor;
                for (int i = 0; i < n; ++i) {
                    valid[i] = ok;
                    dir[i] = ok ? Eigen::VectorXd(l.normalized())
                                : Eigen::VectorXd::Zero(m);
                }
            } else {
                est->centroid_step(positions, s_.dt);
                est->mu_measure(sigma);
                est->mu_step(s_.dt);
                for (int i = 0; i < n; ++i) {
                    const DirectionEstimate d = est->direction(i, floor);
                    dir[i] = d.unit_direction;
                    valid[i] = d.valid;
                }
            }

            const bool frozen = t < t_warm;

            // (5)-(6) control + kinematics
            if (!frozen && step < n_steps) {
                if (s_.model == RobotModel::single_integrator)
                    integrate_si(graph, positions, p_star, dir, valid);
                else
                    integrate_unicycle(positions, headings, dir, valid,
                                       deltas);
            } else if (s_.model == RobotModel::unicycle) {
                for (int i = 0; i < n; ++i)
                    deltas[i] = valid[i] ? heading_error(
                                               headings[i],
                                               Eigen::Vector2d(dir[i]))
                                         : 0.0;
            }

            for (int i = 0; i < n; ++i) {
                if (!positions[i].allFinite())
                    throw SimDivergence("non-finite position", step);
            }

            // (7) events due at this step
            while (next_event < events.size() &&
                   events[next_event].time <= t + 0.5 * s_.dt) {
                apply_removal(events[next_event].robot, graph, positions,
                              headings, ids, p_star, est, last_dir, dir_valid,
                              deltas, step);
                ++next_event;
            }

            // (8) record
            record(trace, hash, t, step, graph, positions, headings, ids,
                   p_star, x0_by_id, est, deltas, sigma);
        }

        trace.hash = hash;
        return trace;
    }

    static Metrics metrics(const Trace& trace, double epsilon_ball) {
        Metrics m;
        if (trace.aggregates.empty()) return m;
        const auto& last = trace.aggregates.back();
        m.final_dist = last.dist_to_source;
        m.survivors = last.active_count;
        double entry = -1.0;
        for (const auto& a : trace.aggregates) {
            m.max_deformation = std::max(m.max_deformation, a.max_deformation);
            if (a.dist_to_source < epsilon_ball) {
                if (entry < 0.0) entry = a.t;
            } else {
                entry = -1.0;
            }
        }
        m.entry_time = entry;
        m.stays_inside = entry >= 0.0;
        const std::size_t tail = trace.aggregates.size() * 3 / 4;
        for (std::size_t k = tail; k < trace.aggregates.size(); ++k)
            m.max_abs_delta_tail = std::max(m.max_abs_delta_tail,
                                            trace.aggregates[k].max_abs_delta);
        return m;
    }

  private:
    void validate() const {
        if (!s_.field) throw std::invalid_argument("scenario: missing field");
        if (!s_.graph) throw std::invalid_argument("scenario: missing graph");
        if (s_.dt <= 0.0) throw std::invalid_argument("scenario: dt <= 0");
        if (s_.horizon < 0.0)
            throw std::invalid_argument("scenario: horizon < 0");
        const int n = s_.graph->node_count();
        if (static_cast<int>(s_.positions0.size()) != n)
            throw std::invalid_argument(
                "scenario: positions do not match graph size");
        if (s_.model == RobotModel::unicycle &&
            static_cast<int>(s_.headings0.size()) != n)
            throw std::invalid_argument(
                "scenario: headings do not match graph size");
        if (!s_.graph->is_connected())
            throw std::invalid_argument("scenario: graph must be connected");
        for (std::size_t k = 1; k < s_.events.size(); ++k)
            if (s_.events[k].time < s_.events[k - 1].time)
                throw std::invalid_argument("scenario: events out of order");
        if (!s_.oracle_direction) {
            const double lmax =
                spectrum(*s_.graph).eigenvalues.maxCoeff();
            check_euler_guard(s_.dt, lmax, s_.eps_x, "centroid estimator");
            check_euler_guard(s_.dt, lmax, s_.eps_mu, "direction estimator");
        }
        if (s_.decimate < 1)
            throw std::invalid_argument("scenario: decimate < 1");
    }

    // RK4 over the coupled single-integrator flow; the unit direction and
    // validity flags are held over the step.
    void integrate_si(const Graph& g, std::vector<Eigen::VectorXd>& p,
                      const std::vector<Eigen::VectorXd>& p_star,
                      const std::vector<Eigen::VectorXd>& dir,
                      const std::vector<bool>& valid) const {
        const int n = static_cast<int>(p.size());
        auto deriv = [&](const std::vector<Eigen::VectorXd>& q) {
            auto u = formation_control(g, q, p_star, s_.gains.k_f);
            for (int i = 0; i < n; ++i)
                if (valid[i]) u[i] += dir[i];
            return u;
        };
        const double h = s_.dt;
        const auto k1 = deriv(p);
        auto q = p;
        for (int i = 0; i < n; ++i) q[i] = p[i] + 0.5 * h * k1[i];
        const auto k2 = deriv(q);
        for (int i = 0; i < n; ++i) q[i] = p[i] + 0.5 * h * k2[i];
        const auto k3 = deriv(q);
        for (int i = 0; i < n; ++i) q[i] = p[i] + h * k3[i];
        const auto k4 = deriv(q);
        for (int i = 0; i < n; ++i)
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    // RK4 per unicycle with the desired direction held over the step; the
    // heading rate is re-evaluated at substeps so delta contracts smoothly.
    void integrate_unicycle(std::vector<Eigen::VectorXd>& p,
                            std::vector<double>& alpha,
                            const std::vector<Eigen::VectorXd>& dir,
                            const std::vector<bool>& valid,
                            std::vector<double>& deltas) const {
        const double h = s_.dt;
        const double kg = s_.gains.k_gamma;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Eigen::Vector2d md = valid[i]
                                           ? Eigen::Vector2d(dir[i])
                                           : Eigen::Vector2d::Zero();
            auto omega = [&](double a) {
                return valid[i] ? -kg * heading_error(a, md) : 0.0;
            };
            deltas[i] = valid[i] ? heading_error(alpha[i], md) : 0.0;
            const double a0 = alpha[i];
            const double w1 = omega(a0);
            const Eigen::Vector2d v1 = heading_vector(a0);
            const double w2 = omega(a0 + 0.5 * h * w1);
            const Eigen::Vector2d v2 = heading_vector(a0 + 0.5 * h * w1);
            const double w3 = omega(a0 + 0.5 * h * w2);
            const Eigen::Vector2d v3 = heading_vector(a0 + 0.5 * h * w2);
            const double w4 = omega(a0 + h * w3);
            const Eigen::Vector2d v4 = heading_vector(a0 + h * w3);
            p[i] += h / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
            alpha[i] = wrap_angle(a0 + h / 6.0 * (w1 + 2.0 * w2 + 2.0 * w3 +
                                                  w4));
        }
    }

    void apply_removal(int original_id, Graph& graph,
                       std::vector<Eigen::VectorXd>& positions,
                       std::vector<double>& headings, std::vector<int>& ids,
                       std::vector<Eigen::VectorXd>& p_star,
                       std::optional<Estimators>& est,
                       std::vector<Eigen::Vector2d>& last_dir,
                       std::vector<bool>& dir_valid,
                       std::vector<double>& deltas, long step) const {
        int local = -1;
        for (std::size_t k = 0; k < ids.size(); ++k)
            if (ids[k] == original_id) local = static_cast<int>(k);
        if (local < 0)
            throw SimDivergence("removal event names an inactive robot", step);
        auto removal = graph.remove_node(local);
        if (!removal.graph.is_connected())
            throw SimDivergence(
                "removal of robot " + std::to_string(original_id) +
                    " disconnects the network",
                step);
        graph = removal.graph;
        positions.erase(positions.begin() + local);
        if (!headings.empty()) headings.erase(headings.begin() + local);
        ids.erase(ids.begin() + local);
        p_star.erase(p_star.begin() + local);
        last_dir.erase(last_dir.begin() + local);
        dir_valid.erase(dir_valid.begin() + local);
        deltas.erase(deltas.begin() + local);
        if (est) est->remove_robot(local, graph);
    }

    void record(Trace& trace, std::uint64_t& hash, double t, long step,
                const Graph& graph, const std::vector<Eigen::VectorXd>& p,
                const std::vector<double>& alpha, const std::vector<int>& ids,
                const std::vector<Eigen::VectorXd>& p_star,
                const std::vector<Eigen::VectorXd>& x0_by_id,
                const std::optional<Estimators>& est,
                const std::vector<double>& deltas,
                const Eigen::VectorXd& sigma) const {
        const int n = static_cast<int>(p.size());
        const Eigen::VectorXd pc = detail::centroid_of(p);
        AggregateRecord a;
        a.t = t;
        a.centroid = pc;
        a.dist_to_source = (pc - s_.field->source_position()).norm();
        a.sigma_centroid = s_.field->value(pc);
        a.active_count = n;
        // formation error and deformation in the survivors' centroid frame
        Eigen::VectorXd star_c = detail::centroid_of(p_star);
        Eigen::VectorXd x0_c = Eigen::VectorXd::Zero(p[0].size());
        for (int i = 0; i < n; ++i) x0_c += x0_by_id[ids[i]];
        x0_c /= static_cast<double>(n);
        double ferr = 0.0, deform = 0.0, dmax = 0.0;
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd xi = p[i] - pc;
            ferr += (xi - (p_star[i] - star_c)).norm();
            deform = std::max(deform, (xi - (x0_by_id[ids[i]] - x0_c)).norm());
            dmax = std::max(dmax, std::abs(deltas.empty() ? 0.0 : deltas[i]));
        }
        a.formation_err = ferr / n;
        a.max_deformation = deform;
        a.max_abs_delta = dmax;
        detail::fnv_mix(hash, a.t);
        detail::fnv_mix(hash, a.dist_to_source);
        detail::fnv_mix(hash, a.sigma_centroid);
        detail::fnv_mix(hash, a.max_deformation);
        for (int i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < p[i].size(); ++k)
                detail::fnv_mix(hash, p[i][k]);
        trace.aggregates.push_back(std::move(a));

        if (step % s_.decimate != 0) return;
        (void)graph;
        for (int i = 0; i < n; ++i) {
            RobotRecord r;
            r.t = t;
            r.id = ids[i];
            r.p = p[i];
            r.alpha = alpha.empty() ? 0.0 : alpha[i];
            r.sigma_reading = sigma[i];
            if (est) {
                r.x_hat = est->x_hat().col(i);
                r.mu_c = est->mu().col(i) - est->mu_hat().col(i);
            } else {
                r.x_hat = Eigen::VectorXd::Zero(p[i].size());
                r.mu_c = Eigen::VectorXd::Zero(p[i].size());
            }
            r.delta = deltas.empty() ? 0.0 : deltas[i];
            r.active = true;
            trace.records.push_back(std::move(r));
        }
    }

    Scenario s_;
};

inline Trace run(const Scenario& s) { return Simulator(s).run(); }

}  // namespace sseek
