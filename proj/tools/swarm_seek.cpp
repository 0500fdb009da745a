// Scenario runner, property-suite validator, and figure-data exporter for
// the source-seeking swarm library.

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <sseek/presets.hpp>
#include <sseek/scenario.hpp>
#include <sseek/trace_io.hpp>
#include <sseek/validate.hpp>

namespace fs = std::filesystem;
using namespace sseek;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenario = 2;
constexpr int kExitDivergence = 3;

int max_threads() {
    if (const char* env = std::getenv("SWARM_SEEK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_and_export(Scenario s, const std::string& out_dir) {
    fs::create_directories(out_dir);
    try {
        const Trace trace = run(s);
        write_trace_csv(trace, out_dir + "/trace.csv");
        write_aggregates_csv(trace, out_dir + "/aggregates.csv");
        write_metrics_json(trace, s.epsilon_ball, out_dir + "/metrics.json");
    } catch (const SimDivergence& e) {
        std::cerr << "numerical divergence at step " << e.step << ": "
                  << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitScenario;
    }
    return kExitOk;
}

int cmd_run(const std::string& path, const std::string& out_dir, int decimate,
            long long seed) {
    Scenario s;
    try {
        s = load_scenario(path);
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitScenario;
    }
    if (decimate > 0) s.decimate = decimate;
    if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
    return run_and_export(std::move(s), out_dir);
}

int cmd_validate(const std::string& suite) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = suite_names();
    } else {
        try {
            (void)0;
            names = {suite};
            // validate the name up front so unknown suites exit 2
            bool known = false;
            for (const auto& n : suite_names()) known |= (n == suite);
            if (!known) throw std::invalid_argument("unknown suite");
        } catch (...) {
            std::cerr << "unknown suite '" << suite << "'\n";
            return kExitScenario;
        }
    }
    std::vector<SuiteResult> results(names.size());
    std::atomic<std::size_t> next{0};
    const int workers =
        std::min<int>(max_threads(), static_cast<int>(names.size()));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t k = next.fetch_add(1); k < names.size();
                 k = next.fetch_add(1))
                results[k] = run_suite(names[k]);
        });
    for (auto& t : pool) t.join();

    bool all_pass = true;
    for (const auto& r : results) {
        for (const auto& c : r.checks) {
            std::cout << (c.pass ? "PASS" : "FAIL") << "  " << r.name << "."
                      << c.name << "  [" << c.margin << "]\n";
            all_pass &= c.pass;
        }
    }
    return all_pass ? kExitOk : 1;
}

void fig2(const std::string& out) {
    // ascent certificate h_S and the region bounds against the swarm spread
    std::ofstream f(out + "/fig2.csv");
    f << std::setprecision(10)
      << "D,h,K_min,K_max,M_S,grad_dot_L_sigma\n";
    GaussianField field(Eigen::Vector2d(6.0, 4.0), 1.0, 5.0);
    const Eigen::Vector2d pc(0.0, 0.0);
    for (double d = 0.05; d <= 3.0; d += 0.05) {
        const Deployment dep = regular_polygon(7, d);
        const RegionBounds rb =
            region_bounds(field, {pc, 0.0, d}, 2000);
        const double h = h_condition(dep, rb);
        const double dot =
            field.gradient(pc).dot(L_sigma(field, pc, dep));
        f << d << ',' << h << ',' << rb.K_min << ',' << rb.K_max << ','
          << rb.M_S << ',' << dot << '\n';
    }
}

void fig3(const std::string& out) {
    // first-order divergence against the spread, with its linear bound
    std::ofstream f(out + "/fig3.csv");
    f << std::setprecision(10) << "D,divergence,bound\n";
    GaussianField field(Eigen::Vector2d(3.0, 2.0), 1.0, 2.0);
    const Eigen::Vector2d pc(0.0, 0.0);
    for (double d = 0.02; d <= 1.0; d += 0.02) {
        Deployment dep = regular_polygon(9, d, 0.37);
        dep.coords[0] *= 0.7;  // break the symmetry so L2 shows up
        dep = from_positions(dep.coords);
        const auto bc = divergence_bound_check(field, pc, dep);
        f << d << ',' << bc.lhs << ',' << bc.rhs << '\n';
    }
}

void fig4(const std::string& out) {
    // alignment angle of the first-order term against deployment density
    std::ofstream f(out + "/fig4.csv");
    f << std::setprecision(10) << "N,alignment_angle\n";
    GaussianField field(Eigen::Vector2d(14.0, 9.0), 1.0, 10.0);
    const Eigen::Vector2d pc(0.0, 0.0);
    for (const int n : {30, 100, 300, 1000, 3000}) {
        std::vector<Eigen::VectorXd> pts;
        int i = 1;
        while (static_cast<int>(pts.size()) < n) {
            const Eigen::Vector2d u = BenchmarkField::halton2(i++);
            const Eigen::Vector2d q(6.0 * u.x() - 3.0, 6.0 * u.y() - 3.0);
            const double phi = std::atan2(q.y(), q.x());
            if (q.norm() <= (1.0 + 0.3 * std::cos(4.0 * phi)))
                pts.push_back(q);
        }
        f << n << ',' << alignment_angle(field, pc, from_positions(pts))
          << '\n';
    }
}

int fig_run(Scenario s, const std::string& out, const std::string& stem) {
    try {
        const Trace trace = run(s);
        write_trace_csv(trace, out + "/" + stem + "_trace.csv");
        write_aggregates_csv(trace, out + "/" + stem + "_aggregates.csv");
        write_metrics_json(trace, s.epsilon_ball,
                           out + "/" + stem + "_metrics.json");
        return kExitOk;
    } catch (const SimDivergence& e) {
        std::cerr << "numerical divergence at step " << e.step << ": "
                  << e.what() << "\n";
        return kExitDivergence;
    }
}

int cmd_figures(const std::string& name, const std::string& out) {
    fs::create_directories(out);
    if (name == "fig2") {
        fig2(out);
    } else if (name == "fig3") {
        fig3(out);
    } else if (name == "fig4") {
        fig4(out);
    } else if (name == "fig6") {
        Scenario s = presets::si_benchmark();
        s.decimate = 500;
        return fig_run(std::move(s), out, "fig6");
    } else if (name == "fig7") {
        Scenario s = presets::resilience();
        s.decimate = 500;
        const int rc = fig_run(s, out, "fig7");
        if (rc != kExitOk) return rc;
        std::ofstream f(out + "/fig7_removals.csv");
        f << "time,robot\n";
        for (const auto& e : s.events) f << e.time << ',' << e.robot << '\n';
    } else if (name == "fig8") {
        Scenario s = presets::unicycle_moving_source();
        s.decimate = 20;
        const int rc = fig_run(s, out, "fig8");
        if (rc != kExitOk) return rc;
        std::ofstream f(out + "/fig8_source.csv");
        f << std::setprecision(10) << "t,source_x,source_y\n";
        for (double t = 0.0; t <= s.horizon; t += 0.2) {
            s.field->set_time(t);
            const Eigen::VectorXd p = s.field->source_position();
            f << t << ',' << p.x() << ',' << p.y() << '\n';
        }
    } else {
        std::cerr << "unknown figure '" << name << "'\n";
        return kExitScenario;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed source-seeking swarm simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", suite = "all", figure;
    int decimate = -1;
    long long seed = -1;

    auto* run_cmd = app.add_subcommand("run", "run a scenario file");
    run_cmd->add_option("path", scenario_path, "scenario JSON file")
        ->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--decimate", decimate,
                        "keep every k-th per-robot record");
    run_cmd->add_option("--seed", seed, "override the scenario seed");

    auto* val_cmd =
        app.add_subcommand("validate", "run the property suites");
    val_cmd->add_option("--suite", suite, "suite name or 'all'");

    auto* fig_cmd =
        app.add_subcommand("figures", "emit plot-ready figure data");
    fig_cmd->add_option("name", figure, "fig2|fig3|fig4|fig6|fig7|fig8")
        ->required();
    fig_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitScenario;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(scenario_path, out_dir, decimate, seed);
        if (val_cmd->parsed()) return cmd_validate(suite);
        if (fig_cmd->parsed()) return cmd_figures(figure, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenario;
    }
    return kExitOk;
}
