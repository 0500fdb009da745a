#pragma once

#include <memory>
#include <random>

#include "scenario.hpp"
#include "sim.hpp"

namespace sseek {
namespace presets {

// 30 single-integrators on a 5x6 grid seeking the non-convex benchmark
// signal with fully distributed estimation.
inline Scenario si_benchmark() {
    Scenario s;
    s.field = std::make_shared<BenchmarkField>();
    s.graph = Graph::grid(5, 6);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 6; ++c)
            s.positions0.push_back(
                Eigen::Vector2d(1.2 * (c - 2.5), 1.2 * (r - 2.0)));
    s.model = RobotModel::single_integrator;
    s.gains.k_f = 0.1;
    s.eps_x = 0.5;
    s.eps_mu = 0.001;
    s.dt = 2e-4;
    s.horizon = 85.0;
    double d0 = 0.0;
    for (const auto& p : s.positions0) d0 = std::max(d0, p.norm());
    s.epsilon_ball = 2.0 * d0;
    return s;
}

// Same run with eight robots dropped from the grid boundary at fixed
// intervals; the survivors stay connected throughout.
inline Scenario resilience() {
    Scenario s = si_benchmark();
    const int victims[8] = {0, 5, 24, 29, 1, 4, 25, 28};
    for (int k = 0; k < 8; ++k)
        s.events.push_back({22.5 + 3.75 * k, victims[k]});
    return s;
}

// 40 unit-speed unicycles with random headings chasing a slowly drifting
// source; exact swarm-level direction (no estimation layers).
inline Scenario unicycle_moving_source(std::uint64_t seed = 7,
                                       bool moving = true) {
    Scenario s;
    auto base = std::make_shared<GaussianField>(Eigen::Vector2d(60.0, 10.0),
                                                1.0, 45.0);
    if (moving) {
        const Eigen::Vector2d v(0.05, 0.03);
        const Eigen::VectorXd p0 = base->source_position();
        s.field = std::make_shared<MovingSourceField>(
            base, [p0, v](double t) { return Eigen::VectorXd(p0 + t * v); });
    } else {
        s.field = base;
    }
    s.graph = Graph::cycle(40);
    const Deployment d = regular_polygon(40, 3.0);
    for (const auto& c : d.coords) s.positions0.push_back(c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int i = 0; i < 40; ++i) s.headings0.push_back(u(rng));
    s.model = RobotModel::unicycle;
    s.gains.k_gamma = 4.0;
    s.gains.gamma = 0.3;
    s.oracle_direction = true;
    s.t_warm = 0.0;
    s.dt = 0.01;
    s.horizon = 120.0;
    s.epsilon_ball = 6.0;
    s.seed = seed;
    return s;
}

// Small demonstration: a heptagon of single-integrators on an isotropic
// Gaussian, everything estimated distributively over a ring network.
inline Scenario heptagon_gaussian() {
    Scenario s;
    s.field = std::make_shared<GaussianField>(Eigen::Vector2d(6.0, 4.0), 1.0,
                                              5.0);
    s.graph = Graph::cycle(7);
    const Deployment d = regular_polygon(7, 0.75);
    for (const auto& c : d.coords) s.positions0.push_back(c);
    s.model = RobotModel::single_integrator;
    s.gains.k_f = 0.1;
    s.eps_x = 0.5;
    s.eps_mu = 0.001;
    s.dt = 2e-4;
    s.horizon = 40.0;
    s.epsilon_ball = 1.5;
    return s;
}

}  // namespace presets
}  // namespace sseek
