#pragma once

#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sim.hpp"

namespace sseek {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j,
                           const std::set<std::string>& allowed,
                           const std::string& where) {
    if (!j.is_object()) throw ScenarioError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ScenarioError(where + ": unknown field '" + key + "'");
    }
}

inline Eigen::VectorXd to_vector(const nlohmann::json& j,
                                 const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ScenarioError(where + ": expected a numeric array");
    Eigen::VectorXd v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) v[k] = j[k].get<double>();
    return v;
}

inline Eigen::MatrixXd to_matrix2(const nlohmann::json& j,
                                  const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ScenarioError(where + ": expected a 2x2 matrix");
    Eigen::Matrix2d m;
    for (int r = 0; r < 2; ++r) {
        if (!j[r].is_array() || j[r].size() != 2)
            throw ScenarioError(where + ": expected a 2x2 matrix");
        for (int c = 0; c < 2; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

inline std::shared_ptr<ScalarField> parse_field(const nlohmann::json& j) {
    reject_unknown(j,
                   {"kind", "source", "amplitude", "width", "c", "q",
                    "domain_radius", "delta", "k", "w_a", "w_b", "a", "b",
                    "q_a", "q_b", "domain_half_width", "moving"},
                   "field");
    const std::string kind = j.at("kind").get<std::string>();
    std::shared_ptr<ScalarField> base;
    if (kind == "gaussian") {
        base = std::make_shared<GaussianField>(
            to_vector(j.at("source"), "field.source"),
            j.value("amplitude", 1.0), j.value("width", 1.0));
    } else if (kind == "quadratic") {
        base = std::make_shared<QuadraticField>(
            to_vector(j.at("source"), "field.source"), j.value("c", 10.0),
            to_matrix2(j.at("q"), "field.q"), j.value("domain_radius", 10.0));
    } else if (kind == "benchmark") {
        BenchmarkField::Params p;
        if (j.contains("source")) p.source = to_vector(j["source"], "source");
        p.delta = j.value("delta", p.delta);
        p.k = j.value("k", p.k);
        p.c = j.value("c", p.c);
        p.w_a = j.value("w_a", p.w_a);
        p.w_b = j.value("w_b", p.w_b);
        if (j.contains("a")) p.a = to_vector(j["a"], "field.a");
        if (j.contains("b")) p.b = to_vector(j["b"], "field.b");
        if (j.contains("q_a")) p.q_a = to_matrix2(j["q_a"], "field.q_a");
        if (j.contains("q_b")) p.q_b = to_matrix2(j["q_b"], "field.q_b");
        p.domain_half_width = j.value("domain_half_width", p.domain_half_width);
        base = std::make_shared<BenchmarkField>(p);
    } else {
        throw ScenarioError("field: unknown kind '" + kind + "'");
    }
    if (!j.contains("moving")) return base;
    const auto& mv = j["moving"];
    reject_unknown(mv, {"kind", "velocity", "center", "radius", "rate"},
                   "field.moving");
    const std::string mk = mv.at("kind").get<std::string>();
    const Eigen::VectorXd p0 = base->source_position();
    if (mk == "linear") {
        const Eigen::VectorXd v = to_vector(mv.at("velocity"), "velocity");
        return std::make_shared<MovingSourceField>(
            base, [p0, v](double t) { return Eigen::VectorXd(p0 + t * v); });
    }
    if (mk == "circle") {
        const Eigen::VectorXd c =
            mv.contains("center") ? to_vector(mv["center"], "center") : p0;
        const double radius = mv.at("radius").get<double>();
        const double rate = mv.at("rate").get<double>();
        return std::make_shared<MovingSourceField>(base, [c, radius,
                                                          rate](double t) {
            Eigen::VectorXd p = c;
            p.x() += radius * std::cos(rate * t);
            p.y() += radius * std::sin(rate * t);
            return p;
        });
    }
    throw ScenarioError("field.moving: unknown kind '" + mk + "'");
}

inline Graph parse_graph(const nlohmann::json& j) {
    reject_unknown(j, {"kind", "edges", "node_count", "n", "rows", "cols"},
                   "graph");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "explicit") {
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges"))
            edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        return Graph(j.at("node_count").get<int>(), std::move(edges));
    }
    if (kind == "reference10") return Graph::reference10();
    if (kind == "path") return Graph::path(j.at("n").get<int>());
    if (kind == "cycle") return Graph::cycle(j.at("n").get<int>());
    if (kind == "complete") return Graph::complete(j.at("n").get<int>());
    if (kind == "grid")
        return Graph::grid(j.at("rows").get<int>(), j.at("cols").get<int>());
    throw ScenarioError("graph: unknown kind '" + kind + "'");
}

inline std::vector<Eigen::VectorXd> parse_deployment(const nlohmann::json& j) {
    reject_unknown(j,
                   {"kind", "positions", "n", "rho", "phase", "n_half", "a1",
                    "alpha", "rows", "cols", "spacing", "center"},
                   "deployment");
    const std::string kind = j.at("kind").get<std::string>();
    std::vector<Eigen::VectorXd> p;
    if (kind == "explicit") {
        for (const auto& pi : j.at("positions"))
            p.push_back(to_vector(pi, "deployment.positions"));
    } else if (kind == "polygon") {
        const Deployment d =
            regular_polygon(j.at("n").get<int>(), j.at("rho").get<double>(),
                            j.value("phase", 0.0));
        p = d.coords;
    } else if (kind == "cross") {
        const Deployment d = cross_deployment(j.at("n_half").get<int>(),
                                              j.at("a1").get<double>(),
                                              j.at("alpha").get<double>());
        p = d.coords;
    } else if (kind == "grid") {
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        const double s = j.at("spacing").get<double>();
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                p.push_back(Eigen::Vector2d(c * s, r * s));
        const Deployment d = from_positions(p);
        p = d.coords;
    } else {
        throw ScenarioError("deployment: unknown kind '" + kind + "'");
    }
    if (j.contains("center")) {
        const Eigen::VectorXd c = to_vector(j["center"], "deployment.center");
        for (auto& pi : p) pi += c;
    }
    return p;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
    detail::reject_unknown(
        j,
        {"schema_version", "field", "graph", "deployment", "model", "gains",
         "estimators", "oracle_direction", "dt", "horizon", "epsilon_ball",
         "seed", "headings", "events", "decimate"},
        "scenario");
    if (j.value("schema_version", 0) != 1)
        throw ScenarioError("scenario: schema_version must be 1");
    Scenario s;
    s.field = detail::parse_field(j.at("field"));
    s.graph = detail::parse_graph(j.at("graph"));
    s.positions0 = detail::parse_deployment(j.at("deployment"));

    const std::string model = j.value("model", "single_integrator");
    if (model == "single_integrator")
        s.model = RobotModel::single_integrator;
    else if (model == "unicycle")
        s.model = RobotModel::unicycle;
    else
        throw ScenarioError("scenario: unknown model '" + model + "'");

    if (j.contains("gains")) {
        detail::reject_unknown(j["gains"], {"k_f", "k_gamma", "gamma"},
                               "gains");
        s.gains.k_f = j["gains"].value("k_f", s.gains.k_f);
        s.gains.k_gamma = j["gains"].value("k_gamma", s.gains.k_gamma);
        s.gains.gamma = j["gains"].value("gamma", s.gains.gamma);
    }
    if (j.contains("estimators")) {
        detail::reject_unknown(j["estimators"],
                               {"epsilon_x", "epsilon_mu", "floor", "t_warm"},
                               "estimators");
        s.eps_x = j["estimators"].value("epsilon_x", s.eps_x);
        s.eps_mu = j["estimators"].value("epsilon_mu", s.eps_mu);
        s.floor = j["estimators"].value("floor", s.floor);
        s.t_warm = j["estimators"].value("t_warm", s.t_warm);
    }
    s.oracle_direction = j.value("oracle_direction", false);
    s.dt = j.value("dt", s.dt);
    s.horizon = j.at("horizon").get<double>();
    s.epsilon_ball = j.value("epsilon_ball", s.epsilon_ball);
    s.seed = j.value("seed", 0ull);
    s.decimate = j.value("decimate", 1);

    if (s.model == RobotModel::unicycle) {
        if (j.contains("headings") && j["headings"].is_array()) {
            for (const auto& a : j["headings"])
                s.headings0.push_back(a.get<double>());
        } else {
            // seed-reproducible random headings
            std::mt19937_64 rng(s.seed);
            std::uniform_real_distribution<double> u(-M_PI, M_PI);
            for (std::size_t i = 0; i < s.positions0.size(); ++i)
                s.headings0.push_back(u(rng));
        }
    }

    if (j.contains("events")) {
        for (const auto& e : j["events"]) {
            detail::reject_unknown(e, {"time", "kind", "robot"}, "event");
            if (e.at("kind").get<std::string>() != "remove_robot")
                throw ScenarioError("event: unknown kind");
            s.events.push_back(
                {e.at("time").get<double>(), e.at("robot").get<int>()});
        }
    }
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("malformed scenario JSON: ") +
                            e.what());
    }
    try {
        return parse_scenario(j);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError(std::string("invalid scenario: ") + e.what());
    }
}

}  // namespace sseek
