#include <doctest.h>

#include <sseek/scenario.hpp>

#include <string>

using namespace sseek;
using nlohmann::json;

#ifndef SCENARIO_DIR
#define SCENARIO_DIR "scenarios"
#endif

namespace {
std::string bundled(const char* name) {
    return std::string(SCENARIO_DIR) + "/" + name;
}

json minimal() {
    return json::parse(R"({
        "schema_version": 1,
        "field": {"kind": "gaussian", "source": [5.0, 0.0], "width": 4.0},
        "graph": {"kind": "cycle", "n": 5},
        "deployment": {"kind": "polygon", "n": 5, "rho": 0.5},
        "oracle_direction": true,
        "dt": 0.05,
        "horizon": 1.0
    })");
}
}  // namespace

TEST_CASE("bundled scenarios load and validate") {
    for (const char* name :
         {"heptagon_gaussian.json", "si_benchmark.json", "resilience.json",
          "unicycle_moving_source.json"}) {
        INFO(name);
        const Scenario s = load_scenario(bundled(name));
        CHECK(s.field != nullptr);
        CHECK(s.graph->is_connected());
        CHECK(s.positions0.size() ==
              static_cast<std::size_t>(s.graph->node_count()));
        if (s.model == RobotModel::unicycle)
            CHECK(s.headings0.size() == s.positions0.size());
    }
}

TEST_CASE("minimal scenario parses with documented defaults") {
    const Scenario s = parse_scenario(minimal());
    CHECK(s.model == RobotModel::single_integrator);
    CHECK(s.eps_x == 0.5);
    CHECK(s.eps_mu == 0.001);
    CHECK(s.gains.k_f == doctest::Approx(0.1));
    CHECK(s.floor < 0.0);   // auto
    CHECK(s.t_warm < 0.0);  // auto
    CHECK(s.decimate == 1);
    const Trace t = run(s);
    CHECK(t.aggregates.size() == 21);
}

TEST_CASE("strict schema rejection") {
    json j = minimal();
    j["typo_field"] = 1;
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["schema_version"] = 2;
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j.erase("schema_version");
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["field"]["kind"] = "sinusoid";
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["field"]["extra"] = true;
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["graph"] = {{"kind", "cycle"}};  // missing n
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["deployment"]["kind"] = "spiral";
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["model"] = "bicycle";
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);

    j = minimal();
    j["events"] = json::array({{{"time", 0.5}, {"kind", "add_robot"},
                                {"robot", 0}}});
    CHECK_THROWS_AS(parse_scenario(j), ScenarioError);
}

TEST_CASE("malformed files surface as scenario errors") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.json"), ScenarioError);
    const std::string bad = "/tmp/sseek_bad_scenario.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_scenario(bad), ScenarioError);
}

TEST_CASE("graph and field variants") {
    json j = minimal();
    j["graph"] = {{"kind", "explicit"},
                  {"node_count", 3},
                  {"edges", json::array({json::array({0, 1}),
                                         json::array({1, 2})})}};
    j["deployment"] = {{"kind", "explicit"},
                       {"positions",
                        json::array({json::array({0.0, 0.0}),
                                     json::array({1.0, 0.0}),
                                     json::array({2.0, 0.0})})}};
    CHECK(parse_scenario(j).graph->edge_count() == 2);

    j = minimal();
    j["graph"] = {{"kind", "reference10"}};
    j["deployment"] = {{"kind", "polygon"}, {"n", 10}, {"rho", 1.0}};
    CHECK(parse_scenario(j).graph->node_count() == 10);

    j = minimal();
    j["field"] = {{"kind", "benchmark"}};
    j["deployment"]["center"] = json::array({3.0, 4.0});
    const Scenario s = parse_scenario(j);
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : s.positions0) c += Eigen::Vector2d(p);
    c /= static_cast<double>(s.positions0.size());
    CHECK((c - Eigen::Vector2d(3.0, 4.0)).norm() < 1e-10);

    j = minimal();
    j["field"]["moving"] = {{"kind", "linear"},
                            {"velocity", json::array({0.1, 0.0})}};
    const Scenario mv = parse_scenario(j);
    mv.field->set_time(10.0);
    CHECK((mv.field->source_position() - Eigen::Vector2d(6.0, 0.0)).norm() <
          1e-12);
}

TEST_CASE("unicycle headings are seed-reproducible") {
    json j = minimal();
    j["model"] = "unicycle";
    j["seed"] = 42;
    const Scenario a = parse_scenario(j);
    const Scenario b = parse_scenario(j);
    REQUIRE(a.headings0.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(a.headings0[i] == b.headings0[i]);
    j["seed"] = 43;
    const Scenario c = parse_scenario(j);
    bool differ = false;
    for (std::size_t i = 0; i < 5; ++i)
        differ = differ || a.headings0[i] != c.headings0[i];
    CHECK(differ);
    j["headings"] = json::array({0.0, 0.1, 0.2, 0.3, 0.4});
    CHECK(parse_scenario(j).headings0[2] == 0.2);
}
