#include <doctest.h>

#include <queue>

#include <sseek/graph.hpp>
#include <sseek/validate.hpp>

using namespace sseek;

namespace {

// independent reachability oracle
bool bfs_connected(const Graph& g) {
    std::vector<char> seen(g.node_count(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : g.neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                ++visited;
                q.push(w);
            }
    }
    return visited == g.node_count();
}

// the ten-node edge list without the bridge completing node 7's cycle
Graph ten_node_eleven_edges() {
    return Graph(10, {{0, 3},
                      {0, 9},
                      {3, 6},
                      {0, 8},
                      {8, 5},
                      {6, 7},
                      {1, 4},
                      {4, 2},
                      {8, 1},
                      {9, 2},
                      {5, 9}});
}

}  // namespace

TEST_CASE("incidence matrix structure") {
    const Graph single(2, {{0, 1}});
    const Eigen::MatrixXd b1 = single.incidence();
    CHECK(b1(0, 0) == 1.0);
    CHECK(b1(1, 0) == -1.0);

    const Graph tri(3, {{0, 1}, {1, 2}, {2, 0}});
    const Eigen::MatrixXd bt = tri.incidence();
    for (int k = 0; k < 3; ++k) CHECK(bt.col(k).sum() == 0.0);
    const Eigen::MatrixXd btb = bt.transpose() * bt;
    for (int k = 0; k < 3; ++k) CHECK(btb(k, k) == 2.0);

    const Graph ten = ten_node_eleven_edges();
    const Eigen::MatrixXd b = ten.incidence();
    CHECK(b.rows() == 10);
    CHECK(b.cols() == 11);
    CHECK((b.transpose() * Eigen::VectorXd::Ones(10)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("laplacian structure") {
    const Graph path = Graph::path(2);
    Eigen::Matrix2d expect;
    expect << 1, -1, -1, 1;
    CHECK((path.laplacian() - expect).cwiseAbs().maxCoeff() == 0.0);

    const Graph k3 = Graph::complete(3);
    Eigen::Matrix3d lk3;
    lk3 << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    CHECK((k3.laplacian() - lk3).cwiseAbs().maxCoeff() == 0.0);

    const Graph ten = Graph::reference10();
    const Eigen::MatrixXd l = ten.laplacian();
    CHECK((l * Eigen::VectorXd::Ones(10)).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd b = ten.incidence();
    CHECK((l - b * b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectrum values") {
    CHECK(spectrum(Graph::complete(3)).lambda2 == doctest::Approx(3.0));
    CHECK(spectrum(Graph::path(2)).lambda2 == doctest::Approx(2.0));
    const Spectrum s = spectrum(Graph::reference10());
    CHECK(std::abs(s.eigenvalues[0]) <= 1e-10);
    CHECK(s.eigenvalues.minCoeff() >= -1e-10);
    CHECK(s.lambda2 == doctest::Approx(0.26).epsilon(0.005 / 0.26));
}

TEST_CASE("connectivity") {
    CHECK_FALSE(Graph(2, {}).is_connected());
    CHECK(Graph::complete(3).is_connected());

    // ten-node network with node 8 isolated (its edges dropped)
    Graph stripped(10, {{0, 3}, {0, 9}, {3, 6}, {6, 7}, {1, 4}, {4, 2},
                        {9, 2}, {5, 9}, {3, 7}});
    CHECK(stripped.is_connected() == bfs_connected(stripped));
    CHECK_FALSE(stripped.is_connected());
}

TEST_CASE("node removal") {
    const auto r = Graph::complete(3).remove_node(2);
    CHECK(r.graph.node_count() == 2);
    CHECK(r.graph.edge_count() == 1);
    CHECK(r.graph.edges()[0].tail == 0);
    CHECK(r.graph.edges()[0].head == 1);
    CHECK(r.remap == std::vector<int>{0, 1, -1});

    const auto r2 = Graph::reference10().remove_node(7);
    CHECK(r2.graph.edge_count() == 10);
    CHECK(r2.graph.is_connected() == bfs_connected(r2.graph));

    // star graph: removing the hub disconnects everything
    Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK_FALSE(star.remove_node(0).graph.is_connected());

    CHECK_THROWS(Graph(1, {}).remove_node(0));
}

TEST_CASE("graph construction rejects bad input") {
    CHECK_THROWS(Graph(0, {}));
    CHECK_THROWS(Graph(3, {{0, 0}}));
    CHECK_THROWS(Graph(3, {{0, 1}, {1, 0}}));
    CHECK_THROWS(Graph(3, {{0, 5}}));
}

TEST_CASE("graph property suite") {
    const SuiteResult s = suite_graph();
    for (const auto& c : s.checks) {
        INFO(c.name, ": ", c.margin);
        CHECK(c.pass);
    }
}
