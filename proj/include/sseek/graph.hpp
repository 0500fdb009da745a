#pragma once

#include <Eigen/Dense>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sseek {

// Undirected communication graph between robots. Edge orientation (tail ->
// head, tail = first element) is fixed at construction; every downstream
// quantity uses L = B B^T, which does not depend on the orientation choice.
struct Edge {
    int tail = 0;
    int head = 0;
};

class Graph {
  public:
    Graph(int node_count, std::vector<Edge> edges)
        : node_count_(node_count), edges_(std::move(edges)) {
        if (node_count_ <= 0)
            throw std::invalid_argument("Graph: node_count must be positive");
        std::vector<std::vector<char>> seen(node_count_,
                                            std::vector<char>(node_count_, 0));
        for (const Edge& e : edges_) {
            if (e.tail < 0 || e.tail >= node_count_ || e.head < 0 ||
                e.head >= node_count_)
                throw std::invalid_argument("Graph: edge index out of range");
            if (e.tail == e.head)
                throw std::invalid_argument("Graph: self-loop");
            if (seen[e.tail][e.head])
                throw std::invalid_argument("Graph: duplicate undirected edge");
            seen[e.tail][e.head] = seen[e.head][e.tail] = 1;
        }
    }

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    // N x |E|; column k carries +1 at the tail and -1 at the head of edge k.
    Eigen::MatrixXd incidence() const {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(node_count_, edges_.size());
        for (std::size_t k = 0; k < edges_.size(); ++k) {
            b(edges_[k].tail, static_cast<Eigen::Index>(k)) = 1.0;
            b(edges_[k].head, static_cast<Eigen::Index>(k)) = -1.0;
        }
        return b;
    }

    Eigen::MatrixXd laplacian() const {
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(node_count_, node_count_);
        for (const Edge& e : edges_) {
            l(e.tail, e.tail) += 1.0;
            l(e.head, e.head) += 1.0;
            l(e.tail, e.head) -= 1.0;
            l(e.head, e.tail) -= 1.0;
        }
        return l;
    }

    bool is_connected() const {
        std::vector<int> parent(node_count_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&parent](int a) {
            while (parent[a] != a) {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            return a;
        };
        int components = node_count_;
        for (const Edge& e : edges_) {
            int a = find(e.tail), b = find(e.head);
            if (a != b) {
                parent[a] = b;
                --components;
            }
        }
        return components == 1;
    }

    std::vector<int> neighbors(int i) const {
        std::vector<int> out;
        for (const Edge& e : edges_) {
            if (e.tail == i) out.push_back(e.head);
            if (e.head == i) out.push_back(e.tail);
        }
        return out;
    }

    struct Removal {
        Graph graph;
        std::vector<int> remap;  // remap[old index] = new index, -1 if removed
    };

    Removal remove_node(int i) const {
        if (i < 0 || i >= node_count_)
            throw std::invalid_argument("remove_node: index out of range");
        if (node_count_ == 1)
            throw std::invalid_argument("remove_node: cannot remove last node");
        std::vector<int> remap(node_count_);
        int next = 0;
        for (int v = 0; v < node_count_; ++v)
            remap[v] = (v == i) ? -1 : next++;
        std::vector<Edge> kept;
        for (const Edge& e : edges_)
            if (e.tail != i && e.head != i)
                kept.push_back({remap[e.tail], remap[e.head]});
        return {Graph(node_count_ - 1, std::move(kept)), std::move(remap)};
    }

    static Graph path(int n) {
        std::vector<Edge> e;
        for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
        return Graph(n, std::move(e));
    }

    static Graph complete(int n) {
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) e.push_back({i, j});
        return Graph(n, std::move(e));
    }

    static Graph cycle(int n) {
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
        return Graph(n, std::move(e));
    }

    static Graph grid(int rows, int cols) {
        std::vector<Edge> e;
        auto idx = [cols](int r, int c) { return r * cols + c; };
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                if (c + 1 < cols) e.push_back({idx(r, c), idx(r, c + 1)});
                if (r + 1 < rows) e.push_back({idx(r, c), idx(r + 1, c)});
            }
        return Graph(rows * cols, std::move(e));
    }

    // 10-node reference network with algebraic connectivity ~0.26, used by
    // the bundled scenarios and the estimator benchmarks.
    static Graph reference10() {
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
                          {5, 9},
                          {3, 7}});
    }

  private:
    int node_count_;
    std::vector<Edge> edges_;
};

struct Spectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    double lambda2 = 0.0;
};

inline Spectrum spectrum(const Eigen::MatrixXd& laplacian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigen-solver failed");
    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.lambda2 = s.eigenvalues.size() > 1 ? s.eigenvalues[1] : 0.0;
    return s;
}

inline Spectrum spectrum(const Graph& g) { return spectrum(g.laplacian()); }

}  // namespace sseek
