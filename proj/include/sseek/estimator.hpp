#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace sseek {

// Explicit-Euler stability guard for the consensus layers: dt lambda_max/eps
// must stay below 2. Checked once at configuration, not per step.
inline void check_euler_guard(double dt, double lambda_max, double eps,
                              const char* what) {
    if (!(dt > 0.0) || !(eps > 0.0))
        throw std::invalid_argument(std::string(what) +
                                    ": dt and epsilon must be positive");
    if (dt * lambda_max / eps >= 2.0)
        throw std::invalid_argument(
            std::string(what) + ": unstable Euler step, dt*lambda_max/eps = " +
            std::to_string(dt * lambda_max / eps) + " >= 2");
}

struct DirectionEstimate {
    Eigen::VectorXd mu_c;            // mu_i - mu_hat_i
    Eigen::VectorXd unit_direction;  // unit when valid, else last valid one
    bool valid = false;
    bool hold = false;  // no valid direction has ever been produced
};

// Per-robot consensus state for the two estimation layers: centroid
// estimates x_hat (fast, eps_x) and direction estimates mu_hat (eps_mu).
// Columns index robots.
class Estimators {
  public:
    Estimators(const Graph& g, int m, double eps_x, double eps_mu, double dt)
        : m_(m),
          eps_x_(eps_x),
          eps_mu_(eps_mu),
          laplacian_(g.laplacian()),
          incidence_(g.incidence()),
          edges_(g.edges()),
          x_hat_(Eigen::MatrixXd::Zero(m, g.node_count())),
          mu_hat_(Eigen::MatrixXd::Zero(m, g.node_count())),
          mu_(Eigen::MatrixXd::Zero(m, g.node_count())),
          prev_dir_(Eigen::MatrixXd::Zero(m, g.node_count())),
          has_prev_(g.node_count(), false) {
        if (!g.is_connected())
            throw std::invalid_argument("Estimators: graph must be connected");
        const double lmax = spectrum(laplacian_).eigenvalues.maxCoeff();
        check_euler_guard(dt, lmax, eps_x_, "centroid estimator");
        check_euler_guard(dt, lmax, eps_mu_, "direction estimator");
    }

    int robot_count() const { return static_cast<int>(x_hat_.cols()); }
    int dim() const { return m_; }
    const Eigen::MatrixXd& x_hat() const { return x_hat_; }
    const Eigen::MatrixXd& mu_hat() const { return mu_hat_; }
    const Eigen::MatrixXd& mu() const { return mu_; }
    Eigen::VectorXd x_hat_sum() const { return x_hat_.rowwise().sum(); }

    // Anchored start: the designated robot seeds the conserved sum so the
    // estimates converge to positions relative to it instead of the centroid.
    void init_anchored(int anchor, const std::vector<Eigen::VectorXd>& p) {
        if (anchor < 0 || anchor >= robot_count())
            throw std::invalid_argument("init_anchored: bad anchor index");
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m_);
        for (const auto& pi : p) centroid += pi;
        centroid /= static_cast<double>(p.size());
        x_hat_.setZero();
        x_hat_.col(anchor) =
            -static_cast<double>(robot_count()) * (p[anchor] - centroid);
    }

    // One Euler step of x_hat' = (1/eps_x)(-L x_hat + B z), where z holds the
    // relative positions p_tail - p_head per edge. The conserved row sums make
    // the estimates land on centroid-relative coordinates.
    void centroid_step(const std::vector<Eigen::VectorXd>& positions,
                       double dt) {
        Eigen::MatrixXd z(m_, static_cast<Eigen::Index>(edges_.size()));
        for (std::size_t k = 0; k < edges_.size(); ++k)
            z.col(static_cast<Eigen::Index>(k)) =
                positions[edges_[k].tail] - positions[edges_[k].head];
        x_hat_ += dt / eps_x_ *
                  (-x_hat_ * laplacian_ + z * incidence_.transpose());
    }

    void mu_measure(const Eigen::VectorXd& sigma_readings) {
        if (sigma_readings.size() != robot_count())
            throw std::invalid_argument("mu_measure: size mismatch");
        for (int i = 0; i < robot_count(); ++i)
            mu_.col(i) = sigma_readings[i] * x_hat_.col(i);
    }

    void mu_step(double dt) {
        mu_hat_ += dt / eps_mu_ * ((mu_ - mu_hat_) * laplacian_);
    }

    DirectionEstimate direction(int i, double floor) {
        DirectionEstimate d;
        d.mu_c = mu_.col(i) - mu_hat_.col(i);
        const double n = d.mu_c.norm();
        if (n >= floor) {
            d.unit_direction = d.mu_c / n;
            d.valid = true;
            prev_dir_.col(i) = d.unit_direction;
            has_prev_[i] = true;
        } else if (has_prev_[i]) {
            d.unit_direction = prev_dir_.col(i);
        } else {
            d.unit_direction = Eigen::VectorXd::Zero(m_);
            d.hold = true;
        }
        return d;
    }

    // Drop one robot; surviving estimates are re-zeroed around their own mean
    // so the conserved sums match the new centroid frame.
    void remove_robot(int i, const Graph& survivors) {
        const int n = robot_count();
        Eigen::MatrixXd xh(m_, n - 1), mh(m_, n - 1), mm(m_, n - 1),
            pd(m_, n - 1);
        std::vector<bool> hp;
        int c = 0;
        for (int v = 0; v < n; ++v) {
            if (v == i) continue;
            xh.col(c) = x_hat_.col(v);
            mh.col(c) = mu_hat_.col(v);
            mm.col(c) = mu_.col(v);
            pd.col(c) = prev_dir_.col(v);
            hp.push_back(has_prev_[v]);
            ++c;
        }
        xh.colwise() -= Eigen::VectorXd(xh.rowwise().mean());
        mh.colwise() -= Eigen::VectorXd(mh.rowwise().mean());
        x_hat_ = std::move(xh);
        mu_hat_ = std::move(mh);
        mu_ = std::move(mm);
        prev_dir_ = std::move(pd);
        has_prev_ = std::move(hp);
        laplacian_ = survivors.laplacian();
        incidence_ = survivors.incidence();
        edges_ = survivors.edges();
    }

  private:
    int m_;
    double eps_x_, eps_mu_;
    Eigen::MatrixXd laplacian_, incidence_;
    std::vector<Edge> edges_;
    Eigen::MatrixXd x_hat_, mu_hat_, mu_, prev_dir_;
    std::vector<bool> has_prev_;
};

// Reference averaging protocol mu' = -L mu; test oracle for the consensus
// limit, not used by the runtime.
inline std::vector<Eigen::VectorXd> reset_consensus(
    const std::vector<Eigen::VectorXd>& mu0, const Graph& g, double dt,
    double horizon) {
    if (!g.is_connected())
        throw std::invalid_argument("reset_consensus: graph must be connected");
    const Eigen::MatrixXd l = g.laplacian();
    const int m = static_cast<int>(mu0[0].size());
    Eigen::MatrixXd mu(m, g.node_count());
    for (int i = 0; i < g.node_count(); ++i) mu.col(i) = mu0[i];
    check_euler_guard(dt, spectrum(l).eigenvalues.maxCoeff(), 1.0,
                      "reset_consensus");
    for (double t = 0.0; t < horizon; t += dt) mu -= dt * (mu * l);
    std::vector<Eigen::VectorXd> out(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) out[i] = mu.col(i);
    return out;
}

}  // namespace sseek
