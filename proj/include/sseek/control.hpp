#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace sseek {

struct ControlGains {
    double k_f = 0.1;      // formation gain
    double k_gamma = 1.0;  // heading gain
    double gamma = 0.3;    // alignment half-width target, in (0, pi/2)
};

inline double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    return a - M_PI == -M_PI ? M_PI : a - M_PI;  // range (-pi, pi]
}

inline Eigen::Vector2d heading_vector(double alpha) {
    return {std::cos(alpha), std::sin(alpha)};
}

// u_f = -k_f Lbar (p - p*); the consensus structure keeps the centroid fixed.
inline std::vector<Eigen::VectorXd> formation_control(
    const Graph& g, const std::vector<Eigen::VectorXd>& p,
    const std::vector<Eigen::VectorXd>& p_star, double k_f) {
    const int n = g.node_count();
    const int m = static_cast<int>(p[0].size());
    std::vector<Eigen::VectorXd> u(n, Eigen::VectorXd::Zero(m));
    for (const Edge& e : g.edges()) {
        const Eigen::VectorXd diff = (p[e.tail] - p[e.head]) -
                                     (p_star[e.tail] - p_star[e.head]);
        u[e.tail] -= k_f * diff;
        u[e.head] += k_f * diff;
    }
    return u;
}

// Single-integrator action: common unit direction plus the formation term.
inline std::vector<Eigen::VectorXd> si_control(
    const Eigen::VectorXd& direction,
    const std::vector<Eigen::VectorXd>& u_f) {
    std::vector<Eigen::VectorXd> u(u_f.size());
    for (std::size_t i = 0; i < u_f.size(); ++i) u[i] = direction + u_f[i];
    return u;
}

// Signed angle from heading m_i to desired m_d; +pi at the antipodal branch
// so simulations stay deterministic there.
inline double signed_delta(const Eigen::Vector2d& m_i,
                           const Eigen::Vector2d& m_d) {
    const double s = m_i.x() * m_d.y() - m_i.y() * m_d.x();  // (E m_i)^T m_d
    const double c = m_i.dot(m_d);
    const double d = std::atan2(s, c);
    return d == -M_PI ? M_PI : d;
}

// The error fed to the proportional law is measured from the desired
// direction to the heading, so omega = -k_gamma * delta contracts it.
inline double heading_error(double alpha, const Eigen::Vector2d& direction) {
    return signed_delta(direction, heading_vector(alpha));
}

inline double unicycle_control(double alpha, const Eigen::Vector2d& direction,
                               double k_gamma) {
    return -k_gamma * heading_error(alpha, direction);
}

// Smallest heading gain meeting the deformation, rate-tracking, and deadline
// requirements simultaneously.
inline double kappa_floor(double gamma, double omega_d, double t_deadline,
                          double kappa1) {
    if (gamma <= 0.0 || gamma >= M_PI / 2.0 || omega_d < 0.0 ||
        t_deadline <= 0.0 || kappa1 <= 0.0)
        throw std::invalid_argument("kappa_floor: invalid inputs");
    return std::max({kappa1, 2.0 * omega_d / gamma,
                     2.0 / t_deadline * std::log(M_PI / gamma)});
}

// Diagnostic finite-difference estimate of ||d m_d / dt|| from a window of
// desired-direction samples; the controller itself never reads this.
inline double omega_d_estimate(const std::vector<Eigen::Vector2d>& m_d_window,
                               double dt) {
    if (m_d_window.size() < 2)
        throw std::invalid_argument("omega_d_estimate: need >= 2 samples");
    double worst = 0.0;
    for (std::size_t k = 1; k < m_d_window.size(); ++k)
        worst = std::max(worst,
                         (m_d_window[k] - m_d_window[k - 1]).norm() / dt);
    return worst;
}

}  // namespace sseek
