#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "deployment.hpp"
#include "field.hpp"

namespace sseek {

struct AscentResult {
    Eigen::VectorXd L;   // measured direction (1/(N D^2)) sum sigma(p_c+x_i) x_i
    Eigen::VectorXd L1;  // first Taylor term, equals (1/D^2) P grad
    Eigen::VectorXd L2;  // second Taylor term
    double D = 0.0;
};

namespace detail {
inline double spread_or_throw(const Deployment& x, const char* who) {
    double d = 0.0;
    for (const auto& xi : x.coords) d = std::max(d, xi.norm());
    if (d <= 0.0)
        throw std::invalid_argument(std::string(who) +
                                    ": zero spread (all robots at centroid)");
    return d;
}
}  // namespace detail

inline Eigen::VectorXd L_sigma(const ScalarField& f,
                               const Eigen::VectorXd& p_c,
                               const Deployment& x) {
    const double d = detail::spread_or_throw(x, "L_sigma");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.dim());
    for (const auto& xi : x.coords) acc += f.value(p_c + xi) * xi;
    return acc / (x.count() * d * d);
}

// Summation form is returned; the equivalent covariance form (1/D^2) P grad
// is cross-checked on every call since both appear in the analysis.
inline Eigen::VectorXd L1_sigma(const ScalarField& f,
                                const Eigen::VectorXd& p_c,
                                const Deployment& x) {
    const double d = detail::spread_or_throw(x, "L1_sigma");
    const Eigen::VectorXd g = f.gradient(p_c);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.dim());
    for (const auto& xi : x.coords) acc += g.dot(xi) * xi;
    acc /= x.count() * d * d;
    const Eigen::VectorXd via_cov = stats(x).P * g / (d * d);
    if ((acc - via_cov).norm() > 1e-12 * std::max(1.0, acc.norm()))
        throw std::runtime_error("L1_sigma: summation/covariance paths differ");
    return acc;
}

inline Eigen::VectorXd L2_sigma(const ScalarField& f,
                                const Eigen::VectorXd& p_c,
                                const Deployment& x) {
    const double d = detail::spread_or_throw(x, "L2_sigma");
    const Eigen::MatrixXd h = f.hessian(p_c);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.dim());
    for (const auto& xi : x.coords) acc += 0.5 * xi.dot(h * xi) * xi;
    return acc / (x.count() * d * d);
}

inline AscentResult ascent(const ScalarField& f, const Eigen::VectorXd& p_c,
                           const Deployment& x) {
    AscentResult r;
    r.L = L_sigma(f, p_c, x);
    r.L1 = L1_sigma(f, p_c, x);
    r.L2 = L2_sigma(f, p_c, x);
    r.D = detail::spread_or_throw(x, "ascent");
    return r;
}

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// ||L - L1|| <= M D, the linear-in-spread divergence bound.
inline BoundCheck divergence_bound_check(const ScalarField& f,
                                         const Eigen::VectorXd& p_c,
                                         const Deployment& x) {
    BoundCheck c;
    c.lhs = (L_sigma(f, p_c, x) - L1_sigma(f, p_c, x)).norm();
    c.rhs = f.bounds().M * detail::spread_or_throw(x, "divergence_bound_check");
    c.holds = c.lhs <= c.rhs + 1e-9;
    return c;
}

// lambda_min(P)/D^2 <= grad^T L1 / ||grad||^2 <= lambda_max(P)/D^2.
inline bool rayleigh_bounds_check(const ScalarField& f,
                                  const Eigen::VectorXd& p_c,
                                  const Deployment& x) {
    const DeploymentStats s = stats(x);
    if (s.degenerate)
        throw std::invalid_argument("rayleigh_bounds_check: degenerate x");
    const Eigen::VectorXd g = f.gradient(p_c);
    const double g2 = g.squaredNorm();
    if (g2 <= 0.0)
        throw std::invalid_argument("rayleigh_bounds_check: zero gradient");
    const double q = g.dot(L1_sigma(f, p_c, x)) / g2;
    const double d2 = s.D * s.D;
    const double slack = 1e-12 * std::max(1.0, s.lambda_max / d2);
    return s.lambda_min / d2 - slack <= q && q <= s.lambda_max / d2 + slack;
}

inline double angle_between(const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v) {
    const double nu = u.norm(), nv = v.norm();
    if (nu <= 0.0 || nv <= 0.0)
        throw std::invalid_argument("angle_between: zero vector");
    if (u.size() == 2)
        return std::abs(std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v)));
    const double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
    return std::acos(c);
}

// Unsigned angle between the first Taylor term and the true gradient.
inline double alignment_angle(const ScalarField& f, const Eigen::VectorXd& p_c,
                              const Deployment& x) {
    const Eigen::VectorXd g = f.gradient(p_c);
    if (g.norm() <= 0.0)
        throw std::invalid_argument("alignment_angle: zero gradient");
    if (stats(x).degenerate)
        throw std::invalid_argument("alignment_angle: degenerate deployment");
    return angle_between(L1_sigma(f, p_c, x), g);
}

}  // namespace sseek
