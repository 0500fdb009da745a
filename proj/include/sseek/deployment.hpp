#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "field.hpp"

namespace sseek {

// Centroid-relative robot coordinates; sum of coords is zero by construction.
struct Deployment {
    std::vector<Eigen::VectorXd> coords;

    int count() const { return static_cast<int>(coords.size()); }
    int dim() const { return coords.empty() ? 0 : static_cast<int>(coords[0].size()); }
};

struct DeploymentStats {
    Eigen::MatrixXd P;  // (1/N) sum x_i x_i^T
    double D = 0.0;     // max_i ||x_i||
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    bool degenerate = true;
};

inline Deployment from_positions(const std::vector<Eigen::VectorXd>& p) {
    if (p.empty()) throw std::invalid_argument("from_positions: empty list");
    const int m = static_cast<int>(p[0].size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
    for (const auto& pi : p) {
        if (pi.size() != m)
            throw std::invalid_argument("from_positions: mixed dimensions");
        mean += pi;
    }
    mean /= static_cast<double>(p.size());
    Deployment d;
    d.coords.reserve(p.size());
    for (const auto& pi : p) d.coords.push_back(pi - mean);
    return d;
}

inline DeploymentStats stats(const Deployment& x) {
    const int m = x.dim();
    const int n = x.count();
    DeploymentStats s;
    s.P = Eigen::MatrixXd::Zero(m, m);
    for (const auto& xi : x.coords) {
        s.P += xi * xi.transpose();
        s.D = std::max(s.D, xi.norm());
    }
    s.P /= static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.P);
    s.lambda_min = es.eigenvalues().minCoeff();
    s.lambda_max = es.eigenvalues().maxCoeff();
    // relative test so uniform scaling never flips degeneracy
    s.degenerate = s.lambda_min < 1e-9 * s.lambda_max;
    return s;
}

inline Deployment regular_polygon(int n, double rho, double phase = 0.0) {
    if (n < 3) throw std::invalid_argument("regular_polygon: N >= 3");
    if (rho <= 0.0) throw std::invalid_argument("regular_polygon: rho > 0");
    std::vector<Eigen::VectorXd> p;
    p.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double th = phase + 2.0 * M_PI * k / n;
        p.push_back(Eigen::Vector2d(rho * std::cos(th), rho * std::sin(th)));
    }
    return from_positions(p);
}

// Two perpendicular rank-1 segments of N_half robots each, distances in
// geometric progression a_{i+1} = alpha a_i with the last one adjusted so
// that sum_{i=2}^{N_half/2} a_i^2 = (N_half/4) a_1^2 holds exactly.
inline Deployment cross_deployment(int n_half, double a1, double alpha) {
    if (n_half < 4 || n_half % 2 != 0)
        throw std::invalid_argument("cross_deployment: N_half even and >= 4");
    if (a1 <= 0.0 || alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("cross_deployment: a1 > 0, alpha in (0,1)");
    const int pairs = n_half / 2;  // distances a_1..a_pairs, robots at +-a_i
    std::vector<double> a(pairs);
    a[0] = a1;
    const double target = (n_half / 4.0) * a1 * a1;  // required sum over i>=2
    double partial = 0.0;
    for (int i = 1; i < pairs - 1; ++i) {
        a[i] = alpha * a[i - 1];
        partial += a[i] * a[i];
    }
    if (pairs >= 2) {
        const double last_sq = target - partial;
        if (last_sq < 0.0) {
            std::ostringstream msg;
            msg << "cross_deployment: infeasible adjustment for N_half="
                << n_half << ", a1=" << a1 << ", alpha=" << alpha;
            throw std::invalid_argument(msg.str());
        }
        a[pairs - 1] = std::sqrt(last_sq);
    }
    std::vector<Eigen::VectorXd> p;
    p.reserve(2 * n_half);
    for (int i = 0; i < pairs; ++i) {
        p.push_back(Eigen::Vector2d(a[i], 0.0));
        p.push_back(Eigen::Vector2d(-a[i], 0.0));
        p.push_back(Eigen::Vector2d(0.0, a[i]));
        p.push_back(Eigen::Vector2d(0.0, -a[i]));
    }
    return from_positions(p);
}

inline Deployment affine_transform(const Deployment& x,
                                   const Eigen::MatrixXd& a) {
    Deployment out;
    out.coords.reserve(x.coords.size());
    for (const auto& xi : x.coords) out.coords.push_back(a * xi);
    return out;
}

// Eq-style ascent certificate: positive value guarantees the measured
// direction ascends everywhere the region bounds apply.
inline double h_condition(const Deployment& x, const RegionBounds& rb) {
    const DeploymentStats s = stats(x);
    if (s.degenerate)
        throw std::invalid_argument("h_condition: degenerate deployment");
    return s.lambda_min / (s.D * s.D) * rb.K_min - rb.M_S * s.D;
}

struct SymmetryMoments {
    double m_xy = 0.0;     // normalized sum w * X * Y
    double m_xx_yy = 0.0;  // normalized sum w * (X^2 - Y^2)
};

inline SymmetryMoments symmetry_moments(
    const std::vector<std::pair<Eigen::Vector2d, double>>& density_samples) {
    double wsum = 0.0;
    SymmetryMoments m;
    for (const auto& [pt, w] : density_samples) {
        if (w < 0.0)
            throw std::invalid_argument("symmetry_moments: negative weight");
        wsum += w;
        m.m_xy += w * pt.x() * pt.y();
        m.m_xx_yy += w * (pt.x() * pt.x() - pt.y() * pt.y());
    }
    if (wsum <= 0.0)
        throw std::invalid_argument("symmetry_moments: total weight is 0");
    m.m_xy /= wsum;
    m.m_xx_yy /= wsum;
    return m;
}

inline double deformation(const Deployment& x_t, const Deployment& x_0) {
    if (x_t.count() != x_0.count() || x_t.dim() != x_0.dim())
        throw std::invalid_argument("deformation: size mismatch");
    double worst = 0.0;
    for (int i = 0; i < x_t.count(); ++i)
        worst = std::max(worst, (x_t.coords[i] - x_0.coords[i]).norm());
    return worst;
}

}  // namespace sseek
