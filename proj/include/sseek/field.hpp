#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace sseek {

struct FieldBounds {
    double K = 0.0;  // gradient-norm upper bound
    double M = 0.0;  // half the Hessian-norm bound, ||H|| <= 2M
};

// Positive scalar signal with a single maximum at the source. Evaluation is
// pure; set_time only matters for the moving-source wrapper.
class ScalarField {
  public:
    virtual ~ScalarField() = default;
    virtual int dimension() const = 0;
    virtual Eigen::VectorXd source_position() const = 0;
    virtual FieldBounds bounds() const = 0;
    virtual double value(const Eigen::VectorXd& p) const = 0;
    virtual Eigen::VectorXd gradient(const Eigen::VectorXd& p) const = 0;
    virtual Eigen::MatrixXd hessian(const Eigen::VectorXd& p) const = 0;
    virtual void set_time(double) {}
};

class GaussianField final : public ScalarField {
  public:
    GaussianField(Eigen::VectorXd source, double amplitude, double width)
        : source_(std::move(source)), amplitude_(amplitude), width_(width) {
        if (amplitude_ <= 0.0 || width_ <= 0.0)
            throw std::invalid_argument("GaussianField: A and s must be > 0");
    }

    int dimension() const override { return static_cast<int>(source_.size()); }
    Eigen::VectorXd source_position() const override { return source_; }

    FieldBounds bounds() const override {
        // max ||grad|| at r = s; max ||H|| at the peak.
        return {amplitude_ * std::exp(-0.5) / width_,
                amplitude_ / (2.0 * width_ * width_)};
    }

    double value(const Eigen::VectorXd& p) const override {
        const double r2 = (p - source_).squaredNorm();
        return amplitude_ * std::exp(-r2 / (2.0 * width_ * width_));
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& p) const override {
        return value(p) * (source_ - p) / (width_ * width_);
    }

    Eigen::MatrixXd hessian(const Eigen::VectorXd& p) const override {
        const Eigen::VectorXd d = p - source_;
        const double s2 = width_ * width_;
        const int m = dimension();
        return value(p) / s2 *
               (d * d.transpose() / s2 - Eigen::MatrixXd::Identity(m, m));
    }

  private:
    Eigen::VectorXd source_;
    double amplitude_;
    double width_;
};

// sigma(p) = c - (p - p_sigma)^T Q (p - p_sigma), Q positive definite.
// Gradient is unbounded globally, so K is quoted over a stated domain radius.
class QuadraticField final : public ScalarField {
  public:
    QuadraticField(Eigen::VectorXd source, double c, Eigen::MatrixXd q,
                   double domain_radius)
        : source_(std::move(source)),
          c_(c),
          q_(std::move(q)),
          domain_radius_(domain_radius) {
        if (domain_radius_ <= 0.0)
            throw std::invalid_argument("QuadraticField: domain_radius <= 0");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            0.5 * (q_ + q_.transpose()));
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw std::invalid_argument("QuadraticField: Q must be PD");
        q_ = 0.5 * (q_ + q_.transpose());
        lambda_max_ = es.eigenvalues().maxCoeff();
    }

    int dimension() const override { return static_cast<int>(source_.size()); }
    Eigen::VectorXd source_position() const override { return source_; }

    FieldBounds bounds() const override {
        return {2.0 * lambda_max_ * domain_radius_, lambda_max_};
    }

    double value(const Eigen::VectorXd& p) const override {
        const Eigen::VectorXd d = p - source_;
        return c_ - d.dot(q_ * d);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& p) const override {
        return -2.0 * (q_ * (p - source_));
    }

    Eigen::MatrixXd hessian(const Eigen::VectorXd& p) const override {
        (void)p;
        return -2.0 * q_;
    }

  private:
    Eigen::VectorXd source_;
    double c_;
    Eigen::MatrixXd q_;
    double domain_radius_;
    double lambda_max_ = 0.0;
};

// Symmetrize, clamp negative eigenvalues to zero, add a small ridge. Turns
// arbitrary 2x2 bump parameters into a valid positive-definite quadratic form.
inline Eigen::MatrixXd psd_projection(const Eigen::MatrixXd& q,
                                      double ridge = 1e-3) {
    const Eigen::MatrixXd sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose() +
           ridge * Eigen::MatrixXd::Identity(q.rows(), q.cols());
}

// 2D non-convex benchmark: a smoothed cone toward the source plus two
// anisotropic Gaussian bumps in scaled coordinates x = (p - p_sigma)/delta.
class BenchmarkField final : public ScalarField {
  public:
    struct Params {
        Eigen::Vector2d source{40.0, 40.0};
        double delta = 15.0;
        double k = 0.04;
        double c = 1.0;  // offset keeping the signal positive on the domain
        double w_a = 0.04;
        double w_b = 0.04;
        Eigen::Vector2d a{1.0, 0.0};
        Eigen::Vector2d b{0.0, -1.5};
        Eigen::Matrix2d q_a;  // raw, possibly non-symmetric bump shapes
        Eigen::Matrix2d q_b;
        double domain_half_width = 80.0;  // bound-estimation box around source

        Params() {
            q_a << 0.9 / std::sqrt(30.0), 0.0, 0.9, 0.0;
            const double r = 1.0 / std::sqrt(2.0);
            Eigen::Matrix2d rot;
            rot << r, -r, r, r;
            Eigen::Matrix2d s = Eigen::Vector2d(0.9, 0.9 / std::sqrt(15.0))
                                    .asDiagonal();
            q_b = -(rot.transpose() * s * rot);
        }
    };

    explicit BenchmarkField(Params params = {})
        : p_(std::move(params)),
          qa_(psd_projection(p_.q_a)),
          qb_(psd_projection(p_.q_b)) {
        estimate_bounds();
    }

    int dimension() const override { return 2; }
    Eigen::VectorXd source_position() const override { return p_.source; }
    FieldBounds bounds() const override { return bounds_; }

    double value(const Eigen::VectorXd& p) const override {
        const Eigen::Vector2d x = scaled(p);
        return p_.c - p_.k * smooth_norm(x) + bump(x, p_.a, qa_, p_.w_a) +
               bump(x, p_.b, qb_, p_.w_b);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& p) const override {
        const Eigen::Vector2d x = scaled(p);
        Eigen::Vector2d g = -p_.k * x / smooth_norm(x);
        g += bump_grad(x, p_.a, qa_, p_.w_a);
        g += bump_grad(x, p_.b, qb_, p_.w_b);
        return g / p_.delta;  // chain rule through x = (p - p_sigma)/delta
    }

    Eigen::MatrixXd hessian(const Eigen::VectorXd& p) const override {
        const Eigen::Vector2d x = scaled(p);
        const double n = smooth_norm(x);
        Eigen::Matrix2d h =
            -p_.k * (Eigen::Matrix2d::Identity() / n -
                     x * x.transpose() / (n * n * n));
        h += bump_hess(x, p_.a, qa_, p_.w_a);
        h += bump_hess(x, p_.b, qb_, p_.w_b);
        return h / (p_.delta * p_.delta);
    }

    const Params& params() const { return p_; }
    const Eigen::Matrix2d& shape_a() const { return qa_; }
    const Eigen::Matrix2d& shape_b() const { return qb_; }

  private:
    static double smooth_norm(const Eigen::Vector2d& x) {
        return std::sqrt(x.squaredNorm() + 1e-6);
    }
    Eigen::Vector2d scaled(const Eigen::VectorXd& p) const {
        return (Eigen::Vector2d(p) - p_.source) / p_.delta;
    }
    static double bump(const Eigen::Vector2d& x, const Eigen::Vector2d& c,
                       const Eigen::Matrix2d& q, double w) {
        const Eigen::Vector2d d = x - c;
        return w * std::exp(-d.dot(q * d));
    }
    static Eigen::Vector2d bump_grad(const Eigen::Vector2d& x,
                                     const Eigen::Vector2d& c,
                                     const Eigen::Matrix2d& q, double w) {
        const Eigen::Vector2d d = x - c;
        return -2.0 * bump(x, c, q, w) * (q * d);
    }
    static Eigen::Matrix2d bump_hess(const Eigen::Vector2d& x,
                                     const Eigen::Vector2d& c,
                                     const Eigen::Matrix2d& q, double w) {
        const Eigen::Vector2d d = x - c;
        const Eigen::Vector2d qd = q * d;
        return bump(x, c, q, w) * (4.0 * qd * qd.transpose() - 2.0 * q);
    }

    void estimate_bounds() {
        // Dense deterministic scan of the scenario box around the source.
        const int n = 4096;
        double kmax = 0.0, hmax = 0.0;
        for (int i = 0; i < n; ++i) {
            Eigen::Vector2d p =
                p_.source + p_.domain_half_width *
                                (2.0 * halton2(i + 1) -
                                 Eigen::Vector2d::Ones());
            kmax = std::max(kmax, gradient(p).norm());
            hmax = std::max(hmax, hessian(p).operatorNorm());
        }
        bounds_ = {kmax, 0.5 * hmax};
    }

  public:
    // Deterministic low-discrepancy point in [0,1]^2 (bases 2 and 3).
    static Eigen::Vector2d halton2(int index) {
        return {halton(index, 2), halton(index, 3)};
    }
    static double halton(int index, int base) {
        double f = 1.0, r = 0.0;
        while (index > 0) {
            f /= base;
            r += f * (index % base);
            index /= base;
        }
        return r;
    }

  private:
    Params p_;
    Eigen::Matrix2d qa_, qb_;
    FieldBounds bounds_;
};

// Same signal with the source translated along a user trajectory. set_time
// shifts the evaluation frame; the wrapped field stays untouched.
class MovingSourceField final : public ScalarField {
  public:
    MovingSourceField(std::shared_ptr<const ScalarField> base,
                      std::function<Eigen::VectorXd(double)> trajectory)
        : base_(std::move(base)),
          trajectory_(std::move(trajectory)),
          offset_(Eigen::VectorXd::Zero(base_->dimension())) {
        set_time(0.0);
    }

    int dimension() const override { return base_->dimension(); }
    Eigen::VectorXd source_position() const override {
        return base_->source_position() + offset_;
    }
    FieldBounds bounds() const override { return base_->bounds(); }

    double value(const Eigen::VectorXd& p) const override {
        return base_->value(p - offset_);
    }
    Eigen::VectorXd gradient(const Eigen::VectorXd& p) const override {
        return base_->gradient(p - offset_);
    }
    Eigen::MatrixXd hessian(const Eigen::VectorXd& p) const override {
        return base_->hessian(p - offset_);
    }

    void set_time(double t) override {
        offset_ = trajectory_(t) - base_->source_position();
    }

  private:
    std::shared_ptr<const ScalarField> base_;
    std::function<Eigen::VectorXd(double)> trajectory_;
    Eigen::VectorXd offset_;
};

struct RegionBounds {
    double K_min = 0.0;
    double K_max = 0.0;
    double M_S = 0.0;  // ||H_sigma|| <= 2 M_S over the region
};

struct Annulus {
    Eigen::VectorXd center;
    double r_min = 0.0;  // 0 makes it a ball
    double r_max = 0.0;
};

// Gradient/Hessian extrema over a 2D ball or annulus, estimated on a
// deterministic low-discrepancy sample. The sample sequence has the prefix
// property, so growing `samples` can only tighten K_min and loosen K_max/M_S.
inline RegionBounds region_bounds(const ScalarField& f, const Annulus& region,
                                  int samples) {
    if (samples < 100)
        throw std::invalid_argument("region_bounds: samples must be >= 100");
    if (region.r_max <= region.r_min || region.r_min < 0.0)
        throw std::invalid_argument("region_bounds: invalid radii");
    const double src_dist = (f.source_position() - region.center).norm();
    if (src_dist >= region.r_min && src_dist <= region.r_max)
        throw std::invalid_argument(
            "region_bounds: region contains the source, K_min would be 0");
    if (f.dimension() != 2)
        throw std::invalid_argument("region_bounds: 2D regions only");

    RegionBounds rb;
    rb.K_min = std::numeric_limits<double>::infinity();
    const double r2a = region.r_min * region.r_min;
    const double r2b = region.r_max * region.r_max;
    for (int i = 0; i < samples; ++i) {
        const Eigen::Vector2d u = BenchmarkField::halton2(i + 1);
        const double r = std::sqrt(r2a + u.x() * (r2b - r2a));
        const double th = 2.0 * M_PI * u.y();
        Eigen::VectorXd p = region.center;
        p.x() += r * std::cos(th);
        p.y() += r * std::sin(th);
        const double g = f.gradient(p).norm();
        rb.K_min = std::min(rb.K_min, g);
        rb.K_max = std::max(rb.K_max, g);
        rb.M_S = std::max(rb.M_S, 0.5 * f.hessian(p).operatorNorm());
    }
    return rb;
}

}  // namespace sseek
