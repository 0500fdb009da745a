#include <doctest.h>

#include <sseek/estimator.hpp>
#include <sseek/validate.hpp>

using namespace sseek;

namespace {
std::vector<Eigen::VectorXd> line3() {
    return {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
            Eigen::Vector2d(2.0, 0.0)};
}
}  // namespace

TEST_CASE("centroid estimator converges to centroid-relative coordinates") {
    const Graph g = Graph::path(3);
    const auto p = line3();
    Estimators est(g, 2, 0.5, 0.5, 0.01);
    const double lam2 = spectrum(g).lambda2;
    for (double t = 0.0; t < 20.0 / lam2; t += 0.01)
        est.centroid_step(p, 0.01);
    CHECK((est.x_hat().col(0) - Eigen::Vector2d(-1.0, 0.0)).norm() < 1e-6);
    CHECK((est.x_hat().col(1) - Eigen::Vector2d(0.0, 0.0)).norm() < 1e-6);
    CHECK((est.x_hat().col(2) - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-6);

    // already exact: fixed point
    const Eigen::MatrixXd before = est.x_hat();
    est.centroid_step(p, 0.01);
    CHECK((est.x_hat() - before).norm() < 1e-6);
}

TEST_CASE("anchored initialization localizes against the designated robot") {
    const Graph g = Graph::path(3);
    const auto p = line3();
    Estimators est(g, 2, 0.5, 0.5, 0.01);
    est.init_anchored(0, p);
    for (double t = 0.0; t < 40.0; t += 0.01) est.centroid_step(p, 0.01);
    CHECK((est.x_hat().col(0) - Eigen::Vector2d(0.0, 0.0)).norm() < 1e-6);
    CHECK((est.x_hat().col(1) - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-6);
    CHECK((est.x_hat().col(2) - Eigen::Vector2d(2.0, 0.0)).norm() < 1e-6);

    // anchoring on a robot sitting at the centroid matches centroid mode
    Estimators est2(g, 2, 0.5, 0.5, 0.01);
    est2.init_anchored(1, p);  // robot 1 is at the centroid
    for (double t = 0.0; t < 40.0; t += 0.01) est2.centroid_step(p, 0.01);
    CHECK((est2.x_hat().col(0) - Eigen::Vector2d(-1.0, 0.0)).norm() < 1e-6);
    CHECK((est2.x_hat().col(2) - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-6);
}

TEST_CASE("measurement weighting") {
    const Graph g = Graph::complete(3);
    Estimators est(g, 2, 0.5, 0.5, 0.01);
    est.mu_measure(Eigen::Vector3d(1.0, 2.0, 3.0));
    CHECK(est.mu().norm() == 0.0);  // x_hat starts at zero

    // exact estimates under a uniform field: measurements sum to zero
    const auto p = line3();
    for (double t = 0.0; t < 30.0; t += 0.01) est.centroid_step(p, 0.01);
    est.mu_measure(Eigen::Vector3d::Constant(2.5));
    CHECK(est.mu().rowwise().sum().norm() < 1e-5);
}

TEST_CASE("direction validity floor and hold") {
    const Graph g = Graph::complete(3);
    Estimators est(g, 2, 0.5, 0.5, 0.01);
    // nothing measured yet: no direction has ever been valid
    const DirectionEstimate d0 = est.direction(0, 1e-9);
    CHECK_FALSE(d0.valid);
    CHECK(d0.hold);

    // feed a strong measurement, then drop below the floor
    const auto p = line3();
    for (double t = 0.0; t < 30.0; t += 0.01) est.centroid_step(p, 0.01);
    est.mu_measure(Eigen::Vector3d(1.0, 2.0, 3.0));
    const DirectionEstimate d1 = est.direction(0, 1e-9);
    CHECK(d1.valid);
    CHECK(d1.unit_direction.norm() == doctest::Approx(1.0));
    est.mu_measure(Eigen::Vector3d::Zero());  // mu_c collapses
    // mu_hat is still zero, so mu_c = 0 exactly
    const DirectionEstimate d2 = est.direction(0, 1e-9);
    CHECK_FALSE(d2.valid);
    CHECK_FALSE(d2.hold);
    CHECK((d2.unit_direction - d1.unit_direction).norm() == 0.0);
}

TEST_CASE("euler stability guard") {
    const Graph g = Graph::complete(10);  // lambda_max = 10
    CHECK_THROWS(Estimators(g, 2, 0.001, 0.5, 0.01));  // 0.01*10/0.001 = 100
    CHECK_NOTHROW(Estimators(g, 2, 0.5, 0.1, 0.01));
    CHECK_THROWS(Estimators(Graph(2, {}), 2, 0.5, 0.5, 0.01));  // disconnected
}

TEST_CASE("reset consensus reference protocol") {
    const Graph two = Graph::path(2);
    const auto same = reset_consensus(
        {Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(1.0, 2.0)}, two, 0.01,
        5.0);
    CHECK((same[0] - Eigen::Vector2d(1.0, 2.0)).norm() < 1e-12);
    const auto anti = reset_consensus(
        {Eigen::Vector2d(1.0, -1.0), Eigen::Vector2d(-1.0, 1.0)}, two, 0.01,
        20.0);
    CHECK(anti[0].norm() < 1e-8);
    CHECK(anti[1].norm() < 1e-8);
}

TEST_CASE("estimator property suite") {
    const SuiteResult s = suite_estimators();
    for (const auto& c : s.checks) {
        INFO(c.name, ": ", c.margin);
        CHECK(c.pass);
    }
}
