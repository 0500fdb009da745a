#include <doctest.h>

#include <sseek/deployment.hpp>
#include <sseek/validate.hpp>

using namespace sseek;

TEST_CASE("centroid-relative construction") {
    const Deployment d = from_positions(
        {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(2.0, 0.0)});
    CHECK((d.coords[0] - Eigen::Vector2d(-1.0, 0.0)).norm() == 0.0);
    CHECK((d.coords[1] - Eigen::Vector2d(1.0, 0.0)).norm() == 0.0);

    const Deployment same = from_positions(
        std::vector<Eigen::VectorXd>(4, Eigen::Vector2d(3.0, 3.0)));
    CHECK(stats(same).degenerate);
    for (const auto& c : same.coords) CHECK(c.norm() == 0.0);

    const Deployment hept = regular_polygon(7, 0.75);
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (const auto& c : hept.coords) {
        CHECK(c.norm() == doctest::Approx(0.75));
        sum += Eigen::Vector2d(c);
    }
    CHECK(sum.norm() < 1e-10);
}

TEST_CASE("covariance and spread statistics") {
    const Deployment sq = from_positions(
        {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0),
         Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(0.0, -1.0)});
    const DeploymentStats s = stats(sq);
    CHECK((s.P - 0.5 * Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK(s.D == doctest::Approx(1.0));
    CHECK_FALSE(s.degenerate);

    const Deployment line = from_positions({Eigen::Vector2d(0.0, 0.0),
                                            Eigen::Vector2d(1.0, 0.0),
                                            Eigen::Vector2d(2.0, 0.0)});
    const DeploymentStats sl = stats(line);
    CHECK(sl.lambda_min < 1e-15);
    CHECK(sl.degenerate);

    const DeploymentStats sh = stats(regular_polygon(7, 0.75));
    CHECK((sh.P - 0.28125 * Eigen::Matrix2d::Identity()).norm() < 1e-9);
}

TEST_CASE("regular polygon generator") {
    const Deployment sq = regular_polygon(4, 1.0, 0.0);
    CHECK((sq.coords[0] - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-12);
    CHECK((sq.coords[1] - Eigen::Vector2d(0.0, 1.0)).norm() < 1e-12);
    CHECK((sq.coords[2] - Eigen::Vector2d(-1.0, 0.0)).norm() < 1e-12);
    CHECK((sq.coords[3] - Eigen::Vector2d(0.0, -1.0)).norm() < 1e-12);
    CHECK(stats(regular_polygon(7, 0.75)).D == doctest::Approx(0.75));
    // rotation invariance of the covariance
    const Eigen::Matrix2d p0 = stats(regular_polygon(9, 1.3, 0.0)).P;
    for (int k = 1; k <= 8; ++k)
        CHECK((stats(regular_polygon(9, 1.3, k * 0.7)).P - p0).norm() < 1e-10);
    CHECK_THROWS(regular_polygon(2, 1.0));
}

TEST_CASE("cross deployment construction") {
    // N_half = 4: the single free distance solves to a2 = 1 exactly
    const Deployment d = cross_deployment(4, 1.0, 0.5);
    CHECK(d.count() == 8);
    double sum_tail = 0.0;
    for (const auto& c : d.coords)
        if (c.x() > 0.0 && std::abs(c.y()) < 1e-15 && c.x() < 1.0 + 1e-12 &&
            std::abs(c.x() - 1.0) > 1e-12)
            sum_tail += c.squaredNorm();
    // robots on +x at distances {1, a2}; the summation condition gives a2^2=1
    int on_x = 0;
    for (const auto& c : d.coords)
        if (std::abs(c.y()) < 1e-15 && c.x() > 0.0) {
            ++on_x;
            CHECK(c.x() == doctest::Approx(1.0));
        }
    CHECK(on_x == 2);

    // every output satisfies the summation condition and rank-1 segments
    for (const int nh : {4, 6, 10, 40}) {
        const Deployment c = cross_deployment(nh, 2.0, 0.6);
        double tail = 0.0;
        std::vector<Eigen::VectorXd> seg;
        for (const auto& q : c.coords)
            if (std::abs(q.y()) < 1e-15) {
                seg.push_back(q);
                if (q.x() > 0.0) tail += q.squaredNorm();
            }
        tail -= 4.0;  // drop a1^2
        CHECK(tail == doctest::Approx(nh / 4.0 * 4.0).epsilon(1e-9));
        CHECK(stats(from_positions(seg)).degenerate);
    }

    // infeasible: alpha so large the partial sum overshoots the target
    CHECK_THROWS_WITH_AS(cross_deployment(40, 1.0, 0.99),
                         doctest::Contains("infeasible"),
                         std::invalid_argument);
    CHECK_THROWS(cross_deployment(3, 1.0, 0.5));
    CHECK_THROWS(cross_deployment(8, 1.0, 1.5));
}

TEST_CASE("affine transforms") {
    const Deployment sq = regular_polygon(4, 1.0);
    CHECK(deformation(affine_transform(sq, Eigen::Matrix2d::Identity()), sq) ==
          0.0);
    const Deployment dbl =
        affine_transform(sq, 2.0 * Eigen::Matrix2d::Identity());
    CHECK(stats(dbl).D == doctest::Approx(2.0));
    CHECK((stats(dbl).P - 4.0 * stats(sq).P).norm() < 1e-12);
    const Eigen::Matrix2d a = Eigen::Vector2d(2.0, 1.0).asDiagonal();
    CHECK((stats(affine_transform(sq, a)).P -
           a * stats(sq).P * a.transpose())
              .norm() < 1e-12);
}

TEST_CASE("ascent certificate arithmetic") {
    // lambda_min/D^2 = 0.5 for a regular polygon with D = rho
    const Deployment hept = regular_polygon(7, 0.75);
    RegionBounds rb;
    rb.K_min = 1.0;
    rb.K_max = 2.0;
    rb.M_S = 0.1;
    CHECK(h_condition(hept, rb) == doctest::Approx(0.5 - 0.075));
    const Deployment seg = from_positions({Eigen::Vector2d(-1.0, 0.0),
                                           Eigen::Vector2d(1.0, 0.0)});
    CHECK_THROWS(h_condition(seg, rb));
}

TEST_CASE("symmetry moments") {
    CHECK(symmetry_moments({{Eigen::Vector2d(0.0, 0.0), 1.0}}).m_xy == 0.0);
    CHECK(symmetry_moments({{Eigen::Vector2d(0.0, 0.0), 1.0}}).m_xx_yy == 0.0);

    // uniform rectangle: m_xy = 0 but m_xx_yy = (w^2 - h^2)/12
    const double w = 3.0, h = 1.0;
    std::vector<std::pair<Eigen::Vector2d, double>> rect;
    const int g = 200;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            rect.push_back({Eigen::Vector2d(w * ((i + 0.5) / g - 0.5),
                                            h * ((j + 0.5) / g - 0.5)),
                            1.0});
    const SymmetryMoments m = symmetry_moments(rect);
    CHECK(std::abs(m.m_xy) < 1e-12);
    CHECK(m.m_xx_yy == doctest::Approx((w * w - h * h) / 12.0).epsilon(1e-3));
    CHECK_THROWS(symmetry_moments({{Eigen::Vector2d(0.0, 0.0), 0.0}}));
}

TEST_CASE("deformation measure") {
    const Deployment a = regular_polygon(4, 1.0);
    CHECK(deformation(a, a) == 0.0);
    // one robot displaced, then re-centered: all coords shift by -disp/N
    std::vector<Eigen::VectorXd> moved;
    for (const auto& c : a.coords) moved.push_back(c);
    moved[0] += Eigen::Vector2d(0.3, 0.4);
    const Deployment b = from_positions(moved);
    const Eigen::Vector2d shift(0.3 / 4.0, 0.4 / 4.0);
    CHECK(deformation(b, a) ==
          doctest::Approx((Eigen::Vector2d(0.3, 0.4) - shift).norm()));
    // arithmetic of the heading-gain bound at N = 4, kappa = 2 pi
    CHECK(3.0 / 4.0 * (2.0 * M_PI / (2.0 * M_PI)) == doctest::Approx(0.75));
    CHECK_THROWS(deformation(a, regular_polygon(5, 1.0)));
}

TEST_CASE("deployment property suite") {
    const SuiteResult s = suite_deployment();
    for (const auto& c : s.checks) {
        INFO(c.name, ": ", c.margin);
        CHECK(c.pass);
    }
}
