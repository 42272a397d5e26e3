#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "anosov/map.hpp"
#include "anosov/rng.hpp"
#include "anosov/torus.hpp"
#include "oracles.hpp"

using namespace anosov;

namespace {

IntMatrix cat_matrix() {
    IntMatrix A(2, 2);
    A << 2, 1, 1, 1;
    return A;
}

IntMatrix shear_matrix() {
    IntMatrix A(2, 2);
    A << 1, 1, 0, 1;
    return A;
}

TorusPoint random_point(rng64& rng, int d = 2) {
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = rng.next_unit();
    return TorusPoint(std::move(c));
}

} // namespace

TEST_CASE("wrap_unit reduces into [0,1) and snaps near-1 to 0") {
    CHECK(wrap_unit(1.75) == doctest::Approx(0.75));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(3.0) == 0.0);
    CHECK(wrap_unit(1.0 - 1e-16) == 0.0);
    CHECK(wrap_unit(-1e-18) == 0.0);
    CHECK_THROWS_AS(TorusPoint(Eigen::Vector2d(1.0, 0.0)), precondition_error);
}

TEST_CASE("MapSpec validation") {
    CHECK_NOTHROW(MapSpec::linear(cat_matrix()));
    IntMatrix bad(2, 2);
    bad << 2, 0, 0, 1; // det 2
    CHECK_THROWS_AS(MapSpec::linear(bad), precondition_error);
    CHECK_NOTHROW(MapSpec::perturbed_cat(0.0));
    CHECK_NOTHROW(MapSpec::perturbed_cat(0.15));
    CHECK_THROWS_AS(MapSpec::perturbed_cat(0.16), precondition_error);
    CHECK_THROWS_AS(MapSpec::perturbed_cat(-0.01), precondition_error);
    CHECK(MapSpec::linear(cat_matrix()).hyperbolic());
    CHECK_FALSE(MapSpec::linear(shear_matrix()).hyperbolic());
}

TEST_CASE("eval: fixed points and hand arithmetic") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const MapSpec pcat = MapSpec::perturbed_cat(0.01);

    const TorusPoint origin = TorusPoint::zero(2);
    CHECK(sup_dist(eval(cat, origin), origin) == 0.0);
    CHECK(sup_dist(eval(pcat, origin), origin) == 0.0);

    const TorusPoint mid(Eigen::Vector2d(0.5, 0.5));
    const TorusPoint img = eval(cat, mid);
    CHECK(img[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(img[1] == doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS_AS(eval(cat, TorusPoint(Eigen::Vector3d(0.1, 0.2, 0.3))), precondition_error);
}

TEST_CASE("eval_lift: examples and integer equivariance") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    CHECK(eval_lift(cat, Eigen::Vector2d(1.0, 0.0)).isApprox(Eigen::Vector2d(2.0, 1.0)));
    CHECK(eval_lift(cat, Eigen::Vector2d(0.0, 0.0)).norm() == 0.0);

    const MapSpec pcat01 = MapSpec::perturbed_cat(0.1);
    const LiftVector y = eval_lift(pcat01, Eigen::Vector2d(0.25, 0.0));
    CHECK(y[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(0.25).epsilon(1e-14));

    // lift(x + k) - lift(x) = A k for integer k
    rng64 rng(11);
    const MapSpec pcat = MapSpec::perturbed_cat(0.05);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Vector2d x(rng.next_unit(), rng.next_unit());
        const Eigen::Vector2d k(static_cast<double>(static_cast<int>(rng.next_unit() * 7) - 3),
                                static_cast<double>(static_cast<int>(rng.next_unit() * 7) - 3));
        for (const MapSpec* map : {&cat, &pcat}) {
            const Eigen::Vector2d lhs = eval_lift(*map, x + k) - eval_lift(*map, x);
            const Eigen::Vector2d rhs = map->linear_part_d() * k;
            CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);
        }
    }
}

TEST_CASE("inverse: examples and round trips") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    CHECK(sup_dist(inverse(cat, TorusPoint::zero(2)), TorusPoint::zero(2)) == 0.0);

    const TorusPoint y(Eigen::Vector2d(0.5, 0.0));
    const TorusPoint x = inverse(cat, y);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-15));

    const MapSpec pcat = MapSpec::perturbed_cat(0.01);
    const TorusPoint p(Eigen::Vector2d(0.3, 0.7));
    CHECK(sup_dist(inverse(pcat, eval(pcat, p)), p) < 1e-12);

    // property run over both families
    rng64 rng(7);
    const MapSpec pcat_big = MapSpec::perturbed_cat(0.15);
    for (const MapSpec* map : {&cat, &pcat, &pcat_big}) {
        for (int i = 0; i < 1000; ++i) {
            const TorusPoint z = random_point(rng);
            CHECK(sup_dist(inverse(*map, eval(*map, z)), z) < 1e-10);
            CHECK(sup_dist(eval(*map, inverse(*map, z)), z) < 1e-10);
        }
    }
}

TEST_CASE("jacobian: closed form at the fixed point, cosine zero, finite differences") {
    const double eps = 0.01;
    const MapSpec pcat = MapSpec::perturbed_cat(eps);
    const Eigen::MatrixXd J0 = jacobian(pcat, TorusPoint::zero(2));
    CHECK(J0(0, 0) == doctest::Approx(2.0 + 2.0 * M_PI * eps).epsilon(1e-15));
    CHECK(J0(0, 1) == 1.0);
    CHECK(J0(1, 0) == 1.0);
    CHECK(J0(1, 1) == 1.0);

    const MapSpec cat = MapSpec::linear(cat_matrix());
    CHECK(jacobian(cat, TorusPoint(Eigen::Vector2d(0.37, 0.91))) == cat.linear_part_d());

    // cos(pi/2) = 0 kills the perturbation term
    const Eigen::MatrixXd Jq =
        jacobian(MapSpec::perturbed_cat(0.1), TorusPoint(Eigen::Vector2d(0.25, 0.62)));
    CHECK(Jq(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

    rng64 rng(3);
    for (const MapSpec* map : {&cat, &pcat}) {
        for (int i = 0; i < 100; ++i) {
            const TorusPoint x = random_point(rng);
            const Eigen::MatrixXd fd = oracle::finite_difference_jacobian(*map, x);
            CHECK((fd - jacobian(*map, x)).lpNorm<Eigen::Infinity>() < 1e-5);
        }
    }
}

TEST_CASE("jacobian determinants: linear is unimodular, perturbed follows the formula") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const double eps = 0.05;
    const MapSpec pcat = MapSpec::perturbed_cat(eps);
    rng64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const TorusPoint x = random_point(rng);
        CHECK(std::fabs(std::fabs(jacobian(cat, x).determinant()) - 1.0) < 1e-12);
        const double det = jacobian(pcat, x).determinant();
        const double expected = 1.0 + 2.0 * M_PI * eps * std::cos(2.0 * M_PI * x[0]);
        CHECK(det == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("monodromy: powers, chain rule, guard") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const TorusPoint x(Eigen::Vector2d(0.2, 0.9));

    Eigen::MatrixXd A2(2, 2);
    A2 << 5, 3, 3, 2;
    CHECK(monodromy(cat, x, 2).isApprox(A2));
    CHECK(monodromy(cat, x, 1) == jacobian(cat, x));

    const double eps = 0.01;
    const MapSpec pcat = MapSpec::perturbed_cat(eps);
    Eigen::MatrixXd M(2, 2);
    M << 2.0 + 2.0 * M_PI * eps, 1.0, 1.0, 1.0;
    CHECK(monodromy(pcat, TorusPoint::zero(2), 3).isApprox(M * M * M, 1e-13));

    // cocycle chain rule within relative 1e-9 for n + m <= 20
    rng64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const TorusPoint z = random_point(rng);
        const int n = 1 + static_cast<int>(rng.next_unit() * 9);
        const int m = 1 + static_cast<int>(rng.next_unit() * 9);
        const Eigen::MatrixXd whole = monodromy(pcat, z, n + m);
        const Eigen::MatrixXd split = monodromy(pcat, iterate(pcat, z, n), m) * monodromy(pcat, z, n);
        CHECK((whole - split).norm() < 1e-9 * whole.norm());
    }

    CHECK_THROWS_AS(monodromy(cat, x, kMonodromyCap + 1), precondition_error);
    CHECK_NOTHROW(monodromy(cat, x, kMonodromyCap));
}

TEST_CASE("hyperbolicity_check: cat, shear, non-automorphism") {
    const auto cat = hyperbolicity_check(cat_matrix());
    CHECK(cat.is_automorphism);
    CHECK(cat.is_hyperbolic);
    CHECK(cat.eigenvalue_magnitudes[0] ==
          doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(cat.eigenvalue_magnitudes[1] ==
          doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));

    const auto shear = hyperbolicity_check(shear_matrix());
    CHECK(shear.is_automorphism);
    CHECK_FALSE(shear.is_hyperbolic);

    IntMatrix two(2, 2);
    two << 2, 0, 0, 1;
    const auto stretch = hyperbolicity_check(two);
    CHECK_FALSE(stretch.is_automorphism);
    CHECK(stretch.det == 2);
}

TEST_CASE("integer_det and integer_pow are exact") {
    CHECK(integer_det(cat_matrix()) == 1);
    IntMatrix m(3, 3);
    m << 2, 0, 1, 0, 1, 0, 1, 0, 1; // det 1
    CHECK(integer_det(m) == 1);
    const IntMatrix a4 = integer_pow(cat_matrix(), 4);
    CHECK(a4(0, 0) == 34);
    CHECK(a4(0, 1) == 21);
    CHECK(a4(1, 1) == 13);
}
