#include "anosov/map.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace anosov {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw precondition_error("integer arithmetic overflow; horizon too large");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw precondition_error("integer arithmetic overflow; horizon too large");
    return r;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

std::int64_t integer_det(const IntMatrix& A) {
    require(A.rows() == A.cols() && A.rows() >= 1, "integer_det: square matrix required");
    const int d = static_cast<int>(A.rows());
    if (d == 1) return A(0, 0);
    if (d == 2) return checked_add(checked_mul(A(0, 0), A(1, 1)), -checked_mul(A(0, 1), A(1, 0)));

    // Bareiss fraction-free elimination; all divisions are exact.
    IntMatrix m = A;
    std::int64_t prev = 1;
    int sign = 1;
    for (int k = 0; k < d - 1; ++k) {
        if (m(k, k) == 0) {
            int p = -1;
            for (int r = k + 1; r < d; ++r)
                if (m(r, k) != 0) { p = r; break; }
            if (p < 0) return 0;
            m.row(k).swap(m.row(p));
            sign = -sign;
        }
        for (int i = k + 1; i < d; ++i) {
            for (int j = k + 1; j < d; ++j) {
                const std::int64_t num =
                    checked_add(checked_mul(m(i, j), m(k, k)), -checked_mul(m(i, k), m(k, j)));
                m(i, j) = num / prev;
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(d - 1, d - 1);
}

IntMatrix integer_pow(const IntMatrix& A, int n) {
    require(n >= 0, "integer_pow: n >= 0 required");
    const int d = static_cast<int>(A.rows());
    IntMatrix r = IntMatrix::Identity(d, d);
    for (int s = 0; s < n; ++s) {
        IntMatrix next(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                std::int64_t acc = 0;
                for (int k = 0; k < d; ++k) acc = checked_add(acc, checked_mul(r(i, k), A(k, j)));
                next(i, j) = acc;
            }
        r = std::move(next);
    }
    return r;
}

HyperbolicityReport hyperbolicity_check(const IntMatrix& A, double margin) {
    require(A.rows() == A.cols() && A.rows() >= 1, "hyperbolicity_check: square matrix required");
    HyperbolicityReport rep;
    rep.det = integer_det(A);
    rep.is_automorphism = (rep.det == 1 || rep.det == -1);

    Eigen::EigenSolver<Eigen::MatrixXd> es(A.cast<double>(), /*computeEigenvectors=*/false);
    rep.eigenvalue_magnitudes.resize(static_cast<std::size_t>(A.rows()));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        rep.eigenvalue_magnitudes[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()[i]);
    std::sort(rep.eigenvalue_magnitudes.begin(), rep.eigenvalue_magnitudes.end(),
              std::greater<double>());

    rep.is_hyperbolic = rep.is_automorphism;
    for (double m : rep.eigenvalue_magnitudes)
        if (std::fabs(m - 1.0) <= margin) rep.is_hyperbolic = false;
    return rep;
}

MapSpec MapSpec::linear(IntMatrix A) {
    require(A.rows() == A.cols() && A.rows() >= 1, "MapSpec::linear: square matrix required");
    const std::int64_t det = integer_det(A);
    require(det == 1 || det == -1, "MapSpec::linear: |det A| = 1 required, got det = " +
                                       std::to_string(det));
    Eigen::EigenSolver<Eigen::MatrixXd> es(A.cast<double>(), false);
    bool hyp = true;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        if (std::fabs(std::abs(es.eigenvalues()[i]) - 1.0) <= 1e-8) hyp = false;
    return MapSpec(Family::LinearAutomorphism, std::move(A), 0.0, hyp);
}

MapSpec MapSpec::perturbed_cat(double eps) {
    require(eps >= 0.0 && eps < kPerturbedCatEpsBound,
            "MapSpec::perturbed_cat: 0 <= eps < 1/(2*pi) required");
    IntMatrix A(2, 2);
    A << 2, 1, 1, 1;
    return MapSpec(Family::PerturbedCat, std::move(A), eps, true);
}

LiftVector eval_lift(const MapSpec& map, const LiftVector& x) {
    require(static_cast<int>(x.size()) == map.dim(), "eval_lift: dimension mismatch");
    LiftVector y = map.linear_part_d() * x;
    if (map.family() == MapSpec::Family::PerturbedCat)
        y[0] += map.eps() * std::sin(kTwoPi * x[0]);
    return y;
}

TorusPoint eval(const MapSpec& map, const TorusPoint& x) {
    require(x.dim() == map.dim(), "eval: dimension mismatch");
    return TorusPoint::wrap(eval_lift(map, x.coords()));
}

TorusPoint iterate(const MapSpec& map, const TorusPoint& x, int n) {
    require(n >= 0, "iterate: n >= 0 required");
    TorusPoint cur = x;
    for (int i = 0; i < n; ++i) cur = eval(map, cur);
    return cur;
}

namespace {

// Solves g(x) = x + eps*sin(2*pi*x) = t on the real line. g is strictly
// increasing for eps < 1/(2*pi) and |g(x) - x| <= eps, so the solution lies
// in [t - eps, t + eps]; Newton with a bisection safeguard on that bracket.
double invert_circle_shift(double eps, double t) {
    if (eps == 0.0) return t;
    double lo = t - eps, hi = t + eps;
    double x = t;
    for (int it = 0; it < 80; ++it) {
        const double g = x + eps * std::sin(kTwoPi * x) - t;
        if (std::fabs(g) < 1e-15) return x;
        (g > 0 ? hi : lo) = x;
        const double dg = 1.0 + kTwoPi * eps * std::cos(kTwoPi * x);
        double next = x - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw numerical_error("inverse: Newton failed to converge (eps near 1/(2*pi)?)");
}

} // namespace

TorusPoint inverse(const MapSpec& map, const TorusPoint& y) {
    require(y.dim() == map.dim(), "inverse: dimension mismatch");
    if (map.family() == MapSpec::Family::LinearAutomorphism) {
        // A^{-1} = det(A) * adj(A) is again an integer matrix for |det| = 1.
        Eigen::MatrixXd inv_d = map.linear_part_d().inverse();
        IntMatrix inv(map.dim(), map.dim());
        for (int i = 0; i < map.dim(); ++i)
            for (int j = 0; j < map.dim(); ++j) inv(i, j) = std::llround(inv_d(i, j));
        return TorusPoint::wrap((inv.cast<double>() * y.coords()).eval());
    }
    // (u,v) = T(x,y) gives y = v - x and x + eps*sin(2*pi*x) = u - v.
    const double u = y[0], v = y[1];
    const double x = invert_circle_shift(map.eps(), u - v);
    Eigen::Vector2d pre(x, v - x);
    return TorusPoint::wrap(pre);
}

Eigen::MatrixXd jacobian(const MapSpec& map, const TorusPoint& x) {
    require(x.dim() == map.dim(), "jacobian: dimension mismatch");
    Eigen::MatrixXd J = map.linear_part_d();
    if (map.family() == MapSpec::Family::PerturbedCat)
        J(0, 0) += kTwoPi * map.eps() * std::cos(kTwoPi * x[0]);
    return J;
}

Eigen::MatrixXd monodromy(const MapSpec& map, const TorusPoint& x, int n) {
    require(n >= 1, "monodromy: n >= 1 required");
    require(n <= kMonodromyCap,
            "monodromy: raw products are capped at n = " + std::to_string(kMonodromyCap) +
                "; use the log-scaled singular_spectrum for longer horizons");
    TorusPoint cur = x;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(map.dim(), map.dim());
    for (int i = 0; i < n; ++i) {
        P = jacobian(map, cur) * P;
        cur = eval(map, cur);
    }
    return P;
}

} // namespace anosov
