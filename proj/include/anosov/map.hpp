#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "anosov/torus.hpp"

namespace anosov {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Largest horizon for raw Jacobian products. Entries grow like gamma_2^n
// (about 2.62^n for the cat map); 64 steps stay far inside double range.
// Longer horizons must go through the log-scaled path in cocycle.hpp.
inline constexpr int kMonodromyCap = 64;

// Invertibility bound for the perturbed cat family: x + eps*sin(2*pi*x) is
// strictly increasing iff eps < 1/(2*pi), which makes the inverse well-posed.
inline constexpr double kPerturbedCatEpsBound = 0.15915494309189535; // 1/(2*pi)

// Immutable description of a torus diffeomorphism. Two families:
//   - LinearAutomorphism: x -> A x (mod 1), A integer with |det A| = 1;
//   - PerturbedCat: (x,y) -> (2x + y + eps*sin(2*pi*x), x + y) (mod 1), d = 2.
// Extension point: a third variant taking user-supplied analytic formulas
// would slot in as another Family tag plus eval_lift/jacobian branches; every
// estimator downstream only consumes those plus linear_part().
class MapSpec {
public:
    enum class Family { LinearAutomorphism, PerturbedCat };

    static MapSpec linear(IntMatrix A);
    static MapSpec perturbed_cat(double eps);

    Family family() const { return family_; }
    int dim() const { return static_cast<int>(linear_part_.rows()); }
    double eps() const { return eps_; }

    // Integer linear part: A itself, or the cat matrix [[2,1],[1,1]] for the
    // perturbed family (the perturbation is Z^d-periodic, so lifts satisfy
    // lift(x + k) = lift(x) + A k).
    const IntMatrix& linear_part() const { return linear_part_; }
    Eigen::MatrixXd linear_part_d() const { return linear_part_.cast<double>(); }

    // For linear maps: no eigenvalue of modulus one (within a small margin).
    bool hyperbolic() const { return hyperbolic_; }

private:
    MapSpec(Family f, IntMatrix A, double eps, bool hyp)
        : family_(f), linear_part_(std::move(A)), eps_(eps), hyperbolic_(hyp) {}

    Family family_;
    IntMatrix linear_part_;
    double eps_;
    bool hyperbolic_;
};

struct HyperbolicityReport {
    bool is_automorphism = false;      // |det A| = 1
    bool is_hyperbolic = false;        // automorphism and all |lambda| != 1
    std::int64_t det = 0;
    std::vector<double> eigenvalue_magnitudes; // sorted non-increasing
};

// Exact integer determinant (fraction-free Gaussian elimination). Throws on
// int64 overflow, which cannot happen for the matrix sizes used here.
std::int64_t integer_det(const IntMatrix& A);

// Exact integer power with overflow detection.
IntMatrix integer_pow(const IntMatrix& A, int n);

HyperbolicityReport hyperbolicity_check(const IntMatrix& A, double margin = 1e-8);

TorusPoint eval(const MapSpec& map, const TorusPoint& x);
LiftVector eval_lift(const MapSpec& map, const LiftVector& x);
TorusPoint inverse(const MapSpec& map, const TorusPoint& y);

// Exact analytic derivative DT at x, identified with a d x d matrix via the
// flat chart. Linear maps return A; the perturbed family returns
// [[2 + 2*pi*eps*cos(2*pi*x), 1], [1, 1]].
Eigen::MatrixXd jacobian(const MapSpec& map, const TorusPoint& x);

// DT^n(x) = DT(T^{n-1}x) * ... * DT(x) as a raw product; guarded by
// kMonodromyCap before precision loss.
Eigen::MatrixXd monodromy(const MapSpec& map, const TorusPoint& x, int n);

// n-fold iterate, wrapping each step.
TorusPoint iterate(const MapSpec& map, const TorusPoint& x, int n);

} // namespace anosov
