#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "anosov/map.hpp"
#include "anosov/torus.hpp"

namespace anosov {

// Finite-time singular data of DT^n(x), all logs base 2 (bits).
// f_value = sum_i max{0, log_alphas[i]} = log2 ||DT^n(x)^wedge||, the norm of
// the induced map on the full exterior algebra.
struct SingularSpectrum {
    TorusPoint base_point;
    int n = 0;
    Eigen::VectorXd log_alphas; // log2 singular values, non-increasing
    double f_value = 0.0;       // bits
};

enum class BoundDirection {
    approximation,
    lower_bound_modulo_sampling,
    upper_bound_modulo_sampling,
    exact,
};

std::string to_string(BoundDirection d);

// Result of the inf-over-n / sup-over-space sandwich for the extremal growth
// rate: each grid maximum of (1/n) f_n under-approximates sup_x, while for
// every n the true sup over-approximates the limit, so the reported value is
// an upper bound only modulo the sampling gap. That gap is reported, never
// silently absorbed.
struct GrowthEstimate {
    double value = 0.0;                 // bits/iteration
    std::vector<int> horizon_schedule;  // strictly increasing
    std::vector<double> per_n_curve;    // grid max of (1/n) f_n, per schedule entry
    std::string sample_description;
    BoundDirection direction = BoundDirection::upper_bound_modulo_sampling;
};

struct MonteCarloAverage {
    double mean = 0.0;       // bits/iteration
    double std_error = 0.0;  // sample standard error of the mean
    int n = 0;
    int samples = 0;
    std::uint64_t seed = 0;
};

// k-th compound (exterior power) of a d x d matrix: the C(d,k) x C(d,k)
// matrix of k x k minors in lexicographic index order. Satisfies
// compound(AB) = compound(A) compound(B) and sigma_1(compound_k(A)) =
// alpha_1(A) * ... * alpha_k(A).
Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& m, int k);

// Log-scaled product of compound matrices along an orbit. Keeps the running
// product at unit Frobenius norm and accrues the scale in log2, so horizons
// of 10^4 and beyond lose nothing to overflow.
class CompoundProductTracker {
public:
    CompoundProductTracker(int dim, int k);
    void step(const Eigen::MatrixXd& jac);
    // log2 of the operator norm of the accumulated product
    double log2_norm() const;
    int steps() const { return steps_; }

private:
    int k_;
    Eigen::MatrixXd product_;
    double log2_scale_ = 0.0;
    int steps_ = 0;
};

// Exact log2 singular values of DT^n(x) via exterior-power norm accumulation:
// log2(alpha_1 ... alpha_k) = log2 ||compound_k(DT^n(x))||.
SingularSpectrum singular_spectrum(const MapSpec& map, const TorusPoint& x, int n);

// One orbit pass, snapshotting the spectrum at each requested horizon
// (sorted ascending). Shared by the grid sweeps.
std::vector<SingularSpectrum> singular_profile(const MapSpec& map, const TorusPoint& x,
                                               const std::vector<int>& horizons);

// sum_i max{0, log_alphas[i]}; equals f_value.
double unstable_log_volume(const SingularSpectrum& s);

// f_n(x) + f_m(T^n x) - f_{n+m}(x); >= 0 up to floating-point slack
// (Horn's inequality for singular values).
double subadditivity_defect(const MapSpec& map, const TorusPoint& x, int n, int m);

// (1/N) f_N(x), the finite-time approximation whose a.e. limit Kingman's
// theorem guarantees.
double kingman_average(const MapSpec& map, const TorusPoint& x, int N);

// Mean of (1/n) f_n over uniform i.i.d. points with its standard error.
// Deterministic given the seed; the summation order is fixed.
MonteCarloAverage monte_carlo_space_average(const MapSpec& map, int n, int samples,
                                            std::uint64_t seed, int threads = 1);

// For each n in the schedule, the max over the uniform lattice (i/G, j/G, ...)
// of (1/n) f_n; returns the minimum over the schedule plus the whole curve.
GrowthEstimate growth_rate_inf_sup(const MapSpec& map, int grid_resolution,
                                   const std::vector<int>& horizon_schedule, int threads = 1);

} // namespace anosov
