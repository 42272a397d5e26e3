#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "anosov/cocycle.hpp"
#include "anosov/map.hpp"
#include "anosov/torus.hpp"

namespace anosov {

enum class EstimateMethod { restoration_svd, separated_sets, closed_form_linear };

std::string to_string(EstimateMethod m);

struct EstimateParams {
    std::optional<int> n;
    std::optional<double> epsilon;
    std::optional<int> grid_resolution;
    std::vector<int> schedule;
};

// A value in bits/iteration with enough metadata to tell sampling bias from
// method bias.
struct EntropyEstimate {
    double value = 0.0; // bits/iteration
    EstimateMethod method = EstimateMethod::restoration_svd;
    EstimateParams params;
    BoundDirection direction = BoundDirection::approximation;
};

struct HrstResult {
    EntropyEstimate sampled;                  // schedule-min of grid maxima of (1/n) f_n
    std::optional<EntropyEstimate> exact;     // linear maps: sum of expanding log-eigenvalues
    GrowthEstimate curve;
};

struct LyapunovSpectrum {
    TorusPoint base_point;
    int N = 0;
    Eigen::VectorXd exponents; // bits/iteration, non-increasing
    double lambda_plus = 0.0;  // sum of the positive exponents
};

struct PressureEstimate {
    double t = 0.0;     // potential scale in phi = -t * J^u
    double value = 0.0; // bits/iteration
    EstimateParams params;
};

struct RuelleGapReport {
    EntropyEstimate h_top;
    double lambda_plus_min = 0.0;  // over the sample grid
    double lambda_plus_max = 0.0;
    double lambda_plus_mean = 0.0;
    double gap = 0.0;              // lambda_plus_min - h_top.value
};

// Greedily built maximal (n,eps,T)-separated subset of the uniform lattice,
// candidates visited in row-major order. Deterministic; no kept point can be
// added twice and no further candidate extends the set.
struct SeparatedSet {
    std::vector<TorusPoint> points;
    int n = 0;
    double epsilon = 0.0;
    int candidate_resolution = 0;
};

SeparatedSet build_separated_set(const MapSpec& map, int n, double epsilon,
                                 int candidate_resolution, int threads = 1);

// Restoration entropy via Thm-style singular-value growth: delegates to
// growth_rate_inf_sup. Linear automorphisms also get the closed form
// sum_i max{0, log2 |lambda_i(A)|} tagged exact.
HrstResult estimate_hrst(const MapSpec& map, int grid_resolution,
                         const std::vector<int>& horizon_schedule, int threads = 1);

// Topological entropy from below: (1/n) log2 of the cardinality of the greedy
// separated set under the Bowen metric max_{0<=i<n} d(T^i x, T^i y).
EntropyEstimate estimate_htop_separated(const MapSpec& map, int n, double epsilon,
                                        int candidate_resolution, int threads = 1);

// Finite-time Lyapunov spectrum: exponents are (1/N) log2 alpha_i(N, x) from
// the exact singular-value accumulation; their N-limits are the Lyapunov
// exponents, and for symmetric linear parts they are exact at every N.
LyapunovSpectrum lyapunov_spectrum(const MapSpec& map, const TorusPoint& x, int N);

// log2 of the unstable stretch |DT(x) e^u(x)| for the 1-D unstable case.
// E^u_x is approximated by pulling x back preorbit_length steps and pushing a
// generic direction forward with per-step normalization; convergence of the
// direction is verified by comparing against a deeper preorbit.
double unstable_jacobian_potential(const MapSpec& map, const TorusPoint& x, int preorbit_length);

// J^u along the forward orbit x, Tx, ..., T^{n-1}x, sharing one preorbit.
std::vector<double> unstable_jacobian_along_orbit(const MapSpec& map, const TorusPoint& x, int n,
                                                  int preorbit_length);

// Topological pressure for phi = -t * J^u over the greedy separated set,
// using base-2 weights 2^{S_n phi} so that all outputs stay in bits.
PressureEstimate estimate_pressure(const MapSpec& map, double t, int n, double epsilon,
                                   int candidate_resolution, int preorbit_length = 32,
                                   int threads = 1);

// Shares the separated set and the Birkhoff sums across several t values.
std::vector<PressureEstimate> estimate_pressure_curve(const MapSpec& map,
                                                      const std::vector<double>& ts, int n,
                                                      double epsilon, int candidate_resolution,
                                                      int preorbit_length = 32, int threads = 1);

// Separated-set entropy estimate next to pointwise lambda^+ statistics over a
// uniform grid (Ruelle's inequality exercised on the linear-map oracle case).
RuelleGapReport ruelle_gap(const MapSpec& map, int n, double epsilon, int candidate_resolution,
                           int grid_resolution, int lyapunov_N, int threads = 1);

} // namespace anosov
