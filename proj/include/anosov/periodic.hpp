#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

#include "anosov/map.hpp"
#include "anosov/torus.hpp"

namespace anosov {

// A periodic orbit with its monodromy data. gamma is the per-step unstable
// log-volume (1/n_p) * sum of expanding log2-eigenvalue magnitudes of
// DT^{n_p}(points[0]); constant across orbits exactly when h_tp = h_rst, so a
// nonzero spread certifies the strict inequality.
struct PeriodicOrbit {
    std::vector<TorusPoint> points; // the orbit in order
    int period = 0;                 // minimal
    Eigen::MatrixXd monodromy;      // DT^{period} at points[0]
    double gamma = 0.0;             // bits/iteration
    double residual = 0.0;          // max torus distance of eval(points[i]) to points[i+1]
};

enum class GammaCertificate { consistent_with_equality, certifies_strict_inequality };

std::string to_string(GammaCertificate c);

struct GammaScanReport {
    std::vector<PeriodicOrbit> orbits;
    double gamma_min = 0.0;
    double gamma_max = 0.0;
    double gamma_spread = 0.0;
    double threshold = 0.0;
    GammaCertificate certificate = GammaCertificate::consistent_with_equality;
    std::vector<std::string> continuation_failures; // per-orbit, non-fatal
    std::string caveat; // soundness scope of the certificate
};

// All orbits of minimal period dividing n, found by solving
// (A^n - I) x = k over x in [0,1)^d exactly in integers: periodic points of a
// hyperbolic linear automorphism are rationals with denominator
// |det(A^n - I)|, and that determinant counts them.
std::vector<PeriodicOrbit> enumerate_linear_periodic(const IntMatrix& A, int n,
                                                     std::size_t max_orbits = 1000000);

// Expected number of period-n-dividing points: |det(A^n - I)|.
std::int64_t periodic_point_count(const IntMatrix& A, int n);

// Continues a linear-map orbit to the perturbed map by damped Newton on the
// stacked lift system T~(x_i) - x_{i+1} - k_i = 0 (multiple shooting); the
// integer translations k_i are frozen from the seed's lifted orbit.
PeriodicOrbit newton_refine(const MapSpec& map, const PeriodicOrbit& seed, int max_iter = 50,
                            double tol = 1e-12);

// (1/n_p) * sum of expanding log2 |eigenvalues| of the monodromy. Rejects
// eigenvalues within 1e-6 of the unit circle (in log2) as non-hyperbolic.
double orbit_gamma(const Eigen::MatrixXd& monodromy, int period);

// Enumerates linear orbits up to max_period, continues each when the map is
// the perturbed family, and reports the gamma spread with a certificate.
GammaScanReport gamma_scan(const MapSpec& map, int max_period, double threshold = 1e-4,
                           int threads = 1);

} // namespace anosov
