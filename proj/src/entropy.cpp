#include "anosov/entropy.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "anosov/parallel.hpp"

namespace anosov {

std::string to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::restoration_svd: return "restoration_svd";
        case EstimateMethod::separated_sets: return "separated_sets";
        case EstimateMethod::closed_form_linear: return "closed_form_linear";
    }
    return "?";
}

namespace {

Eigen::VectorXd lattice_point(int resolution, int d, std::size_t index) {
    Eigen::VectorXd c(d);
    std::size_t rem = index;
    for (int j = d - 1; j >= 0; --j) {
        c[j] = static_cast<double>(rem % static_cast<std::size_t>(resolution)) / resolution;
        rem /= static_cast<std::size_t>(resolution);
    }
    return c;
}

std::size_t lattice_size(int resolution, int d) {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(resolution);
    return s;
}

} // namespace

SeparatedSet build_separated_set(const MapSpec& map, int n, double epsilon,
                                 int candidate_resolution, int threads) {
    require(n >= 1, "separated set: n >= 1 required");
    require(epsilon > 0.0 && epsilon < 1.0, "separated set: 0 < epsilon < 1 required");
    require(candidate_resolution >= 2, "separated set: candidate_resolution >= 2 required");
    require(1.0 / candidate_resolution < epsilon,
            "separated set: candidate lattice coarser than epsilon");
    const int d = map.dim();
    const std::size_t count = lattice_size(candidate_resolution, d);

    // all candidate orbits up front; the greedy pass needs random access
    std::vector<double> orbits(count * static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    parallel_for(count, threads, [&](std::size_t p) {
        TorusPoint cur(lattice_point(candidate_resolution, d, p));
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < d; ++c)
                orbits[(p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)) *
                           static_cast<std::size_t>(d) +
                       static_cast<std::size_t>(c)] = cur[c];
            if (i + 1 < n) cur = eval(map, cur);
        }
    });
    const auto orbit_at = [&](std::size_t p, int i, int c) {
        return orbits[(p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)) *
                          static_cast<std::size_t>(d) +
                      static_cast<std::size_t>(c)];
    };

    // bucket kept points by their time-0 cell; only cells within one ring can
    // hold a point at sup-distance < epsilon
    const int ncells = std::max(1, static_cast<int>(std::floor(1.0 / epsilon)));
    std::size_t cell_count = 1;
    for (int i = 0; i < d; ++i) cell_count *= static_cast<std::size_t>(ncells);
    std::vector<std::vector<std::uint32_t>> cells(cell_count);
    const auto cell_of = [&](std::size_t p) {
        std::size_t idx = 0;
        for (int c = 0; c < d; ++c) {
            int cc = std::min(ncells - 1, static_cast<int>(orbit_at(p, 0, c) * ncells));
            idx = idx * static_cast<std::size_t>(ncells) + static_cast<std::size_t>(cc);
        }
        return idx;
    };

    std::vector<std::size_t> neighbor_cells; // reused scratch
    const auto gather_neighbors = [&](std::size_t cell_idx) {
        neighbor_cells.clear();
        std::vector<int> base(static_cast<std::size_t>(d));
        std::size_t rem = cell_idx;
        for (int c = d - 1; c >= 0; --c) {
            base[static_cast<std::size_t>(c)] = static_cast<int>(rem % ncells);
            rem /= static_cast<std::size_t>(ncells);
        }
        std::vector<int> off(static_cast<std::size_t>(d), -1);
        while (true) {
            std::size_t idx = 0;
            for (int c = 0; c < d; ++c) {
                int cc = (base[static_cast<std::size_t>(c)] + off[static_cast<std::size_t>(c)] +
                          ncells) % ncells;
                idx = idx * static_cast<std::size_t>(ncells) + static_cast<std::size_t>(cc);
            }
            if (std::find(neighbor_cells.begin(), neighbor_cells.end(), idx) ==
                neighbor_cells.end())
                neighbor_cells.push_back(idx);
            int c = d - 1;
            while (c >= 0 && off[static_cast<std::size_t>(c)] == 1) {
                off[static_cast<std::size_t>(c)] = -1;
                --c;
            }
            if (c < 0) break;
            ++off[static_cast<std::size_t>(c)];
        }
    };

    const auto bowen_conflict = [&](std::size_t p, std::size_t q) {
        // conflict = sup-distance below epsilon at every time step
        for (int i = 0; i < n; ++i) {
            bool apart = false;
            for (int c = 0; c < d; ++c)
                if (wrapped_dist_1d(orbit_at(p, i, c), orbit_at(q, i, c)) >= epsilon) {
                    apart = true;
                    break;
                }
            if (apart) return false;
        }
        return true;
    };

    std::vector<std::uint32_t> kept;
    for (std::size_t p = 0; p < count; ++p) {
        gather_neighbors(cell_of(p));
        bool reject = false;
        for (std::size_t ci : neighbor_cells) {
            for (std::uint32_t q : cells[ci])
                if (bowen_conflict(p, q)) {
                    reject = true;
                    break;
                }
            if (reject) break;
        }
        if (!reject) {
            kept.push_back(static_cast<std::uint32_t>(p));
            cells[cell_of(p)].push_back(static_cast<std::uint32_t>(p));
        }
    }

    SeparatedSet set;
    set.n = n;
    set.epsilon = epsilon;
    set.candidate_resolution = candidate_resolution;
    set.points.reserve(kept.size());
    for (std::uint32_t p : kept)
        set.points.emplace_back(lattice_point(candidate_resolution, d, p));
    return set;
}

HrstResult estimate_hrst(const MapSpec& map, int grid_resolution,
                         const std::vector<int>& horizon_schedule, int threads) {
    HrstResult res;
    res.curve = growth_rate_inf_sup(map, grid_resolution, horizon_schedule, threads);
    res.sampled.value = res.curve.value;
    res.sampled.method = EstimateMethod::restoration_svd;
    res.sampled.direction = BoundDirection::upper_bound_modulo_sampling;
    res.sampled.params.grid_resolution = grid_resolution;
    res.sampled.params.schedule = horizon_schedule;

    if (map.family() == MapSpec::Family::LinearAutomorphism) {
        // lim alpha_i(A^n)^{1/n} = |lambda_i|, so the limit of the grid-max
        // curve is the sum of expanding log-eigenvalues, x-independent.
        Eigen::EigenSolver<Eigen::MatrixXd> es(map.linear_part_d(), false);
        double h = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            h += std::max(0.0, std::log2(std::abs(es.eigenvalues()[i])));
        EntropyEstimate exact;
        exact.value = h;
        exact.method = EstimateMethod::closed_form_linear;
        exact.direction = BoundDirection::exact;
        res.exact = exact;
    }
    return res;
}

EntropyEstimate estimate_htop_separated(const MapSpec& map, int n, double epsilon,
                                        int candidate_resolution, int threads) {
    const SeparatedSet set = build_separated_set(map, n, epsilon, candidate_resolution, threads);
    EntropyEstimate est;
    est.value = std::log2(static_cast<double>(set.points.size())) / n;
    est.method = EstimateMethod::separated_sets;
    est.direction = BoundDirection::lower_bound_modulo_sampling;
    est.params.n = n;
    est.params.epsilon = epsilon;
    est.params.grid_resolution = candidate_resolution;
    return est;
}

LyapunovSpectrum lyapunov_spectrum(const MapSpec& map, const TorusPoint& x, int N) {
    require(N >= 1, "lyapunov_spectrum: N >= 1 required");
    const SingularSpectrum s = singular_spectrum(map, x, N);
    LyapunovSpectrum spec{x, N, s.log_alphas / static_cast<double>(N), 0.0};
    for (Eigen::Index i = 0; i < spec.exponents.size(); ++i)
        spec.lambda_plus += std::max(0.0, spec.exponents[i]);
    return spec;
}

namespace {

constexpr int kRefineDepth = 8;      // extra pullback steps for the convergence check
constexpr double kAngleTol = 1e-10;  // allowed angle between successive refinements

Eigen::Vector2d unstable_eigvec_2d(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    int top = 0;
    for (int i = 1; i < 2; ++i)
        if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[top])) top = i;
    Eigen::Vector2d v = es.eigenvectors().col(top).real();
    return v.normalized();
}

void require_anosov_like(const MapSpec& map) {
    require(map.dim() == 2, "unstable direction: implemented for d = 2");
    if (map.family() == MapSpec::Family::LinearAutomorphism)
        require(map.hyperbolic(), "unstable direction: hyperbolic linear map required");
}

// e^u at x via preorbit pushforward; also returns the pullback orbit so
// callers can continue along the forward orbit.
Eigen::Vector2d unstable_direction(const MapSpec& map, const TorusPoint& x, int preorbit_length) {
    const int deep = preorbit_length + kRefineDepth;
    std::vector<TorusPoint> pre;
    pre.reserve(static_cast<std::size_t>(deep) + 1);
    pre.push_back(x);
    for (int j = 1; j <= deep; ++j) pre.push_back(inverse(map, pre.back()));

    const Eigen::Vector2d v0 = unstable_eigvec_2d(map.linear_part_d());
    const auto push_from = [&](int depth) {
        Eigen::Vector2d e = v0;
        for (int j = depth; j >= 1; --j) {
            e = jacobian(map, pre[static_cast<std::size_t>(j)]) * e;
            e.normalize();
        }
        return e;
    };
    const Eigen::Vector2d e = push_from(preorbit_length);
    const Eigen::Vector2d e_ref = push_from(deep);
    const double sin_angle = std::fabs(e[0] * e_ref[1] - e[1] * e_ref[0]);
    if (sin_angle > kAngleTol)
        throw numerical_error("unstable direction not converged: angle increment " +
                              std::to_string(sin_angle) + " between preorbit depths " +
                              std::to_string(preorbit_length) + " and " + std::to_string(deep) +
                              "; increase preorbit_length");
    return e_ref;
}

} // namespace

double unstable_jacobian_potential(const MapSpec& map, const TorusPoint& x, int preorbit_length) {
    require(preorbit_length >= 1, "unstable_jacobian_potential: preorbit_length >= 1 required");
    require_anosov_like(map);
    const Eigen::Vector2d e = unstable_direction(map, x, preorbit_length);
    return std::log2((jacobian(map, x) * e).norm());
}

std::vector<double> unstable_jacobian_along_orbit(const MapSpec& map, const TorusPoint& x, int n,
                                                  int preorbit_length) {
    require(preorbit_length >= 1, "unstable_jacobian_along_orbit: preorbit_length >= 1 required");
    require(n >= 1, "unstable_jacobian_along_orbit: n >= 1 required");
    require_anosov_like(map);
    Eigen::Vector2d e = unstable_direction(map, x, preorbit_length);
    std::vector<double> vals(static_cast<std::size_t>(n));
    TorusPoint cur = x;
    for (int i = 0; i < n; ++i) {
        Eigen::Vector2d next = jacobian(map, cur) * e;
        const double stretch = next.norm();
        vals[static_cast<std::size_t>(i)] = std::log2(stretch);
        e = next / stretch; // DT(x) E^u_x = E^u_Tx: the pushforward stays unstable
        cur = eval(map, cur);
    }
    return vals;
}

std::vector<PressureEstimate> estimate_pressure_curve(const MapSpec& map,
                                                      const std::vector<double>& ts, int n,
                                                      double epsilon, int candidate_resolution,
                                                      int preorbit_length, int threads) {
    require(!ts.empty(), "pressure: at least one t required");
    require_anosov_like(map);
    const SeparatedSet set = build_separated_set(map, n, epsilon, candidate_resolution, threads);

    // Birkhoff sums S_n J^u per kept point, shared across all t
    std::vector<double> birkhoff(set.points.size());
    parallel_for(set.points.size(), threads, [&](std::size_t p) {
        const auto vals = unstable_jacobian_along_orbit(map, set.points[p], n, preorbit_length);
        birkhoff[p] = std::accumulate(vals.begin(), vals.end(), 0.0);
    });

    std::vector<PressureEstimate> out;
    out.reserve(ts.size());
    for (double t : ts) {
        // (1/n) log2 sum_E 2^{-t S_n J^u} via log-sum-exp, fixed order
        double m = -std::numeric_limits<double>::infinity();
        for (double b : birkhoff) m = std::max(m, -t * b);
        double acc = 0.0;
        for (double b : birkhoff) acc += std::exp2(-t * b - m);
        PressureEstimate est;
        est.t = t;
        est.value = (m + std::log2(acc)) / n;
        est.params.n = n;
        est.params.epsilon = epsilon;
        est.params.grid_resolution = candidate_resolution;
        out.push_back(est);
    }
    return out;
}

PressureEstimate estimate_pressure(const MapSpec& map, double t, int n, double epsilon,
                                   int candidate_resolution, int preorbit_length, int threads) {
    return estimate_pressure_curve(map, {t}, n, epsilon, candidate_resolution, preorbit_length,
                                   threads)
        .front();
}

RuelleGapReport ruelle_gap(const MapSpec& map, int n, double epsilon, int candidate_resolution,
                           int grid_resolution, int lyapunov_N, int threads) {
    require(grid_resolution >= 1, "ruelle_gap: grid_resolution >= 1 required");
    RuelleGapReport rep;
    rep.h_top = estimate_htop_separated(map, n, epsilon, candidate_resolution, threads);

    const int d = map.dim();
    const std::size_t count = lattice_size(grid_resolution, d);
    std::vector<double> lams(count);
    parallel_for(count, threads, [&](std::size_t p) {
        lams[p] =
            lyapunov_spectrum(map, TorusPoint(lattice_point(grid_resolution, d, p)), lyapunov_N)
                .lambda_plus;
    });
    rep.lambda_plus_min = *std::min_element(lams.begin(), lams.end());
    rep.lambda_plus_max = *std::max_element(lams.begin(), lams.end());
    rep.lambda_plus_mean = std::accumulate(lams.begin(), lams.end(), 0.0) / count;
    rep.gap = rep.lambda_plus_min - rep.h_top.value;
    return rep;
}

} // namespace anosov
