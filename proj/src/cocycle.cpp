#include "anosov/cocycle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "anosov/parallel.hpp"
#include "anosov/rng.hpp"

namespace anosov {

std::string to_string(BoundDirection d) {
    switch (d) {
        case BoundDirection::approximation: return "approximation";
        case BoundDirection::lower_bound_modulo_sampling: return "lower_bound_modulo_sampling";
        case BoundDirection::upper_bound_modulo_sampling: return "upper_bound_modulo_sampling";
        case BoundDirection::exact: return "exact";
    }
    return "?";
}

namespace {

// lexicographic k-subsets of {0..d-1}
std::vector<std::vector<int>> k_subsets(int d, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(idx);
        int p = k - 1;
        while (p >= 0 && idx[static_cast<std::size_t>(p)] == d - k + p) --p;
        if (p < 0) break;
        ++idx[static_cast<std::size_t>(p)];
        for (int q = p + 1; q < k; ++q)
            idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
    return out;
}

} // namespace

Eigen::MatrixXd compound_matrix(const Eigen::MatrixXd& m, int k) {
    const int d = static_cast<int>(m.rows());
    require(m.rows() == m.cols(), "compound_matrix: square matrix required");
    require(k >= 1 && k <= d, "compound_matrix: 1 <= k <= d required");
    if (k == 1) return m;
    const auto subs = k_subsets(d, k);
    const int s = static_cast<int>(subs.size());
    Eigen::MatrixXd c(s, s);
    Eigen::MatrixXd minor(k, k);
    for (int r = 0; r < s; ++r)
        for (int col = 0; col < s; ++col) {
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    minor(i, j) = m(subs[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)],
                                    subs[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)]);
            c(r, col) = minor.determinant();
        }
    return c;
}

CompoundProductTracker::CompoundProductTracker(int dim, int k) : k_(k) {
    const int s = static_cast<int>(k_subsets(dim, k).size());
    product_ = Eigen::MatrixXd::Identity(s, s);
}

void CompoundProductTracker::step(const Eigen::MatrixXd& jac) {
    product_ = compound_matrix(jac, k_) * product_;
    const double norm = product_.norm(); // Frobenius
    // scalar factors commute with the product, so pulling them out is exact
    log2_scale_ += std::log2(norm);
    product_ /= norm;
    ++steps_;
}

double CompoundProductTracker::log2_norm() const {
    if (product_.rows() == 1) return log2_scale_ + std::log2(std::fabs(product_(0, 0)));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(product_);
    return log2_scale_ + std::log2(svd.singularValues()[0]);
}

namespace {

SingularSpectrum spectrum_from_trackers(const TorusPoint& x, int n,
                                        const std::vector<CompoundProductTracker>& trackers) {
    const int d = static_cast<int>(trackers.size());
    SingularSpectrum s{x, n, Eigen::VectorXd(d), 0.0};
    double prev = 0.0;
    for (int k = 0; k < d; ++k) {
        const double vol = trackers[static_cast<std::size_t>(k)].log2_norm();
        s.log_alphas[k] = vol - prev;
        prev = vol;
    }
    // log-majorization makes the differences non-increasing; rounding can
    // produce out-of-order ties at the 1e-15 level, so sort defensively
    std::sort(s.log_alphas.data(), s.log_alphas.data() + d, std::greater<double>());
    for (int k = 0; k < d; ++k) s.f_value += std::max(0.0, s.log_alphas[k]);
    return s;
}

} // namespace

std::vector<SingularSpectrum> singular_profile(const MapSpec& map, const TorusPoint& x,
                                               const std::vector<int>& horizons) {
    require(!horizons.empty(), "singular_profile: nonempty horizon list required");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        require(horizons[i] >= 1, "singular_profile: horizons must be >= 1");
        require(i == 0 || horizons[i] > horizons[i - 1],
                "singular_profile: horizons must be strictly increasing");
    }
    const int d = map.dim();
    std::vector<CompoundProductTracker> trackers;
    trackers.reserve(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) trackers.emplace_back(d, k);

    std::vector<SingularSpectrum> out;
    out.reserve(horizons.size());
    TorusPoint cur = x;
    std::size_t next = 0;
    for (int t = 1; t <= horizons.back(); ++t) {
        const Eigen::MatrixXd J = jacobian(map, cur);
        for (auto& tr : trackers) tr.step(J);
        cur = eval(map, cur);
        if (t == horizons[next]) {
            out.push_back(spectrum_from_trackers(x, t, trackers));
            ++next;
        }
    }
    return out;
}

SingularSpectrum singular_spectrum(const MapSpec& map, const TorusPoint& x, int n) {
    require(n >= 1, "singular_spectrum: n >= 1 required");
    return singular_profile(map, x, {n}).front();
}

double unstable_log_volume(const SingularSpectrum& s) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < s.log_alphas.size(); ++i) f += std::max(0.0, s.log_alphas[i]);
    return f;
}

double subadditivity_defect(const MapSpec& map, const TorusPoint& x, int n, int m) {
    require(n >= 1 && m >= 1, "subadditivity_defect: n, m >= 1 required");
    const auto both = singular_profile(map, x, {n, n + m});
    const double f_n = both.front().f_value;
    const double f_nm = both.back().f_value;
    const double f_m = singular_spectrum(map, iterate(map, x, n), m).f_value;
    return f_n + f_m - f_nm;
}

double kingman_average(const MapSpec& map, const TorusPoint& x, int N) {
    require(N >= 1, "kingman_average: N >= 1 required");
    return singular_spectrum(map, x, N).f_value / static_cast<double>(N);
}

MonteCarloAverage monte_carlo_space_average(const MapSpec& map, int n, int samples,
                                            std::uint64_t seed, int threads) {
    require(n >= 1, "monte_carlo_space_average: n >= 1 required");
    require(samples >= 2, "monte_carlo_space_average: samples >= 2 required");
    const int d = map.dim();
    std::vector<double> vals(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
        rng64 rng = derived_stream(seed, i);
        Eigen::VectorXd c(d);
        for (int j = 0; j < d; ++j) c[j] = rng.next_unit();
        vals[i] = kingman_average(map, TorusPoint(std::move(c)), n);
    });
    // fixed summation order for bit-determinism
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= samples;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (static_cast<double>(samples) - 1.0) / samples);
    return MonteCarloAverage{mean, se, n, samples, seed};
}

GrowthEstimate growth_rate_inf_sup(const MapSpec& map, int grid_resolution,
                                   const std::vector<int>& horizon_schedule, int threads) {
    require(grid_resolution >= 1, "growth_rate_inf_sup: grid_resolution >= 1 required");
    require(!horizon_schedule.empty(), "growth_rate_inf_sup: nonempty schedule required");
    const int d = map.dim();
    std::size_t npoints = 1;
    for (int i = 0; i < d; ++i) npoints *= static_cast<std::size_t>(grid_resolution);

    const std::size_t ns = horizon_schedule.size();
    std::vector<double> fvals(npoints * ns);
    parallel_for(npoints, threads, [&](std::size_t p) {
        Eigen::VectorXd c(d);
        std::size_t rem = p;
        for (int j = d - 1; j >= 0; --j) {
            c[j] = static_cast<double>(rem % static_cast<std::size_t>(grid_resolution)) /
                   grid_resolution;
            rem /= static_cast<std::size_t>(grid_resolution);
        }
        const auto profile = singular_profile(map, TorusPoint(std::move(c)), horizon_schedule);
        for (std::size_t s = 0; s < ns; ++s) fvals[p * ns + s] = profile[s].f_value;
    });

    GrowthEstimate est;
    est.horizon_schedule = horizon_schedule;
    est.per_n_curve.assign(ns, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < npoints; ++p)
        for (std::size_t s = 0; s < ns; ++s)
            est.per_n_curve[s] = std::max(est.per_n_curve[s],
                                          fvals[p * ns + s] / horizon_schedule[s]);
    est.value = *std::min_element(est.per_n_curve.begin(), est.per_n_curve.end());
    est.sample_description = "uniform lattice, " + std::to_string(grid_resolution) +
                             " points per axis, d = " + std::to_string(d);
    est.direction = BoundDirection::upper_bound_modulo_sampling;
    return est;
}

} // namespace anosov
