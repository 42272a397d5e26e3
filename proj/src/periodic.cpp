#include "anosov/periodic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_set>

#include "anosov/parallel.hpp"

namespace anosov {

std::string to_string(GammaCertificate c) {
    return c == GammaCertificate::certifies_strict_inequality ? "certifies_strict_inequality"
                                                              : "consistent_with_equality";
}

namespace {

using Int64Vector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// integer adjugate via cofactors; exact for the small dimensions used here
IntMatrix integer_adjugate(const IntMatrix& m) {
    const int d = static_cast<int>(m.rows());
    if (d == 1) {
        IntMatrix a(1, 1);
        a(0, 0) = 1;
        return a;
    }
    IntMatrix adj(d, d);
    IntMatrix sub(d - 1, d - 1);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            for (int r = 0, rr = 0; r < d; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < d; ++c) {
                    if (c == j) continue;
                    sub(rr, cc) = m(r, c);
                    ++cc;
                }
                ++rr;
            }
            const std::int64_t cof = integer_det(sub);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

constexpr double kLogHyperbolicityMargin = 1e-6;

} // namespace

double orbit_gamma(const Eigen::MatrixXd& monodromy, int period) {
    require(period >= 1, "orbit_gamma: period >= 1 required");
    Eigen::EigenSolver<Eigen::MatrixXd> es(monodromy, false);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double a = std::log2(std::abs(es.eigenvalues()[i]));
        if (std::fabs(a) < kLogHyperbolicityMargin)
            throw numerical_error(
                "orbit_gamma: monodromy eigenvalue within margin of the unit circle; "
                "gamma is ill-defined for numerically non-hyperbolic orbits");
        if (a > 0.0) sum += a;
    }
    return sum / period;
}

std::int64_t periodic_point_count(const IntMatrix& A, int n) {
    require(n >= 1, "periodic_point_count: n >= 1 required");
    IntMatrix M = integer_pow(A, n);
    for (int i = 0; i < M.rows(); ++i) M(i, i) -= 1;
    std::int64_t det = integer_det(M);
    return det < 0 ? -det : det;
}

std::vector<PeriodicOrbit> enumerate_linear_periodic(const IntMatrix& A, int n,
                                                     std::size_t max_orbits) {
    require(n >= 1, "enumerate_linear_periodic: n >= 1 required");
    const auto rep = hyperbolicity_check(A);
    require(rep.is_automorphism, "enumerate_linear_periodic: |det A| = 1 required");
    require(rep.is_hyperbolic,
            "enumerate_linear_periodic: A^n - I is singular for non-hyperbolic A");
    const int d = static_cast<int>(A.rows());

    IntMatrix M = integer_pow(A, n);
    for (int i = 0; i < d; ++i) M(i, i) -= 1;
    const std::int64_t det = integer_det(M);
    require(det != 0, "enumerate_linear_periodic: A^n - I singular");
    const std::int64_t abs_det = det < 0 ? -det : det;
    const IntMatrix adj = integer_adjugate(M);

    // x in [0,1)^d with M x = k integer <=> k lies in M [0,1)^d; scan the
    // bounding box of that zonotope and keep exact solutions x = adj(M) k / det
    Int64Vector lo(d), hi(d);
    double volume = 1.0;
    for (int i = 0; i < d; ++i) {
        std::int64_t l = 0, h = 0;
        for (int j = 0; j < d; ++j) (M(i, j) < 0 ? l : h) += M(i, j);
        lo[i] = l;
        hi[i] = h;
        volume *= static_cast<double>(h - l + 1);
    }
    require(volume < 5e7, "enumerate_linear_periodic: period too large for exact enumeration");

    // residues r with x = r / |det|, collected in odometer order of k
    std::vector<Int64Vector> residues;
    residues.reserve(static_cast<std::size_t>(abs_det));
    Int64Vector k = lo;
    while (true) {
        Int64Vector y = adj * k;
        bool inside = true;
        for (int i = 0; i < d && inside; ++i)
            inside = det > 0 ? (y[i] >= 0 && y[i] < det) : (y[i] <= 0 && y[i] > det);
        if (inside) residues.push_back(det > 0 ? y : Int64Vector(-y));
        int c = d - 1;
        while (c >= 0 && k[c] == hi[c]) {
            k[c] = lo[c];
            --c;
        }
        if (c < 0) break;
        ++k[c];
    }
    require(static_cast<std::int64_t>(residues.size()) == abs_det,
            "enumerate_linear_periodic: solution count mismatch (internal)");

    const auto encode = [abs_det, d](const Int64Vector& r) {
        std::uint64_t key = 0;
        for (int i = 0; i < d; ++i)
            key = key * static_cast<std::uint64_t>(abs_det) + static_cast<std::uint64_t>(r[i]);
        return key;
    };

    const MapSpec map = MapSpec::linear(A);
    std::unordered_set<std::uint64_t> visited;
    std::vector<PeriodicOrbit> orbits;
    for (const auto& r0 : residues) {
        if (orbits.size() >= max_orbits) break;
        if (visited.count(encode(r0))) continue;
        // exact orbit on numerators: r -> A r (mod |det|)
        std::vector<Int64Vector> cycle;
        Int64Vector r = r0;
        do {
            visited.insert(encode(r));
            cycle.push_back(r);
            Int64Vector next(d);
            for (int i = 0; i < d; ++i) {
                std::int64_t acc = 0;
                for (int j = 0; j < d; ++j) acc += A(i, j) * r[j];
                next[i] = floor_mod(acc, abs_det);
            }
            r = next;
        } while (r != r0);

        PeriodicOrbit orbit;
        orbit.period = static_cast<int>(cycle.size());
        orbit.points.reserve(cycle.size());
        for (const auto& rr : cycle) {
            Eigen::VectorXd c(d);
            for (int i = 0; i < d; ++i)
                c[i] = static_cast<double>(rr[i]) / static_cast<double>(abs_det);
            orbit.points.emplace_back(std::move(c));
        }
        orbit.monodromy = integer_pow(A, orbit.period).cast<double>();
        orbit.gamma = orbit_gamma(orbit.monodromy, orbit.period);
        orbit.residual = 0.0;
        for (std::size_t i = 0; i < orbit.points.size(); ++i)
            orbit.residual = std::max(
                orbit.residual, sup_dist(eval(map, orbit.points[i]),
                                         orbit.points[(i + 1) % orbit.points.size()]));
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

PeriodicOrbit newton_refine(const MapSpec& map, const PeriodicOrbit& seed, int max_iter,
                            double tol) {
    require(map.family() == MapSpec::Family::PerturbedCat,
            "newton_refine: continuation targets the perturbed family");
    require(!seed.points.empty() && seed.period == static_cast<int>(seed.points.size()),
            "newton_refine: malformed seed orbit");
    const int d = map.dim();
    require(seed.points.front().dim() == d, "newton_refine: dimension mismatch");
    const int p = seed.period;
    const Eigen::MatrixXd A = map.linear_part_d();

    // integer translations from the seed's lifted orbit under the linear part
    std::vector<Eigen::VectorXd> k(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        Eigen::VectorXd raw = A * seed.points[static_cast<std::size_t>(i)].coords() -
                              seed.points[static_cast<std::size_t>((i + 1) % p)].coords();
        k[static_cast<std::size_t>(i)] = raw.array().round();
    }

    Eigen::VectorXd X(p * d);
    for (int i = 0; i < p; ++i)
        X.segment(i * d, d) = seed.points[static_cast<std::size_t>(i)].coords();

    const auto residual_vec = [&](const Eigen::VectorXd& Z) {
        Eigen::VectorXd F(p * d);
        for (int i = 0; i < p; ++i) {
            const Eigen::VectorXd img = eval_lift(map, Z.segment(i * d, d));
            F.segment(i * d, d) =
                img - Z.segment(((i + 1) % p) * d, d) - k[static_cast<std::size_t>(i)];
        }
        return F;
    };

    Eigen::VectorXd F = residual_vec(X);
    double fnorm = F.lpNorm<Eigen::Infinity>();
    int it = 0;
    while (fnorm > tol && it < max_iter) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(p * d, p * d);
        for (int i = 0; i < p; ++i) {
            J.block(i * d, i * d, d, d) =
                jacobian(map, TorusPoint::wrap(X.segment(i * d, d)));
            J.block(i * d, ((i + 1) % p) * d, d, d) = -Eigen::MatrixXd::Identity(d, d);
        }
        const Eigen::VectorXd step = J.partialPivLu().solve(-F);
        double damping = 1.0;
        while (damping > 1e-6) {
            const Eigen::VectorXd Xn = X + damping * step;
            const Eigen::VectorXd Fn = residual_vec(Xn);
            const double fn = Fn.lpNorm<Eigen::Infinity>();
            if (fn < (1.0 - 0.25 * damping) * fnorm) {
                X = Xn;
                F = Fn;
                fnorm = fn;
                break;
            }
            damping *= 0.5;
        }
        if (damping <= 1e-6)
            throw numerical_error("newton_refine: damped step stalled at residual " +
                                  std::to_string(fnorm));
        ++it;
    }
    if (fnorm > tol)
        throw numerical_error("newton_refine: residual " + std::to_string(fnorm) + " after " +
                              std::to_string(max_iter) + " iterations");

    PeriodicOrbit orbit;
    orbit.period = p;
    orbit.points.reserve(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) orbit.points.push_back(TorusPoint::wrap(X.segment(i * d, d)));

    // minimality must survive the continuation
    for (int q = 1; q < p; ++q) {
        if (p % q != 0) continue;
        if (sup_dist(iterate(map, orbit.points.front(), q), orbit.points.front()) <= 1e-8)
            throw numerical_error("newton_refine: continued orbit collapsed to period " +
                                  std::to_string(q));
    }

    orbit.monodromy = Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < p; ++i)
        orbit.monodromy =
            (jacobian(map, orbit.points[static_cast<std::size_t>(i)]) * orbit.monodromy).eval();
    orbit.gamma = orbit_gamma(orbit.monodromy, p);
    orbit.residual = 0.0;
    for (int i = 0; i < p; ++i)
        orbit.residual = std::max(orbit.residual,
                                  sup_dist(eval(map, orbit.points[static_cast<std::size_t>(i)]),
                                           orbit.points[static_cast<std::size_t>((i + 1) % p)]));
    return orbit;
}

GammaScanReport gamma_scan(const MapSpec& map, int max_period, double threshold, int threads) {
    require(max_period >= 1, "gamma_scan: max_period >= 1 required");
    const bool continue_orbits =
        map.family() == MapSpec::Family::PerturbedCat && map.eps() != 0.0;

    std::vector<PeriodicOrbit> seeds;
    for (int n = 1; n <= max_period; ++n)
        for (auto& orbit : enumerate_linear_periodic(map.linear_part(), n))
            if (orbit.period == n) seeds.push_back(std::move(orbit));

    GammaScanReport rep;
    rep.threshold = threshold;
    rep.caveat =
        "certificate is sound for topologically mixing C2 Anosov maps (all Anosov "
        "diffeomorphisms of the torus are topologically mixing); gamma spread above the "
        "threshold rules out h_tp = h_rst by the constancy of the periodic-orbit invariant";

    if (continue_orbits) {
        std::vector<std::optional<PeriodicOrbit>> continued(seeds.size());
        std::vector<std::string> errors(seeds.size());
        parallel_for(seeds.size(), threads, [&](std::size_t i) {
            try {
                continued[i] = newton_refine(map, seeds[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            if (continued[i])
                rep.orbits.push_back(std::move(*continued[i]));
            else
                rep.continuation_failures.push_back("period " + std::to_string(seeds[i].period) +
                                                    " seed " + std::to_string(i) + ": " +
                                                    errors[i]);
        }
    } else if (map.family() == MapSpec::Family::PerturbedCat) {
        // eps = 0: the perturbation vanishes identically; refinement is a no-op
        for (auto& s : seeds) rep.orbits.push_back(newton_refine(map, s));
    } else {
        rep.orbits = std::move(seeds);
    }

    require(!rep.orbits.empty(), "gamma_scan: no orbits available");
    rep.gamma_min = rep.orbits.front().gamma;
    rep.gamma_max = rep.orbits.front().gamma;
    for (const auto& o : rep.orbits) {
        rep.gamma_min = std::min(rep.gamma_min, o.gamma);
        rep.gamma_max = std::max(rep.gamma_max, o.gamma);
    }
    rep.gamma_spread = rep.gamma_max - rep.gamma_min;
    rep.certificate = rep.gamma_spread > threshold
                          ? GammaCertificate::certifies_strict_inequality
                          : GammaCertificate::consistent_with_equality;
    return rep;
}

} // namespace anosov
