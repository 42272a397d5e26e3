#include "anosov/observer.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "anosov/parallel.hpp"
#include "anosov/rng.hpp"

namespace anosov {

std::string to_string(ObserverVerdict v) {
    switch (v) {
        case ObserverVerdict::regular: return "regular";
        case ObserverVerdict::containment_lost: return "containment_lost";
        case ObserverVerdict::error_blowup: return "error_blowup";
    }
    return "?";
}

namespace {

constexpr double kPiSquared = 9.869604401089358;
constexpr double kAbsoluteMargin = 1e-12; // absorbs float rounding in the propagation
constexpr int kMaxBitsPerAxis = 40;
constexpr int kMaxBitsPerStep = 62; // symbol must fit an u64

// Frame for the boxes: unit eigenvectors of the linear part when they form a
// well-conditioned real basis with distinct moduli, identity otherwise (e.g.
// the defective shear).
Eigen::MatrixXd box_frame(const MapSpec& map) {
    const Eigen::MatrixXd A = map.linear_part_d();
    const int d = static_cast<int>(A.rows());
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    for (int i = 0; i < d; ++i)
        if (std::fabs(es.eigenvalues()[i].imag()) > 1e-12) return Eigen::MatrixXd::Identity(d, d);
    std::vector<int> order(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    for (int i = 0; i + 1 < d; ++i)
        if (std::fabs(std::abs(es.eigenvalues()[order[static_cast<std::size_t>(i)]]) -
                      std::abs(es.eigenvalues()[order[static_cast<std::size_t>(i + 1)]])) < 1e-9)
            return Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd V(d, d);
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd v = es.eigenvectors().col(order[static_cast<std::size_t>(i)]).real();
        v.normalize();
        int big = 0;
        for (int j = 1; j < d; ++j)
            if (std::fabs(v[j]) > std::fabs(v[big])) big = j;
        if (v[big] < 0.0) v = -v;
        V.col(i) = v;
    }
    if (std::fabs(V.determinant()) < 1e-6) return Eigen::MatrixXd::Identity(d, d);
    return V;
}

struct Protocol {
    const MapSpec& map;
    Eigen::MatrixXd V, Vinv, absV, absVinv;

    explicit Protocol(const MapSpec& m) : map(m) {
        V = box_frame(m);
        Vinv = V.inverse();
        absV = V.cwiseAbs();
        absVinv = Vinv.cwiseAbs();
    }

    // sup-norm half-extent of the box in standard coordinates, per axis
    Eigen::VectorXd standard_half(const BoxEstimate& b) const { return absV * b.half_widths; }

    // Rigorous bounding box of the image T(B) in frame coordinates. The
    // linear-in-xi term uses |V^-1 J(c) V| row sums; the perturbation's
    // second-order remainder |eps (sin u - sin v - cos... )| <= 2 pi^2 eps dx^2
    // is pushed through |V^-1| and added per axis, plus an absolute belt for
    // float rounding. For linear maps the remainder is zero and the
    // propagation is exact.
    BoxEstimate propagate(const BoxEstimate& b) const {
        BoxEstimate out;
        Eigen::VectorXd c = eval_lift(map, b.center);
        const Eigen::MatrixXd K =
            Vinv * jacobian(map, TorusPoint::wrap(b.center)) * V;
        out.half_widths = K.cwiseAbs() * b.half_widths;
        if (map.family() == MapSpec::Family::PerturbedCat) {
            const double hx = absV.row(0).dot(b.half_widths);
            const double remainder = 2.0 * kPiSquared * map.eps() * hx * hx;
            out.half_widths += absVinv.col(0) * remainder;
        }
        out.half_widths.array() += kAbsoluteMargin;
        // boxes are equivariant under integer translation of the center
        out.center = c.array() - c.array().floor();
        return out;
    }

    // greedy per-bit allocation to the axis with the widest remaining sub-box
    std::vector<int> allocate_bits(const Eigen::VectorXd& half, int avail) const {
        const int d = static_cast<int>(half.size());
        std::vector<int> bits(static_cast<std::size_t>(d), 0);
        int total = 0;
        for (int g = 0; g < avail && total < kMaxBitsPerStep; ++g) {
            int best = -1;
            double best_w = -1.0;
            for (int i = 0; i < d; ++i) {
                if (bits[static_cast<std::size_t>(i)] >= kMaxBitsPerAxis) continue;
                const double w = half[i] * std::exp2(-bits[static_cast<std::size_t>(i)]);
                if (w > best_w) {
                    best_w = w;
                    best = i;
                }
            }
            if (best < 0) break;
            ++bits[static_cast<std::size_t>(best)];
            ++total;
        }
        return bits;
    }

    BoxEstimate cut(const BoxEstimate& bounding, const std::vector<int>& bits,
                    std::uint64_t symbol) const {
        const int d = static_cast<int>(bounding.half_widths.size());
        // peel axes back off the big-endian symbol
        std::vector<std::uint64_t> sub(static_cast<std::size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            const int b = bits[static_cast<std::size_t>(i)];
            sub[static_cast<std::size_t>(i)] = symbol & ((1ULL << b) - 1ULL);
            symbol >>= b;
        }
        BoxEstimate out;
        out.half_widths = bounding.half_widths;
        Eigen::VectorXd xi(d);
        for (int i = 0; i < d; ++i) {
            const double h = bounding.half_widths[i] * std::exp2(-bits[static_cast<std::size_t>(i)]);
            out.half_widths[i] = h;
            xi[i] = -bounding.half_widths[i] +
                    (2.0 * static_cast<double>(sub[static_cast<std::size_t>(i)]) + 1.0) * h;
        }
        out.center = bounding.center + V * xi;
        return out;
    }
};

} // namespace

ObserverTrace simulate_observer(const MapSpec& map, const ChannelConfig& cfg, const TorusPoint& x0,
                                const TorusPoint& xhat0) {
    require(cfg.rate > 0.0, "observer: rate > 0 required");
    require(cfg.delta > 0.0 && cfg.delta < 0.25, "observer: 0 < delta < 1/4 required");
    require(cfg.t_steps >= 1, "observer: t_steps >= 1 required");
    require(x0.dim() == map.dim() && xhat0.dim() == map.dim(), "observer: dimension mismatch");
    require(sup_dist(x0, xhat0) <= cfg.delta,
            "observer: initial estimate farther than delta from the true state");

    const Protocol proto(map);
    const int d = map.dim();

    // initial box: the delta-ball around xhat0, inflated into the frame
    BoxEstimate enc;
    enc.center = xhat0.coords();
    enc.half_widths = cfg.delta * proto.absVinv.rowwise().sum();
    BoxEstimate dec = enc;

    ObserverTrace trace;
    trace.config = cfg;
    trace.steps.reserve(static_cast<std::size_t>(cfg.t_steps) + 1);
    trace.steps.push_back(ObserverStep{0, x0, xhat0, sup_dist(x0, xhat0),
                                       proto.standard_half(dec).maxCoeff(), 0, 0, true});

    double credit = 0.0;
    TorusPoint truth = x0;
    for (int t = 1; t <= cfg.t_steps; ++t) {
        truth = eval(map, truth);
        const BoxEstimate enc_bound = proto.propagate(enc);
        const BoxEstimate dec_bound = proto.propagate(dec);

        // componentwise lift recovery needs per-coordinate half-extent < 1/2;
        // past 0.45 the box is a torus-sized blur and the run has failed
        if (proto.standard_half(enc_bound).maxCoeff() >= 0.45) {
            trace.verdict = ObserverVerdict::error_blowup;
            break;
        }

        credit += cfg.rate;
        const int avail = static_cast<int>(std::floor(credit));
        const std::vector<int> bits = proto.allocate_bits(enc_bound.half_widths, avail);
        int bits_used = 0;
        for (int b : bits) bits_used += b;

        // encoder: lift of the true state nearest the bounding-box center
        Eigen::VectorXd z(d);
        for (int j = 0; j < d; ++j)
            z[j] = truth[j] + std::round(enc_bound.center[j] - truth[j]);
        const Eigen::VectorXd xi = proto.Vinv * (z - enc_bound.center);
        bool contained = true;
        for (int i = 0; i < d; ++i)
            if (std::fabs(xi[i]) > enc_bound.half_widths[i]) contained = false;
        if (!contained) {
            trace.steps.push_back(ObserverStep{t, truth, TorusPoint::wrap(enc_bound.center),
                                               sup_dist(truth, TorusPoint::wrap(enc_bound.center)),
                                               proto.standard_half(enc_bound).maxCoeff(), 0, 0,
                                               false});
            trace.verdict = ObserverVerdict::containment_lost;
            break;
        }
        std::uint64_t symbol = 0;
        for (int i = 0; i < d; ++i) {
            const int b = bits[static_cast<std::size_t>(i)];
            const double frac = (xi[i] + enc_bound.half_widths[i]) /
                                (2.0 * enc_bound.half_widths[i]);
            std::uint64_t s = static_cast<std::uint64_t>(
                std::floor(frac * std::exp2(static_cast<double>(b))));
            const std::uint64_t cap = (1ULL << b) - 1ULL;
            if (s > cap) s = cap;
            symbol = (symbol << b) | s;
        }
        credit -= bits_used;

        enc = proto.cut(enc_bound, bits, symbol);
        dec = proto.cut(dec_bound, bits, symbol);
        if ((enc.center.array() != dec.center.array()).any() ||
            (enc.half_widths.array() != dec.half_widths.array()).any() ||
            (enc_bound.center.array() != dec_bound.center.array()).any())
            trace.symmetry_ok = false;

        const TorusPoint estimate = TorusPoint::wrap(dec.center);
        trace.steps.push_back(ObserverStep{t, truth, estimate, sup_dist(truth, estimate),
                                           proto.standard_half(dec).maxCoeff(), bits_used,
                                           symbol, true});
    }

    double max_err = 0.0;
    for (const auto& s : trace.steps) max_err = std::max(max_err, s.error);
    trace.gain = max_err / cfg.delta;
    return trace;
}

RateSweepResult rate_sweep(const MapSpec& map, const std::vector<double>& rates,
                           const ChannelConfig& cfg_template, int trials, std::uint64_t seed,
                           int threads) {
    require(!rates.empty(), "rate_sweep: nonempty rate list required");
    require(trials >= 1, "rate_sweep: trials >= 1 required");
    const int d = map.dim();
    const std::size_t total = rates.size() * static_cast<std::size_t>(trials);

    std::vector<double> gains(total);
    std::vector<char> regular(total);
    std::vector<char> audits(total);
    parallel_for(total, threads, [&](std::size_t idx) {
        const std::size_t r = idx / static_cast<std::size_t>(trials);
        const std::size_t trial = idx % static_cast<std::size_t>(trials);
        rng64 rng = derived_stream(seed, r, trial);
        Eigen::VectorXd c(d), off(d);
        for (int j = 0; j < d; ++j) c[j] = rng.next_unit();
        for (int j = 0; j < d; ++j) off[j] = cfg_template.delta * rng.next_signed_unit();
        const TorusPoint x0(std::move(c));
        const TorusPoint xhat0 = TorusPoint::wrap(x0.coords() + off);
        ChannelConfig cfg = cfg_template;
        cfg.rate = rates[r];
        const ObserverTrace trace = simulate_observer(map, cfg, x0, xhat0);
        const bool ok = trace.verdict == ObserverVerdict::regular;
        gains[idx] = ok ? trace.gain : std::numeric_limits<double>::infinity();
        regular[idx] = ok ? 1 : 0;
        audits[idx] = bit_accounting_audit(trace, cfg.rate) ? 1 : 0;
    });

    RateSweepResult res;
    res.trials = trials;
    res.seed = seed;
    for (std::size_t r = 0; r < rates.size(); ++r) {
        std::vector<double> g(gains.begin() + static_cast<std::ptrdiff_t>(r * trials),
                              gains.begin() + static_cast<std::ptrdiff_t>((r + 1) * trials));
        std::sort(g.begin(), g.end());
        int nreg = 0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(trials); ++i)
            nreg += regular[r * static_cast<std::size_t>(trials) + i];
        RateSweepRow row;
        row.rate = rates[r];
        row.median_gain = g[(g.size() - 1) / 2];
        row.fraction_regular = static_cast<double>(nreg) / trials;
        res.rows.push_back(row);
        if (!res.transition_rate && row.fraction_regular == 1.0) res.transition_rate = rates[r];
    }
    for (char a : audits)
        if (!a) res.all_audits_passed = false;
    return res;
}

bool bit_accounting_audit(const ObserverTrace& trace, double rate) {
    double credit = 0.0;
    double total = 0.0;
    for (const auto& s : trace.steps) {
        if (s.t == 0) continue;
        credit += rate;
        if (s.bits_sent > std::floor(credit + 1e-9)) return false;
        credit -= s.bits_sent;
        total += s.bits_sent;
        if (total > rate * s.t + 1.0 + 1e-9) return false;
    }
    return true;
}

} // namespace anosov
