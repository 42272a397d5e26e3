#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "anosov/io.hpp"
#include "anosov/map.hpp"
#include "anosov/observer.hpp"
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

ObserverTrace run_cat(double rate, double delta, int steps) {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const TorusPoint x0(Eigen::Vector2d(0.2, 0.7));
    const TorusPoint xhat0 =
        TorusPoint::wrap(x0.coords() + Eigen::Vector2d(0.5 * delta, -0.3 * delta));
    return simulate_observer(cat, ChannelConfig{rate, delta, steps}, x0, xhat0);
}

} // namespace

TEST_CASE("rate above h_rst: regular observation over a long horizon") {
    const ObserverTrace t = run_cat(2.0, 1e-4, 2000);
    CHECK(t.verdict == ObserverVerdict::regular);
    CHECK(t.symmetry_ok);
    CHECK(std::isfinite(t.gain));
    CHECK(bit_accounting_audit(t, 2.0));
    for (const auto& s : t.steps) {
        CHECK(s.contained);
        CHECK(s.error <= 0.01); // error stays on the delta scale, never near torus size
        CHECK(s.error <= s.half_extent + 1e-12); // containment keeps the error inside the box
    }
    // integer rate leaves no credit carry: exactly 2 bits per step
    for (const auto& s : t.steps)
        if (s.t > 0) CHECK(s.bits_sent == 2);
}

TEST_CASE("rate below h_tp: the observer loses the state") {
    const ObserverTrace t = run_cat(1.0, 1e-6, 2000);
    CHECK(t.verdict == ObserverVerdict::error_blowup);
    REQUIRE(!t.steps.empty());
    CHECK(t.steps.back().t < 300);
    double max_err = 0.0;
    for (const auto& s : t.steps) max_err = std::max(max_err, s.error);
    CHECK(max_err > 0.1);
}

TEST_CASE("zero-entropy shear is regular at modest rates") {
    const MapSpec shear = MapSpec::linear(shear_matrix());
    const TorusPoint x0(Eigen::Vector2d(0.31, 0.64));
    const TorusPoint xhat0 = TorusPoint::wrap(x0.coords() + Eigen::Vector2d(4e-4, -6e-4));
    const ObserverTrace t = simulate_observer(shear, ChannelConfig{2.0, 1e-3, 1000}, x0, xhat0);
    CHECK(t.verdict == ObserverVerdict::regular);
    CHECK(t.gain <= 3.0);
}

TEST_CASE("preconditions") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const TorusPoint x0(Eigen::Vector2d(0.2, 0.7));
    const TorusPoint far(Eigen::Vector2d(0.4, 0.7));
    CHECK_THROWS_AS(simulate_observer(cat, ChannelConfig{2.0, 1e-4, 100}, x0, far),
                    precondition_error);
    CHECK_THROWS_AS(simulate_observer(cat, ChannelConfig{-1.0, 1e-4, 100}, x0, x0),
                    precondition_error);
    CHECK_THROWS_AS(simulate_observer(cat, ChannelConfig{2.0, 0.3, 100}, x0, x0),
                    precondition_error);
}

TEST_CASE("traces are bit-deterministic") {
    const ObserverTrace a = run_cat(1.7, 1e-4, 500);
    const ObserverTrace b = run_cat(1.7, 1e-4, 500);
    CHECK(io::trace_csv(a) == io::trace_csv(b));
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].error == b.steps[i].error);
        CHECK(a.steps[i].symbol == b.steps[i].symbol);
    }
}

TEST_CASE("fractional rates respect the credit accumulator") {
    const ObserverTrace t = run_cat(1.6, 1e-4, 400);
    CHECK(t.verdict == ObserverVerdict::regular);
    CHECK(bit_accounting_audit(t, 1.6));
    long long total = 0;
    for (const auto& s : t.steps) total += s.bits_sent;
    CHECK(static_cast<double>(total) <= 1.6 * 400 + 1.0);
    CHECK(static_cast<double>(total) >= 1.6 * 400 - 2.0); // credit is spent, not hoarded
}

TEST_CASE("audit rejects fabricated overdrafts") {
    ObserverTrace fake;
    fake.config = ChannelConfig{1.5, 1e-3, 2};
    const TorusPoint p = TorusPoint::zero(2);
    fake.steps.push_back(ObserverStep{0, p, p, 0.0, 1e-3, 0, 0, true});
    fake.steps.push_back(ObserverStep{1, p, p, 0.0, 1e-3, 3, 0, true}); // ceil(1.5) + 1 bits at t = 1
    CHECK_FALSE(bit_accounting_audit(fake, 1.5));
    fake.steps.back().bits_sent = 1;
    CHECK(bit_accounting_audit(fake, 1.5));
}

TEST_CASE("regularity gain is stable across delta scales") {
    std::vector<double> gains;
    for (double delta : {1e-3, 1e-4, 1e-5}) gains.push_back(run_cat(2.0, delta, 800).gain);
    for (double g : gains) CHECK(std::isfinite(g));
    const double lo = *std::min_element(gains.begin(), gains.end());
    const double hi = *std::max_element(gains.begin(), gains.end());
    CHECK(hi <= 2.0 * lo);
}

TEST_CASE("rate sweep: monotone gains and a bracketed transition") {
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const RateSweepResult res =
        rate_sweep(cat, {1.0, 1.5, 2.0, 3.0}, ChannelConfig{0.0, 1e-4, 500}, 4, 42, 2);
    REQUIRE(res.rows.size() == 4);
    CHECK(res.all_audits_passed);
    CHECK(res.rows.back().fraction_regular == 1.0);
    CHECK(res.rows.front().fraction_regular == 0.0);
    int inversions = 0;
    for (std::size_t i = 0; i + 1 < res.rows.size(); ++i)
        if (res.rows[i + 1].median_gain > res.rows[i].median_gain) ++inversions;
    CHECK(inversions <= 1);
    REQUIRE(res.transition_rate.has_value());
    CHECK(*res.transition_rate <= 2.0);

    CHECK_THROWS_AS(rate_sweep(cat, {}, ChannelConfig{0.0, 1e-4, 100}, 2, 1), precondition_error);
}

TEST_CASE("perturbed map shifts the transition to higher rates") {
    // The larger restoration entropy of the perturbed map is a worst-case
    // statement; typical orbits average the local expansion down to nearly
    // the cat-map value. The demanding initial condition is the fixed point,
    // where the local expansion is log2 lambda_+ for the whole run.
    const MapSpec cat = MapSpec::linear(cat_matrix());
    const MapSpec pcat = MapSpec::perturbed_cat(0.05);
    const TorusPoint x0 = TorusPoint::zero(2);
    const TorusPoint xhat0(Eigen::Vector2d(5e-5, 5e-5));
    const double mid = 1.45; // between log2(gamma2) = 1.388 and log2(lambda_+(0.05)) = 1.513

    CHECK(simulate_observer(cat, ChannelConfig{mid, 1e-4, 1500}, x0, xhat0).verdict ==
          ObserverVerdict::regular);
    CHECK(simulate_observer(pcat, ChannelConfig{mid, 1e-4, 1500}, x0, xhat0).verdict ==
          ObserverVerdict::error_blowup);
    CHECK(simulate_observer(pcat, ChannelConfig{2.2, 1e-4, 1500}, x0, xhat0).verdict ==
          ObserverVerdict::regular);
}
