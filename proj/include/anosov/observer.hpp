#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "anosov/map.hpp"
#include "anosov/torus.hpp"

namespace anosov {

struct ChannelConfig {
    double rate = 1.0;   // bits per sampling step (fractional rates accrue as credit)
    double delta = 1e-4; // initial error bound, sup-metric
    int t_steps = 100;
};

// Axis-aligned box in the frame coordinates shared by encoder and decoder:
// the set {center + V xi : |xi_i| <= half_widths[i]}, with V the fixed frame
// of the run (eigenbasis of the linear part when real-diagonalizable with
// distinct moduli, identity otherwise). Standard-axis boxes cannot track a
// hyperbolic map at rates near h_rst; the eigenframe makes the linear-map
// propagation exact.
struct BoxEstimate {
    Eigen::VectorXd center;      // lift coordinates, kept wrapped to [0,1)^d
    Eigen::VectorXd half_widths; // along the frame axes, all > 0
};

enum class ObserverVerdict { regular, containment_lost, error_blowup };

std::string to_string(ObserverVerdict v);

struct ObserverStep {
    int t = 0;
    TorusPoint truth;
    TorusPoint estimate;
    double error = 0.0;          // wrapped sup-distance
    double half_extent = 0.0;    // sup-norm half-width of the decoder box
    int bits_sent = 0;
    std::uint64_t symbol = 0;    // sub-box index, big-endian bit string of length bits_sent
    bool contained = true;
};

struct ObserverTrace {
    std::vector<ObserverStep> steps; // step 0 records the initial state, 0 bits
    double gain = 0.0;               // sup_t error_t / delta
    ObserverVerdict verdict = ObserverVerdict::regular;
    bool symmetry_ok = true;         // decoder reconstruction matched encoder bit-exactly
    ChannelConfig config;
};

struct RateSweepRow {
    double rate = 0.0;
    double median_gain = 0.0;        // +inf when the median trial failed
    double fraction_regular = 0.0;
};

struct RateSweepResult {
    std::vector<RateSweepRow> rows;
    std::optional<double> transition_rate; // smallest tested rate with fraction_regular = 1
    int trials = 0;
    std::uint64_t seed = 0;
    bool all_audits_passed = true;
};

// Runs the box-propagation estimation loop: both sides deterministically
// propagate a bounding box of T(B_t); the encoder, seeing x_{t+1}, transmits
// the index of the sub-box containing it; the decoder's box becomes that
// sub-box. The decoder state is advanced only from the transmitted symbols
// and is compared against the encoder's copy every step.
// Containment loss and error blowup end the run with the matching verdict;
// they are outcomes, not exceptions.
ObserverTrace simulate_observer(const MapSpec& map, const ChannelConfig& cfg, const TorusPoint& x0,
                                const TorusPoint& xhat0);

// Empirical transition curve over rates x trials with seeded random initial
// conditions; every generated trace is bit-audited.
RateSweepResult rate_sweep(const MapSpec& map, const std::vector<double>& rates,
                           const ChannelConfig& cfg_template, int trials, std::uint64_t seed,
                           int threads = 1);

// Independent replay of the credit accounting: true iff every prefix sends at
// most floor(R t) + 1 bits and no step exceeds the accumulated credit.
bool bit_accounting_audit(const ObserverTrace& trace, double rate);

} // namespace anosov
