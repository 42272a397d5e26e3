#pragma once

#include <string>

#include <json.hpp>

#include "anosov/entropy.hpp"
#include "anosov/map.hpp"
#include "anosov/observer.hpp"
#include "anosov/periodic.hpp"

namespace anosov::io {

using nlohmann::json;

// All numeric report output carries 9 significant digits; rounding through
// the text form keeps serialized files byte-identical across reruns.
double round_sig(double x, int digits = 9);
std::string format_sig(double x, int digits = 9);

json to_json(const MapSpec& map);
json to_json(const EstimateParams& params);
json to_json(const EntropyEstimate& est, const std::string& quantity);
json to_json(const GrowthEstimate& est);
json to_json(const HrstResult& res);
json to_json(const LyapunovSpectrum& spec);
json to_json(const PressureEstimate& est);
json to_json(const RuelleGapReport& rep);
json to_json(const PeriodicOrbit& orbit);
json to_json(const GammaScanReport& rep);
json to_json(const MonteCarloAverage& avg);
json to_json(const ObserverTrace& trace); // summary; per-step data goes to CSV
json to_json(const RateSweepResult& res);
json to_json(const HyperbolicityReport& rep);

std::string trace_csv(const ObserverTrace& trace);
std::string sweep_csv(const RateSweepResult& res);
std::string curve_csv(const GrowthEstimate& est);
std::string gamma_csv(const GammaScanReport& rep);

void write_file(const std::string& path, const std::string& content);

} // namespace anosov::io
