#include "anosov/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace anosov::io {

std::string format_sig(double x, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

double round_sig(double x, int digits) {
    if (!std::isfinite(x)) return x;
    const std::string s = format_sig(x, digits);
    double out = x;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(round_sig(v[i]));
    return a;
}

json point_json(const TorusPoint& p) { return vec_json(p.coords()); }

} // namespace

json to_json(const MapSpec& map) {
    json j;
    if (map.family() == MapSpec::Family::LinearAutomorphism) {
        j["map"] = "linear";
        json m = json::array();
        for (int i = 0; i < map.dim(); ++i)
            for (int k = 0; k < map.dim(); ++k) m.push_back(map.linear_part()(i, k));
        j["matrix"] = m; // row-major
    } else {
        j["map"] = "pcat";
        j["eps"] = round_sig(map.eps());
    }
    return j;
}

json to_json(const EstimateParams& params) {
    json j = json::object();
    if (params.n) j["n"] = *params.n;
    if (params.epsilon) j["epsilon"] = round_sig(*params.epsilon);
    if (params.grid_resolution) j["grid_resolution"] = *params.grid_resolution;
    if (!params.schedule.empty()) j["schedule"] = params.schedule;
    return j;
}

json to_json(const EntropyEstimate& est, const std::string& quantity) {
    json j;
    j["quantity"] = quantity;
    j["value_bits"] = round_sig(est.value);
    j["method"] = to_string(est.method);
    j["params"] = to_json(est.params);
    j["direction"] = to_string(est.direction);
    return j;
}

json to_json(const GrowthEstimate& est) {
    json j;
    j["value"] = round_sig(est.value);
    j["schedule"] = est.horizon_schedule;
    json curve = json::array();
    for (double v : est.per_n_curve) curve.push_back(round_sig(v));
    j["per_n_curve"] = curve;
    j["direction"] = to_string(est.direction);
    j["sample_description"] = est.sample_description;
    return j;
}

json to_json(const HrstResult& res) {
    json j;
    j["sampled"] = to_json(res.sampled, "restoration_entropy");
    if (res.exact) j["exact"] = to_json(*res.exact, "restoration_entropy");
    j["curve"] = to_json(res.curve);
    return j;
}

json to_json(const LyapunovSpectrum& spec) {
    json j;
    j["base_point"] = point_json(spec.base_point);
    j["N"] = spec.N;
    j["exponents_bits"] = vec_json(spec.exponents);
    j["lambda_plus_bits"] = round_sig(spec.lambda_plus);
    return j;
}

json to_json(const PressureEstimate& est) {
    json j;
    j["t"] = round_sig(est.t);
    j["value_bits"] = round_sig(est.value);
    j["params"] = to_json(est.params);
    return j;
}

json to_json(const RuelleGapReport& rep) {
    json j;
    j["h_top"] = to_json(rep.h_top, "topological_entropy");
    j["lambda_plus_min"] = round_sig(rep.lambda_plus_min);
    j["lambda_plus_max"] = round_sig(rep.lambda_plus_max);
    j["lambda_plus_mean"] = round_sig(rep.lambda_plus_mean);
    j["gap"] = round_sig(rep.gap);
    return j;
}

json to_json(const PeriodicOrbit& orbit) {
    json j;
    j["period"] = orbit.period;
    j["representative"] = point_json(orbit.points.front());
    j["gamma_bits"] = round_sig(orbit.gamma);
    j["residual"] = round_sig(orbit.residual);
    return j;
}

json to_json(const GammaScanReport& rep) {
    json j;
    json orbits = json::array();
    for (const auto& o : rep.orbits) orbits.push_back(to_json(o));
    j["orbits"] = orbits;
    j["gamma_min"] = round_sig(rep.gamma_min);
    j["gamma_max"] = round_sig(rep.gamma_max);
    j["gamma_spread"] = round_sig(rep.gamma_spread);
    j["threshold"] = round_sig(rep.threshold);
    j["certificate"] = to_string(rep.certificate);
    j["continuation_failures"] = rep.continuation_failures;
    j["caveat"] = rep.caveat;
    return j;
}

json to_json(const MonteCarloAverage& avg) {
    json j;
    j["mean_bits"] = round_sig(avg.mean);
    j["std_error"] = round_sig(avg.std_error);
    j["n"] = avg.n;
    j["samples"] = avg.samples;
    j["seed"] = avg.seed;
    return j;
}

json to_json(const ObserverTrace& trace) {
    json j;
    j["steps"] = trace.steps.empty() ? 0 : trace.steps.back().t;
    j["verdict"] = to_string(trace.verdict);
    j["gain"] = std::isfinite(trace.gain) ? json(round_sig(trace.gain)) : json("inf");
    j["symmetry_ok"] = trace.symmetry_ok;
    double max_err = 0.0;
    long long total_bits = 0;
    for (const auto& s : trace.steps) {
        max_err = std::max(max_err, s.error);
        total_bits += s.bits_sent;
    }
    j["max_error"] = round_sig(max_err);
    j["total_bits"] = total_bits;
    j["rate"] = round_sig(trace.config.rate);
    j["delta"] = round_sig(trace.config.delta);
    return j;
}

json to_json(const RateSweepResult& res) {
    json j;
    json rows = json::array();
    for (const auto& r : res.rows) {
        json row;
        row["rate"] = round_sig(r.rate);
        row["median_gain"] =
            std::isfinite(r.median_gain) ? json(round_sig(r.median_gain)) : json("inf");
        row["fraction_regular"] = round_sig(r.fraction_regular);
        rows.push_back(row);
    }
    j["rows"] = rows;
    if (res.transition_rate) j["transition_rate"] = round_sig(*res.transition_rate);
    j["trials"] = res.trials;
    j["seed"] = res.seed;
    j["all_audits_passed"] = res.all_audits_passed;
    return j;
}

json to_json(const HyperbolicityReport& rep) {
    json j;
    j["is_automorphism"] = rep.is_automorphism;
    j["is_hyperbolic"] = rep.is_hyperbolic;
    j["det"] = rep.det;
    json mags = json::array();
    for (double m : rep.eigenvalue_magnitudes) mags.push_back(round_sig(m));
    j["eigenvalue_magnitudes"] = mags;
    return j;
}

std::string trace_csv(const ObserverTrace& trace) {
    std::string out = "t";
    const int d = trace.steps.empty() ? 0 : trace.steps.front().truth.dim();
    for (int c = 0; c < d; ++c) out += ",x" + std::to_string(c);
    for (int c = 0; c < d; ++c) out += ",xhat" + std::to_string(c);
    out += ",err,bits,contained\n";
    for (const auto& s : trace.steps) {
        out += std::to_string(s.t);
        for (int c = 0; c < d; ++c) out += "," + format_sig(s.truth[c]);
        for (int c = 0; c < d; ++c) out += "," + format_sig(s.estimate[c]);
        out += "," + format_sig(s.error) + "," + std::to_string(s.bits_sent) + "," +
               (s.contained ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_csv(const RateSweepResult& res) {
    std::string out = "rate,median_gain,frac_regular\n";
    for (const auto& r : res.rows)
        out += format_sig(r.rate) + "," +
               (std::isfinite(r.median_gain) ? format_sig(r.median_gain) : "inf") + "," +
               format_sig(r.fraction_regular) + "\n";
    return out;
}

std::string curve_csv(const GrowthEstimate& est) {
    std::string out = "n,grid_max_per_n\n";
    for (std::size_t i = 0; i < est.horizon_schedule.size(); ++i)
        out += std::to_string(est.horizon_schedule[i]) + "," + format_sig(est.per_n_curve[i]) +
               "\n";
    return out;
}

std::string gamma_csv(const GammaScanReport& rep) {
    std::string out = "period,gamma_bits,residual\n";
    for (const auto& o : rep.orbits)
        out += std::to_string(o.period) + "," + format_sig(o.gamma) + "," +
               format_sig(o.residual) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw precondition_error("cannot open output file: " + path);
    f << content;
}

} // namespace anosov::io
