// Command-line front end: every estimator and the observer simulator behind
// reproducible configs with machine-readable JSON/CSV output.
//
// Exit codes: 0 success, 2 configuration/contract error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "anosov/cocycle.hpp"
#include "anosov/entropy.hpp"
#include "anosov/io.hpp"
#include "anosov/map.hpp"
#include "anosov/observer.hpp"
#include "anosov/parallel.hpp"
#include "anosov/periodic.hpp"
#include "anosov/rng.hpp"
#include "anosov/torus.hpp"

namespace {

using anosov::io::json;

struct MapOptions {
    std::string family = "linear";
    std::vector<std::int64_t> matrix = {2, 1, 1, 1}; // row-major
    double eps = 0.01;
};

void add_map_options(CLI::App* cmd, MapOptions& opts) {
    cmd->add_option("--map", opts.family, "map family: linear | pcat")
        ->check(CLI::IsMember({"linear", "pcat"}));
    cmd->add_option("--matrix", opts.matrix,
                    "row-major integer entries of the automorphism (linear only)")
        ->delimiter(',');
    cmd->add_option("--eps", opts.eps, "perturbation strength (pcat only)");
}

anosov::MapSpec build_map(const MapOptions& opts) {
    if (opts.family == "pcat") return anosov::MapSpec::perturbed_cat(opts.eps);
    int d = 1;
    while (d * d < static_cast<int>(opts.matrix.size())) ++d;
    anosov::require(d * d == static_cast<int>(opts.matrix.size()),
                    "--matrix must have a square number of entries");
    anosov::IntMatrix A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            A(i, j) = opts.matrix[static_cast<std::size_t>(i * d + j)];
    return anosov::MapSpec::linear(std::move(A));
}

struct OutputOptions {
    std::string out;
    std::string csv;
};

void emit(const json& report, const OutputOptions& out) {
    const std::string text = report.dump(2) + "\n";
    if (out.out.empty())
        std::cout << text;
    else
        anosov::io::write_file(out.out, text);
}

anosov::TorusPoint parse_point(const std::vector<double>& coords) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i)
        c[static_cast<Eigen::Index>(i)] = coords[i];
    return anosov::TorusPoint::wrap(c);
}

anosov::TorusPoint random_point(int dim, anosov::rng64& rng) {
    Eigen::VectorXd c(dim);
    for (int i = 0; i < dim; ++i) c[i] = rng.next_unit();
    return anosov::TorusPoint(std::move(c));
}

json base_config(const MapOptions& map, int threads) {
    json cfg;
    cfg["map"] = anosov::io::to_json(build_map(map));
    cfg["threads"] = threads;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy estimation and quantized observation for torus diffeomorphisms"};
    app.require_subcommand(1);
    app.set_config("--config", "", "load options from a config file; explicit flags override");

    int threads = anosov::default_threads();
    app.add_option("--threads", threads, "worker pool size")->capture_default_str();

    // ---- hrst ----
    MapOptions hrst_map;
    OutputOptions hrst_out;
    int hrst_grid = 64;
    std::vector<int> hrst_schedule = {8, 16, 32, 64};
    auto* hrst = app.add_subcommand("hrst", "restoration entropy via singular-value growth");
    add_map_options(hrst, hrst_map);
    hrst->add_option("--grid", hrst_grid, "lattice points per axis for the spatial max");
    hrst->add_option("--schedule", hrst_schedule, "increasing horizons n")->delimiter(',');
    hrst->add_option("--out", hrst_out.out, "JSON report path (default: stdout)");
    hrst->add_option("--csv", hrst_out.csv, "per-n curve CSV path");

    // ---- htop ----
    MapOptions htop_map;
    OutputOptions htop_out;
    int htop_n = 12, htop_lattice = 400;
    double htop_epsilon = 0.05;
    std::vector<int> htop_n_list;
    std::vector<double> htop_eps_list;
    auto* htop = app.add_subcommand("htop", "topological entropy via greedy separated sets");
    add_map_options(htop, htop_map);
    htop->add_option("--n", htop_n, "orbit-segment length");
    htop->add_option("--epsilon", htop_epsilon, "separation resolution");
    htop->add_option("--lattice", htop_lattice, "candidate lattice points per axis");
    htop->add_option("--n-list", htop_n_list, "convergence table over n")->delimiter(',');
    htop->add_option("--epsilon-list", htop_eps_list, "convergence table over epsilon")
        ->delimiter(',');
    htop->add_option("--out", htop_out.out, "JSON report path (default: stdout)");
    htop->add_option("--csv", htop_out.csv, "per-(n,epsilon) CSV path");

    // ---- lyap ----
    MapOptions lyap_map;
    OutputOptions lyap_out;
    int lyap_N = 64;
    std::uint64_t lyap_seed = 1;
    std::vector<double> lyap_x;
    auto* lyap = app.add_subcommand("lyap", "finite-time Lyapunov spectrum");
    add_map_options(lyap, lyap_map);
    lyap->add_option("--N", lyap_N, "horizon");
    lyap->add_option("--x", lyap_x, "base point (default: random from --seed)")->delimiter(',');
    lyap->add_option("--seed", lyap_seed, "seed for the random base point");
    lyap->add_option("--out", lyap_out.out, "JSON report path (default: stdout)");

    // ---- pressure ----
    MapOptions pr_map;
    OutputOptions pr_out;
    int pr_n = 12, pr_lattice = 400, pr_preorbit = 32;
    double pr_epsilon = 0.05;
    std::vector<double> pr_ts = {0.0, 0.5, 1.0};
    auto* pressure =
        app.add_subcommand("pressure", "topological pressure for phi = -t * J^u");
    add_map_options(pressure, pr_map);
    pressure->add_option("--t-list", pr_ts, "potential scales t")->delimiter(',');
    pressure->add_option("--n", pr_n, "orbit-segment length");
    pressure->add_option("--epsilon", pr_epsilon, "separation resolution");
    pressure->add_option("--lattice", pr_lattice, "candidate lattice points per axis");
    pressure->add_option("--preorbit", pr_preorbit, "pullback depth for E^u");
    pressure->add_option("--out", pr_out.out, "JSON report path (default: stdout)");
    pressure->add_option("--csv", pr_out.csv, "per-t CSV path");

    // ---- gamma-scan ----
    MapOptions gs_map;
    OutputOptions gs_out;
    int gs_max_period = 3;
    double gs_threshold = 1e-4;
    auto* gscan = app.add_subcommand(
        "gamma-scan", "periodic-orbit invariant spread and h_tp < h_rst certificate");
    add_map_options(gscan, gs_map);
    gscan->add_option("--max-period", gs_max_period, "enumerate orbits up to this period");
    gscan->add_option("--threshold", gs_threshold, "spread threshold for the certificate");
    gscan->add_option("--out", gs_out.out, "JSON report path (default: stdout)");
    gscan->add_option("--csv", gs_out.csv, "per-orbit CSV path");

    // ---- observe ----
    MapOptions ob_map;
    OutputOptions ob_out;
    anosov::ChannelConfig ob_cfg{2.0, 1e-4, 2000};
    std::uint64_t ob_seed = 1;
    std::vector<double> ob_x0, ob_xhat0;
    std::string ob_trace_csv;
    auto* observe = app.add_subcommand("observe", "quantized observer over a digital channel");
    add_map_options(observe, ob_map);
    observe->add_option("--rate", ob_cfg.rate, "channel rate, bits per step");
    observe->add_option("--delta", ob_cfg.delta, "initial error bound");
    observe->add_option("--steps", ob_cfg.t_steps, "horizon");
    observe->add_option("--x0", ob_x0, "true initial state (default: random)")->delimiter(',');
    observe->add_option("--xhat0", ob_xhat0, "initial estimate (default: x0 + offset <= delta)")
        ->delimiter(',');
    observe->add_option("--seed", ob_seed, "seed for unspecified initial data");
    observe->add_option("--out", ob_out.out, "JSON report path (default: stdout)");
    observe->add_option("--trace-csv", ob_trace_csv, "per-step trace CSV path");

    // ---- rate-sweep ----
    MapOptions rs_map;
    OutputOptions rs_out;
    anosov::ChannelConfig rs_cfg{1.0, 1e-4, 2000};
    std::vector<double> rs_rates = {1.0, 1.2, 1.4, 1.6, 2.0};
    int rs_trials = 20;
    std::uint64_t rs_seed = 1;
    auto* rsweep = app.add_subcommand("rate-sweep", "empirical observability transition curve");
    add_map_options(rsweep, rs_map);
    rsweep->add_option("--rates", rs_rates, "channel rates to test")->delimiter(',');
    rsweep->add_option("--delta", rs_cfg.delta, "initial error bound");
    rsweep->add_option("--steps", rs_cfg.t_steps, "horizon per trial");
    rsweep->add_option("--trials", rs_trials, "random trials per rate");
    rsweep->add_option("--seed", rs_seed, "master seed");
    rsweep->add_option("--out", rs_out.out, "JSON report path (default: stdout)");
    rsweep->add_option("--csv", rs_out.csv, "per-rate CSV path");

    // ---- subadd-check ----
    MapOptions sa_map;
    OutputOptions sa_out;
    int sa_samples = 1000, sa_max_block = 64;
    std::uint64_t sa_seed = 7;
    auto* subadd = app.add_subcommand("subadd-check",
                                      "sampled subadditivity defects of the singular cocycle");
    add_map_options(subadd, sa_map);
    subadd->add_option("--samples", sa_samples, "number of (x, n, m) triples");
    subadd->add_option("--max-block", sa_max_block, "cap on n + m");
    subadd->add_option("--seed", sa_seed, "sampling seed");
    subadd->add_option("--out", sa_out.out, "JSON report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*hrst) {
            const auto map = build_map(hrst_map);
            const auto res = anosov::estimate_hrst(map, hrst_grid, hrst_schedule, threads);
            json report;
            report["command"] = "hrst";
            report["config"] = base_config(hrst_map, threads);
            report["config"]["grid"] = hrst_grid;
            report["config"]["schedule"] = hrst_schedule;
            report["result"] = anosov::io::to_json(res);
            emit(report, hrst_out);
            if (!hrst_out.csv.empty())
                anosov::io::write_file(hrst_out.csv, anosov::io::curve_csv(res.curve));
        } else if (*htop) {
            const auto map = build_map(htop_map);
            if (htop_n_list.empty()) htop_n_list = {htop_n};
            if (htop_eps_list.empty()) htop_eps_list = {htop_epsilon};
            json rows = json::array();
            std::string csv = "n,epsilon,value_bits\n";
            for (int n : htop_n_list)
                for (double eps : htop_eps_list) {
                    const auto est =
                        anosov::estimate_htop_separated(map, n, eps, htop_lattice, threads);
                    rows.push_back(anosov::io::to_json(est, "topological_entropy"));
                    csv += std::to_string(n) + "," + anosov::io::format_sig(eps) + "," +
                           anosov::io::format_sig(est.value) + "\n";
                }
            json report;
            report["command"] = "htop";
            report["config"] = base_config(htop_map, threads);
            report["config"]["n_list"] = htop_n_list;
            report["config"]["epsilon_list"] = htop_eps_list;
            report["config"]["lattice"] = htop_lattice;
            report["result"] = rows.size() == 1 ? rows.front() : json{{"rows", rows}};
            emit(report, htop_out);
            if (!htop_out.csv.empty()) anosov::io::write_file(htop_out.csv, csv);
        } else if (*lyap) {
            const auto map = build_map(lyap_map);
            anosov::rng64 rng(lyap_seed);
            const anosov::TorusPoint x =
                lyap_x.empty() ? random_point(map.dim(), rng) : parse_point(lyap_x);
            const auto spec = anosov::lyapunov_spectrum(map, x, lyap_N);
            json report;
            report["command"] = "lyap";
            report["config"] = base_config(lyap_map, threads);
            report["config"]["N"] = lyap_N;
            report["config"]["seed"] = lyap_seed;
            report["result"] = anosov::io::to_json(spec);
            emit(report, lyap_out);
        } else if (*pressure) {
            const auto map = build_map(pr_map);
            const auto ests = anosov::estimate_pressure_curve(map, pr_ts, pr_n, pr_epsilon,
                                                              pr_lattice, pr_preorbit, threads);
            json rows = json::array();
            std::string csv = "t,value_bits\n";
            for (const auto& e : ests) {
                rows.push_back(anosov::io::to_json(e));
                csv += anosov::io::format_sig(e.t) + "," + anosov::io::format_sig(e.value) + "\n";
            }
            json report;
            report["command"] = "pressure";
            report["config"] = base_config(pr_map, threads);
            report["config"]["t_list"] = pr_ts;
            report["config"]["n"] = pr_n;
            report["config"]["epsilon"] = pr_epsilon;
            report["config"]["lattice"] = pr_lattice;
            report["config"]["preorbit"] = pr_preorbit;
            report["result"]["rows"] = rows;
            emit(report, pr_out);
            if (!pr_out.csv.empty()) anosov::io::write_file(pr_out.csv, csv);
        } else if (*gscan) {
            const auto map = build_map(gs_map);
            const auto rep = anosov::gamma_scan(map, gs_max_period, gs_threshold, threads);
            json report;
            report["command"] = "gamma-scan";
            report["config"] = base_config(gs_map, threads);
            report["config"]["max_period"] = gs_max_period;
            report["config"]["threshold"] = anosov::io::round_sig(gs_threshold);
            report["result"] = anosov::io::to_json(rep);
            emit(report, gs_out);
            if (!gs_out.csv.empty()) anosov::io::write_file(gs_out.csv, anosov::io::gamma_csv(rep));
        } else if (*observe) {
            const auto map = build_map(ob_map);
            anosov::rng64 rng(ob_seed);
            const anosov::TorusPoint x0 =
                ob_x0.empty() ? random_point(map.dim(), rng) : parse_point(ob_x0);
            anosov::TorusPoint xhat0 = x0;
            if (!ob_xhat0.empty()) {
                xhat0 = parse_point(ob_xhat0);
            } else {
                Eigen::VectorXd off(map.dim());
                for (int j = 0; j < map.dim(); ++j)
                    off[j] = ob_cfg.delta * rng.next_signed_unit();
                xhat0 = anosov::TorusPoint::wrap(x0.coords() + off);
            }
            const auto trace = anosov::simulate_observer(map, ob_cfg, x0, xhat0);
            json report;
            report["command"] = "observe";
            report["config"] = base_config(ob_map, threads);
            report["config"]["rate"] = anosov::io::round_sig(ob_cfg.rate);
            report["config"]["delta"] = anosov::io::round_sig(ob_cfg.delta);
            report["config"]["steps"] = ob_cfg.t_steps;
            report["config"]["seed"] = ob_seed;
            report["result"] = anosov::io::to_json(trace);
            report["result"]["audit_passed"] = anosov::bit_accounting_audit(trace, ob_cfg.rate);
            emit(report, ob_out);
            if (!ob_trace_csv.empty())
                anosov::io::write_file(ob_trace_csv, anosov::io::trace_csv(trace));
        } else if (*rsweep) {
            const auto map = build_map(rs_map);
            const auto res = anosov::rate_sweep(map, rs_rates, rs_cfg, rs_trials, rs_seed, threads);
            json report;
            report["command"] = "rate-sweep";
            report["config"] = base_config(rs_map, threads);
            report["config"]["rates"] = rs_rates;
            report["config"]["delta"] = anosov::io::round_sig(rs_cfg.delta);
            report["config"]["steps"] = rs_cfg.t_steps;
            report["config"]["trials"] = rs_trials;
            report["config"]["seed"] = rs_seed;
            report["result"] = anosov::io::to_json(res);
            emit(report, rs_out);
            if (!rs_out.csv.empty()) anosov::io::write_file(rs_out.csv, anosov::io::sweep_csv(res));
        } else if (*subadd) {
            const auto map = build_map(sa_map);
            anosov::require(sa_samples >= 1, "subadd-check: samples >= 1 required");
            anosov::require(sa_max_block >= 2, "subadd-check: max-block >= 2 required");
            std::vector<double> defects(static_cast<std::size_t>(sa_samples));
            std::vector<int> ns(static_cast<std::size_t>(sa_samples)),
                ms(static_cast<std::size_t>(sa_samples));
            anosov::parallel_for(static_cast<std::size_t>(sa_samples), threads, [&](std::size_t i) {
                anosov::rng64 rng = anosov::derived_stream(sa_seed, i);
                Eigen::VectorXd c(map.dim());
                for (int j = 0; j < map.dim(); ++j) c[j] = rng.next_unit();
                const int n =
                    1 + static_cast<int>(rng.next_unit() * (sa_max_block - 1));
                const int m =
                    1 + static_cast<int>(rng.next_unit() * (sa_max_block - n));
                ns[i] = n;
                ms[i] = m;
                defects[i] =
                    anosov::subadditivity_defect(map, anosov::TorusPoint(std::move(c)), n, m);
            });
            std::size_t worst = 0;
            bool all_ok = true;
            for (std::size_t i = 0; i < defects.size(); ++i) {
                if (defects[i] < defects[worst]) worst = i;
                if (defects[i] < -1e-9 * (ns[i] + ms[i])) all_ok = false;
            }
            json report;
            report["command"] = "subadd-check";
            report["config"] = base_config(sa_map, threads);
            report["config"]["samples"] = sa_samples;
            report["config"]["max_block"] = sa_max_block;
            report["config"]["seed"] = sa_seed;
            report["result"]["min_defect"] = anosov::io::round_sig(defects[worst]);
            report["result"]["min_defect_n"] = ns[worst];
            report["result"]["min_defect_m"] = ms[worst];
            report["result"]["all_above_tolerance"] = all_ok;
            emit(report, sa_out);
        }
    } catch (const anosov::precondition_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
