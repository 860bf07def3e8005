// Command-line front end for the Gaussian-zero variance experiments.
//
// Subcommands map onto experiment kinds; `overlay` and `plotdata` are pure
// file operations. Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gpz/errors.hpp"
#include "gpz/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string measure_json;
    std::string phi_json;
    std::vector<double> t_list;
    std::string method;
    std::int64_t n_reps = -1;
    double dt = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int threads = -1;
    double tolerance = -1.0;
    bool raw = false;
    // kind-specific, sentinel = unset
    std::vector<double> interval;
    std::vector<double> shifts;
    double recurrence_threshold = -1.0;
    double recurrence_t_max = -1.0;
    double growth_epsilon = -1.0;
    double band_eps = -1.0;
    double geman_delta = -1.0;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config JSON file");
    cmd->add_option("--preset", args.preset,
                    "measure preset (degenerate_cos, two_atoms, uniform_sinc, gaussian, "
                    "bernoulli_geometric(a), bernoulli_factorial)");
    cmd->add_option("--measure", args.measure_json, "inline measure JSON");
    cmd->add_option("--phi", args.phi_json, "test function JSON");
    cmd->add_option("--T", args.t_list, "window scales (increasing)")->delimiter(',');
    cmd->add_option("--reps", args.n_reps, "replications per T");
    cmd->add_option("--dt", args.dt, "grid step override");
    cmd->add_option("--method", args.method, "auto|atomic_exact|spectral_mc|circulant");
    cmd->add_flag("--raw", args.raw, "skip normalization of the measure");
    auto* seed_opt = cmd->add_option("--seed", args.seed, "master seed");
    seed_opt->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--threads", args.threads, "worker threads (0 = cores)");
    cmd->add_option("--tolerance", args.tolerance, "quadrature tolerance");
}

gpz::ExperimentConfig build_config(const CommonArgs& args, gpz::ExperimentKind kind) {
    nlohmann::json j;
    if (!args.config_path.empty()) {
        std::ifstream is(args.config_path);
        if (!is) throw gpz::config_error("cannot open config file: " + args.config_path);
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw gpz::config_error(std::string("malformed config JSON: ") + e.what());
        }
    }
    j["kind"] = gpz::to_string(kind);
    if (!args.preset.empty()) j["measure"] = {{"preset", args.preset}};
    if (!args.measure_json.empty()) j["measure"] = nlohmann::json::parse(args.measure_json);
    if (!j.contains("measure")) {
        throw gpz::config_error("no measure given: pass --preset, --measure or a config file");
    }
    if (!args.phi_json.empty()) j["phi"] = nlohmann::json::parse(args.phi_json);
    if (!args.t_list.empty()) j["T_list"] = args.t_list;
    if (args.n_reps >= 0) j["n_reps"] = args.n_reps;
    if (args.dt >= 0.0) j["dt"] = args.dt;
    if (!args.method.empty()) j["method"] = args.method;
    if (args.seed_set) j["master_seed"] = args.seed;
    if (!args.out_dir.empty()) j["out_dir"] = args.out_dir;
    if (args.threads >= 0) j["threads"] = args.threads;
    if (args.tolerance > 0.0) j["tolerance"] = args.tolerance;
    if (args.raw) j["raw"] = true;
    if (args.interval.size() == 2) {
        j["interval_lo"] = args.interval[0];
        j["interval_hi"] = args.interval[1];
    } else if (!args.interval.empty()) {
        throw gpz::config_error("--interval takes exactly two numbers: lo,hi");
    }
    if (!args.shifts.empty()) j["shifts"] = args.shifts;
    if (args.recurrence_threshold > 0.0) j["recurrence_threshold"] = args.recurrence_threshold;
    if (args.recurrence_t_max > 0.0) j["recurrence_t_max"] = args.recurrence_t_max;
    if (args.growth_epsilon > 0.0) j["growth_epsilon"] = args.growth_epsilon;
    if (args.band_eps > 0.0) j["band_eps"] = args.band_eps;
    if (args.geman_delta > 0.0) j["geman_delta"] = args.geman_delta;
    return gpz::ExperimentConfig::from_json(j);
}

int dispatch_run(const CommonArgs& args, gpz::ExperimentKind kind) {
    const auto config = build_config(args, kind);
    const auto manifest = gpz::run_experiment(config);
    for (const auto& path : manifest.outputs) std::cout << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variance experiments for zeros of stationary Gaussian processes"};
    app.require_subcommand(1);

    CommonArgs mean_args, var_args, bound_args, bern_args, diag_args, pred_args;
    auto* mean_cmd = app.add_subcommand("mean", "Monte Carlo zero counts vs the Kac-Rice mean");
    add_common_options(mean_cmd, mean_args);
    auto* var_cmd = app.add_subcommand("variance", "count variance across window scales");
    add_common_options(var_cmd, var_args);
    auto* bound_cmd = app.add_subcommand("bound", "analytic lower bounds per window scale");
    add_common_options(bound_cmd, bound_args);
    auto* bern_cmd =
        app.add_subcommand("bernoulli", "cosine-product diagnostics and growth certificate");
    add_common_options(bern_cmd, bern_args);
    auto* diag_cmd = app.add_subcommand("diagnose", "integrability diagnostics of the covariance");
    add_common_options(diag_cmd, diag_args);
    auto* pred_cmd = app.add_subcommand("predictability", "shift-agreement of zero occupancy");
    add_common_options(pred_cmd, pred_args);
    pred_cmd->add_option("--interval", pred_args.interval, "observation interval lo,hi")
        ->delimiter(',');
    pred_cmd->add_option("--shifts", pred_args.shifts, "explicit shift list")->delimiter(',');
    pred_cmd->add_option("--recurrence-threshold", pred_args.recurrence_threshold,
                         "|C| >= 1 - threshold defines a recurrence");
    pred_cmd->add_option("--recurrence-t-max", pred_args.recurrence_t_max,
                         "scan horizon for recurrence times");
    bern_cmd->add_option("--epsilon", bern_args.growth_epsilon, "growth certificate exponent");
    bound_cmd->add_option("--band-eps", bound_args.band_eps, "half-width of the excluded band");
    diag_cmd->add_option("--delta", diag_args.geman_delta, "upper limit of the Geman integral");

    std::string overlay_variance, overlay_bound, overlay_out = "overlay.csv";
    auto* overlay_cmd = app.add_subcommand("overlay", "merge variance and bound CSVs");
    overlay_cmd->add_option("variance_csv", overlay_variance)->required();
    overlay_cmd->add_option("bound_csv", overlay_bound)->required();
    overlay_cmd->add_option("--out-file", overlay_out, "merged CSV path");

    std::vector<std::string> plot_files;
    std::string plot_out;
    auto* plot_cmd = app.add_subcommand("plotdata", "gnuplot tables from report files");
    plot_cmd->add_option("files", plot_files)->required();
    plot_cmd->add_option("--out-file", plot_out, "write tables here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mean_cmd->parsed()) return dispatch_run(mean_args, gpz::ExperimentKind::Mean);
        if (var_cmd->parsed()) return dispatch_run(var_args, gpz::ExperimentKind::Variance);
        if (bound_cmd->parsed()) return dispatch_run(bound_args, gpz::ExperimentKind::BoundOverlay);
        if (bern_cmd->parsed()) {
            return dispatch_run(bern_args, gpz::ExperimentKind::BernoulliSuite);
        }
        if (diag_cmd->parsed()) return dispatch_run(diag_args, gpz::ExperimentKind::Diagnostics);
        if (pred_cmd->parsed()) {
            return dispatch_run(pred_args, gpz::ExperimentKind::Predictability);
        }
        if (overlay_cmd->parsed()) {
            const auto res = gpz::overlay(overlay_variance, overlay_bound, overlay_out);
            std::cout << overlay_out << "\n" << res.verdict << "\n";
            return 0;
        }
        if (plot_cmd->parsed()) {
            if (plot_out.empty()) {
                gpz::plotdata(plot_files, std::cout);
            } else {
                std::ofstream os(plot_out, std::ios::trunc);
                if (!os) throw gpz::config_error("cannot open " + plot_out);
                gpz::plotdata(plot_files, os);
            }
            return 0;
        }
    } catch (const gpz::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gpz::unknown_structure_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
