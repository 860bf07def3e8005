#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpz/bernoulli.hpp"
#include "gpz/simulate.hpp"
#include "gpz/spectral.hpp"
#include "gpz/test_function.hpp"

namespace gpz {

enum class ExperimentKind { Mean, Variance, BoundOverlay, BernoulliSuite, Predictability, Diagnostics };
std::string to_string(ExperimentKind k);
ExperimentKind kind_from_string(const std::string& s);

// Named measures pinned to the C(0)=1, -C''(0)=1 convention at load time
// (the raw flag skips that). bernoulli_geometric takes its ratio inline,
// e.g. "bernoulli_geometric(0.5)".
SpectralMeasure preset_measure(const std::string& name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Variance;
    nlohmann::json measure;  // inline measure JSON or {"preset": name}
    TestFunction phi = TestFunction::indicator(-1.0, 1.0);
    std::vector<double> t_list{10.0};
    int n_reps = 1000;
    double dt = 0.0;                      // 0: default rule
    std::string method = "auto";          // auto | atomic_exact | spectral_mc | circulant
    std::uint64_t master_seed = 1;
    int threads = 0;                      // 0: hardware concurrency
    double tolerance = 1e-9;
    std::string out_dir = "out";
    bool raw = false;                     // skip normalization of the measure

    // kind-specific knobs
    double interval_lo = 0.0, interval_hi = 1.0;     // predictability
    std::vector<double> shifts;                      // empty: use recurrence_times
    double recurrence_threshold = 0.01;
    double recurrence_t_max = 500.0;
    double growth_epsilon = 0.5;                     // bernoulli suite
    double band_eps = 0.1;                           // offband restriction
    double geman_delta = 0.1;
    int n_freq = 256;
    int bootstrap_resamples = 400;
    int pad_doublings = 1;  // circulant embedding padding

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;  // canonical form used for hashing
};

struct ResolvedMeasure {
    SpectralMeasure measure;                  // normalized unless config.raw
    std::optional<LambdaSequence> lambda;     // raw sequence for cosine products
    std::string id;
};

ResolvedMeasure resolve_measure(const ExperimentConfig& config);

// auto rule: exact sampler for atomic measures, circulant for densities,
// spectral superposition otherwise.
SimMethod pick_method(const std::string& requested, const SpectralMeasure& mu);

struct RunManifest {
    std::string config_hash;
    std::string tool_version;
    double wall_clock_seconds = 0.0;
    nlohmann::json stage_seeds;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
};

// Dispatches a config to the owning module, writes outputs atomically under
// config.out_dir, and drops manifest.json next to them.
RunManifest run_experiment(const ExperimentConfig& config);

struct OverlayResult {
    std::string verdict;  // satisfied | within_ci | violated
    int rows = 0;
};

// Merges a variance CSV with a bound CSV on matching T grids, adding a
// bound_satisfied column (true / within_ci / false).
OverlayResult overlay(const std::string& variance_csv_path, const std::string& bound_csv_path,
                      const std::string& merged_csv_path);

// gnuplot-ready whitespace tables (one block per curve) from report files.
void plotdata(const std::vector<std::string>& report_files, std::ostream& os);

std::string format_double(double v);  // %.17g, the CSV number format

} // namespace gpz
