#include "gpz/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "gpz/chaos.hpp"
#include "gpz/covariance.hpp"
#include "gpz/errors.hpp"

namespace gpz {

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_atomic_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw numerical_error("cannot open " + tmp + " for writing");
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open CSV file: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            t.header = split_csv_line(line);
            first = false;
        } else {
            t.rows.push_back(split_csv_line(line));
        }
    }
    return t;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Mean: return "mean";
        case ExperimentKind::Variance: return "variance";
        case ExperimentKind::BoundOverlay: return "bound_overlay";
        case ExperimentKind::BernoulliSuite: return "bernoulli_suite";
        case ExperimentKind::Predictability: return "predictability";
        case ExperimentKind::Diagnostics: return "diagnostics";
    }
    return "variance";
}

ExperimentKind kind_from_string(const std::string& s) {
    if (s == "mean") return ExperimentKind::Mean;
    if (s == "variance") return ExperimentKind::Variance;
    if (s == "bound_overlay") return ExperimentKind::BoundOverlay;
    if (s == "bernoulli_suite") return ExperimentKind::BernoulliSuite;
    if (s == "predictability") return ExperimentKind::Predictability;
    if (s == "diagnostics") return ExperimentKind::Diagnostics;
    throw config_error("unknown experiment kind: " + s);
}

SpectralMeasure preset_measure(const std::string& name) {
    if (name == "degenerate_cos") return SpectralMeasure::atomic({{1.0, 1.0}});
    if (name == "two_atoms") {
        return SpectralMeasure::atomic({{1.0, 0.5}, {std::sqrt(2.0), 0.5}});
    }
    if (name == "uniform_sinc") return SpectralMeasure::uniform_density(std::sqrt(3.0));
    if (name == "gaussian") return SpectralMeasure::gaussian_density(1.0);
    if (name == "bernoulli_factorial") {
        return SpectralMeasure::cosine_product(LambdaSequence::factorial());
    }
    if (name.rfind("bernoulli_geometric(", 0) == 0 && name.back() == ')') {
        const std::string arg = name.substr(20, name.size() - 21);
        char* end = nullptr;
        const double a = std::strtod(arg.c_str(), &end);
        if (end == arg.c_str() || *end != '\0') {
            throw config_error("cannot parse geometric ratio in preset: " + name);
        }
        return SpectralMeasure::cosine_product(LambdaSequence::geometric(a));
    }
    throw config_error("unknown preset: " + name);
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        c.kind = kind_from_string(j.at("kind").get<std::string>());
        c.measure = j.at("measure");
        if (j.contains("phi")) c.phi = TestFunction::from_json(j.at("phi"));
        if (j.contains("T_list")) c.t_list = j.at("T_list").get<std::vector<double>>();
        c.n_reps = j.value("n_reps", c.n_reps);
        c.dt = j.value("dt", c.dt);
        c.method = j.value("method", c.method);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.threads = j.value("threads", c.threads);
        c.tolerance = j.value("tolerance", c.tolerance);
        c.out_dir = j.value("out_dir", c.out_dir);
        c.raw = j.value("raw", c.raw);
        c.interval_lo = j.value("interval_lo", c.interval_lo);
        c.interval_hi = j.value("interval_hi", c.interval_hi);
        if (j.contains("shifts")) c.shifts = j.at("shifts").get<std::vector<double>>();
        c.recurrence_threshold = j.value("recurrence_threshold", c.recurrence_threshold);
        c.recurrence_t_max = j.value("recurrence_t_max", c.recurrence_t_max);
        c.growth_epsilon = j.value("growth_epsilon", c.growth_epsilon);
        c.band_eps = j.value("band_eps", c.band_eps);
        c.geman_delta = j.value("geman_delta", c.geman_delta);
        c.n_freq = j.value("n_freq", c.n_freq);
        c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
        c.pad_doublings = j.value("pad_doublings", c.pad_doublings);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("malformed experiment config: ") + e.what());
    }
    for (std::size_t i = 1; i < c.t_list.size(); ++i) {
        if (!(c.t_list[i] > c.t_list[i - 1])) {
            throw config_error("config field T_list must be strictly increasing");
        }
    }
    if ((c.kind == ExperimentKind::Variance || c.kind == ExperimentKind::BoundOverlay) &&
        c.n_reps < 2) {
        throw config_error("config field n_reps must be >= 2 for variance kinds");
    }
    if (c.t_list.empty()) throw config_error("config field T_list must not be empty");
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"kind", to_string(kind)},
            {"measure", measure},
            {"phi", phi.to_json()},
            {"T_list", t_list},
            {"n_reps", n_reps},
            {"dt", dt},
            {"method", method},
            {"master_seed", master_seed},
            {"threads", threads},
            {"tolerance", tolerance},
            {"out_dir", out_dir},
            {"raw", raw},
            {"interval_lo", interval_lo},
            {"interval_hi", interval_hi},
            {"shifts", shifts},
            {"recurrence_threshold", recurrence_threshold},
            {"recurrence_t_max", recurrence_t_max},
            {"growth_epsilon", growth_epsilon},
            {"band_eps", band_eps},
            {"geman_delta", geman_delta},
            {"n_freq", n_freq},
            {"bootstrap_resamples", bootstrap_resamples},
            {"pad_doublings", pad_doublings}};
}

ResolvedMeasure resolve_measure(const ExperimentConfig& config) {
    SpectralMeasure raw_measure = [&] {
        if (config.measure.is_object() && config.measure.contains("preset")) {
            return preset_measure(config.measure.at("preset").get<std::string>());
        }
        return measure_from_json(config.measure);
    }();
    std::string id = "inline-" + hex64(fnv1a(config.measure.dump())).substr(8);
    if (config.measure.is_object() && config.measure.contains("preset")) {
        id = config.measure.at("preset").get<std::string>();
    }

    std::optional<LambdaSequence> lambda;
    if (const auto* cp = raw_measure.get_if<CosineProductMeasure>()) {
        lambda = cp->lambda;
    }
    if (config.raw) {
        return {std::move(raw_measure), std::move(lambda), std::move(id)};
    }
    auto [normalized, rec] = normalize(raw_measure);
    (void)rec;
    return {std::move(normalized), std::move(lambda), std::move(id)};
}

SimMethod pick_method(const std::string& requested, const SpectralMeasure& mu) {
    if (requested != "auto") return method_from_string(requested);
    if (try_flatten_atoms(mu)) return SimMethod::AtomicExact;
    if (mu.get_if<DensityMeasure>()) return SimMethod::Circulant;
    return SimMethod::SpectralMc;
}

nlohmann::json RunManifest::to_json() const {
    return {{"config_hash", config_hash},
            {"tool_version", tool_version},
            {"wall_clock_seconds", wall_clock_seconds},
            {"stage_seeds", stage_seeds},
            {"outputs", outputs}};
}

namespace {

struct RunContext {
    const ExperimentConfig& config;
    ResolvedMeasure resolved;
    ExperimentOptions opts;
    SimMethod method;
    std::vector<std::pair<std::string, std::string>> files;  // name -> content

    void emit(const std::string& name, const std::string& content) {
        files.emplace_back(name, content);
    }
};

void run_mean(RunContext& ctx) {
    const CovarianceKernel kernel(ctx.resolved.measure);
    const double intensity =
        std::sqrt(-kernel(0.0, 2) / kernel(0.0, 0)) / kPi;  // zeros per unit length
    const double phi_integral = ctx.config.phi.integral();
    std::ostringstream os;
    os << "T,n_reps,mean_count,se_mean,kac_rice,method,seed\n";
    for (double t : ctx.config.t_list) {
        const auto counts =
            replicate_statistics(ctx.resolved.measure, ctx.config.phi, t, ctx.config.n_reps,
                                 ctx.method, ctx.config.master_seed, ctx.opts);
        double mean = 0.0;
        for (double c : counts) mean += c;
        mean /= static_cast<double>(counts.size());
        double var = 0.0;
        for (double c : counts) var += (c - mean) * (c - mean);
        var = counts.size() > 1 ? var / (static_cast<double>(counts.size()) - 1.0) : 0.0;
        const double se = std::sqrt(var / static_cast<double>(counts.size()));
        const double kr = intensity * t * phi_integral;
        os << format_double(t) << ',' << ctx.config.n_reps << ',' << format_double(mean) << ','
           << format_double(se) << ',' << format_double(kr) << ',' << to_string(ctx.method) << ','
           << ctx.config.master_seed << "\n";
    }
    ctx.emit("mean.csv", os.str());
}

void run_variance(RunContext& ctx) {
    VarianceReport rep =
        variance_experiment(ctx.resolved.measure, ctx.config.phi, ctx.config.t_list,
                            ctx.config.n_reps, ctx.method, ctx.config.master_seed, ctx.opts);
    rep.measure_id = ctx.resolved.id;
    std::ostringstream os;
    rep.write_csv(os);
    ctx.emit("variance.csv", os.str());
}

void run_bounds(RunContext& ctx) {
    const CovarianceKernel kernel(ctx.resolved.measure);
    const PhiConstants pc = phi_constants(ctx.config.phi);

    std::ostringstream chaos_csv, band_csv, lin_csv;
    chaos_csv << "T,bound_value,constant_used,measure_id\n";
    band_csv << "T,bound_value,constant_used,measure_id\n";
    lin_csv << "T,bound_value,constant_used,measure_id\n";

    std::optional<CovarianceKernel> kernel_eps;
    try {
        kernel_eps.emplace(offband_restriction(ctx.resolved.measure, ctx.config.band_eps));
    } catch (const config_error&) {
        // measure concentrated near +-1 (degenerate): no linear bound available
    }

    for (double t : ctx.config.t_list) {
        const double chaos2 =
            chaos2_variance_time(kernel, ctx.config.phi.scaled(t), ctx.config.tolerance);
        chaos_csv << format_double(t) << ',' << format_double(chaos2) << ",,"
                  << ctx.resolved.id << "\n";
        const double vb = bound_var_phi_mu(ctx.resolved.measure, t, pc.c_phi);
        band_csv << format_double(t) << ',' << format_double(vb) << ','
                 << format_double(pc.c_phi) << ',' << ctx.resolved.id << "\n";
        if (kernel_eps) {
            const double lb = bound_lin(*kernel_eps, t, pc.c_phi_prime);
            lin_csv << format_double(t) << ',' << format_double(lb) << ','
                    << format_double(pc.c_phi_prime) << ',' << ctx.resolved.id << "\n";
        }
    }
    ctx.emit("bound_chaos2.csv", chaos_csv.str());
    ctx.emit("bound_varphimu.csv", band_csv.str());
    if (kernel_eps) ctx.emit("bound_lin.csv", lin_csv.str());
}

void run_bernoulli_suite(RunContext& ctx) {
    if (!ctx.resolved.lambda) {
        throw config_error("bernoulli_suite needs a cosine-product measure");
    }
    const LambdaSequence& lam = *ctx.resolved.lambda;
    nlohmann::json out;
    out["sequence"] = lam.describe();

    const CantorVerdict cv = cantor_criterion(lam, 32);
    out["cantor"] = cv.status == CantorVerdict::Status::Holds
                        ? "holds"
                        : (cv.status == CantorVerdict::Status::Fails
                               ? "fails_at_" + std::to_string(cv.fail_index)
                               : "undetermined");

    nlohmann::json recurrence = nlohmann::json::array();
    if (lam.kind() == LambdaSequence::Kind::Factorial) {
        for (int n = 4; n <= 12; ++n) {
            const auto r = factorial_recurrence(n);
            recurrence.push_back({{"n", n},
                                  {"signed_value", r.signed_value},
                                  {"lower_bound", r.lower_bound},
                                  {"prefix_sign", r.prefix_sign},
                                  {"alternating_sign", r.alternating_sign}});
        }
    }
    out["recurrence"] = recurrence;

    nlohmann::json balls = nlohmann::json::array();
    for (double t : ctx.config.t_list) {
        try {
            const auto sb = small_ball(lam, t);
            nlohmann::json row = {{"T", t},
                                  {"N_T", sb.n_t},
                                  {"bound", sb.bound},
                                  {"truncated", sb.truncated}};
            if (sb.exact_prob) row["exact_prob"] = *sb.exact_prob;
            balls.push_back(row);
        } catch (const config_error&) {
            balls.push_back({{"T", t}, {"error", "T too small for N_T >= 1"}});
        }
    }
    out["small_ball"] = balls;

    const auto cert =
        quadratic_growth_certificate(lam, ctx.config.t_list, ctx.config.growth_epsilon);
    nlohmann::json cert_rows = nlohmann::json::array();
    for (const auto& row : cert.rows) {
        cert_rows.push_back({{"T", row.t_scale}, {"N_T", row.n_t}, {"L", row.value}});
    }
    out["growth_certificate"] = {{"epsilon", cert.epsilon},
                                 {"rows", cert_rows},
                                 {"strictly_increasing", cert.strictly_increasing}};

    const CovarianceKernel kernel(SpectralMeasure::cosine_product(lam), 1e-9);
    nlohmann::json cesaro = nlohmann::json::array();
    for (double t : ctx.config.t_list) {
        const double capped = std::min(t, 2e4);
        cesaro.push_back({{"T", capped}, {"mean", cesaro_mean(kernel, capped, 1)}});
    }
    out["cesaro"] = cesaro;

    ctx.emit("bernoulli.json", out.dump(2) + "\n");

    // growth certificate as plot-ready CSV
    std::ostringstream cert_csv;
    cert_csv << "T,N_T,L\n";
    for (const auto& row : cert.rows) {
        cert_csv << format_double(row.t_scale) << ',' << row.n_t << ','
                 << format_double(row.value) << "\n";
    }
    ctx.emit("growth_certificate.csv", cert_csv.str());
}

void run_predictability(RunContext& ctx) {
    std::vector<double> shifts = ctx.config.shifts;
    if (shifts.empty()) {
        const CovarianceKernel kernel(ctx.resolved.measure);
        const auto peaks = recurrence_times(kernel, ctx.config.recurrence_threshold,
                                            ctx.config.recurrence_t_max);
        for (const auto& [t, v] : peaks) {
            shifts.push_back(t);
            if (shifts.size() >= 16) break;
        }
        if (shifts.empty()) {
            throw config_error("no recurrence times found below the threshold; pass shifts");
        }
    }
    const auto rep = predictability_experiment(ctx.resolved.measure, ctx.config.interval_lo,
                                               ctx.config.interval_hi, shifts,
                                               ctx.config.n_reps, ctx.config.master_seed,
                                               ctx.opts);
    ctx.emit("predictability.json", rep.to_json().dump(2) + "\n");
    std::ostringstream csv;
    csv << "shift,agreement\n";
    for (const auto& row : rep.rows) {
        csv << format_double(row.shift) << ',' << format_double(row.agreement) << "\n";
    }
    ctx.emit("predictability.csv", csv.str());
}

void run_diagnostics(RunContext& ctx) {
    const CovarianceKernel kernel(ctx.resolved.measure, ctx.config.tolerance);
    const auto geman = geman_check(kernel, ctx.config.geman_delta);
    std::vector<double> grid = ctx.config.t_list;
    if (grid.size() < 2) grid = {25.0, 100.0, 400.0, 1600.0};
    const auto l2_c = l2_condition_scan(kernel, L2Which::C, grid);
    const auto l2_cpp = l2_condition_scan(kernel, L2Which::Cpp, grid);
    const auto l2_sum = l2_condition_scan(kernel, L2Which::CPlusCpp, grid);

    auto emit_report = [&ctx](const std::string& name, const DiagnosticReport& rep) {
        std::ostringstream os;
        rep.write_csv(os);
        ctx.emit(name, os.str());
    };
    emit_report("geman.csv", geman);
    emit_report("l2_C.csv", l2_c);
    emit_report("l2_Cpp.csv", l2_cpp);
    emit_report("l2_CplusCpp.csv", l2_sum);

    nlohmann::json out;
    out["geman"] = geman.to_json();
    out["l2_C"] = l2_c.to_json();
    out["l2_Cpp"] = l2_cpp.to_json();
    out["l2_CplusCpp"] = l2_sum.to_json();
    out["cesaro_power1"] = cesaro_mean(kernel, grid.back(), 1);
    out["cesaro_power2"] = cesaro_mean(kernel, grid.back(), 2);
    ctx.emit("diagnostics.json", out.dump(2) + "\n");
}

} // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();

    RunContext ctx{config, resolve_measure(config), {}, SimMethod::AtomicExact, {}};
    ctx.opts.dt = config.dt;
    ctx.opts.n_freq = config.n_freq;
    ctx.opts.threads = config.threads > 0
                           ? config.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    ctx.opts.bootstrap_resamples = config.bootstrap_resamples;
    ctx.opts.pad_doublings = config.pad_doublings;
    ctx.method = pick_method(config.method, ctx.resolved.measure);

    switch (config.kind) {
        case ExperimentKind::Mean: run_mean(ctx); break;
        case ExperimentKind::Variance: run_variance(ctx); break;
        case ExperimentKind::BoundOverlay: run_bounds(ctx); break;
        case ExperimentKind::BernoulliSuite: run_bernoulli_suite(ctx); break;
        case ExperimentKind::Predictability: run_predictability(ctx); break;
        case ExperimentKind::Diagnostics: run_diagnostics(ctx); break;
    }

    std::filesystem::create_directories(config.out_dir);
    RunManifest manifest;
    manifest.config_hash = hex64(fnv1a(config.to_json().dump()));
    manifest.tool_version = kToolVersion;
    manifest.stage_seeds = {{"master_seed", config.master_seed},
                            {"replication_stream", "splitmix64(master_seed, r)"},
                            {"bootstrap_stream", "splitmix64(master_seed ^ b007..., T index)"}};
    for (const auto& [name, content] : ctx.files) {
        const std::string path = config.out_dir + "/" + name;
        write_atomic_file(path, content);
        manifest.outputs.push_back(path);
    }
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_atomic_file(config.out_dir + "/manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

OverlayResult overlay(const std::string& variance_csv_path, const std::string& bound_csv_path,
                      const std::string& merged_csv_path) {
    const CsvTable var_t = read_csv(variance_csv_path);
    const CsvTable bound_t = read_csv(bound_csv_path);
    if (bound_t.rows.empty()) throw config_error("bound CSV is empty: " + bound_csv_path);
    if (var_t.rows.empty()) throw config_error("variance CSV is empty: " + variance_csv_path);
    if (var_t.rows.size() != bound_t.rows.size()) {
        throw config_error("variance and bound CSVs have mismatched T grids");
    }
    const int vt = var_t.column("T");
    const int vv = var_t.column("var_count");
    const int vhi = var_t.column("ci_high");
    const int bt = bound_t.column("T");
    const int bv = bound_t.column("bound_value");
    if (vt < 0 || vv < 0 || vhi < 0 || bt < 0 || bv < 0) {
        throw config_error("unrecognized CSV schema for overlay");
    }

    std::ostringstream os;
    for (const auto& h : var_t.header) os << h << ',';
    os << "bound_value,bound_satisfied\n";
    bool any_false = false, any_ci = false;
    for (std::size_t i = 0; i < var_t.rows.size(); ++i) {
        const double t_var = std::strtod(var_t.rows[i][vt].c_str(), nullptr);
        const double t_bound = std::strtod(bound_t.rows[i][bt].c_str(), nullptr);
        if (t_var != t_bound) {
            throw config_error("variance and bound CSVs have mismatched T grids");
        }
        const double var = std::strtod(var_t.rows[i][vv].c_str(), nullptr);
        const double ci_high = std::strtod(var_t.rows[i][vhi].c_str(), nullptr);
        const double bound = std::strtod(bound_t.rows[i][bv].c_str(), nullptr);
        std::string status = "true";
        if (!(var >= bound)) {
            if (ci_high >= bound) {
                status = "within_ci";
                any_ci = true;
            } else {
                status = "false";
                any_false = true;
            }
        }
        for (const auto& cell : var_t.rows[i]) os << cell << ',';
        os << format_double(bound) << ',' << status << "\n";
    }
    OverlayResult res;
    res.rows = static_cast<int>(var_t.rows.size());
    res.verdict = any_false ? "violated" : (any_ci ? "within_ci" : "satisfied");
    os << "# overall," << res.verdict << "\n";
    write_atomic_file(merged_csv_path, os.str());
    return res;
}

void plotdata(const std::vector<std::string>& report_files, std::ostream& os) {
    for (const std::string& path : report_files) {
        if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
            std::ifstream is(path);
            if (!is) throw config_error("cannot open report: " + path);
            nlohmann::json j;
            try {
                is >> j;
            } catch (const nlohmann::json::exception& e) {
                throw config_error("malformed JSON report " + path + ": " + e.what());
            }
            if (j.contains("growth_certificate")) {
                os << "# file: " << path << " curve: growth_L\n";
                for (const auto& row : j["growth_certificate"]["rows"]) {
                    os << format_double(row["T"].get<double>()) << ' '
                       << format_double(row["L"].get<double>()) << "\n";
                }
                os << "\n";
            } else if (j.contains("rows") && j.contains("interval")) {
                os << "# file: " << path << " curve: agreement\n";
                for (const auto& row : j["rows"]) {
                    os << format_double(row["shift"].get<double>()) << ' '
                       << format_double(row["agreement"].get<double>()) << "\n";
                }
                os << "\n";
            } else {
                throw config_error("unrecognized JSON report schema: " + path);
            }
            continue;
        }

        const CsvTable t = read_csv(path);
        const int col_t = t.column("T");
        if (col_t >= 0 && t.column("var_over_T") >= 0) {
            const int v = t.column("var_count");
            const int v1 = t.column("var_over_T");
            const int v2 = t.column("var_over_T2");
            const char* labels[3] = {"var", "var_over_T", "var_over_T2"};
            const int cols[3] = {v, v1, v2};
            for (int c = 0; c < 3; ++c) {
                os << "# file: " << path << " curve: " << labels[c] << "\n";
                for (const auto& row : t.rows) os << row[col_t] << ' ' << row[cols[c]] << "\n";
                os << "\n";
            }
        } else if (col_t >= 0 && t.column("bound_value") >= 0) {
            os << "# file: " << path << " curve: bound_over_T\n";
            for (const auto& row : t.rows) {
                const double tt = std::strtod(row[col_t].c_str(), nullptr);
                const double b = std::strtod(row[t.column("bound_value")].c_str(), nullptr);
                os << row[col_t] << ' ' << format_double(b / tt) << "\n";
            }
            os << "\n";
        } else if (col_t >= 0 && t.column("mean_count") >= 0) {
            os << "# file: " << path << " curve: mean_count\n";
            for (const auto& row : t.rows) {
                os << row[col_t] << ' ' << row[t.column("mean_count")] << "\n";
            }
            os << "\n";
        } else if (t.column("parameter") >= 0) {
            os << "# file: " << path << " curve: " << "estimate\n";
            for (const auto& row : t.rows) {
                os << row[t.column("parameter")] << ' ' << row[t.column("estimate")] << "\n";
            }
            os << "\n";
        } else if (t.column("L") >= 0) {
            os << "# file: " << path << " curve: growth_L\n";
            for (const auto& row : t.rows) {
                os << row[0] << ' ' << row[t.column("L")] << "\n";
            }
            os << "\n";
        } else {
            throw config_error("unrecognized CSV report schema: " + path);
        }
    }
}

} // namespace gpz
