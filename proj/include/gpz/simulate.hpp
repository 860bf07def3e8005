#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gpz/covariance.hpp"
#include "gpz/rng.hpp"
#include "gpz/spectral.hpp"
#include "gpz/test_function.hpp"

namespace gpz {

enum class SimMethod { AtomicExact, SpectralMc, Circulant };
std::string to_string(SimMethod m);
SimMethod method_from_string(const std::string& s);

// One realization on a uniform grid. Methods backed by a trigonometric
// superposition carry an off-grid evaluator; grid-only methods (circulant)
// leave it empty and zero refinement works on the linear interpolant.
struct PathSample {
    double t0 = 0.0;
    double dt = 0.0;
    Eigen::ArrayXd values;
    std::uint64_t seed = 0;
    SimMethod method = SimMethod::AtomicExact;
    nlohmann::json method_params;
    std::function<double(double)> evaluator;

    double time_at(Eigen::Index i) const { return t0 + static_cast<double>(i) * dt; }
    double window_lo() const { return t0; }
    double window_hi() const { return time_at(values.size() - 1); }
};

struct Zero {
    double location = 0.0;
    double bracket_width = 0.0;
};

struct ZeroSet {
    std::vector<Zero> zeros;              // strictly increasing locations
    std::vector<double> tangency_flags;   // grid times that grazed zero without crossing
    double window_lo = 0.0;
    double window_hi = 0.0;

    bool occupied(double lo, double hi) const;  // any zero in [lo, hi]
};

struct LinearStatistic {
    TestFunction phi;
    double t_scale = 1.0;
};

// Grid resolution rule: min(0.05, (2 pi / x_max) / 16) for spectral bound x_max.
double default_dt(const SpectralMeasure& mu);

// Exact trigonometric sampling for purely atomic measures:
// X(t) = sum_i sqrt(m_i) (alpha_i cos(f_i t) + beta_i sin(f_i t)).
PathSample sample_atomic(const SpectralMeasure& mu, double t0, double dt, int n, Rng& rng);

// Randomized spectral superposition X_N(t) = sqrt(C(0)/N) sum (a cos + b sin)
// with frequencies drawn from mu / mu(R). Single-time marginals are exact;
// the joint law converges as N grows (N reported in method_params).
PathSample sample_spectral_mc(const SpectralMeasure& mu, int n_freq, double t0, double dt, int n,
                              Rng& rng);

// Stationary grid sampling through a nonnegative circulant embedding.
// Densities get exact eigenvalues from the folded spectral density; other
// variants embed the truncated covariance row and clip, failing above
// `clip_ceiling`. Build once per grid, sample per replication.
class CirculantEmbedding {
public:
    CirculantEmbedding(const CovarianceKernel& kernel, double dt, int n, int pad_doublings = 1,
                       double clip_ceiling = 1e-6);

    PathSample sample(double t0, Rng& rng) const;
    double clipped_mass_fraction() const { return clipped_fraction_; }
    int embedding_size() const { return m_; }

private:
    double dt_;
    int n_;
    int m_ = 0;
    double c0_ = 1.0;
    Eigen::ArrayXd sqrt_lambda_;
    double clipped_fraction_ = 0.0;
    nlohmann::json params_;
};

PathSample sample_circulant(const CovarianceKernel& kernel, double t0, double dt, int n, Rng& rng,
                            int pad_doublings = 1, double clip_ceiling = 1e-6);

// Sign changes between consecutive grid values, bisected to bracket_width <=
// refine_tol on the path evaluator (closed-form interpolant root when the
// method is grid-only). Grid points with |value| < tangent_tol and no adjacent
// sign change are flagged, never counted.
ZeroSet count_zeros(const PathSample& path, double refine_tol, double tangent_tol);

// sum_z phi(z / T). The zero window must contain supp(phi_T).
double linear_statistic(const ZeroSet& zeros, const LinearStatistic& stat);

struct VarianceRow {
    double t_scale = 0.0;
    int n_reps = 0;
    double mean_count = 0.0;
    std::optional<double> var_count;  // missing when n_reps < 2
    double ci_low = 0.0;
    double ci_high = 0.0;
    double var_over_t = 0.0;
    double var_over_t2 = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0;
};

struct VarianceReport {
    std::vector<VarianceRow> rows;
    std::uint64_t master_seed = 0;
    SimMethod method = SimMethod::AtomicExact;
    std::string measure_id;

    void write_csv(std::ostream& os) const;
};

struct ExperimentOptions {
    double dt = 0.0;          // 0: default_dt rule
    int n_freq = 256;         // spectral MC superposition size
    int threads = 1;
    int bootstrap_resamples = 400;
    double refine_tol = 0.0;  // 0: min(1e-6, dt/8)
    double tangent_tol = 0.0; // 0: 1e-6 sqrt(C(0))
    int pad_doublings = 1;
    double clip_ceiling = 1e-6;
};

// Monte Carlo of N_X(phi_T) across T_list; replication r draws its stream
// from (master_seed, r), so results are bitwise reproducible for any thread
// count. Bootstrap percentile CI on the variance (seeded, 400 resamples).
VarianceReport variance_experiment(const SpectralMeasure& mu, const TestFunction& phi,
                                   const std::vector<double>& t_list, int n_reps,
                                   SimMethod method, std::uint64_t master_seed,
                                   const ExperimentOptions& opts = {});

// Per-replication linear statistics for a single T (building block of
// variance_experiment, exposed for mean experiments and tests).
std::vector<double> replicate_statistics(const SpectralMeasure& mu, const TestFunction& phi,
                                         double t_scale, int n_reps, SimMethod method,
                                         std::uint64_t master_seed,
                                         const ExperimentOptions& opts = {});

struct PredictabilityReport {
    struct Row {
        double shift = 0.0;
        double agreement = 0.0;
    };
    std::vector<Row> rows;
    int n_reps = 0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;

    nlohmann::json to_json() const;
};

// Compares the occupancy indicator of Z in [a,b] against Z in [a,b] - shift
// for each shift, over exact atomic replications.
PredictabilityReport predictability_experiment(const SpectralMeasure& mu, double interval_lo,
                                               double interval_hi,
                                               const std::vector<double>& shifts, int n_reps,
                                               std::uint64_t seed,
                                               const ExperimentOptions& opts = {});

// Little-endian doubles plus a JSON sidecar with the grid metadata.
void dump_path(const PathSample& path, const std::string& basename);

// Fixed-slot parallel map: job i writes only slot i, so reductions in index
// order are deterministic for any worker count.
void parallel_for(int n_jobs, int threads, const std::function<void(int)>& fn);

} // namespace gpz
