#include "gpz/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include <unsupported/Eigen/FFT>

#include "gpz/errors.hpp"

namespace gpz {

namespace {

constexpr double kPi = std::numbers::pi;

struct Harmonic {
    double freq;
    double amp;  // sqrt of carried mass
};

// Shared backbone of the trigonometric samplers.
PathSample superposition_path(std::vector<Harmonic> parts, std::vector<double> alphas,
                              std::vector<double> betas, double t0, double dt, int n) {
    PathSample p;
    p.t0 = t0;
    p.dt = dt;
    p.values.resize(n);
    auto eval = [parts = std::move(parts), alphas = std::move(alphas),
                 betas = std::move(betas)](double t) {
        double x = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            x += parts[i].amp *
                 (alphas[i] * std::cos(parts[i].freq * t) + betas[i] * std::sin(parts[i].freq * t));
        }
        return x;
    };
    for (int i = 0; i < n; ++i) p.values[i] = eval(t0 + i * dt);
    p.evaluator = std::move(eval);
    return p;
}

// One draw from mu / mu(R). Draw order is fixed per variant for determinism.
double sample_frequency(const SpectralMeasure& mu, Rng& rng) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        double total = 0.0;
        for (const Atom& at : a->atoms) total += at.mass;
        double u = rng.next_uniform() * total;
        for (const Atom& at : a->atoms) {
            u -= at.mass;
            if (u <= 0.0) {
                if (at.frequency == 0.0) return 0.0;
                return rng.next_uniform() < 0.5 ? -at.frequency : at.frequency;
            }
        }
        return a->atoms.back().frequency;
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        switch (d->form) {
            case DensityMeasure::Form::Uniform:
                return d->param * (2.0 * rng.next_uniform() - 1.0);
            case DensityMeasure::Form::Gaussian:
                return d->param * rng.next_normal();
            case DensityMeasure::Form::Tabulated: {
                // Inverse CDF on the half-line table, then a random sign.
                const auto& g = d->grid;
                const auto& v = d->values;
                std::vector<double> cum(g.size(), 0.0);
                for (std::size_t i = 1; i < g.size(); ++i) {
                    cum[i] = cum[i - 1] + 0.5 * (v[i - 1] + v[i]) * (g[i] - g[i - 1]);
                }
                const double u = rng.next_uniform() * cum.back();
                const double sgn = rng.next_uniform() < 0.5 ? -1.0 : 1.0;
                auto it = std::lower_bound(cum.begin(), cum.end(), u);
                std::size_t hi = std::max<std::size_t>(1, static_cast<std::size_t>(it - cum.begin()));
                const double h = g[hi] - g[hi - 1];
                const double rem = u - cum[hi - 1];
                const double c1 = (v[hi] - v[hi - 1]) / h;
                // Solve v0 s + c1 s^2/2 = rem on s in [0, h].
                double s;
                if (std::abs(c1) < 1e-300) {
                    s = v[hi - 1] > 0.0 ? rem / v[hi - 1] : 0.5 * h;
                } else {
                    const double disc = v[hi - 1] * v[hi - 1] + 2.0 * c1 * rem;
                    s = (-v[hi - 1] + std::sqrt(std::max(0.0, disc))) / c1;
                }
                s = std::clamp(s, 0.0, h);
                return sgn * (g[hi - 1] + s);
            }
        }
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        // Truncated Y = sum lambda_k eps_k; relative L2 tail below 1e-8 when
        // reachable, capped at 4096 terms.
        const LambdaSequence& lam = c->lambda;
        const double target = 1e-16 * lam.sum_l2sq();
        int K = 1;
        while (lam.tail_power(K, 2) > target && K < 4096) ++K;
        double y = 0.0;
        for (int k = 1; k <= K; ++k) {
            y += (rng.next_uniform() < 0.5 ? -1.0 : 1.0) * lam.lambda(k);
        }
        return y;
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    double total = 0.0;
    for (const WeightedComponent& wc : mix.components) total += wc.weight * total_mass(wc.measure);
    double u = rng.next_uniform() * total;
    for (const WeightedComponent& wc : mix.components) {
        u -= wc.weight * total_mass(wc.measure);
        if (u <= 0.0) return sample_frequency(wc.measure, rng);
    }
    return sample_frequency(mix.components.back().measure, rng);
}

} // namespace

std::string to_string(SimMethod m) {
    switch (m) {
        case SimMethod::AtomicExact: return "atomic_exact";
        case SimMethod::SpectralMc: return "spectral_mc";
        case SimMethod::Circulant: return "circulant";
    }
    return "atomic_exact";
}

SimMethod method_from_string(const std::string& s) {
    if (s == "atomic_exact") return SimMethod::AtomicExact;
    if (s == "spectral_mc") return SimMethod::SpectralMc;
    if (s == "circulant") return SimMethod::Circulant;
    throw config_error("unknown simulation method: " + s);
}

double default_dt(const SpectralMeasure& mu) {
    const double x_max = support_bound(mu);
    if (!(x_max > 1e-9) || !std::isfinite(x_max)) return 0.05;
    return std::min(0.05, (2.0 * kPi / x_max) / 16.0);
}

bool ZeroSet::occupied(double lo, double hi) const {
    auto it = std::lower_bound(zeros.begin(), zeros.end(), lo,
                               [](const Zero& z, double v) { return z.location < v; });
    return it != zeros.end() && it->location <= hi;
}

PathSample sample_atomic(const SpectralMeasure& mu, double t0, double dt, int n, Rng& rng) {
    const auto atoms = try_flatten_atoms(mu);
    if (!atoms) throw config_error("sample_atomic requires a purely atomic measure");
    if (n < 1 || !(dt > 0.0)) throw config_error("sample_atomic needs n >= 1 and dt > 0");

    std::vector<Harmonic> parts;
    std::vector<double> alphas, betas;
    for (const Atom& at : *atoms) {
        parts.push_back({at.frequency, std::sqrt(at.mass)});
        alphas.push_back(rng.next_normal());
        betas.push_back(rng.next_normal());
    }
    PathSample p = superposition_path(std::move(parts), std::move(alphas), std::move(betas), t0,
                                      dt, n);
    p.method = SimMethod::AtomicExact;
    p.method_params = {{"n_atoms", atoms->size()}};
    return p;
}

PathSample sample_spectral_mc(const SpectralMeasure& mu, int n_freq, double t0, double dt, int n,
                              Rng& rng) {
    if (n_freq < 1) throw config_error("sample_spectral_mc needs n_freq >= 1");
    if (n < 1 || !(dt > 0.0)) throw config_error("sample_spectral_mc needs n >= 1 and dt > 0");
    const double c0 = total_mass(mu);
    const double amp = std::sqrt(c0 / n_freq);

    std::vector<Harmonic> parts;
    std::vector<double> alphas, betas;
    parts.reserve(n_freq);
    for (int k = 0; k < n_freq; ++k) {
        parts.push_back({sample_frequency(mu, rng), amp});
        alphas.push_back(rng.next_normal());
        betas.push_back(rng.next_normal());
    }
    PathSample p = superposition_path(std::move(parts), std::move(alphas), std::move(betas), t0,
                                      dt, n);
    p.method = SimMethod::SpectralMc;
    p.method_params = {{"n_freq", n_freq}};
    return p;
}

CirculantEmbedding::CirculantEmbedding(const CovarianceKernel& kernel, double dt, int n,
                                       int pad_doublings, double clip_ceiling)
    : dt_(dt), n_(n) {
    if (n < 1 || !(dt > 0.0)) throw config_error("circulant embedding needs n >= 1 and dt > 0");
    c0_ = kernel(0.0, 0);
    if (n == 1) {
        m_ = 1;
        params_ = {{"embedding_size", 1}, {"clipped_mass", 0.0}};
        return;
    }

    int m = 16;
    while (m < 2 * (n - 1)) m *= 2;
    for (int i = 0; i < pad_doublings; ++i) m *= 2;
    m_ = m;

    Eigen::ArrayXd lambda(m);
    const auto* dens = kernel.source().get_if<DensityMeasure>();
    if (dens != nullptr) {
        // Exact eigenvalues: the folded spectral density
        // lambda_j = (2 pi / dt) sum_m g((theta_j + 2 pi m) / dt), theta_j = 2 pi j / m_.
        const double x_max = support_bound(kernel.source());
        const int fold = static_cast<int>(std::ceil(x_max * dt / (2.0 * kPi))) + 1;
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * kPi * j / m;
            double s = 0.0;
            for (int f = -fold; f <= fold; ++f) {
                s += density_value(*dens, (theta + 2.0 * kPi * f) / dt);
            }
            lambda[j] = (2.0 * kPi / dt) * s;
        }
        clipped_fraction_ = 0.0;
        params_ = {{"embedding_size", m},
                   {"clipped_mass", 0.0},
                   {"eigenvalues", "folded_spectral_density"},
                   {"wrap_lag", 0.5 * m * dt}};
    } else {
        // Truncated covariance row; exact when the grid resolves the atoms.
        Eigen::VectorXd row(m);
        for (int j = 0; j < m; ++j) {
            const int lag = std::min(j, m - j);
            row[j] = kernel(lag * dt, 0);
        }
        Eigen::FFT<double> fft;
        Eigen::VectorXcd spec;
        fft.fwd(spec, row);
        double neg = 0.0, tot = 0.0;
        for (int j = 0; j < m; ++j) {
            lambda[j] = spec[j].real();
            tot += std::abs(lambda[j]);
            if (lambda[j] < 0.0) {
                neg += -lambda[j];
                lambda[j] = 0.0;
            }
        }
        clipped_fraction_ = tot > 0.0 ? neg / tot : 0.0;
        if (clipped_fraction_ > clip_ceiling) {
            throw numerical_error(
                "circulant embedding clipped mass fraction " + std::to_string(clipped_fraction_) +
                " exceeds ceiling; use a smaller dt, larger padding, or an exact sampler");
        }
        params_ = {{"embedding_size", m},
                   {"clipped_mass", clipped_fraction_},
                   {"eigenvalues", "covariance_row"}};
    }
    sqrt_lambda_ = (lambda / static_cast<double>(m_)).sqrt();
}

PathSample CirculantEmbedding::sample(double t0, Rng& rng) const {
    PathSample p;
    p.t0 = t0;
    p.dt = dt_;
    p.method = SimMethod::Circulant;
    p.method_params = params_;
    if (n_ == 1) {
        p.values.resize(1);
        p.values[0] = std::sqrt(c0_) * rng.next_normal();
        return p;
    }
    Eigen::VectorXcd e(m_);
    for (int j = 0; j < m_; ++j) {
        const double u = rng.next_normal();
        const double v = rng.next_normal();
        e[j] = std::complex<double>(u * sqrt_lambda_[j], v * sqrt_lambda_[j]);
    }
    Eigen::FFT<double> fft;
    Eigen::VectorXcd x;
    fft.fwd(x, e);
    p.values.resize(n_);
    for (int i = 0; i < n_; ++i) p.values[i] = x[i].real();
    return p;
}

PathSample sample_circulant(const CovarianceKernel& kernel, double t0, double dt, int n, Rng& rng,
                            int pad_doublings, double clip_ceiling) {
    const CirculantEmbedding emb(kernel, dt, n, pad_doublings, clip_ceiling);
    return emb.sample(t0, rng);
}

ZeroSet count_zeros(const PathSample& path, double refine_tol, double tangent_tol) {
    if (!(refine_tol > 0.0) || refine_tol >= path.dt) {
        throw config_error("count_zeros needs 0 < refine_tol < dt");
    }
    ZeroSet zs;
    zs.window_lo = path.window_lo();
    zs.window_hi = path.window_hi();
    const Eigen::Index n = path.values.size();

    // Sign of the nearest nonzero value on each side of an exact grid zero:
    // opposite signs make it a crossing, equal signs a tangency.
    auto exact_zero_crosses = [&](Eigen::Index i) {
        int left = 0, right = 0;
        for (Eigen::Index j = i - 1; j >= 0 && left == 0; --j) {
            if (path.values[j] != 0.0) left = path.values[j] > 0.0 ? 1 : -1;
        }
        for (Eigen::Index j = i + 1; j < n && right == 0; ++j) {
            if (path.values[j] != 0.0) right = path.values[j] > 0.0 ? 1 : -1;
        }
        if (left == 0 || right == 0) return true;  // window edge: count it
        return left * right < 0;
    };

    std::vector<bool> crossing_cell(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 0)),
                                    false);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double va = path.values[i];
        const double vb = path.values[i + 1];
        if (va == 0.0) {
            if (exact_zero_crosses(i)) {
                zs.zeros.push_back({path.time_at(i), 0.0});
            } else {
                zs.tangency_flags.push_back(path.time_at(i));
            }
            continue;
        }
        if (va * vb < 0.0) {
            crossing_cell[static_cast<std::size_t>(i)] = true;
            double a = path.time_at(i), b = path.time_at(i + 1);
            if (path.evaluator) {
                double fa = va;
                while (b - a > refine_tol) {
                    const double mid = 0.5 * (a + b);
                    const double fm = path.evaluator(mid);
                    if (fm == 0.0) {
                        a = b = mid;
                        break;
                    }
                    if (fa * fm < 0.0) {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                zs.zeros.push_back({0.5 * (a + b), b - a});
            } else {
                // Root of the linear interpolant, exact for the grid model.
                zs.zeros.push_back({a + path.dt * va / (va - vb), 0.0});
            }
        }
    }
    if (n > 0 && path.values[n - 1] == 0.0) {
        if (exact_zero_crosses(n - 1)) {
            zs.zeros.push_back({path.time_at(n - 1), 0.0});
        } else {
            zs.tangency_flags.push_back(path.time_at(n - 1));
        }
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = path.values[i];
        if (v != 0.0 && std::abs(v) < tangent_tol) {
            const bool left = i > 0 && crossing_cell[static_cast<std::size_t>(i - 1)];
            const bool right = i + 1 < n && crossing_cell[static_cast<std::size_t>(i)];
            if (!left && !right) zs.tangency_flags.push_back(path.time_at(i));
        }
    }
    std::sort(zs.tangency_flags.begin(), zs.tangency_flags.end());
    return zs;
}

double linear_statistic(const ZeroSet& zeros, const LinearStatistic& stat) {
    const double lo = stat.t_scale * stat.phi.support_lo();
    const double hi = stat.t_scale * stat.phi.support_hi();
    if (zeros.window_lo > lo || zeros.window_hi < hi) {
        throw config_error("zero window does not contain the scaled test-function support");
    }
    double sum = 0.0;
    for (const Zero& z : zeros.zeros) sum += stat.phi(z.location / stat.t_scale);
    return sum;
}

void parallel_for(int n_jobs, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n_jobs <= 1) {
        for (int i = 0; i < n_jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n_jobs);
    pool.reserve(static_cast<std::size_t>(workers));
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const int i = next.fetch_add(1);
                if (i >= n_jobs) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct GridSpec {
    double t0;
    double dt;
    int n;
};

GridSpec window_grid(double lo, double hi, double dt) {
    // Four-cell margin so boundary zeros are bracketed.
    const double t0 = lo - 4.0 * dt;
    const double t1 = hi + 4.0 * dt;
    const int n = static_cast<int>(std::ceil((t1 - t0) / dt)) + 1;
    return {t0, dt, n};
}

struct MethodContext {
    SimMethod method;
    std::optional<CirculantEmbedding> embedding;
    const SpectralMeasure* mu = nullptr;
    int n_freq = 256;
    GridSpec grid{0, 0, 0};

    PathSample sample(Rng& rng) const {
        switch (method) {
            case SimMethod::AtomicExact:
                return sample_atomic(*mu, grid.t0, grid.dt, grid.n, rng);
            case SimMethod::SpectralMc:
                return sample_spectral_mc(*mu, n_freq, grid.t0, grid.dt, grid.n, rng);
            case SimMethod::Circulant: {
                PathSample p = embedding->sample(grid.t0, rng);
                return p;
            }
        }
        throw config_error("unknown simulation method");
    }
};

struct VarStats {
    double mean = 0.0;
    std::optional<double> var;
    double se_mean = 0.0;
    double se_var = 0.0;
};

VarStats moments(const std::vector<double>& xs) {
    VarStats s;
    const std::size_t n = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(n);
    if (n < 2) return s;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double nn = static_cast<double>(n);
    const double var = m2 / (nn - 1.0);
    s.var = var;
    s.se_mean = std::sqrt(var / nn);
    m4 /= nn;
    const double se2 = (m4 - (nn - 3.0) / (nn - 1.0) * var * var) / nn;
    s.se_var = se2 > 0.0 ? std::sqrt(se2) : 0.0;
    return s;
}

std::pair<double, double> bootstrap_var_ci(const std::vector<double>& xs, int resamples,
                                           Rng& rng) {
    const std::size_t n = xs.size();
    if (n < 2 || resamples < 2) return {0.0, 0.0};
    std::vector<double> vars(static_cast<std::size_t>(resamples));
    for (int b = 0; b < resamples; ++b) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = xs[static_cast<std::size_t>(rng.next_u64() % n)];
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / static_cast<double>(n);
        vars[static_cast<std::size_t>(b)] =
            std::max(0.0, (sumsq - sum * mean) / (static_cast<double>(n) - 1.0));
    }
    std::sort(vars.begin(), vars.end());
    const std::size_t lo = static_cast<std::size_t>(0.025 * (resamples - 1));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(0.975 * (resamples - 1)));
    return {vars[lo], vars[std::min(hi, vars.size() - 1)]};
}

} // namespace

std::vector<double> replicate_statistics(const SpectralMeasure& mu, const TestFunction& phi,
                                         double t_scale, int n_reps, SimMethod method,
                                         std::uint64_t master_seed,
                                         const ExperimentOptions& opts) {
    if (n_reps < 1) throw config_error("experiment needs n_reps >= 1");
    const double dt = opts.dt > 0.0 ? opts.dt : default_dt(mu);
    const double lo = t_scale * phi.support_lo();
    const double hi = t_scale * phi.support_hi();
    const GridSpec grid = window_grid(lo, hi, dt);

    MethodContext ctx;
    ctx.method = method;
    ctx.mu = &mu;
    ctx.n_freq = opts.n_freq;
    ctx.grid = grid;
    CovarianceKernel kernel(mu);
    if (method == SimMethod::Circulant) {
        ctx.embedding.emplace(kernel, dt, grid.n, opts.pad_doublings, opts.clip_ceiling);
    }

    const double refine_tol = opts.refine_tol > 0.0 ? opts.refine_tol : std::min(1e-6, dt / 8.0);
    const double tangent_tol =
        opts.tangent_tol > 0.0 ? opts.tangent_tol : 1e-6 * std::sqrt(kernel(0.0, 0));
    const LinearStatistic stat{phi, t_scale};

    std::vector<double> out(static_cast<std::size_t>(n_reps));
    parallel_for(n_reps, opts.threads, [&](int r) {
        try {
            Rng rng(master_seed, static_cast<std::uint64_t>(r));
            const PathSample p = ctx.sample(rng);
            const ZeroSet zs = count_zeros(p, refine_tol, tangent_tol);
            out[static_cast<std::size_t>(r)] = linear_statistic(zs, stat);
        } catch (const std::exception& e) {
            throw numerical_error("replication " + std::to_string(r) + " failed: " + e.what());
        }
    });
    return out;
}

VarianceReport variance_experiment(const SpectralMeasure& mu, const TestFunction& phi,
                                   const std::vector<double>& t_list, int n_reps,
                                   SimMethod method, std::uint64_t master_seed,
                                   const ExperimentOptions& opts) {
    for (std::size_t i = 1; i < t_list.size(); ++i) {
        if (!(t_list[i] > t_list[i - 1])) throw config_error("T_list must be strictly increasing");
    }
    VarianceReport rep;
    rep.master_seed = master_seed;
    rep.method = method;
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
        const double t_scale = t_list[ti];
        const std::vector<double> counts =
            replicate_statistics(mu, phi, t_scale, n_reps, method, master_seed, opts);
        const VarStats st = moments(counts);
        VarianceRow row;
        row.t_scale = t_scale;
        row.n_reps = n_reps;
        row.mean_count = st.mean;
        row.var_count = st.var;
        row.se_mean = st.se_mean;
        row.se_var = st.se_var;
        if (st.var) {
            Rng boot(master_seed ^ 0xb007b007b007b007ULL, ti);
            const auto [lo, hi] = bootstrap_var_ci(counts, opts.bootstrap_resamples, boot);
            row.ci_low = lo;
            row.ci_high = hi;
            row.var_over_t = *st.var / t_scale;
            row.var_over_t2 = *st.var / (t_scale * t_scale);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

void VarianceReport::write_csv(std::ostream& os) const {
    os << "T,n_reps,mean_count,var_count,ci_low,ci_high,var_over_T,var_over_T2,method,seed\n";
    char buf[360];
    for (const VarianceRow& r : rows) {
        const double var = r.var_count.value_or(std::nan(""));
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%llu\n", r.t_scale,
                      r.n_reps, r.mean_count, var, r.ci_low, r.ci_high, r.var_over_t,
                      r.var_over_t2, to_string(method).c_str(),
                      static_cast<unsigned long long>(master_seed));
        os << buf;
    }
}

PredictabilityReport predictability_experiment(const SpectralMeasure& mu, double interval_lo,
                                               double interval_hi,
                                               const std::vector<double>& shifts, int n_reps,
                                               std::uint64_t seed,
                                               const ExperimentOptions& opts) {
    if (!(interval_hi > interval_lo)) throw config_error("predictability interval is empty");
    if (n_reps < 1) throw config_error("predictability needs n_reps >= 1");
    if (!try_flatten_atoms(mu)) {
        throw config_error("predictability_experiment requires an atomic measure (exact paths)");
    }
    const double dt = opts.dt > 0.0 ? opts.dt : default_dt(mu);
    double lo = interval_lo, hi = interval_hi;
    for (double s : shifts) {
        lo = std::min(lo, interval_lo - s);
        hi = std::max(hi, interval_hi - s);
    }
    const GridSpec grid = window_grid(lo, hi, dt);
    CovarianceKernel kernel(mu);
    const double refine_tol = opts.refine_tol > 0.0 ? opts.refine_tol : std::min(1e-6, dt / 8.0);
    const double tangent_tol =
        opts.tangent_tol > 0.0 ? opts.tangent_tol : 1e-6 * std::sqrt(kernel(0.0, 0));

    std::vector<std::vector<int>> agree(static_cast<std::size_t>(n_reps),
                                        std::vector<int>(shifts.size(), 0));
    parallel_for(n_reps, opts.threads, [&](int r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        const PathSample p = sample_atomic(mu, grid.t0, grid.dt, grid.n, rng);
        const ZeroSet zs = count_zeros(p, refine_tol, tangent_tol);
        const bool base = zs.occupied(interval_lo, interval_hi);
        for (std::size_t s = 0; s < shifts.size(); ++s) {
            const bool shifted = zs.occupied(interval_lo - shifts[s], interval_hi - shifts[s]);
            agree[static_cast<std::size_t>(r)][s] = (base == shifted) ? 1 : 0;
        }
    });

    PredictabilityReport rep;
    rep.n_reps = n_reps;
    rep.interval_lo = interval_lo;
    rep.interval_hi = interval_hi;
    for (std::size_t s = 0; s < shifts.size(); ++s) {
        long count = 0;
        for (int r = 0; r < n_reps; ++r) count += agree[static_cast<std::size_t>(r)][s];
        rep.rows.push_back({shifts[s], static_cast<double>(count) / n_reps});
    }
    return rep;
}

nlohmann::json PredictabilityReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const Row& r : rows) rows_json.push_back({{"shift", r.shift}, {"agreement", r.agreement}});
    return {{"interval", {interval_lo, interval_hi}}, {"n_reps", n_reps}, {"rows", rows_json}};
}

void dump_path(const PathSample& path, const std::string& basename) {
    {
        std::ofstream bin(basename + ".f64", std::ios::binary | std::ios::trunc);
        if (!bin) throw numerical_error("cannot open " + basename + ".f64 for writing");
        // Little-endian host assumption; doubles written in grid order.
        bin.write(reinterpret_cast<const char*>(path.values.data()),
                  static_cast<std::streamsize>(sizeof(double) * path.values.size()));
    }
    nlohmann::json side = {{"t0", path.t0},
                           {"dt", path.dt},
                           {"n", path.values.size()},
                           {"seed", path.seed},
                           {"method", to_string(path.method)},
                           {"method_params", path.method_params}};
    std::ofstream js(basename + ".json", std::ios::trunc);
    if (!js) throw numerical_error("cannot open " + basename + ".json for writing");
    js << side.dump(2) << "\n";
}

} // namespace gpz
