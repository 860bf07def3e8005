#include "gpz/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "gpz/errors.hpp"
#include "gpz/quadrature.hpp"

namespace gpz {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

struct LinSeg {
    double a, b, c0, c1;
};

// The autocorrelation of an indicator / piecewise-constant phi is piecewise
// linear with kinks exactly at pairwise breakpoint differences; interpolation
// through those nodes reproduces it exactly.
std::vector<LinSeg> autocorr_segments(const TestFunction& phi) {
    const std::vector<double> bps = phi.autocorrelation_breakpoints();
    std::vector<LinSeg> segs;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double a = bps[i], b = bps[i + 1];
        if (!(b > a)) continue;
        const double va = phi.autocorrelation(a);
        const double vb = phi.autocorrelation(b);
        const double c1 = (vb - va) / (b - a);
        segs.push_back({a, b, va - c1 * a, c1});
    }
    return segs;
}

double cos_moment(const std::vector<LinSeg>& segs, double w) {
    double sum = 0.0;
    for (const LinSeg& s : segs) sum += trig_moment_cos(s.a, s.b, s.c0, s.c1, w);
    return sum;
}

cplx simpson_cplx(const std::function<cplx(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    cplx odd{0.0, 0.0}, even{0.0, 0.0};
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// Signed decomposition of a symmetric measure for double integrals.
struct SignedAtom {
    double x;
    double mass;
};

struct DensPart {
    DensityMeasure dm;
    double weight;
    double lo, hi;
};

double quad_edge(const DensityMeasure& d) {
    switch (d.form) {
        case DensityMeasure::Form::Uniform: return d.param;
        case DensityMeasure::Form::Gaussian: return 8.5 * d.param;
        case DensityMeasure::Form::Tabulated: return d.grid.back();
    }
    return 0.0;
}

void decompose(const SpectralMeasure& mu, double w, std::vector<SignedAtom>& atoms,
               std::vector<DensPart>& parts) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        for (const Atom& at : a->atoms) {
            if (at.frequency == 0.0) {
                atoms.push_back({0.0, w * at.mass});
            } else {
                atoms.push_back({-at.frequency, 0.5 * w * at.mass});
                atoms.push_back({at.frequency, 0.5 * w * at.mass});
            }
        }
        return;
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        const double edge = quad_edge(*d);
        parts.push_back({*d, w, -edge, edge});
        return;
    }
    if (const auto* c = mu.get_if<CosineProductMeasure>()) {
        const LambdaSequence& lam = c->lambda;
        const double target = 1e-14 * lam.sum_l2sq();
        int K = 1;
        while (lam.tail_power(K, 2) > target && K <= 24) ++K;
        if (K > 24) {
            throw numerical_error(
                "cosine-product spectral integrals need a finite truncation below 2^24 atoms; "
                "use the time-domain route");
        }
        const DiscreteDistribution dist = yn_distribution(lam, K);
        for (std::size_t i = 0; i < dist.points.size(); ++i) {
            atoms.push_back({dist.points[i], w * dist.masses[i]});
        }
        return;
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    for (const WeightedComponent& wc : mix.components) {
        decompose(wc.measure, w * wc.weight, atoms, parts);
    }
}

// Oscillation-aware complex integral: fixed panels sized to the phi_hat
// period, Simpson refined until the change clears tol.
cplx integrate_osc(const std::function<cplx(double)>& f, double lo, double hi, double panel_w,
                   double tol) {
    if (!(hi > lo)) return {0.0, 0.0};
    const int n_panels =
        std::max(1, static_cast<int>(std::ceil((hi - lo) / std::max(panel_w, 1e-12))));
    const double w = (hi - lo) / n_panels;
    int n = 8;
    cplx prev{0.0, 0.0};
    for (int round = 0; round < 6; ++round) {
        cplx total{0.0, 0.0};
        for (int p = 0; p < n_panels; ++p) {
            total += simpson_cplx(f, lo + p * w, lo + (p + 1) * w, n);
        }
        if (round > 0 && std::abs(total - prev) < tol) return total;
        prev = total;
        n *= 2;
    }
    return prev;
}

} // namespace

HermiteCoefficients HermiteCoefficients::zero_counting(int order) {
    if (order != 2) {
        throw config_error("Hermite coefficients are tabulated for the second chaos only");
    }
    HermiteCoefficients h;
    h.order = 2;
    h.a[0] = 1.0 / std::sqrt(2.0 * kPi);
    h.a[2] = 1.0 / (2.0 * std::sqrt(2.0 * kPi));
    h.d[0] = 1.0;
    h.d[2] = -0.5;
    return h;
}

double kac_rice_mean(const CovarianceKernel& kernel, double t_half) {
    if (!(t_half > 0.0)) throw config_error("kac_rice_mean needs T > 0");
    const double c0 = kernel(0.0, 0);
    const double cpp = kernel(0.0, 2);
    if (!(c0 > 0.0)) throw config_error("kac_rice_mean needs C(0) > 0");
    if (!(cpp < 0.0) || !std::isfinite(cpp)) {
        throw numerical_error("kac_rice_mean needs finite C''(0) < 0");
    }
    return (2.0 * t_half / kPi) * std::sqrt(-cpp / c0);
}

double chaos2_variance_time(const CovarianceKernel& kernel, const TestFunction& phi, double tol) {
    const auto atoms = try_flatten_atoms(kernel.source());
    if (atoms && phi.kind() != TestFunction::Kind::Tabulated) {
        // C^2 + C''^2 - 2 C'^2 expands into pure cosines:
        // sum_{i,j} (m_i m_j / 2) [ (1 - f_i f_j)^2 cos((f_i - f_j) z)
        //                         + (1 + f_i f_j)^2 cos((f_i + f_j) z) ].
        const std::vector<LinSeg> segs = autocorr_segments(phi);
        double sum = 0.0;
        for (const Atom& ai : *atoms) {
            for (const Atom& aj : *atoms) {
                const double fi = ai.frequency, fj = aj.frequency;
                const double mm = 0.5 * ai.mass * aj.mass;
                const double cm = (1.0 - fi * fj) * (1.0 - fi * fj);
                const double cp = (1.0 + fi * fj) * (1.0 + fi * fj);
                sum += mm * (cm * cos_moment(segs, fi - fj) + cp * cos_moment(segs, fi + fj));
            }
        }
        return sum / (4.0 * kPi);
    }

    const std::vector<double> bps = phi.autocorrelation_breakpoints();
    const double lo = bps.front(), hi = bps.back();
    auto integrand = [&](double z) {
        const double c = kernel(z, 0);
        const double c1 = kernel(z, 1);
        const double c2 = kernel(z, 2);
        return (c * c + c2 * c2 - 2.0 * c1 * c1) * phi.autocorrelation(z);
    };
    // Panels no wider than a quarter period of the fastest cosine in C^2.
    const double w_max = std::max(2.0 * kernel.frequency_bound(), 1e-6);
    const double panel = std::min((2.0 * kPi / w_max) / 4.0, (hi - lo) / 8.0);
    std::vector<double> cuts = bps;
    for (double x = lo + panel; x < hi; x += panel) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    const double integral =
        adaptive_simpson_pieces(integrand, lo, hi, cuts, tol * 4.0 * kPi);
    return integral / (4.0 * kPi);
}

double chaos2_variance_spectral(const SpectralMeasure& mu, const TestFunction& phi, double tol) {
    std::vector<SignedAtom> atoms;
    std::vector<DensPart> parts;
    decompose(mu, 1.0, atoms, parts);

    auto phat_sq = [&phi](double u) {
        const cplx f = phi.fourier(u);
        return cplx(std::norm(f), 0.0);  // |phi_hat|^2, the transform of the autocorrelation
    };
    const double w_half =
        std::max(std::abs(phi.support_lo()), std::abs(phi.support_hi()));
    const double panel = (2.0 * kPi / std::max(w_half, 1e-9)) / 4.0;

    cplx acc{0.0, 0.0};
    for (const SignedAtom& ai : atoms) {
        for (const SignedAtom& aj : atoms) {
            const double q = 1.0 + ai.x * aj.x;
            acc += ai.mass * aj.mass * q * q * phat_sq(ai.x + aj.x);
        }
    }
    const double inner_tol = tol * kPi;  // split the budget across the blocks
    for (const SignedAtom& a : atoms) {
        for (const DensPart& p : parts) {
            auto f = [&](double y) {
                const double q = 1.0 + a.x * y;
                return q * q * phat_sq(a.x + y) * density_value(p.dm, y);
            };
            acc += 2.0 * a.mass * p.weight * integrate_osc(f, p.lo, p.hi, panel, inner_tol);
        }
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i; j < parts.size(); ++j) {
            const DensPart& pi = parts[i];
            const DensPart& pj = parts[j];
            // Rotated coordinates: the oscillation lives in u = x + y only.
            auto outer = [&](double u) -> cplx {
                const double v_lo = 2.0 * std::max(pi.lo, u - pj.hi) - u;
                const double v_hi = 2.0 * std::min(pi.hi, u - pj.lo) - u;
                if (!(v_hi > v_lo)) return {0.0, 0.0};
                auto inner = [&](double v) {
                    // The v-range already confines (x, y) to the supports;
                    // clamp the roundoff at the interval endpoints.
                    const double x = std::clamp(0.5 * (u + v), pi.lo, pi.hi);
                    const double y = std::clamp(0.5 * (u - v), pj.lo, pj.hi);
                    const double q = 1.0 + x * y;
                    return q * q * density_value(pi.dm, x) * density_value(pj.dm, y) * 0.5;
                };
                return phat_sq(u) * simpson(inner, v_lo, v_hi, 96);
            };
            const cplx block = integrate_osc(outer, pi.lo + pj.lo, pi.hi + pj.hi,
                                             std::min(panel, 0.5), inner_tol);
            acc += (i == j ? 1.0 : 2.0) * pi.weight * pj.weight * block;
        }
    }
    return acc.real() / (4.0 * kPi);
}

double bound_var_phi_mu(const SpectralMeasure& mu, double t_scale, double c_phi) {
    if (!(t_scale > 0.0)) throw config_error("bound_var_phi_mu needs T > 0");
    if (!(c_phi > 0.0)) throw config_error("bound_var_phi_mu needs c_phi > 0");
    std::vector<SignedAtom> atoms;
    std::vector<DensPart> parts;
    decompose(mu, 1.0, atoms, parts);
    const double band = 1.0 / t_scale;

    double acc = 0.0;
    for (const SignedAtom& ai : atoms) {
        for (const SignedAtom& aj : atoms) {
            if (std::abs(ai.x + aj.x) < band) {
                const double q = 1.0 + ai.x * aj.x;
                acc += ai.mass * aj.mass * q * q;
            }
        }
    }
    for (const SignedAtom& a : atoms) {
        for (const DensPart& p : parts) {
            const double lo = std::max(p.lo, -a.x - band);
            const double hi = std::min(p.hi, -a.x + band);
            if (hi > lo) {
                auto f = [&](double y) {
                    const double q = 1.0 + a.x * y;
                    return q * q * density_value(p.dm, y);
                };
                acc += 2.0 * a.mass * p.weight * simpson(f, lo, hi, 64);
            }
        }
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i; j < parts.size(); ++j) {
            const DensPart& pi = parts[i];
            const DensPart& pj = parts[j];
            auto outer = [&](double u) {
                const double v_lo = 2.0 * std::max(pi.lo, u - pj.hi) - u;
                const double v_hi = 2.0 * std::min(pi.hi, u - pj.lo) - u;
                if (!(v_hi > v_lo)) return 0.0;
                auto inner = [&](double v) {
                    const double x = std::clamp(0.5 * (u + v), pi.lo, pi.hi);
                    const double y = std::clamp(0.5 * (u - v), pj.lo, pj.hi);
                    const double q = 1.0 + x * y;
                    return q * q * density_value(pi.dm, x) * density_value(pj.dm, y) * 0.5;
                };
                return simpson(inner, v_lo, v_hi, 128);
            };
            const double u_lo = std::max(-band, pi.lo + pj.lo);
            const double u_hi = std::min(band, pi.hi + pj.hi);
            if (u_hi > u_lo) {
                acc += (i == j ? 1.0 : 2.0) * pi.weight * pj.weight *
                       simpson(outer, u_lo, u_hi, 64);
            }
        }
    }
    return c_phi * t_scale * t_scale * acc;
}

namespace {

// Restriction of one variant to {f >= cut_lo} or {f <= cut_hi} on the
// nonnegative representation; nullopt when the restriction carries no mass.
std::optional<SpectralMeasure> restrict_band(const SpectralMeasure& mu, bool outer, double eps) {
    if (const auto* a = mu.get_if<AtomicMeasure>()) {
        std::vector<Atom> kept;
        for (const Atom& at : a->atoms) {
            const bool in = outer ? at.frequency >= 1.0 + eps : at.frequency <= 1.0 - eps;
            if (in) kept.push_back(at);
        }
        if (kept.empty()) return std::nullopt;
        return SpectralMeasure::atomic(std::move(kept));
    }
    if (const auto* d = mu.get_if<DensityMeasure>()) {
        const double edge = quad_edge(*d);
        const double lo = outer ? 1.0 + eps : 0.0;
        const double hi = outer ? edge : std::min(edge, 1.0 - eps);
        if (!(hi > lo)) return std::nullopt;
        const int n = 1024;
        std::vector<double> grid(n + 1), values(n + 1);
        for (int i = 0; i <= n; ++i) {
            grid[i] = lo + (hi - lo) * i / n;
            values[i] = density_value(*d, grid[i]);
        }
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, v);
        if (vmax == 0.0) return std::nullopt;
        return SpectralMeasure::tabulated_density(std::move(grid), std::move(values));
    }
    if (mu.get_if<CosineProductMeasure>()) {
        throw unknown_structure_error(
            "band restriction of a cosine-product measure is undetermined");
    }
    const auto& mix = std::get<MixtureMeasure>(mu.data());
    std::vector<std::pair<double, SpectralMeasure>> kept;
    for (const WeightedComponent& wc : mix.components) {
        auto sub = restrict_band(wc.measure, outer, eps);
        if (sub) kept.emplace_back(wc.weight, std::move(*sub));
    }
    if (kept.empty()) return std::nullopt;
    return SpectralMeasure::mixture(std::move(kept));
}

} // namespace

SpectralMeasure offband_restriction(const SpectralMeasure& mu, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw config_error("offband eps must lie in (0,1)");
    if (auto out = restrict_band(mu, true, eps)) return std::move(*out);
    if (auto mid = restrict_band(mu, false, eps)) return std::move(*mid);
    throw config_error("offband restriction has zero mass (measure concentrated near +-1)");
}

double bound_lin(const CovarianceKernel& kernel_eps, double t_scale, double c_phi_prime) {
    if (!(t_scale > 0.0)) throw config_error("bound_lin needs T > 0");
    if (!(c_phi_prime > 0.0)) throw config_error("bound_lin needs c_phi_prime > 0");
    if (!(total_mass(kernel_eps.source()) > 0.0)) {
        throw config_error("bound_lin needs a restricted measure with positive mass");
    }
    const double w = std::max(4.0 * kernel_eps.frequency_bound(), 1e-6);
    double step = (2.0 * kPi / w) / 16.0;
    step = std::max(step, t_scale / 4e6);
    step = std::min(step, t_scale / 8.0);
    auto f = [&](double t) {
        const double c = kernel_eps(2.0 * t, 0);
        return c * c;
    };
    const int n = static_cast<int>(std::ceil(t_scale / step));
    const double integral = 2.0 * simpson(f, 0.0, t_scale, n);
    const double s1 = std::sin(1.0);
    return c_phi_prime * s1 * s1 * t_scale * integral;
}

DeltaKernelReport delta_kernel_identity_check(double t_scale, const std::vector<double>& x_grid) {
    if (!(t_scale > 0.0)) throw config_error("delta kernel check needs T > 0");
    DeltaKernelReport rep;
    rep.resolved_prefactor = 1.0 / (kPi * t_scale);
    rep.printed_prefactor = 2.0 / (t_scale * std::sqrt(2.0 * kPi));

    const double L = 1e5;
    for (double x : x_grid) {
        const double v = 2.0 * x * t_scale;  // int sinc(u)^2 cos(uv) du / pi vs (1-|v|/2)+
        const double period = 2.0 * kPi / std::max(std::abs(v), 1.0);
        const double step = period / 32.0;
        const int n = static_cast<int>(std::ceil(L / step));
        auto f = [v](double u) {
            const double s = sinc(u);
            return s * s * std::cos(u * v);
        };
        const double rhs = (2.0 / kPi) * simpson(f, 0.0, L, n);
        const double lhs = std::max(0.0, 1.0 - std::abs(t_scale * x));
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(rhs - lhs));
    }
    return rep;
}

namespace {

bool rationalize(double r, long max_den, double tol, long& p_out, long& q_out) {
    long p0 = 1, q0 = 0;
    long p1 = static_cast<long>(std::floor(r)), q1 = 1;
    double x = r;
    for (int it = 0; it < 64; ++it) {
        if (std::abs(r - static_cast<double>(p1) / static_cast<double>(q1)) <=
            tol * std::max(1.0, std::abs(r))) {
            p_out = p1;
            q_out = q1;
            return true;
        }
        const double frac = x - std::floor(x);
        if (frac < 1e-15) break;
        x = 1.0 / frac;
        const long a = static_cast<long>(std::floor(x));
        const long p2 = a * p1 + p0;
        const long q2 = a * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return false;
}

} // namespace

PeriodicCoefficient periodic_quadratic_coefficient(const SpectralMeasure& mu,
                                                   const TestFunction& phi, int n_reps,
                                                   std::uint64_t seed,
                                                   const ExperimentOptions& opts) {
    if (n_reps < 2) throw config_error("periodic coefficient needs n_reps >= 2");
    const auto atoms = try_flatten_atoms(mu);
    if (!atoms) throw config_error("periodic_quadratic_coefficient requires an atomic measure");

    std::vector<double> freqs;
    for (const Atom& at : *atoms) {
        if (at.frequency > 0.0) freqs.push_back(at.frequency);
    }
    if (freqs.empty()) {
        throw config_error("periodic coefficient needs at least one nonzero frequency");
    }
    const double f_min = *std::min_element(freqs.begin(), freqs.end());
    long l = 1;
    std::vector<long> nums;
    for (double f : freqs) {
        long p = 0, q = 0;
        if (!rationalize(f / f_min, 10'000, 1e-9, p, q)) {
            throw config_error("frequencies are not commensurable; no finite period");
        }
        l = std::lcm(l, q);
        if (l > 1'000'000) throw config_error("common period too long; frequencies nearly incommensurable");
    }
    const double g0 = f_min / static_cast<double>(l);
    long g_mult = 0;
    for (double f : freqs) {
        const long n_i = std::lround(f / g0);
        g_mult = g_mult == 0 ? n_i : std::gcd(g_mult, n_i);
    }
    const double g = g0 * static_cast<double>(g_mult);
    const double tau = kPi / g;

    const double dt = opts.dt > 0.0 ? opts.dt : default_dt(mu);
    const double t0 = -4.0 * dt;
    const int n = static_cast<int>(std::ceil((2.0 * tau + 8.0 * dt) / dt)) + 1;
    CovarianceKernel kernel(mu);
    const double refine_tol = opts.refine_tol > 0.0 ? opts.refine_tol : std::min(1e-6, dt / 8.0);
    const double tangent_tol =
        opts.tangent_tol > 0.0 ? opts.tangent_tol : 1e-6 * std::sqrt(kernel(0.0, 0));

    std::vector<double> q_counts(static_cast<std::size_t>(n_reps));
    parallel_for(n_reps, opts.threads, [&](int r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        const PathSample p = sample_atomic(mu, t0, dt, n, rng);
        const ZeroSet zs = count_zeros(p, refine_tol, tangent_tol);
        int count = 0;
        for (const Zero& z : zs.zeros) {
            if (z.location >= 0.0 && z.location < 2.0 * tau) ++count;
        }
        q_counts[static_cast<std::size_t>(r)] = count;
    });

    double mean = 0.0;
    for (double q : q_counts) mean += q;
    mean /= n_reps;
    double var = 0.0;
    for (double q : q_counts) var += (q - mean) * (q - mean);
    var /= (n_reps - 1);

    PeriodicCoefficient out;
    out.var_q = var;
    out.mean_q = mean;
    out.tau = tau;
    const double i_phi = phi.integral();
    out.coefficient = var * i_phi * i_phi / (4.0 * tau * tau);
    return out;
}

} // namespace gpz
