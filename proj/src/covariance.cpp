#include "gpz/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "gpz/errors.hpp"
#include "gpz/quadrature.hpp"

namespace gpz {

namespace {

int sign_of(double t) { return (t > 0.0) - (t < 0.0); }

// Truncation index for a cosine product at |t|: every dropped factor satisfies
// lambda_k |t| < 0.1, extended until the quadratic tail bound clears tol when
// the tail decays fast enough.
int cosprod_truncation(const LambdaSequence& lam, double u, double tol) {
    int n = 0;
    while (lam.lambda(n + 1) * u >= 0.1) {
        ++n;
        if (n > 100'000'000) throw numerical_error("cosine product truncation did not stabilise");
    }
    if (lam.kind() != LambdaSequence::Kind::Harmonic) {
        while (lam.tail_power(n, 2) * u * u / 2.0 >= tol && n < 1'000'000) ++n;
    }
    return std::max(n, 1);
}

struct CosProdDerivs {
    double c1, c2;
};

// First two u-derivatives of prod cos(lambda_k u) on the truncated product,
// via prefix/suffix products (no divisions, stable at zero factors).
CosProdDerivs cosprod_derivs(const LambdaSequence& lam, double u, double tol) {
    const int n = cosprod_truncation(lam, u, tol);
    std::vector<double> l(n + 1), cs(n + 1), sn(n + 1);
    for (int k = 1; k <= n; ++k) {
        l[k] = lam.lambda(k);
        cs[k] = std::cos(l[k] * u);
        sn[k] = std::sin(l[k] * u);
    }
    std::vector<double> pre(n + 2, 1.0), suf(n + 2, 1.0);
    for (int k = 1; k <= n; ++k) pre[k + 1] = pre[k] * cs[k];
    for (int k = n; k >= 1; --k) suf[k] = suf[k + 1] * cs[k];

    double d1 = 0.0;
    double diag = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double a_k = pre[k] * suf[k + 1];
        d1 -= l[k] * sn[k] * a_k;
        diag -= l[k] * l[k] * cs[k] * a_k;
    }
    double cross = 0.0;
    for (int i = 1; i <= n; ++i) {
        double mid = 1.0;
        for (int j = i + 1; j <= n; ++j) {
            cross += l[i] * l[j] * sn[i] * sn[j] * pre[i] * mid * suf[j + 1];
            mid *= cs[j];
        }
    }
    return {d1, diag + 2.0 * cross};
}

} // namespace

CovarianceKernel::CovarianceKernel(SpectralMeasure mu, double tolerance)
    : mu_(std::move(mu)), tol_(tolerance), x_max_(support_bound(mu_)) {
    if (!(tol_ > 0.0)) throw config_error("kernel tolerance must be positive");
    if (const auto* mix = mu_.get_if<MixtureMeasure>()) {
        for (const WeightedComponent& wc : mix->components) {
            child_weights_.push_back(wc.weight);
            children_.emplace_back(wc.measure, tolerance);
        }
    }
}

double CovarianceKernel::operator()(double t, int order) const {
    if (order < 0 || order > 2) throw config_error("covariance order must be 0, 1 or 2");
    const double u = std::abs(t);
    const double v = eval_abs(u, order);
    return order == 1 ? sign_of(t) * v : v;
}

double CovarianceKernel::eval_abs(double u, int order) const {
    if (const auto* a = mu_.get_if<AtomicMeasure>()) {
        double sum = 0.0;
        for (const Atom& at : a->atoms) {
            const double f = at.frequency;
            switch (order) {
                case 0: sum += at.mass * std::cos(f * u); break;
                case 1: sum -= at.mass * f * std::sin(f * u); break;
                case 2: sum -= at.mass * f * f * std::cos(f * u); break;
            }
        }
        return sum;
    }
    if (const auto* d = mu_.get_if<DensityMeasure>()) {
        switch (d->form) {
            case DensityMeasure::Form::Uniform: {
                const double h = d->param;
                switch (order) {
                    case 0: return d->mass * sinc(h * u);
                    case 1: return d->mass * h * sinc_d1(h * u);
                    default: return d->mass * h * h * sinc_d2(h * u);
                }
            }
            case DensityMeasure::Form::Gaussian: {
                const double s2 = d->param * d->param;
                const double e = std::exp(-0.5 * s2 * u * u);
                switch (order) {
                    case 0: return d->mass * e;
                    case 1: return -d->mass * s2 * u * e;
                    default: return d->mass * s2 * (s2 * u * u - 1.0) * e;
                }
            }
            case DensityMeasure::Form::Tabulated: {
                double sum = 0.0;
                for (std::size_t i = 0; i + 1 < d->grid.size(); ++i) {
                    const double a = d->grid[i], b = d->grid[i + 1];
                    const double c1 = (d->values[i + 1] - d->values[i]) / (b - a);
                    const double c0 = d->values[i] - c1 * a;
                    switch (order) {
                        case 0: sum += trig_moment_cos_poly(a, b, {c0, c1, 0, 0}, u); break;
                        case 1: sum -= trig_moment_sin_poly(a, b, {0, c0, c1, 0}, u); break;
                        default: sum -= trig_moment_cos_poly(a, b, {0, 0, c0, c1}, u); break;
                    }
                }
                return 2.0 * sum;
            }
        }
    }
    if (const auto* c = mu_.get_if<CosineProductMeasure>()) {
        if (order == 0) return cosprod_eval(c->lambda, u, tol_).value;
        const CosProdDerivs dv = cosprod_derivs(c->lambda, u, tol_);
        return order == 1 ? dv.c1 : dv.c2;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < children_.size(); ++i) {
        sum += child_weights_[i] * children_[i].eval_abs(u, order);
    }
    return sum;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Converges: return "converges";
        case Verdict::Diverges: return "diverges";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Verdict refinement_verdict(const std::vector<double>& estimates) {
    if (estimates.size() < 2) return Verdict::Inconclusive;
    const double prev = estimates[estimates.size() - 2];
    const double last = estimates.back();
    const double scale = std::max(std::abs(last), std::abs(prev));
    if (scale < 1e-12) return Verdict::Converges;
    if (std::abs(last - prev) < 1e-3 * scale) return Verdict::Converges;
    if (std::abs(last) >= 2.0 * std::abs(prev)) return Verdict::Diverges;
    return Verdict::Inconclusive;
}

void DiagnosticReport::write_csv(std::ostream& os) const {
    os << "parameter,estimate,error_bound,verdict\n";
    char buf[128];
    for (const Row& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,", r.parameter, r.estimate,
                      r.error_bound);
        os << buf << to_string(verdict) << "\n";
    }
}

nlohmann::json DiagnosticReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const Row& r : rows) {
        rows_json.push_back(
            {{"parameter", r.parameter}, {"estimate", r.estimate}, {"error_bound", r.error_bound}});
    }
    return {{"quantity", quantity}, {"rows", rows_json}, {"verdict", to_string(verdict)}};
}

DiagnosticReport geman_check_integrand(const std::function<double(double)>& integrand,
                                       double delta, int levels, const std::string& quantity) {
    if (!(delta > 0.0)) throw config_error("geman_check needs delta > 0");
    if (levels < 2) throw config_error("geman_check needs at least 2 refinement levels");

    DiagnosticReport rep;
    rep.quantity = quantity;
    std::vector<double> estimates;
    double upper = delta;
    double integral = 0.0;
    double err = 0.0;
    for (int n = 1; n <= levels; ++n) {
        const double lower = delta * std::pow(0.25, n);
        const double coarse = simpson(integrand, lower, upper, 64);
        const double fine = simpson(integrand, lower, upper, 128);
        integral += fine;
        err += std::abs(fine - coarse) / 15.0;
        estimates.push_back(integral);
        rep.rows.push_back({lower, integral, err});
        upper = lower;
    }
    rep.verdict = refinement_verdict(estimates);
    return rep;
}

DiagnosticReport geman_check(const CovarianceKernel& k, double delta, int levels) {
    const double s2 = second_moment(k.source());  // -C''(0)
    const double m4 = fourth_moment(k.source());  // C''''(0)
    auto integrand = [&k, s2, m4](double t) {
        if (t < 1e-4) return m4 * t / 6.0;  // series head, avoids 0/0 cancellation
        return (k(t, 1) + s2 * t) / (t * t);
    };
    return geman_check_integrand(integrand, delta, levels, "geman");
}

namespace {

// Nyquist-safe composite step: 1/16 of the shortest oscillation period of the
// squared kernel, with a point-count cap.
double scan_step(const CovarianceKernel& k, double span) {
    const double f = std::max(2.0 * k.frequency_bound(), 1e-6);
    double step = (2.0 * std::numbers::pi / f) / 16.0;
    step = std::max(step, span / 4e6);
    return std::min(step, span / 8.0);
}

} // namespace

DiagnosticReport l2_condition_scan(const CovarianceKernel& k, L2Which which,
                                   const std::vector<double>& t_max_grid) {
    if (t_max_grid.size() < 2) throw config_error("l2 scan needs an increasing grid of >= 2 points");
    for (std::size_t i = 1; i < t_max_grid.size(); ++i) {
        if (!(t_max_grid[i] > t_max_grid[i - 1])) {
            throw config_error("l2 scan grid must be strictly increasing");
        }
    }
    auto q2 = [&k, which](double t) {
        double v = 0.0;
        switch (which) {
            case L2Which::C: v = k(t, 0); break;
            case L2Which::Cpp: v = k(t, 2); break;
            case L2Which::CPlusCpp: v = k(t, 0) + k(t, 2); break;
        }
        return v * v;
    };

    DiagnosticReport rep;
    rep.quantity = "l2";
    std::vector<double> estimates;
    double integral = 0.0;
    double lo = 0.0;
    for (double hi : t_max_grid) {
        const double step = scan_step(k, hi);
        const int n = std::max(8, static_cast<int>(std::ceil((hi - lo) / step)));
        const double band = std::max(simpson(q2, lo, hi, n), 0.0);
        integral += band;
        estimates.push_back(integral);
        rep.rows.push_back({hi, integral, band * 1e-4});
        lo = hi;
    }
    rep.verdict = refinement_verdict(estimates);
    return rep;
}

double cesaro_mean(const CovarianceKernel& k, double t_max, int power) {
    if (!(t_max > 0.0)) throw config_error("cesaro_mean needs T > 0");
    if (power != 1 && power != 2) throw config_error("cesaro_mean power must be 1 or 2");
    const double f = std::max(k.frequency_bound(), 1e-6);
    double step = (2.0 * std::numbers::pi / f) / 64.0;
    step = std::max(step, t_max / 4e6);
    step = std::min(step, t_max / 8.0);
    const int n = static_cast<int>(std::ceil(t_max / step));
    auto f_pow = [&k, power](double t) {
        const double v = k(t, 0);
        return power == 1 ? v : v * v;
    };
    return simpson(f_pow, 0.0, t_max, n) / t_max;
}

std::vector<std::pair<double, double>> recurrence_times(const CovarianceKernel& k,
                                                        double threshold, double t_max) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw config_error("recurrence threshold must lie in (0,1)");
    }
    if (!(t_max > 0.0)) throw config_error("recurrence_times needs t_max > 0");

    const double f = std::max(k.frequency_bound(), 1e-6);
    double step = (2.0 * std::numbers::pi / f) / 32.0;
    step = std::min(step, t_max / 16.0);
    const double cutoff = 1.0 - threshold;
    auto abs_c = [&k](double t) { return std::abs(k(t, 0)); };

    std::vector<std::pair<double, double>> peaks;
    const long n = std::lround(std::ceil(t_max / step));
    double prev2 = std::abs(k(0.0, 0));
    double prev = abs_c(step);
    for (long i = 2; i <= n; ++i) {
        const double t = std::min(i * step, t_max);
        const double cur = abs_c(t);
        if (prev >= cutoff && prev >= prev2 && prev >= cur) {
            const double lo = (i - 2) * step;
            const double apex = golden_section_max(abs_c, lo, t, 1e-10 * std::max(1.0, t));
            const double val = k(apex, 0);
            if (std::abs(val) >= cutoff && apex > 0.0 && apex <= t_max &&
                (peaks.empty() || apex - peaks.back().first > step)) {
                peaks.emplace_back(apex, val);
            }
        }
        prev2 = prev;
        prev = cur;
    }
    return peaks;
}

} // namespace gpz
