#include "gpz/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gpz/errors.hpp"
#include "gpz/quadrature.hpp"

namespace gpz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{k>n} k^-p by explicit terms plus an Euler-Maclaurin tail.
double zeta_tail(int n, int p) {
    double sum = 0.0;
    const int explicit_to = n + 40;
    for (int k = n + 1; k <= explicit_to; ++k) sum += std::pow(static_cast<double>(k), -p);
    const double K = static_cast<double>(explicit_to);
    sum += std::pow(K, 1.0 - p) / (p - 1.0) - 0.5 * std::pow(K, -static_cast<double>(p)) +
           (p / 12.0) * std::pow(K, -(p + 1.0)) -
           (p * (p + 1.0) * (p + 2.0) / 720.0) * std::pow(K, -(p + 3.0));
    return sum;
}

// sum_{k>n} (1/k!)^p, converges in a handful of terms.
double invfact_tail(int n, int p) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term /= k;  // term = 1/n!
    for (int k = n + 1; k < n + 60; ++k) {
        term /= k;
        const double tp = std::pow(term, p);
        sum += tp;
        if (tp < sum * 1e-18) break;
    }
    return sum;
}

} // namespace

LambdaSequence LambdaSequence::geometric(double ratio, double scale) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw config_error("geometric ratio must lie in (0,1)");
    if (!(scale > 0.0)) throw config_error("lambda scale must be positive");
    LambdaSequence s;
    s.kind_ = Kind::Geometric;
    s.ratio_ = ratio;
    s.scale_ = scale;
    return s;
}

LambdaSequence LambdaSequence::factorial(double scale) {
    if (!(scale > 0.0)) throw config_error("lambda scale must be positive");
    LambdaSequence s;
    s.kind_ = Kind::Factorial;
    s.scale_ = scale;
    return s;
}

LambdaSequence LambdaSequence::harmonic(double scale) {
    if (!(scale > 0.0)) throw config_error("lambda scale must be positive");
    LambdaSequence s;
    s.kind_ = Kind::Harmonic;
    s.scale_ = scale;
    return s;
}

LambdaSequence LambdaSequence::custom(std::vector<double> values, double scale) {
    if (!(scale > 0.0)) throw config_error("lambda scale must be positive");
    for (double v : values) {
        if (!(v > 0.0)) throw config_error("custom lambda entries must be positive");
    }
    std::sort(values.begin(), values.end(), std::greater<double>());
    LambdaSequence s;
    s.kind_ = Kind::Custom;
    s.scale_ = scale;
    s.custom_ = std::move(values);
    return s;
}

double LambdaSequence::lambda(int k) const {
    if (k < 1) throw config_error("lambda index is 1-based");
    switch (kind_) {
        case Kind::Geometric: return scale_ * std::pow(ratio_, k);
        case Kind::Factorial: {
            double term = kPi;
            for (int j = 1; j <= k; ++j) term /= j;
            return scale_ * term;
        }
        case Kind::Harmonic: return scale_ / k;
        case Kind::Custom:
            return k <= static_cast<int>(custom_.size()) ? scale_ * custom_[k - 1] : 0.0;
    }
    return 0.0;
}

double LambdaSequence::tail_l1(int n) const {
    switch (kind_) {
        case Kind::Geometric: return scale_ * std::pow(ratio_, n + 1) / (1.0 - ratio_);
        case Kind::Factorial: return scale_ * kPi * invfact_tail(n, 1);
        case Kind::Harmonic: return kInf;
        case Kind::Custom: {
            double sum = 0.0;
            for (int k = static_cast<int>(custom_.size()); k > n; --k) sum += scale_ * custom_[k - 1];
            return sum;
        }
    }
    return 0.0;
}

double LambdaSequence::partial_l1(int n) const {
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += lambda(k);
    return sum;
}

double LambdaSequence::tail_power(int n, int p) const {
    const double sp = std::pow(scale_, p);
    switch (kind_) {
        case Kind::Geometric: {
            const double rp = std::pow(ratio_, p);
            return sp * std::pow(rp, n + 1) / (1.0 - rp);
        }
        case Kind::Factorial: return sp * std::pow(kPi, p) * invfact_tail(n, p);
        case Kind::Harmonic: return sp * zeta_tail(n, p);
        case Kind::Custom: {
            double sum = 0.0;
            for (int k = static_cast<int>(custom_.size()); k > n; --k)
                sum += std::pow(scale_ * custom_[k - 1], p);
            return sum;
        }
    }
    return 0.0;
}

LambdaSequence LambdaSequence::scaled(double factor) const {
    if (!(factor > 0.0)) throw config_error("lambda scale factor must be positive");
    LambdaSequence s = *this;
    s.scale_ *= factor;
    return s;
}

std::string LambdaSequence::describe() const {
    std::string base;
    switch (kind_) {
        case Kind::Geometric: base = "geometric(" + std::to_string(ratio_) + ")"; break;
        case Kind::Factorial: base = "factorial"; break;
        case Kind::Harmonic: base = "harmonic"; break;
        case Kind::Custom: base = "custom[" + std::to_string(custom_.size()) + "]"; break;
    }
    if (scale_ != 1.0) base += " x" + std::to_string(scale_);
    return base;
}

double DiscreteDistribution::total_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
}

double DiscreteDistribution::char_function(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += masses[i] * std::cos(t * points[i]);
    return s;
}

double DiscreteDistribution::min_gap() const {
    double g = kInf;
    for (std::size_t i = 1; i < points.size(); ++i) g = std::min(g, points[i] - points[i - 1]);
    return g;
}

CosProdResult cosprod_eval(const LambdaSequence& lam, double t, double tol) {
    if (!(tol > 0.0)) throw config_error("cosprod tolerance must be positive");
    CosProdResult res;
    if (t == 0.0) {
        res.value = 1.0;
        return res;
    }
    const double at = std::abs(t);

    // Smallest N with lambda_{N+1} |t| < 0.1, so every dropped factor is deep
    // in the quadratic regime of cos.
    int n = 0;
    while (lam.lambda(n + 1) * at >= 0.1) {
        ++n;
        if (n > 100'000'000) throw numerical_error("cosine product truncation did not stabilise");
    }

    // Cheap route: extend until the plain quadratic tail bound clears tol.
    int n_plain = n;
    double tail2 = lam.tail_power(n_plain, 2);
    while (tail2 * at * at / 2.0 >= tol && n_plain < n + 4096 &&
           lam.kind() != LambdaSequence::Kind::Harmonic) {
        ++n_plain;
        tail2 = lam.tail_power(n_plain, 2);
    }

    auto product_to = [&](int m) {
        double p = 1.0;
        for (int k = 1; k <= m; ++k) p *= std::cos(lam.lambda(k) * t);
        return p;
    };

    if (tail2 * at * at / 2.0 < tol) {
        res.value = product_to(n_plain);
        res.n_used = n_plain;
        res.error_bound = tail2 * at * at / 2.0;
        return res;
    }

    // Slow tails (harmonic): -log cos series on the dropped factors, with the
    // power sums evaluated in closed/accelerated form.
    static const double coef[5] = {1.0 / 2.0, 1.0 / 12.0, 1.0 / 45.0, 17.0 / 2520.0,
                                   31.0 / 14175.0};
    double expo = 0.0;
    double tp = at * at;
    for (int p = 1; p <= 5; ++p) {
        expo += coef[p - 1] * tp * lam.tail_power(n, 2 * p);
        tp *= at * at;
    }
    res.value = product_to(n) * std::exp(-expo);
    res.n_used = n;
    // Next omitted series term, with lambda_{n+1}|t| < 0.1.
    res.error_bound = 7.4e-4 * std::pow(0.1, 10) * lam.tail_power(n, 2) * at * at;
    return res;
}

double vieta_check(const std::vector<double>& t_grid, int truncation) {
    double worst = 0.0;
    for (double t : t_grid) {
        double prod = 1.0;
        double lam = 0.5;
        for (int k = 1; k <= truncation; ++k) {
            prod *= std::cos(lam * t);
            lam *= 0.5;
        }
        worst = std::max(worst, std::abs(prod - sinc(t)));
    }
    return worst;
}

CantorVerdict cantor_criterion(const LambdaSequence& lam, int n_max) {
    if (n_max < 1) throw config_error("cantor_criterion needs n_max >= 1");
    CantorVerdict v;
    for (int n = 1; n <= n_max; ++n) {
        const double ln = lam.lambda(n);
        const double rn = lam.tail_l1(n);
        if (!(rn > 0.0) || !(ln > rn)) {
            v.status = CantorVerdict::Status::Fails;
            v.fail_index = n;
            return v;
        }
    }
    v.status = CantorVerdict::Status::Holds;
    return v;
}

FactorialRecurrence factorial_recurrence(int n) {
    if (n < 4) throw config_error("factorial_recurrence requires n >= 4");
    if (n > 20) throw config_error("factorial_recurrence supports n <= 20 (n! must fit 64 bits)");

    FactorialRecurrence out;

    // Prefix factors cos(pi n!/k!) for k <= n are (-1)^{n!/k!}; track parity
    // of the exponent sum exactly.
    std::uint64_t ratio = 1;  // n!/n!
    std::uint64_t parity = 0;
    for (int k = n; k >= 1; --k) {
        parity += ratio;
        ratio *= static_cast<std::uint64_t>(k);  // now n!/(k-1)!
    }
    out.prefix_sign = (parity % 2 == 0) ? 1 : -1;
    out.alternating_sign = (n % 2 == 0) ? 1 : -1;

    // Tail prod_{k>n} cos(pi n!/k!); the arguments decay factorially.
    double tail = 1.0;
    double r = 1.0;  // n!/k!
    for (int k = n + 1; k < n + 60; ++k) {
        r /= k;
        const double x = kPi * r;
        tail *= std::cos(x);
        if (x * x / 2.0 < 1e-18) break;
    }
    out.signed_value = tail;  // s_n * C(n!) = |prefix| * tail, |prefix| = 1

    // prod_{k>n}(1 - pi^2/k^2) from Euler's sine product at z = pi.
    const double full = std::sin(kPi * kPi) / (kPi * kPi);
    double head = 1.0;
    for (int k = 1; k <= n; ++k) head *= 1.0 - kPi * kPi / (static_cast<double>(k) * k);
    out.lower_bound = full / head;
    return out;
}

DiscreteDistribution yn_distribution(const LambdaSequence& lam, int n, double merge_tol, int cap) {
    if (n < 1) throw config_error("yn_distribution needs N >= 1");
    if (n > cap) throw config_error("yn_distribution: N exceeds the configured cap");
    if (merge_tol <= 0.0) merge_tol = 1e-13 * lam.partial_l1(n);

    std::vector<double> pts{0.0};
    std::vector<double> mas{1.0};
    for (int k = 1; k <= n; ++k) {
        const double l = lam.lambda(k);
        const std::size_t m = pts.size();
        std::vector<double> np;
        std::vector<double> nm;
        np.reserve(2 * m);
        nm.reserve(2 * m);
        // Merge the two shifted sorted copies.
        std::size_t i = 0, j = 0;
        while (i < m || j < m) {
            double cand;
            double mass;
            if (j >= m || (i < m && pts[i] - l <= pts[j] + l)) {
                cand = pts[i] - l;
                mass = 0.5 * mas[i];
                ++i;
            } else {
                cand = pts[j] + l;
                mass = 0.5 * mas[j];
                ++j;
            }
            if (!np.empty() && cand - np.back() <= merge_tol) {
                // Mass-weighted representative keeps exact duplicates exact.
                const double w = nm.back() + mass;
                np.back() = (np.back() * nm.back() + cand * mass) / w;
                nm.back() = w;
            } else {
                np.push_back(cand);
                nm.push_back(mass);
            }
        }
        pts = std::move(np);
        mas = std::move(nm);
    }
    return DiscreteDistribution{std::move(pts), std::move(mas)};
}

SmallBallResult small_ball(const LambdaSequence& lam, double t_scale, int cap) {
    if (!(t_scale > 0.0)) throw config_error("small_ball needs T > 0");
    const double threshold = 1.0 / (4.0 * t_scale);
    if (!(lam.tail_l1(0) >= threshold)) {
        throw config_error("small_ball: T too small, R_0 < 1/(4T) so no N_T >= 1 exists");
    }
    int n = 1;
    while (true) {
        const double rn = lam.tail_l1(n);
        if (!(rn < kInf)) throw config_error("small_ball: sequence tail is not summable");
        if (rn < threshold) break;
        ++n;
        if (n > 4096) throw numerical_error("small_ball: N_T search did not terminate");
    }

    SmallBallResult out;
    out.n_t = n;
    out.bound = std::ldexp(1.0, -n);
    if (n > cap) {
        out.truncated = true;
        return out;
    }

    const DiscreteDistribution d = yn_distribution(lam, n, -1.0, cap);
    const double radius = 2.0 * lam.tail_l1(n);
    std::vector<double> prefix(d.masses.size() + 1, 0.0);
    for (std::size_t i = 0; i < d.masses.size(); ++i) prefix[i + 1] = prefix[i] + d.masses[i];
    double prob = 0.0;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const auto lo = std::upper_bound(d.points.begin(), d.points.end(), d.points[i] - radius);
        const auto hi = std::lower_bound(d.points.begin(), d.points.end(), d.points[i] + radius);
        prob += d.masses[i] *
                (prefix[static_cast<std::size_t>(hi - d.points.begin())] -
                 prefix[static_cast<std::size_t>(lo - d.points.begin())]);
    }
    out.exact_prob = prob;

    if (d.min_gap() >= radius && prob + 1e-15 < out.bound) {
        throw numerical_error("small_ball: exact probability fell below 2^-N with separated support");
    }
    return out;
}

GrowthCertificate quadratic_growth_certificate(const LambdaSequence& lam,
                                               const std::vector<double>& t_grid,
                                               double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) {
        throw config_error("growth certificate requires epsilon in (0,2)");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw config_error("T grid must be strictly increasing");
    }
    GrowthCertificate cert;
    cert.epsilon = epsilon;
    cert.strictly_increasing = true;
    for (double t : t_grid) {
        // cap 0: only N_T and the 2^-N bound are needed, not the exact law.
        const SmallBallResult sb = small_ball(lam, t, 0);
        GrowthCertificate::Row row{t, sb.n_t, std::pow(t, epsilon) * sb.bound};
        if (!cert.rows.empty() && !(row.value > cert.rows.back().value)) {
            cert.strictly_increasing = false;
        }
        cert.rows.push_back(row);
    }
    return cert;
}

} // namespace gpz
