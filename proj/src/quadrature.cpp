#include "gpz/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace gpz {

double sinc(double z) {
    const double az = std::abs(z);
    if (az < 0.1) {
        const double z2 = z * z;
        // 1 - z^2/6 + z^4/120 - z^6/5040 + z^8/362880
        return 1.0 + z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 * (-1.0 / 5040.0 + z2 / 362880.0)));
    }
    return std::sin(z) / z;
}

double sinc_d1(double z) {
    const double az = std::abs(z);
    if (az < 0.1) {
        const double z2 = z * z;
        // -z/3 + z^3/30 - z^5/840 + z^7/45360
        return z * (-1.0 / 3.0 + z2 * (1.0 / 30.0 + z2 * (-1.0 / 840.0 + z2 / 45360.0)));
    }
    return std::cos(z) / z - std::sin(z) / (z * z);
}

double sinc_d2(double z) {
    const double az = std::abs(z);
    if (az < 0.1) {
        const double z2 = z * z;
        // -1/3 + z^2/10 - z^4/168 + z^6/6480
        return -1.0 / 3.0 + z2 * (1.0 / 10.0 + z2 * (-1.0 / 168.0 + z2 / 6480.0));
    }
    const double z2 = z * z;
    return ((2.0 - z2) * std::sin(z) - 2.0 * z * std::cos(z)) / (z2 * z);
}

double trig_b1(double z) {
    const double az = std::abs(z);
    if (az < 0.1) {
        const double z2 = z * z;
        // z/3 - z^3/30 + z^5/840 - z^7/45360
        return z * (1.0 / 3.0 + z2 * (-1.0 / 30.0 + z2 * (1.0 / 840.0 - z2 / 45360.0)));
    }
    return (std::sin(z) - z * std::cos(z)) / (z * z);
}

namespace {

// (-z^3 cos z + 3 z^2 sin z + 6 z cos z - 6 sin z) / z^4, i.e. the odd cubic
// moment kernel: int_{-h}^{h} u^3 sin(wu) du = 2 h^4 * trig_d3(wh).
double trig_d3(double z) {
    const double az = std::abs(z);
    if (az < 0.1) {
        const double z2 = z * z;
        // z/5 - z^3/42 + z^5/1080
        return z * (1.0 / 5.0 + z2 * (-1.0 / 42.0 + z2 / 1080.0));
    }
    const double z2 = z * z;
    return ((3.0 * z2 - 6.0) * std::sin(z) + (6.0 * z - z2 * z) * std::cos(z)) / (z2 * z2);
}

struct CenteredMoments {
    double cos_part;  // q0 A0 + q2 A2
    double sin_part;  // q1 B1 + q3 B3
    double cm, sm;    // cos(wm), sin(wm)
};

CenteredMoments centered(double a, double b, const std::array<double, 4>& d, double w) {
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double z = w * h;
    const double q0 = d[0] + m * (d[1] + m * (d[2] + m * d[3]));
    const double q1 = d[1] + m * (2.0 * d[2] + 3.0 * m * d[3]);
    const double q2 = d[2] + 3.0 * m * d[3];
    const double q3 = d[3];
    const double A0 = 2.0 * h * sinc(z);
    const double A2 = -2.0 * h * h * h * sinc_d2(z);
    const double B1 = 2.0 * h * h * trig_b1(z);
    const double B3 = 2.0 * h * h * h * h * trig_d3(z);
    return {q0 * A0 + q2 * A2, q1 * B1 + q3 * B3, std::cos(w * m), std::sin(w * m)};
}

} // namespace

double trig_moment_cos_poly(double a, double b, const std::array<double, 4>& d, double w) {
    const CenteredMoments c = centered(a, b, d, w);
    return c.cm * c.cos_part - c.sm * c.sin_part;
}

double trig_moment_sin_poly(double a, double b, const std::array<double, 4>& d, double w) {
    const CenteredMoments c = centered(a, b, d, w);
    return c.sm * c.cos_part + c.cm * c.sin_part;
}

double trig_moment_cos(double a, double b, double c0, double c1, double w) {
    return trig_moment_cos_poly(a, b, {c0, c1, 0.0, 0.0}, w);
}

double trig_moment_sin(double a, double b, double c0, double c1, double w) {
    return trig_moment_sin_poly(a, b, {c0, c1, 0.0, 0.0}, w);
}

double poly_moment(double a, double b, double c0, double c1, int p) {
    // int x^p (c0 + c1 x) = c0 x^{p+1}/(p+1) + c1 x^{p+2}/(p+2)
    auto anti = [&](double x) {
        return c0 * std::pow(x, p + 1) / (p + 1) + c1 * std::pow(x, p + 2) / (p + 2);
    };
    return anti(b) - anti(a);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    for (int i = 2; i < n; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double adaptive_simpson_pieces(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& breakpoints, double tol,
                               int max_depth) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    const double piece_tol = tol / std::max<std::size_t>(1, cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i]) {
            total += adaptive_simpson(f, cuts[i], cuts[i + 1], piece_tol, max_depth);
        }
    }
    return total;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double x_tol) {
    const double inv_phi = 0.6180339887498948482;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace gpz
