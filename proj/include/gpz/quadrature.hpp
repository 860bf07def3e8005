#pragma once

#include <array>
#include <functional>
#include <vector>

namespace gpz {

// sin(z)/z and (sin z - z cos z)/z^2 with series branches near zero.
double sinc(double z);
double sinc_d1(double z);   // d/dz sinc(z)
double sinc_d2(double z);   // d^2/dz^2 sinc(z)
double trig_b1(double z);   // (sin z - z cos z) / z^2

// Exact integrals of a cubic polynomial against cos/sin:
//   int_a^b (d0 + d1 x + d2 x^2 + d3 x^3) {cos,sin}(w x) dx
// Stable for all w including w = 0.
double trig_moment_cos_poly(double a, double b, const std::array<double, 4>& d, double w);
double trig_moment_sin_poly(double a, double b, const std::array<double, 4>& d, double w);

// Linear-segment shorthands.
double trig_moment_cos(double a, double b, double c0, double c1, double w);
double trig_moment_sin(double a, double b, double c0, double c1, double w);

// int_a^b x^p (c0 + c1 x) dx for small integer p >= 0.
double poly_moment(double a, double b, double c0, double c1, int p);

// Composite Simpson with n panels (n rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive Simpson to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 24);

// Adaptive Simpson split at interior breakpoints (kinks of the integrand).
double adaptive_simpson_pieces(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& breakpoints, double tol,
                               int max_depth = 24);

// Location of the maximum of f on [a, b] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double x_tol);

} // namespace gpz
