#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gpz/covariance.hpp"
#include "gpz/simulate.hpp"
#include "gpz/spectral.hpp"
#include "gpz/test_function.hpp"

namespace gpz {

// Hermite expansion coefficients of the zero-counting functional in the joint
// (X, X') chaos basis. Only the second chaos is tabulated; the type is a map
// so higher orders can be added if values become available.
struct HermiteCoefficients {
    int order = 2;
    std::map<int, double> a;  // even indices <= order
    std::map<int, double> d;

    static HermiteCoefficients zero_counting(int order = 2);
};

// E #(Z in [-T, T]) = (2T/pi) sqrt(-C''(0) / C(0)).
double kac_rice_mean(const CovarianceKernel& kernel, double t_half);

// Second-chaos variance term, time domain:
// (1/4pi) int [C^2 + C''^2 - 2 C'^2](z) (phi*phi)(z) dz.
// Exact cosine-moment closed form for atomic measures with indicator or
// piecewise-constant phi; adaptive quadrature otherwise.
double chaos2_variance_time(const CovarianceKernel& kernel, const TestFunction& phi,
                            double tol = 1e-8);

// The same quantity through the spectral double integral
// (1/4pi) int (1+xy)^2 phi_hat(x+y)^2 mu(dx) mu(dy).
double chaos2_variance_spectral(const SpectralMeasure& mu, const TestFunction& phi,
                                double tol = 1e-7);

// c_phi T^2 int 1_{|T(x+y)|<1} (1+xy)^2 mu(dx) mu(dy); exact for atoms.
double bound_var_phi_mu(const SpectralMeasure& mu, double t_scale, double c_phi);

// Restriction of mu away from the +-1 band: the first of {|x| >= 1+eps},
// {|x| <= 1-eps} carrying positive mass (symmetrized so C_eps stays real).
SpectralMeasure offband_restriction(const SpectralMeasure& mu, double eps);

// c'_phi sin(1)^2 T int_{-T}^{T} C_eps(2t)^2 dt.
double bound_lin(const CovarianceKernel& kernel_eps, double t_scale, double c_phi_prime);

struct DeltaKernelReport {
    double max_abs_error = 0.0;
    double resolved_prefactor = 0.0;  // 1/(pi T): the constant that closes the identity
    double printed_prefactor = 0.0;   // 2 T^-1 / sqrt(2 pi), kept for comparison
};

// Verifies 1_{|Tx|<1}(1 - |Tx|) = (1/(pi T)) int sinc(t/T)^2 e^{2itx} dt on a
// grid by oscillatory quadrature. Self-test resolving the Fourier constant.
DeltaKernelReport delta_kernel_identity_check(double t_scale, const std::vector<double>& x_grid);

struct PeriodicCoefficient {
    double coefficient = 0.0;  // var(Q) (2 tau)^-2 (int phi)^2
    double var_q = 0.0;
    double mean_q = 0.0;
    double tau = 0.0;  // half-period of the process
};

// Monte Carlo estimate of the quadratic coefficient for commensurable atomic
// measures: Q is the zero count over one period [0, 2 tau).
PeriodicCoefficient periodic_quadratic_coefficient(const SpectralMeasure& mu,
                                                   const TestFunction& phi, int n_reps,
                                                   std::uint64_t seed,
                                                   const ExperimentOptions& opts = {});

} // namespace gpz
