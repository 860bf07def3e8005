#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gpz/chaos.hpp"
#include "gpz/errors.hpp"

using namespace gpz;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

SpectralMeasure two_atoms_normalized() {
    return normalize(SpectralMeasure::atomic({{1.0, 0.5}, {std::sqrt(2.0), 0.5}})).first;
}
} // namespace

TEST_CASE("hermite coefficient table") {
    const auto h = HermiteCoefficients::zero_counting();
    CHECK(h.a.at(0) == 1.0 / std::sqrt(2.0 * kPi));
    CHECK(h.a.at(2) == 1.0 / (2.0 * std::sqrt(2.0 * kPi)));
    CHECK(h.d.at(0) == 1.0);
    CHECK(h.d.at(2) == -0.5);
    CHECK(h.a.count(1) == 0);
    CHECK_THROWS_AS(HermiteCoefficients::zero_counting(4), config_error);
}

TEST_CASE("kac-rice mean") {
    const CovarianceKernel unit(SpectralMeasure::atomic({{1.0, 1.0}}));
    CHECK(kac_rice_mean(unit, kPi) == doctest::Approx(2.0).epsilon(1e-14));
    // raw sinc measure: -C''(0) = 1/3
    const CovarianceKernel sinc_k(SpectralMeasure::uniform_density(1.0));
    CHECK(kac_rice_mean(sinc_k, 10.0) ==
          doctest::Approx(20.0 / (kPi * kSqrt3)).epsilon(1e-12));
    const CovarianceKernel flat(SpectralMeasure::atomic({{0.0, 1.0}}));
    CHECK_THROWS_AS(kac_rice_mean(flat, 1.0), numerical_error);
}

TEST_CASE("convolution squares") {
    const auto box = TestFunction::indicator(-3.0, 3.0);
    CHECK(box.conv_square(0.0) == doctest::Approx(6.0));
    CHECK(box.conv_square(6.0) == 0.0);
    CHECK(box.conv_square(-6.0) == 0.0);
    CHECK(box.conv_square(1.5) == doctest::Approx(4.5));
    const auto shifted = TestFunction::indicator(0.0, 1.0);
    CHECK(shifted.conv_square(1.0) == doctest::Approx(1.0));
    // invariants for even phi: conv(0) = int phi^2 and conv is even
    const auto even_pc =
        TestFunction::piecewise_constant({-2.0, -1.0, 1.0, 2.0}, {1.0, 3.0, 1.0});
    CHECK(even_pc.conv_square(0.0) == doctest::Approx(even_pc.integral_sq()).epsilon(1e-14));
    CHECK(even_pc.conv_square(1.3) == doctest::Approx(even_pc.conv_square(-1.3)).epsilon(1e-14));
    const auto pc = TestFunction::piecewise_constant({0.0, 1.0, 2.0}, {1.0, 2.0});
    CHECK(pc.fourier(0.0).real() == doctest::Approx(pc.integral()).epsilon(1e-14));
    CHECK(pc.fourier(0.0).imag() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("second-chaos variance, closed forms") {
    const CovarianceKernel cos_k(SpectralMeasure::atomic({{1.0, 1.0}}));
    for (double T : {kPi / 4.0, kPi / 2.0, 1.0, 5.0}) {
        const auto phi = TestFunction::indicator(-T, T);
        const double expect = (1.0 - std::cos(4.0 * T)) / (4.0 * kPi);
        CHECK(chaos2_variance_time(cos_k, phi) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        // spectral route gives sin^2(2T) / (2 pi), the same number
        CHECK(chaos2_variance_spectral(cos_k.source(), phi) ==
              doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
    // degenerate case: bounded in T by 1/(2 pi)
    double worst = 0.0;
    for (double T = 0.5; T < 30.0; T += 0.73) {
        worst = std::max(worst,
                         chaos2_variance_time(cos_k, TestFunction::indicator(-T, T)));
    }
    CHECK(worst <= 1.0 / (2.0 * kPi) + 1e-10);
}

TEST_CASE("parseval agreement between time and spectral routes") {
    const auto phi = TestFunction::indicator(-10.0, 10.0);
    SUBCASE("gaussian measure, against the analytic value") {
        const SpectralMeasure mu = SpectralMeasure::gaussian_density(1.0);
        const CovarianceKernel k(mu);
        const double vt = chaos2_variance_time(k, phi, 1e-9);
        // (1/4pi) int e^{-z^2} (z^4 - 4 z^2 + 2)(20 - |z|)+ dz = 15/(4 sqrt(pi))
        CHECK(vt == doctest::Approx(15.0 / (4.0 * std::sqrt(kPi))).epsilon(1e-7));
        const double vs = chaos2_variance_spectral(mu, phi, 1e-7);
        CHECK(std::abs(vt - vs) < 1e-6);
    }
    SUBCASE("two atoms, exact on both sides") {
        const SpectralMeasure mu = two_atoms_normalized();
        const CovarianceKernel k(mu);
        const double vt = chaos2_variance_time(k, phi);
        const double vs = chaos2_variance_spectral(mu, phi);
        CHECK(std::abs(vt - vs) < 1e-9);
        CHECK(vt >= -1e-12);
    }
    SUBCASE("normalized uniform density") {
        const SpectralMeasure mu = SpectralMeasure::uniform_density(kSqrt3);
        const CovarianceKernel k(mu);
        const double vt = chaos2_variance_time(k, phi, 1e-9);
        const double vs = chaos2_variance_spectral(mu, phi, 1e-7);
        CHECK(std::abs(vt - vs) < 1e-6);
        CHECK(vt >= 0.0);
    }
    SUBCASE("zero-mean phi still yields a finite term") {
        const auto odd = TestFunction::piecewise_constant({-10.0, 0.0, 10.0}, {-1.0, 1.0});
        const CovarianceKernel k(SpectralMeasure::gaussian_density(1.0));
        const double v = chaos2_variance_time(k, odd, 1e-8);
        CHECK(std::isfinite(v));
        CHECK(v >= -1e-10);
    }
}

TEST_CASE("band-restricted lower bound pieces") {
    SUBCASE("bound_var_phi_mu on atom pairs") {
        const double c_phi = phi_constants(TestFunction::indicator(-1.0, 1.0)).c_phi;
        // pair at +-0.8 with mass 0.3 per side: both zero-sum pairs survive
        const SpectralMeasure mu = SpectralMeasure::atomic({{0.8, 0.6}});
        const double T = 50.0;
        const double expect = c_phi * T * T * 2.0 * std::pow(1.0 - 0.64, 2) * 0.09;
        CHECK(bound_var_phi_mu(mu, T, c_phi) == doctest::Approx(expect).epsilon(1e-12));
        // atoms at +-1 contribute nothing
        CHECK(bound_var_phi_mu(SpectralMeasure::atomic({{1.0, 1.0}}), 10.0, c_phi) == 0.0);
        // a lone atom at the origin pairs with itself
        const SpectralMeasure origin = SpectralMeasure::atomic({{0.0, 0.5}});
        CHECK(bound_var_phi_mu(origin, 10.0, c_phi) ==
              doctest::Approx(c_phi * 100.0 * 0.25).epsilon(1e-12));
    }
    SUBCASE("offband restriction picks the first populated band") {
        const auto mu_eps = offband_restriction(two_atoms_normalized(), 0.1);
        const auto atoms = atom_list(mu_eps);
        REQUIRE(atoms.size() == 1);
        CHECK(atoms[0].frequency == doctest::Approx(std::sqrt(2.0 / 3.0) * std::sqrt(2.0)));
        CHECK(total_mass(mu_eps) == doctest::Approx(0.5));

        const auto slice = offband_restriction(SpectralMeasure::uniform_density(kSqrt3), 0.1);
        CHECK(total_mass(slice) == doctest::Approx((kSqrt3 - 1.1) / kSqrt3).epsilon(1e-10));

        CHECK_THROWS_AS(offband_restriction(SpectralMeasure::atomic({{1.0, 1.0}}), 0.1),
                        config_error);
    }
    SUBCASE("bound_lin closed form for an atomic restriction") {
        const double x0 = 0.8165;
        const CovarianceKernel k_eps(SpectralMeasure::atomic({{x0, 0.5}}));
        const double cpp = 1.0;  // arbitrary positive constant
        const double T = 30.0;
        // int_{-T}^{T} (cos(2 x0 t)/2)^2 dt = (T + sin(4 x0 T)/(4 x0)) / 4
        const double integral = 0.25 * (T + std::sin(4.0 * x0 * T) / (4.0 * x0));
        const double expect = cpp * std::sin(1.0) * std::sin(1.0) * T * integral;
        CHECK(bound_lin(k_eps, T, cpp) == doctest::Approx(expect).epsilon(1e-5));
    }
    SUBCASE("growth rates: atoms quadratic, density slice linear") {
        const double cpp = 0.5;
        const CovarianceKernel atom_eps(SpectralMeasure::atomic({{0.8165, 0.5}}));
        const double a1 = bound_lin(atom_eps, 100.0, cpp);
        const double a2 = bound_lin(atom_eps, 200.0, cpp);
        CHECK(a2 / a1 > 3.5);  // ~quadratic

        const auto slice = offband_restriction(SpectralMeasure::uniform_density(kSqrt3), 0.1);
        const CovarianceKernel dens_eps(slice);
        const double d1 = bound_lin(dens_eps, 200.0, cpp);
        const double d2 = bound_lin(dens_eps, 400.0, cpp);
        CHECK(d2 / d1 > 1.8);  // at least linear
        CHECK(d2 / d1 < 2.3);
    }
}

TEST_CASE("triangle kernel fourier identity") {
    const auto rep1 = delta_kernel_identity_check(1.0, {0.0, 0.25, 0.5, 0.9, 1.0, 1.5});
    CHECK(rep1.max_abs_error < 5e-4);
    const auto rep2 = delta_kernel_identity_check(2.0, {0.0, 0.1, 0.25, 0.5, 0.75});
    CHECK(rep2.max_abs_error < 5e-4);
    CHECK(rep1.resolved_prefactor == doctest::Approx(1.0 / kPi));
    // the printed prefactor differs from the resolved one by sqrt(2 pi)
    CHECK(rep1.printed_prefactor / rep1.resolved_prefactor ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("periodic quadratic coefficient") {
    const auto phi = TestFunction::indicator(-1.0, 1.0);
    SUBCASE("degenerate cosine has a deterministic period count") {
        const auto pc = periodic_quadratic_coefficient(SpectralMeasure::atomic({{1.0, 1.0}}),
                                                       phi, 200, 42);
        CHECK(pc.tau == doctest::Approx(kPi).epsilon(1e-12));
        CHECK(pc.mean_q == doctest::Approx(2.0));
        CHECK(pc.var_q == 0.0);
        CHECK(pc.coefficient == 0.0);
    }
    SUBCASE("two commensurable atoms fluctuate") {
        const SpectralMeasure mu = SpectralMeasure::atomic({{1.0, 0.5}, {2.0, 0.5}});
        const auto pc = periodic_quadratic_coefficient(mu, phi, 400, 7);
        CHECK(pc.tau == doctest::Approx(kPi).epsilon(1e-12));
        CHECK(pc.var_q > 0.05);
        CHECK(pc.coefficient ==
              doctest::Approx(pc.var_q * 4.0 / (4.0 * kPi * kPi)).epsilon(1e-12));
    }
    SUBCASE("zero-mean phi kills the coefficient") {
        const auto odd_phi = TestFunction::piecewise_constant({-1.0, 0.0, 1.0}, {-1.0, 1.0});
        const SpectralMeasure mu = SpectralMeasure::atomic({{1.0, 0.5}, {2.0, 0.5}});
        const auto pc = periodic_quadratic_coefficient(mu, odd_phi, 100, 7);
        CHECK(pc.coefficient == 0.0);
    }
    SUBCASE("incommensurable frequencies are rejected") {
        const SpectralMeasure mu = SpectralMeasure::atomic({{1.0, 0.5}, {std::sqrt(2.0), 0.5}});
        CHECK_THROWS_AS(periodic_quadratic_coefficient(mu, phi, 100, 7), config_error);
    }
}
