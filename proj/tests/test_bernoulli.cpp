#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gpz/bernoulli.hpp"
#include "gpz/errors.hpp"
#include "gpz/quadrature.hpp"

using namespace gpz;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("lambda sequences expose closed-form tails") {
    const auto geo3 = LambdaSequence::geometric(1.0 / 3.0);
    // R_n = 3^-n / 2 < 3^-n = lambda_n
    CHECK(geo3.lambda(4) == doctest::Approx(std::pow(3.0, -4)).epsilon(1e-14));
    CHECK(geo3.tail_l1(4) == doctest::Approx(0.5 * std::pow(3.0, -4)).epsilon(1e-14));

    const auto fac = LambdaSequence::factorial();
    // R_2 = pi (e - 5/2)
    CHECK(fac.tail_l1(2) == doctest::Approx(kPi * (std::exp(1.0) - 2.5)).epsilon(1e-13));
    CHECK(fac.tail_l1(2) == doctest::Approx(0.6857541259));

    const auto har = LambdaSequence::harmonic();
    CHECK(std::isinf(har.tail_l1(0)));
    CHECK(har.tail_power(0, 2) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-10));
    // Euler-Maclaurin tail vs direct summation
    double direct = 0.0;
    for (int k = 50001; k >= 11; --k) direct += 1.0 / (static_cast<double>(k) * k);
    CHECK(har.tail_power(10, 2) == doctest::Approx(direct + 1.0 / 50001.0).epsilon(1e-6));
}

TEST_CASE("cosine product evaluations") {
    const auto geo = LambdaSequence::geometric(0.5);
    SUBCASE("geometric(1/2) reproduces sin(t)/t") {
        const auto at_pi = cosprod_eval(geo, kPi, 1e-9);
        CHECK(std::abs(at_pi.value) < 1e-12);
        for (double t : {0.5, 2.0, 10.0, 40.0}) {
            const auto r = cosprod_eval(geo, t, 1e-10);
            CHECK(r.value == doctest::Approx(std::sin(t) / t).epsilon(1e-8));
        }
    }
    SUBCASE("factorial hits the exact zero factor at t=1") {
        const auto r = cosprod_eval(LambdaSequence::factorial(), 1.0, 1e-9);
        CHECK(std::abs(r.value) < 1e-15);
    }
    SUBCASE("harmonic at 0 and against a long direct product") {
        CHECK(cosprod_eval(LambdaSequence::harmonic(), 0.0, 1e-9).value == 1.0);
        const double t = 5.0;
        double direct = 1.0;
        const int big = 2'000'000;
        for (int k = 1; k <= big; ++k) direct *= std::cos(t / k);
        direct *= std::exp(-0.5 * t * t / big);  // quadratic tail of the remainder
        const auto r = cosprod_eval(LambdaSequence::harmonic(), t, 1e-9);
        CHECK(r.value == doctest::Approx(direct).epsilon(1e-5));
    }
    SUBCASE("value agrees with the characteristic function of Y_N") {
        const auto lam = LambdaSequence::factorial();
        const auto r = cosprod_eval(lam, 3.0, 1e-10);
        const int n = std::min(r.n_used, 20);
        const auto dist = yn_distribution(lam, n);
        double direct = 1.0;
        for (int k = n + 1; k <= r.n_used; ++k) direct *= std::cos(lam.lambda(k) * 3.0);
        CHECK(r.value == doctest::Approx(dist.char_function(3.0) * direct).epsilon(1e-10));
    }
}

TEST_CASE("vieta identity check") {
    std::vector<double> grid;
    for (double t = 0.0; t <= 50.0; t += 0.5) grid.push_back(t);
    CHECK(vieta_check(grid, 40) < 1e-9);
    CHECK(vieta_check({0.0}, 40) == 0.0);
    CHECK(vieta_check({2.0 * kPi}, 40) < 1e-9);
}

TEST_CASE("cantor criterion") {
    CHECK(cantor_criterion(LambdaSequence::geometric(1.0 / 3.0), 32).status ==
          CantorVerdict::Status::Holds);
    const auto half = cantor_criterion(LambdaSequence::geometric(0.5), 32);
    CHECK(half.status == CantorVerdict::Status::Fails);
    CHECK(half.fail_index == 1);
    CHECK(cantor_criterion(LambdaSequence::factorial(), 32).status ==
          CantorVerdict::Status::Holds);
    CHECK(cantor_criterion(LambdaSequence::harmonic(), 8).status ==
          CantorVerdict::Status::Fails);
    // finite sequences have R_n = 0 eventually
    CHECK(cantor_criterion(LambdaSequence::custom({1.0, 0.2}), 8).status ==
          CantorVerdict::Status::Fails);

    // holds iff ratio < 1/2, independent of n
    for (double a = 0.15; a < 0.9; a += 0.1) {
        const auto v = cantor_criterion(LambdaSequence::geometric(a), 16);
        CHECK((v.status == CantorVerdict::Status::Holds) == (a < 0.5));
    }
}

TEST_CASE("factorial recurrence sandwich") {
    // dominant factors of |C(10!)|: cos(pi/11) cos(pi/132) ~ 0.95922
    const auto r10 = factorial_recurrence(10);
    CHECK(r10.signed_value == doctest::Approx(0.95922).epsilon(2e-4));

    // independent long-product oracle for prod_{k>10} (1 - pi^2/k^2)
    double log_prod = 0.0;
    const int big = 10'000'000;
    for (int k = 11; k <= big; ++k) log_prod += std::log1p(-kPi * kPi / (static_cast<double>(k) * k));
    log_prod += -kPi * kPi / big;  // integral tail
    CHECK(r10.lower_bound == doctest::Approx(std::exp(log_prod)).epsilon(1e-6));

    double prev = 0.0;
    for (int n = 4; n <= 12; ++n) {
        const auto r = factorial_recurrence(n);
        CHECK(r.lower_bound <= r.signed_value + 1e-12);
        CHECK(r.signed_value <= 1.0);
        CHECK(r.signed_value >= prev - 1e-12);  // nondecreasing toward 1
        prev = r.signed_value;
        // computed prefix parity is opposite to the alternating convention
        CHECK(r.prefix_sign == -r.alternating_sign);
    }
    CHECK(factorial_recurrence(12).signed_value > 0.95);
    CHECK_THROWS_AS(factorial_recurrence(3), config_error);
}

TEST_CASE("yn distribution enumerates exactly") {
    SUBCASE("geometric(1/2), N=2") {
        const auto d = yn_distribution(LambdaSequence::geometric(0.5), 2);
        REQUIRE(d.points.size() == 4);
        const std::vector<double> expect{-0.75, -0.25, 0.25, 0.75};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(d.points[i] == doctest::Approx(expect[i]).epsilon(1e-15));
            CHECK(d.masses[i] == doctest::Approx(0.25).epsilon(1e-15));
        }
    }
    SUBCASE("factorial, N=3 vs brute-force enumeration") {
        const auto lam = LambdaSequence::factorial();
        const auto d = yn_distribution(lam, 3);
        REQUIRE(d.points.size() == 8);
        std::vector<double> brute;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1})
                for (int s3 : {-1, 1})
                    brute.push_back(s1 * lam.lambda(1) + s2 * lam.lambda(2) + s3 * lam.lambda(3));
        std::sort(brute.begin(), brute.end());
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(d.points[i] == doctest::Approx(brute[i]).epsilon(1e-14));
            CHECK(d.masses[i] == doctest::Approx(0.125).epsilon(1e-15));
        }
    }
    SUBCASE("N=1 and mass normalization") {
        const auto lam = LambdaSequence::geometric(0.4);
        const auto d1 = yn_distribution(lam, 1);
        REQUIRE(d1.points.size() == 2);
        CHECK(d1.points[0] == doctest::Approx(-0.4));
        CHECK(d1.masses[0] == 0.5);
        for (int n : {4, 10, 16}) {
            const auto d = yn_distribution(LambdaSequence::factorial(), n);
            CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK_THROWS_AS(yn_distribution(lam, 30), config_error);
    }
    SUBCASE("collision probability equals sum of squared masses") {
        const auto d = yn_distribution(LambdaSequence::geometric(0.4), 10);
        double sum_sq = 0.0;
        for (double m : d.masses) sum_sq += m * m;
        // brute-force P(Y = Y') over the merged support
        double brute = 0.0;
        for (std::size_t i = 0; i < d.points.size(); ++i) brute += d.masses[i] * d.masses[i];
        CHECK(sum_sq == doctest::Approx(brute));
        CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("small ball probabilities") {
    const auto fac = LambdaSequence::factorial();
    SUBCASE("factorial N_T = 8 regime is exactly 2^-8") {
        const auto sb = small_ball(fac, 1e4);
        CHECK(sb.n_t == 8);
        REQUIRE(sb.exact_prob.has_value());
        CHECK(std::abs(*sb.exact_prob - std::ldexp(1.0, -8)) < 1e-12);
        CHECK(sb.bound == std::ldexp(1.0, -8));
    }
    SUBCASE("geometric(1/2) boundary spacing still dominates the bound") {
        const auto sb = small_ball(LambdaSequence::geometric(0.5), 100.0);
        REQUIRE(sb.exact_prob.has_value());
        CHECK(*sb.exact_prob >= sb.bound);
        // lattice collapse: exact prob is the central binomial sum
        const auto d = yn_distribution(LambdaSequence::geometric(0.5), sb.n_t);
        double sum_sq = 0.0;
        for (double m : d.masses) sum_sq += m * m;
        CHECK(*sb.exact_prob == doctest::Approx(sum_sq).epsilon(1e-12));
    }
    SUBCASE("T too small") {
        CHECK_THROWS_AS(small_ball(fac, 1e-3), config_error);
    }
}

TEST_CASE("quadratic growth certificate") {
    SUBCASE("factorial certificate increases on the canonical grid") {
        const auto cert = quadratic_growth_certificate(LambdaSequence::factorial(),
                                                       {1e2, 1e4, 1e6, 1e8}, 0.5);
        REQUIRE(cert.rows.size() == 4);
        CHECK(cert.rows[0].n_t == 6);
        CHECK(cert.rows[1].n_t == 8);
        CHECK(cert.rows[2].n_t == 10);
        CHECK(cert.rows[3].n_t == 12);
        CHECK(cert.strictly_increasing);
        CHECK(cert.rows[0].value == doctest::Approx(10.0 / 64.0).epsilon(1e-12));
    }
    SUBCASE("geometric(1/2) crossover at epsilon = 1") {
        const auto low = quadratic_growth_certificate(LambdaSequence::geometric(0.5),
                                                      {1e2, 1e4, 1e6}, 0.5);
        CHECK_FALSE(low.strictly_increasing);
        const auto high = quadratic_growth_certificate(LambdaSequence::geometric(0.5),
                                                       {1e2, 1e4, 1e6}, 1.5);
        CHECK(high.strictly_increasing);
    }
    SUBCASE("epsilon = 2 rejected") {
        CHECK_THROWS_AS(
            quadratic_growth_certificate(LambdaSequence::factorial(), {1e2, 1e4}, 2.0),
            config_error);
    }
}
