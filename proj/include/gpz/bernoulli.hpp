#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gpz {

// Coefficient sequence of a symmetric Bernoulli convolution: the spectral
// measure is the law of Y = sum_k lambda_k eps_k with Rademacher eps_k, and the
// covariance is the cosine product prod_k cos(lambda_k t). Sequences are
// nonincreasing by construction; `scale` multiplies every term (frequency
// rescaling keeps the kind).
class LambdaSequence {
public:
    enum class Kind { Geometric, Factorial, Harmonic, Custom };

    static LambdaSequence geometric(double ratio, double scale = 1.0);
    static LambdaSequence factorial(double scale = 1.0);  // lambda_k = scale * pi / k!
    static LambdaSequence harmonic(double scale = 1.0);   // lambda_k = scale / k
    static LambdaSequence custom(std::vector<double> values, double scale = 1.0);

    Kind kind() const { return kind_; }
    double ratio() const { return ratio_; }
    double scale() const { return scale_; }
    const std::vector<double>& custom_values() const { return custom_; }

    // k is 1-based; zero beyond the end of a custom list.
    double lambda(int k) const;

    // R_n = sum_{k>n} lambda_k. +inf for harmonic sequences.
    double tail_l1(int n) const;
    double l1_total() const { return tail_l1(0); }
    double partial_l1(int n) const;

    // sum_{k>n} lambda_k^p for even p in {2,4,6,8,10}.
    double tail_power(int n, int p) const;
    double sum_l2sq() const { return tail_power(0, 2); }

    LambdaSequence scaled(double factor) const;
    std::string describe() const;

private:
    LambdaSequence() = default;
    Kind kind_ = Kind::Custom;
    double ratio_ = 0.0;   // geometric only
    double scale_ = 1.0;
    std::vector<double> custom_;
};

// Finitely supported symmetric law: sorted support with positive masses.
struct DiscreteDistribution {
    std::vector<double> points;
    std::vector<double> masses;

    double total_mass() const;
    // Characteristic function sum_i m_i cos(t x_i) (law is symmetric).
    double char_function(double t) const;
    double min_gap() const;
};

struct CosProdResult {
    double value = 0.0;
    int n_used = 0;
    double error_bound = 0.0;  // relative, from the tail-factor control
};

// Truncated evaluation of prod_k cos(lambda_k t). The truncation index keeps
// every dropped factor within the cos x >= 1 - x^2/2 regime; slowly decaying
// sequences get a log-series tail correction instead of a longer product.
CosProdResult cosprod_eval(const LambdaSequence& lam, double t, double tol);

// max over t_grid of |prod_{k<=N} cos(2^-k t) - sin(t)/t|.
double vieta_check(const std::vector<double>& t_grid, int truncation);

struct CantorVerdict {
    enum class Status { Holds, Fails, Undetermined };
    Status status = Status::Undetermined;
    int fail_index = 0;  // first n with lambda_n <= R_n (or R_n <= 0), when Fails
};

// Checks lambda_n > R_n > 0 for n <= n_max.
CantorVerdict cantor_criterion(const LambdaSequence& lam, int n_max);

struct FactorialRecurrence {
    double signed_value = 0.0;   // s_n * C(n!), s_n = sign of the finite prefix
    double lower_bound = 0.0;    // prod_{k>n} (1 - pi^2/k^2)
    int prefix_sign = 1;         // computed sign of prod_{k<=n} cos(pi n!/k!)
    int alternating_sign = 1;    // the (-1)^n convention
};

// Recurrence of the factorial cosine product at t = n!. Requires 4 <= n <= 20.
FactorialRecurrence factorial_recurrence(int n);

// Exact law of Y_N = sum_{k<=N} lambda_k eps_k. merge_tol <= 0 selects the
// default 1e-13 * partial_l1(N).
DiscreteDistribution yn_distribution(const LambdaSequence& lam, int n, double merge_tol = -1.0,
                                     int cap = 24);

struct SmallBallResult {
    int n_t = 0;
    std::optional<double> exact_prob;  // absent when N_T exceeds the cap
    double bound = 0.0;                // 2^-N_T
    bool truncated = false;
};

// N_T from the bracketing R_{N-1} >= 1/(4T) > R_N, the exact self-convolution
// probability P(|Y_N - Y_N'| < 2 R_N), and the 2^-N bound.
SmallBallResult small_ball(const LambdaSequence& lam, double t_scale, int cap = 24);

struct GrowthCertificate {
    double epsilon = 0.0;
    struct Row {
        double t_scale;
        int n_t;
        double value;  // T^eps * 2^-N_T
    };
    std::vector<Row> rows;
    bool strictly_increasing = false;
};

// Growth certificate L(T) = T^eps * 2^-N_T across a T grid, eps in (0,2).
GrowthCertificate quadratic_growth_certificate(const LambdaSequence& lam,
                                               const std::vector<double>& t_grid,
                                               double epsilon);

} // namespace gpz
