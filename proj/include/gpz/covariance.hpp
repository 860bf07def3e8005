#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gpz/spectral.hpp"

namespace gpz {

// Evaluator for the reduced covariance C and its first two derivatives,
// derived from a spectral measure. Closed-form cosine sums for atoms and
// builtin densities, exact trig moments of the interpolant for tabulated
// densities, tail-controlled truncated products for cosine products.
// Immutable and safe to share across threads.
class CovarianceKernel {
public:
    explicit CovarianceKernel(SpectralMeasure mu, double tolerance = 1e-10);

    const SpectralMeasure& source() const { return mu_; }
    double tolerance() const { return tol_; }
    double frequency_bound() const { return x_max_; }

    // C(t), C'(t) or C''(t). Evaluation uses |t|, so C is exactly even and
    // the odd orders exactly odd; eval(0, 1) == 0.
    double operator()(double t, int order = 0) const;

private:
    double eval_abs(double u, int order) const;  // u >= 0

    SpectralMeasure mu_;
    double tol_;
    double x_max_;
    std::vector<double> child_weights_;
    std::vector<CovarianceKernel> children_;  // mixture components
};

inline double eval(const CovarianceKernel& k, double t, int order = 0) { return k(t, order); }

enum class Verdict { Converges, Diverges, Inconclusive };
std::string to_string(Verdict v);

// Decision rule shared by all refinement diagnostics: relative change below
// 1e-3 between the last two levels reads as convergence, doubling as
// divergence, anything else is inconclusive.
Verdict refinement_verdict(const std::vector<double>& estimates);

struct DiagnosticReport {
    std::string quantity;
    struct Row {
        double parameter;
        double estimate;
        double error_bound;
    };
    std::vector<Row> rows;
    Verdict verdict = Verdict::Inconclusive;

    void write_csv(std::ostream& os) const;
    nlohmann::json to_json() const;
};

// Partial integrals of t^-2 (C'(t) - C''(0) t) on [delta 4^-n, delta].
DiagnosticReport geman_check(const CovarianceKernel& k, double delta, int levels = 8);

// Same refinement machinery on a caller-supplied integrand; geman_check is
// this applied to its own integrand. Test hook for engineered integrands.
DiagnosticReport geman_check_integrand(const std::function<double(double)>& integrand,
                                       double delta, int levels,
                                       const std::string& quantity = "geman");

enum class L2Which { C, Cpp, CPlusCpp };

// Partial integrals int_0^{t_max} q(t)^2 dt on an increasing t_max grid,
// q one of C, C'' or C + C''.
DiagnosticReport l2_condition_scan(const CovarianceKernel& k, L2Which which,
                                   const std::vector<double>& t_max_grid);

// T^-1 int_0^T C(t)^power dt, power 1 or 2.
double cesaro_mean(const CovarianceKernel& k, double t_max, int power);

// Local maxima of |C| on (0, t_max] with |C(t)| >= 1 - threshold, refined by
// golden-section search; sorted by location.
std::vector<std::pair<double, double>> recurrence_times(const CovarianceKernel& k,
                                                        double threshold, double t_max);

} // namespace gpz
