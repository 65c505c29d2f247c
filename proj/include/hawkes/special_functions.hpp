#pragma once

#include <vector>

namespace hawkes {

// Gamma function. Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double z);

// 1/Gamma(z), zero at the poles.
double rgamma_fn(double z);

// Beta function B(a, b) for a, b > 0.
double beta_fn(double a, double b);

struct MLEvalPolicy {
    double series_cutoff = 5.0;
    int asymptotic_terms = 4;     // minimum number of terms of the large-|x| expansion
    int max_series_terms = 2000;
    double tolerance = 1e-11;     // relative error budget a branch must certify before it is trusted

    void validate() const;
};

// Two-parameter Mittag-Leffler function E_{alpha,kappa}(x) on the real axis,
// for 0 < alpha <= 1, kappa > 0 and x <= series_cutoff.
//
// Three evaluators are available:
//   series      power series in long double with a running rounding-error bound
//   asymptotic  large-|x| expansion for x < 0, truncated adaptively
//   integral    real integral representation for x < 0, 0 < alpha < 1
// operator() picks the first evaluator whose error estimate meets policy.tolerance.
class MittagLeffler {
public:
    struct Estimate {
        double value = 0.0;
        double error = 0.0;   // estimated absolute error
        bool converged = false;
    };

    MittagLeffler(double alpha, double kappa, MLEvalPolicy policy = {});

    double operator()(double x) const;

    double alpha() const { return alpha_; }
    double kappa() const { return kappa_; }
    const MLEvalPolicy& policy() const { return policy_; }

    Estimate series(double x) const;
    Estimate asymptotic(double x) const;
    double integral(double x) const;

    // Evaluation as done on each side of x = -series_cutoff. Both fall back to
    // the integral representation when their own error estimate is too large.
    double series_branch(double x) const;
    double asymptotic_branch(double x) const;

private:
    double alpha_;
    double kappa_;
    MLEvalPolicy policy_;
    std::vector<long double> coeff_;      // 1/Gamma(kappa + k alpha)
    std::vector<long double> asym_coeff_; // 1/Gamma(kappa - k alpha), k >= 1
};

// Free-function form; reuses a per-thread cache of MittagLeffler objects.
double mittag_leffler(double alpha, double kappa, double x, const MLEvalPolicy& policy = {});

} // namespace hawkes
