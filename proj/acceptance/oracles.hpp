#pragma once

#include "hawkes/kernels.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/regvar.hpp"

#include <utility>
#include <vector>

namespace hawkes::oracles {

// Fractional Hawkes process, mu0 = 1 scale factored out.
double fractional_mean(double alpha, double beta, double mu0, double t);
// Five-term closed form; the t^{3 alpha + 1} term carries a single mu0.
double fractional_variance(double alpha, double beta, double mu0, double t);

// Critical kernel whose resolvent is R(t) = d + sum_i c_i t^{-p_i}/Gamma(1 - p_i), 0 < p_i < 1, c_i > 0.
// Then int_0^inf e^{-lambda t} Phi(t) dt = 1/(lambda + d + sum_i c_i lambda^{p_i}) and phi, Phi are
// obtained by inverting along the negative real axis.
class ResolventPowerKernel : public KernelModel {
public:
    struct Term {
        double c;
        double p;
    };
    ResolventPowerKernel(double d, std::vector<Term> terms, double tail_index, double sigma, double psi2);

    std::string name() const override { return "ResolventPower"; }
    double phi(double t) const override;
    double tail(double t) const override;
    double m() const override { return 1.0; }
    double tail_index() const override { return tail_index_; }
    double sigma() const override { return sigma_; }
    double psi2_infinity() const override { return psi2_; }
    double majorant(double t) const override;
    bool bounded_at_zero() const override { return false; }

    // I_R(t) = d t + sum_i c_i t^{1-p_i}/Gamma(2 - p_i)
    PowerSum ir() const;

private:
    double d_;
    std::vector<Term> terms_;
    double tail_index_, sigma_, psi2_;
};

// phi(t) = beta^2 t e^{-beta t}: m = 1, sigma = 2/beta, Psi_2(inf) = 6/beta^2.
class Gamma2Kernel : public KernelModel {
public:
    explicit Gamma2Kernel(double beta) : beta_(beta) {}

    std::string name() const override { return "Gamma2"; }
    double phi(double t) const override;
    double tail(double t) const override;
    double m() const override { return 1.0; }
    double tail_index() const override;
    double sigma() const override { return 2.0 / beta_; }
    double psi2_infinity() const override { return 6.0 / (beta_ * beta_); }
    double majorant(double t) const override;

    // I_R(t) = beta t/2 - (1 - e^{-2 beta t})/4
    double ir(double t) const;
    double ir2(double t) const;

private:
    double beta_;
};

// Exact (mean, variance) along the grid of times for a closed-form-I_R case of the second-order table.
struct CorrectionCase {
    std::string label;
    Kernel kernel;
    std::optional<SecondOrderParams> second_order;
    std::function<MomentPair(double)> exact;
};

// The four instances used for the correction-quality check: 1.a, 2.b, 2.d, 3.b.
std::vector<CorrectionCase> correction_cases(double mu0 = 1.0);

// |exact - (leading + correction)| / |correction|
std::pair<double, double> residual_ratios(const CorrectionCase& c, double mu0, double t);

// I_R of a mixed Mittag-Leffler kernel by inverting its Laplace transform along the cut.
double mixed_ml_ir_inverse_laplace(const MixedMittagLefflerParams& p, double t);

} // namespace hawkes::oracles
