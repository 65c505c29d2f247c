#pragma once

#include "hawkes/kernels.hpp"
#include "hawkes/regvar.hpp"
#include "hawkes/resolvent.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hawkes {

enum class MomentSource { Exact, FirstOrder, SecondOrder };

std::string to_string(MomentSource s);

// Mean and variance of N(t) at the grid nodes t_0 = 0, ..., t_n = T.
struct MomentCurve {
    TimeGrid grid;
    std::vector<double> mean;
    std::vector<double> variance;
    MomentSource source = MomentSource::Exact;
    Regime regime = Regime::Subcritical;
    double mu0 = 1.0;
    std::string regime_case;  // empty for exact curves
};

struct MomentPair {
    double mean = 0.0;
    double variance = 0.0;
};

// E[N] = mu0 (t + I_R^2),
// Var  = mu0 (t + 3 I_R^2 + 2 I_R*I_R + |I_R|^2*I_R + int_0^t |I_R|^2),
// convolutions of the piecewise-linear interpolant of I_R on the profile grid.
MomentCurve exact_moments(const ResolventProfile& profile, double mu0, Regime regime = Regime::Subcritical);

// Same identities with I_R, I_R^2 given as functions; convolutions by adaptive quadrature.
MomentPair exact_moments_at(const RealFn& IR, const RealFn& IR2, double mu0, double t);

// I_R(t) = sum_i coef_i t^{power_i}, powers > -1. Every convolution is a sum of beta functions.
struct PowerSum {
    std::vector<std::pair<double, double>> terms;  // (coef, power)

    double operator()(double t) const;
    PowerSum integral() const;  // int_0^t
};
MomentPair exact_moments_power_sum(const PowerSum& IR, double mu0, double t);

MomentPair first_order_approx(const Kernel& k, double mu0, double t);
MomentCurve first_order_curve(const Kernel& k, double mu0, const TimeGrid& grid);

// leading_coeff t^leading_exponent + correction(t)
struct SecondOrderTerm {
    double leading_coeff = 0.0;
    double leading_exponent = 0.0;
    RealFn correction;
    std::string correction_order;  // "o(1)" / "o(t)" when only a little-o bound is known

    double leading(double t) const;
    double approx(double t) const;
};

struct SecondOrderReport {
    SecondOrderTerm mean;
    SecondOrderTerm variance;
    std::string regime_case;  // "1.a" ... "3.b", or "mixed:<case>"
    Regime regime = Regime::Subcritical;
};

// Dispatches on (m, sigma, tail index, Psi_2(inf), rho). For strongly critical kernels the
// second-order description of Phi is required: second_order.alpha is the index of Phi (= -alpha),
// C_F its limit constant. Case 3 assumes I_R - C t^alpha is eventually monotone; this cannot be
// checked from the kernel and is taken as given.
SecondOrderReport second_order_approx(const Kernel& k, double mu0,
                                      const std::optional<SecondOrderParams>& second_order = std::nullopt);

MomentCurve second_order_curve(const SecondOrderReport& report, double mu0, const TimeGrid& grid);

// Second-order behaviour of I_R and I_R^2 at t, as deviations from their leading terms:
//   subcritical        I_R - m/(1-m),      I_R^2 - m t/(1-m)
//   weakly critical    I_R - t/sigma,      I_R^2 - t^2/(2 sigma)
//   strongly critical  I_R - C t^alpha,    I_R^2 - C' t^{alpha+1}
// ir_correction is absent when the kernel tail is not regularly varying (light tails).
struct ResolventEstimates {
    std::string regime_case;
    std::optional<double> ir_correction;
    std::optional<double> ir2_correction;
    // strongly critical only: I_R in 2RV_{alpha, rho}(A), I_R^2 in 2RV_{alpha+1, rho}(A')
    std::optional<SecondOrderParams> ir_2rv;
    std::optional<SecondOrderParams> ir2_2rv;
};

ResolventEstimates second_order_resolvent_estimates(const Kernel& k, double t,
                                                    const std::optional<SecondOrderParams>& second_order =
                                                        std::nullopt);

// Q = int_0^inf (m/(1-m) - I_R(s))^2 ds for subcritical kernels with finite sigma. Enters the
// constant variance correction of case 1.c next to sigma.
double resolvent_gap_energy(const Kernel& k);

// Leading constants of the strongly critical case: I_R ~ C_IR t^alpha, I_R^2 ~ C_IR2 t^{alpha+1}.
double strongly_critical_c_ir(double alpha, double c_phi);
double hp_constant_1(double alpha, double rho);
double hp_constant_2(double alpha, double rho);

// Mixed Mittag-Leffler kernels.
// I_R - t^{a1}/(C_beta Gamma(1+a1)): its large-t equivalent.
double mixed_ml_ir_deviation(const MixedMittagLefflerParams& p, double t);
SecondOrderReport mixed_ml_second_order(const MixedMittagLefflerParams& p, double mu0);

// Columns t, mean, variance, source, regime_case; t = h, ..., T.
void write_csv(const MomentCurve& curve, std::ostream& out, bool header = true);

} // namespace hawkes
