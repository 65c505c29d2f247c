#include "oracles.hpp"

#include "hawkes/error.hpp"
#include "hawkes/quadrature.hpp"
#include "hawkes/special_functions.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <complex>
#include <limits>

namespace hawkes::oracles {

namespace {
constexpr double pi = boost::math::constants::pi<double>();
using cplx = std::complex<double>;

// (1/(pi t)) int_0^inf e^{-u} w(u) Im F(u/t e^{-i pi}) du with weight w
template <class F>
double cut_integral(F&& f)
{
    return integrate_singular(f, 0.0, 1.0, 1e-13) + integrate_to_infinity(f, 1.0, 1e-13);
}
} // namespace

double fractional_mean(double alpha, double beta, double mu0, double t)
{
    return mu0 * beta * std::pow(t, alpha + 1.0) / gamma_fn(alpha + 2.0) + mu0 * t;
}

double fractional_variance(double alpha, double beta, double mu0, double t)
{
    const double g1 = gamma_fn(1.0 + alpha);
    return mu0 * (beta * beta * beta * beta_fn(1.0 + 2.0 * alpha, 1.0 + alpha) / (g1 * g1 * g1) *
                      std::pow(t, 3.0 * alpha + 1.0) +
                  2.0 * beta * beta * std::pow(t, 1.0 + 2.0 * alpha) / gamma_fn(2.0 + 2.0 * alpha) +
                  beta * beta * std::pow(t, 1.0 + 2.0 * alpha) / ((1.0 + 2.0 * alpha) * g1 * g1) +
                  3.0 * beta * std::pow(t, alpha + 1.0) / gamma_fn(alpha + 2.0) + t);
}

ResolventPowerKernel::ResolventPowerKernel(double d, std::vector<Term> terms, double tail_index, double sigma,
                                           double psi2)
    : d_(d), terms_(std::move(terms)), tail_index_(tail_index), sigma_(sigma), psi2_(psi2)
{
    if (!(d_ >= 0.0))
        throw InvalidSpec("ResolventPowerKernel: d must be >= 0");
    for (const Term& tm : terms_)
        if (!(tm.c > 0.0) || !(tm.p > 0.0 && tm.p < 1.0))
            throw InvalidSpec("ResolventPowerKernel: need c > 0 and p in (0, 1)");
}

double ResolventPowerKernel::tail(double t) const
{
    if (t <= 0.0)
        return 1.0;
    auto f = [this, t](double u) {
        if (u <= 0.0)
            return 0.0;
        const double r = u / t;
        cplx den(-r + d_, 0.0);
        for (const Term& tm : terms_)
            den += tm.c * std::polar(std::pow(r, tm.p), -pi * tm.p);
        return std::exp(-u) * (1.0 / den).imag();
    };
    return cut_integral(f) / (pi * t);
}

double ResolventPowerKernel::phi(double t) const
{
    if (t <= 0.0)
        return std::numeric_limits<double>::infinity();
    auto f = [this, t](double u) {
        if (u <= 0.0)
            return 0.0;
        const double r = u / t;
        cplx den(-r + d_, 0.0);
        for (const Term& tm : terms_)
            den += tm.c * std::polar(std::pow(r, tm.p), -pi * tm.p);
        return u * std::exp(-u) * (1.0 / den).imag();
    };
    return cut_integral(f) / (pi * t * t);
}

double ResolventPowerKernel::majorant(double t) const
{
    return phi(t);  // completely monotone
}

PowerSum ResolventPowerKernel::ir() const
{
    PowerSum s;
    if (d_ > 0.0)
        s.terms.emplace_back(d_, 1.0);
    for (const Term& tm : terms_)
        s.terms.emplace_back(tm.c / gamma_fn(2.0 - tm.p), 1.0 - tm.p);
    return s;
}

double Gamma2Kernel::phi(double t) const
{
    return t < 0.0 ? 0.0 : beta_ * beta_ * t * std::exp(-beta_ * t);
}

double Gamma2Kernel::tail(double t) const
{
    return t <= 0.0 ? 1.0 : (1.0 + beta_ * t) * std::exp(-beta_ * t);
}

double Gamma2Kernel::tail_index() const
{
    return std::numeric_limits<double>::infinity();
}

double Gamma2Kernel::majorant(double t) const
{
    return t <= 1.0 / beta_ ? beta_ * std::exp(-1.0) : phi(t);
}

double Gamma2Kernel::ir(double t) const
{
    return 0.5 * beta_ * t + 0.25 * std::expm1(-2.0 * beta_ * t);
}

double Gamma2Kernel::ir2(double t) const
{
    // int_0^t ir = beta t^2/4 - t/4 + (1 - e^{-2 beta t})/(8 beta)
    return 0.25 * beta_ * t * t - 0.25 * t - std::expm1(-2.0 * beta_ * t) / (8.0 * beta_);
}

std::vector<CorrectionCase> correction_cases(double mu0)
{
    std::vector<CorrectionCase> out;

    {  // 1.a: Mittag-Leffler kernel with mass 1/2
        const MittagLefflerParams p{0.5, 1.0, 0.5};
        const double q = (1.0 - p.mass) * p.beta;
        auto ir = [p, q](double t) {
            if (t <= 0.0)
                return 0.0;
            const double ta = std::pow(t, p.alpha);
            return p.mass * p.beta * ta * mittag_leffler(p.alpha, 1.0 + p.alpha, -q * ta);
        };
        auto ir2 = [p, q](double t) {
            if (t <= 0.0)
                return 0.0;
            const double ta = std::pow(t, p.alpha);
            return p.mass * p.beta * t * ta * mittag_leffler(p.alpha, 2.0 + p.alpha, -q * ta);
        };
        out.push_back({"1.a", build_kernel(KernelSpec{p}), std::nullopt,
                       [ir, ir2, mu0](double t) { return exact_moments_at(ir, ir2, mu0, t); }});
    }
    {  // 2.b: I_R = t/sigma + c t^{2-a}/Gamma(3-a), a = 1.5, sigma = 1
        const double a = 1.5, sigma = 1.0, c = 1.0;
        auto k = std::make_shared<ResolventPowerKernel>(1.0 / sigma,
                                                        std::vector<ResolventPowerKernel::Term>{{c, a - 1.0}}, a,
                                                        sigma, std::numeric_limits<double>::infinity());
        const PowerSum ir = k->ir();
        out.push_back({"2.b", Kernel(k), std::nullopt,
                       [ir, mu0](double t) { return exact_moments_power_sum(ir, mu0, t); }});
    }
    {  // 2.d: Gamma(2) kernel
        auto k = std::make_shared<Gamma2Kernel>(1.0);
        out.push_back({"2.d", Kernel(k), std::nullopt, [k, mu0](double t) {
                           return exact_moments_at([k](double s) { return k->ir(s); },
                                                   [k](double s) { return k->ir2(s); }, mu0, t);
                       }});
    }
    {  // 3.b: I_R = c1 t^a/Gamma(1+a) + c2 t^{a+rho}/Gamma(1+a+rho), a = 0.6, rho = -0.3
        const double a = 0.6, rho = -0.3, c1 = 1.0, c2 = 1.0;
        auto k = std::make_shared<ResolventPowerKernel>(
            0.0, std::vector<ResolventPowerKernel::Term>{{c1, 1.0 - a}, {c2, 1.0 - a - rho}}, a,
            std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
        SecondOrderParams so;
        so.alpha = -a;
        so.rho = rho;
        so.A = PowerAuxiliary{-rho * (c2 / c1) * gamma_fn(1.0 - a) / gamma_fn(1.0 - a + rho), rho}.fn();
        so.C_F = 1.0 / (c1 * gamma_fn(1.0 - a));
        const PowerSum ir = k->ir();
        out.push_back({"3.b", Kernel(k), so, [ir, mu0](double t) { return exact_moments_power_sum(ir, mu0, t); }});
    }
    return out;
}

std::pair<double, double> residual_ratios(const CorrectionCase& c, double mu0, double t)
{
    const SecondOrderReport r = second_order_approx(c.kernel, mu0, c.second_order);
    if (r.regime_case != c.label)
        throw UnmatchedCase("case " + c.label + " dispatched as " + r.regime_case);
    const MomentPair ex = c.exact(t);
    const double cm = r.mean.correction(t), cv = r.variance.correction(t);
    return {std::fabs(ex.mean - (r.mean.leading(t) + cm)) / std::fabs(cm),
            std::fabs(ex.variance - (r.variance.leading(t) + cv)) / std::fabs(cv)};
}

double mixed_ml_ir_inverse_laplace(const MixedMittagLefflerParams& p, double t)
{
    if (t <= 0.0)
        return 0.0;
    const double a1 = p.alpha1, a2 = p.alpha2, b1 = p.beta1, b2 = p.beta2;
    // Laplace transform of R: b1 b2 / (b1 l^{a2} + b2 l^{a1} + l^{a1+a2});
    // I_R(t) = (1/pi) int_0^inf (1 - e^{-u})/u Im L_R(u/t e^{-i pi}) du
    auto f = [=](double u) {
        if (u <= 0.0)
            return 0.0;
        const double r = u / t;
        const cplx x1 = std::polar(std::pow(r, a1), -pi * a1);
        const cplx x2 = std::polar(std::pow(r, a2), -pi * a2);
        const cplx lr = b1 * b2 / (b1 * x2 + b2 * x1 + x1 * x2);
        return -std::expm1(-u) / u * lr.imag();
    };
    return cut_integral(f) / pi;
}

} // namespace hawkes::oracles
