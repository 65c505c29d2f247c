#include "hawkes/regvar.hpp"

#include "hawkes/error.hpp"
#include "hawkes/special_functions.hpp"
#include "hawkes/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

void SecondOrderParams::validate(bool at_zero) const
{
    if (!std::isfinite(alpha))
        throw InvalidSpec("SecondOrderParams: alpha must be finite");
    if (!std::isfinite(rho) || (at_zero ? !(rho >= 0.0) : !(rho <= 0.0)))
        throw InvalidSpec(at_zero ? "SecondOrderParams: rho must be >= 0 at zero" : "SecondOrderParams: rho must be <= 0");
    if (!A)
        throw InvalidSpec("SecondOrderParams: auxiliary function A is required");
    if (C_F && !(*C_F != 0.0 && std::isfinite(*C_F)))
        throw InvalidSpec("SecondOrderParams: C_F must be finite and nonzero");
}

double PowerAuxiliary::operator()(double t) const
{
    return c * std::pow(t, rho);
}

double PowerAuxiliary::log_integral(double t) const
{
    if (rho == 0.0)
        return c * std::log(t);
    return c * std::expm1(rho * std::log(t)) / rho;
}

RealFn PowerAuxiliary::fn() const
{
    return [a = *this](double t) { return a(t); };
}

double second_order_target(double alpha, double rho, double x)
{
    if (!(x > 0.0))
        throw DomainError("second_order_target: x must be positive");
    const double lx = std::log(x);
    if (rho == 0.0)
        return std::pow(x, alpha) * lx;
    return std::pow(x, alpha) * std::expm1(rho * lx) / rho;
}

double second_order_limit(const RealFn& F, const SecondOrderParams& p, double t, double x)
{
    if (!(x > 0.0) || !(t > 0.0))
        throw DomainError("second_order_limit: t and x must be positive");
    const double Ft = F(t);
    const double At = p.A(t);
    if (Ft == 0.0)
        throw DomainError("second_order_limit: F(t) = 0");
    if (At == 0.0)
        throw DomainError("second_order_limit: A(t) = 0");
    return (F(t * x) / Ft - std::pow(x, p.alpha)) / At;
}

double pi_variation_prelimit(const RealFn& F, const RealFn& A, double t, double x)
{
    const double Ft = F(t);
    const double At = A(t);
    if (Ft == 0.0 || At == 0.0)
        throw DomainError("pi_variation_prelimit: F(t) or A(t) is zero");
    return (F(t * x) - Ft) / (Ft * At);
}

void MembershipPolicy::validate() const
{
    if (t_values.empty() || x_values.empty())
        throw InvalidSpec("MembershipPolicy: empty sample grid");
    if (!(rel_tol > 0.0))
        throw InvalidSpec("MembershipPolicy: rel_tol must be positive");
    for (double t : t_values)
        if (!(t > 0.0))
            throw InvalidSpec("MembershipPolicy: t values must be positive");
    for (double x : x_values)
        if (!(x > 0.0) || x == 1.0)
            throw InvalidSpec("MembershipPolicy: x values must be positive and != 1");
}

MembershipPolicy MembershipPolicy::at_zero()
{
    MembershipPolicy p;
    p.t_values = {1e-4, 1e-5, 1e-6};
    return p;
}

namespace {

MembershipReport run_membership(const RealFn& F, const SecondOrderParams& p, const MembershipPolicy& policy,
                                bool at_zero)
{
    policy.validate();
    p.validate(at_zero);
    MembershipReport report;
    report.pass = true;
    for (double x : policy.x_values) {
        const double target = second_order_target(p.alpha, p.rho, x);
        double prev = std::numeric_limits<double>::infinity();
        for (double t : policy.t_values) {
            MembershipSample s;
            s.t = t;
            s.x = x;
            s.target = target;
            s.value = second_order_limit(F, p, t, x);
            s.rel_error = std::fabs(s.value - target) / std::fabs(target);
            if (!(s.rel_error <= policy.rel_tol)) {
                report.pass = false;
                if (report.reason.empty())
                    report.reason = "relative error above tolerance";
            }
            if (policy.require_monotone && s.rel_error > prev && s.rel_error > policy.noise_floor) {
                report.pass = false;
                if (report.reason.empty())
                    report.reason = "error does not decrease along t";
            }
            prev = s.rel_error;
            report.samples.push_back(s);
        }
    }
    return report;
}

} // namespace

MembershipReport check_membership(const RealFn& F, const SecondOrderParams& p, const MembershipPolicy& policy)
{
    return run_membership(F, p, policy, false);
}

MembershipReport check_membership_at_zero(const RealFn& F, const SecondOrderParams& p, const MembershipPolicy& policy)
{
    // The pre-limit is the same expression; only the sampling direction differs.
    return run_membership(F, p, policy, true);
}

double KaramataRepresentation::operator()(double t) const
{
    if (!(t > 0.0))
        throw DomainError("KaramataRepresentation: t must be positive");
    return zeta1_ * (1.0 + zeta2_ * A1_(t)) * std::exp(inner_(t)) * std::pow(t, alpha_);
}

RealFn KaramataRepresentation::fn() const
{
    return [r = *this](double t) { return r(t); };
}

SecondOrderParams KaramataRepresentation::params() const
{
    SecondOrderParams p;
    p.alpha = alpha_;
    p.rho = rho_;
    const double scale = 1.0 + rho_ * zeta2_;
    p.A = [A1 = A1_, scale](double t) { return scale * A1(t); };
    if (inner_limit_)
        p.C_F = zeta1_ * std::exp(*inner_limit_);
    return p;
}

KaramataRepresentation build_karamata_representation(double alpha, double zeta1, double zeta2, double rho, RealFn A1,
                                                     std::optional<RealFn> inner_integral)
{
    if (!(zeta1 != 0.0) || !std::isfinite(zeta1))
        throw InvalidSpec("build_karamata_representation: zeta1 must be nonzero");
    if (!std::isfinite(zeta2))
        throw InvalidSpec("build_karamata_representation: zeta2 must be finite");
    if (!(rho <= 0.0))
        throw InvalidSpec("build_karamata_representation: rho must be <= 0");
    if (!(1.0 + rho * zeta2 > 0.0))
        throw InvalidSpec("build_karamata_representation: need 1 + rho zeta2 > 0");
    if (!A1)
        throw InvalidSpec("build_karamata_representation: A1 is required");
    KaramataRepresentation r;
    r.alpha_ = alpha;
    r.zeta1_ = zeta1;
    r.zeta2_ = zeta2;
    r.rho_ = rho;
    r.A1_ = A1;
    if (inner_integral) {
        r.inner_ = *inner_integral;
    } else {
        r.inner_ = [A1](double t) {
            auto g = [&A1](double s) { return A1(s) / s; };
            if (t == 1.0)
                return 0.0;
            return t > 1.0 ? integrate_log_panels(g, 1.0, t, 8, 1e-12) : -integrate_log_panels(g, t, 1.0, 8, 1e-12);
        };
    }
    if (rho < 0.0) {
        if (inner_integral) {
            // int_1^inf A1/s through the closed form at a very large argument
            r.inner_limit_ = r.inner_(1e300);
        } else {
            r.inner_limit_ = integrate_log_panels([&A1](double s) { return A1(s) / s; }, 1.0, 1e12, 8, 1e-12) +
                             integrate_to_infinity([&A1](double s) { return A1(s) / s; }, 1e12, 1e-12);
        }
        if (!std::isfinite(*r.inner_limit_))
            r.inner_limit_.reset();
    }
    return r;
}

KaramataRepresentation build_karamata_representation(double alpha, double zeta1, double zeta2,
                                                     const PowerAuxiliary& A1)
{
    return build_karamata_representation(alpha, zeta1, zeta2, A1.rho, A1.fn(),
                                         RealFn([A1](double t) { return A1.log_integral(t); }));
}

std::string to_string(KaramataDirection d)
{
    return d == KaramataDirection::Up ? "Up" : "Down";
}

double karamata_ratio_target(const SecondOrderParams& p, double theta, KaramataDirection direction)
{
    const double a = p.alpha + theta;
    const double r = a / (a + p.rho);
    return direction == KaramataDirection::Up ? r : -r;
}

double second_order_karamata_ratio(const RealFn& F, const SecondOrderParams& p, double theta, double t0, double t,
                                   KaramataDirection direction, std::optional<RealFn> integral)
{
    p.validate();
    const double a = p.alpha + theta;
    if (direction == KaramataDirection::Up) {
        if (!(theta > -p.alpha - p.rho))
            throw DomainError("second_order_karamata_ratio: Up needs theta > -alpha - rho");
        if (!(t0 >= 0.0) || !(t > t0))
            throw DomainError("second_order_karamata_ratio: need 0 <= t0 < t");
    } else {
        if (!(theta < -p.alpha))
            throw DomainError("second_order_karamata_ratio: Down needs theta < -alpha (integral diverges)");
        if (!(t > 0.0))
            throw DomainError("second_order_karamata_ratio: t must be positive");
    }
    auto g = [&F, theta](double s) { return std::pow(s, theta - 1.0) * F(s); };
    double I = 0.0;
    if (integral) {
        I = (*integral)(t);
    } else if (direction == KaramataDirection::Up) {
        if (t0 == 0.0) {
            const double split = std::min(1.0, t);
            I = integrate_singular(g, 0.0, split, 1e-12);
            if (t > split)
                I += integrate_log_panels(g, split, t, 8, 1e-12);
        } else {
            I = integrate_log_panels(g, t0, t, 8, 1e-12);
        }
    } else {
        const double far = t * 1e8;
        I = integrate_log_panels(g, t, far, 8, 1e-12);
        // beyond far: s^{theta-1} F(s) ~ regularly varying with index a - 1 < -1
        I += std::pow(far, theta) * F(far) / (-a);
    }
    if (!(I != 0.0) || !std::isfinite(I))
        throw NumericalError("second_order_karamata_ratio: integral vanished or diverged");
    const double At = p.A(t);
    if (At == 0.0)
        throw DomainError("second_order_karamata_ratio: A(t) = 0");
    const double lead = std::pow(t, theta) * F(t) / I;
    return direction == KaramataDirection::Up ? (lead - a) / At : (lead + a) / At;
}

SecondOrderParams convolve_2rv_params(const SecondOrderParams& p1, const SecondOrderParams& p2,
                                      const std::vector<double>& check_grid)
{
    p1.validate();
    p2.validate();
    for (const SecondOrderParams* p : {&p1, &p2}) {
        if (!(p->alpha > -1.0))
            throw DomainError("convolve_2rv_params: need alpha > -1");
        if (!(p->rho < 0.0 && p->rho > -p->alpha - 1.0))
            throw DomainError("convolve_2rv_params: need rho in (-alpha - 1, 0)");
    }
    const double b0 = beta_fn(p1.alpha + 1.0, p2.alpha + 1.0);
    const double w1 = beta_fn(p1.alpha + p1.rho + 1.0, p2.alpha + 1.0) / b0;
    const double w2 = beta_fn(p1.alpha + 1.0, p2.alpha + p2.rho + 1.0) / b0;
    RealFn A1 = p1.A, A2 = p2.A;
    RealFn A0 = [A1, A2, w1, w2](double t) { return w1 * A1(t) + w2 * A2(t); };

    // comparability A0 ~ |A1| + |A2|: ratio bounded away from 0 with a fixed sign
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    int sign = 0;
    for (double t : check_grid) {
        const double den = std::fabs(A1(t)) + std::fabs(A2(t));
        const double num = A0(t);
        if (den == 0.0)
            throw DomainError("convolve_2rv_params: auxiliary functions vanish");
        const double r = num / den;
        const int s = (r > 0.0) - (r < 0.0);
        if (sign == 0)
            sign = s;
        if (s == 0 || s != sign)
            throw DomainError("convolve_2rv_params: A0 not comparable to |A1| + |A2| (cancellation)");
        lo = std::min(lo, std::fabs(r));
        hi = std::max(hi, std::fabs(r));
    }
    if (lo < 1e-6 * std::max(1.0, hi))
        throw DomainError("convolve_2rv_params: A0 not comparable to |A1| + |A2| (cancellation)");

    SecondOrderParams out;
    out.alpha = p1.alpha + p2.alpha + 1.0;
    out.rho = std::max(p1.rho, p2.rho);
    out.A = A0;
    if (p1.C_F && p2.C_F)
        out.C_F = *p1.C_F * *p2.C_F * b0;
    return out;
}

SecondOrderParams power_2rv_params(const SecondOrderParams& p, double theta)
{
    p.validate();
    if (theta == 0.0 || !std::isfinite(theta))
        throw DomainError("power_2rv_params: theta must be nonzero");
    if (!(p.rho < 0.0))
        throw DomainError("power_2rv_params: need rho < 0");
    SecondOrderParams out;
    out.alpha = theta * p.alpha;
    out.rho = p.rho;
    RealFn A = p.A;
    out.A = [A, theta](double t) { return theta * A(t); };
    if (p.C_F)
        out.C_F = std::pow(std::fabs(*p.C_F), theta);
    return out;
}

double representation_auxiliary(const RealFn& G, double alpha, double rho, double C, double t)
{
    if (rho == 0.0)
        throw DomainError("representation_auxiliary: rho must be nonzero");
    return rho * (G(t) / (C * std::pow(t, alpha)) - 1.0);
}

double measured_tauberian_auxiliary(const RealFn& F, const SecondOrderParams& p, double lambda)
{
    p.validate();
    if (!p.C_F)
        throw InvalidSpec("measured_tauberian_auxiliary: C_F is required");
    const double C = gamma_fn(1.0 + p.alpha) * *p.C_F;
    auto G = [&F, &p](double l) { return laplace_stieltjes(F, 1.0 / l, TransformPolicy{}, p.alpha); };
    return representation_auxiliary(G, p.alpha, p.rho, C, lambda);
}

double PowerPerturbedFamily::operator()(double t) const
{
    return std::pow(t, alpha) * (1.0 + amplitude * std::pow(t, rho));
}

RealFn PowerPerturbedFamily::fn() const
{
    return [f = *this](double t) { return f(t); };
}

SecondOrderParams PowerPerturbedFamily::params() const
{
    SecondOrderParams p;
    p.alpha = alpha;
    p.rho = rho;
    p.A = PowerAuxiliary{amplitude * rho, rho}.fn();
    p.C_F = 1.0;
    return p;
}

double PowerPerturbedFamily::up_integral(double theta, double t0, double t) const
{
    const double a = alpha + theta, b = a + rho;
    if (!(a > 0.0 && b > 0.0) && t0 == 0.0)
        throw DomainError("PowerPerturbedFamily::up_integral: diverges at 0");
    auto prim = [&](double s) {
        if (s == 0.0)
            return 0.0;
        return std::pow(s, a) / a + amplitude * std::pow(s, b) / b;
    };
    return prim(t) - prim(t0);
}

double PowerPerturbedFamily::down_integral(double theta, double t) const
{
    const double a = alpha + theta, b = a + rho;
    if (!(a < 0.0 && b < 0.0))
        throw DomainError("PowerPerturbedFamily::down_integral: diverges at infinity");
    return -std::pow(t, a) / a - amplitude * std::pow(t, b) / b;
}

} // namespace hawkes
