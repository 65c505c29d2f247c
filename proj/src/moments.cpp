#include "hawkes/moments.hpp"

#include "hawkes/convolution.hpp"
#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/special_functions.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace hawkes {

std::string to_string(MomentSource s)
{
    switch (s) {
    case MomentSource::Exact: return "Exact";
    case MomentSource::FirstOrder: return "FirstOrder";
    case MomentSource::SecondOrder: return "SecondOrder";
    }
    return "Exact";
}

MomentCurve exact_moments(const ResolventProfile& profile, double mu0, Regime regime)
{
    profile.grid.validate();
    const std::size_t n = profile.grid.n_steps;
    if (profile.IR.size() != n + 1 || profile.IR2.size() != n + 1 || profile.R.size() != n)
        throw InvalidSpec("exact_moments: profile arrays do not match the grid");
    if (!(mu0 > 0.0))
        throw InvalidSpec("exact_moments: mu0 must be positive");
    const double h = profile.grid.step;
    const std::vector<double>& I = profile.IR;
    std::vector<double> sq(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        sq[i] = I[i] * I[i];
    const std::vector<double> ii = piecewise_linear_convolution(I, I, h);
    const std::vector<double> sqi = piecewise_linear_convolution(sq, I, h);
    const std::vector<double> isq = piecewise_linear_product_integral(I, I, h);

    MomentCurve c;
    c.grid = profile.grid;
    c.source = MomentSource::Exact;
    c.regime = regime;
    c.mu0 = mu0;
    c.mean.resize(n + 1);
    c.variance.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = profile.grid.node(i);
        c.mean[i] = mu0 * (t + profile.IR2[i]);
        c.variance[i] = mu0 * (t + 3.0 * profile.IR2[i] + 2.0 * ii[i] + sqi[i] + isq[i]);
    }
    return c;
}

MomentPair exact_moments_at(const RealFn& IR, const RealFn& IR2, double mu0, double t)
{
    if (!(t > 0.0))
        return {0.0, 0.0};
    const double ii = integrate_singular([&](double s) { return IR(t - s) * IR(s); }, 0.0, t, 1e-13);
    const double sqi = integrate_singular(
        [&](double s) {
            const double a = IR(t - s);
            return a * a * IR(s);
        },
        0.0, t, 1e-13);
    const double isq = integrate_singular(
        [&](double s) {
            const double a = IR(s);
            return a * a;
        },
        0.0, t, 1e-13);
    const double i2 = IR2(t);
    return {mu0 * (t + i2), mu0 * (t + 3.0 * i2 + 2.0 * ii + sqi + isq)};
}

double PowerSum::operator()(double t) const
{
    double s = 0.0;
    for (const auto& [c, p] : terms)
        s += c * std::pow(t, p);
    return s;
}

PowerSum PowerSum::integral() const
{
    PowerSum out;
    for (const auto& [c, p] : terms) {
        if (!(p > -1.0))
            throw DomainError("PowerSum::integral: power must exceed -1");
        out.terms.emplace_back(c / (p + 1.0), p + 1.0);
    }
    return out;
}

namespace {

// (f * g)(t) for power sums, as a power sum
PowerSum convolve(const PowerSum& f, const PowerSum& g)
{
    PowerSum out;
    for (const auto& [a, p] : f.terms)
        for (const auto& [b, q] : g.terms)
            out.terms.emplace_back(a * b * beta_fn(p + 1.0, q + 1.0), p + q + 1.0);
    return out;
}

PowerSum multiply(const PowerSum& f, const PowerSum& g)
{
    PowerSum out;
    for (const auto& [a, p] : f.terms)
        for (const auto& [b, q] : g.terms)
            out.terms.emplace_back(a * b, p + q);
    return out;
}

} // namespace

MomentPair exact_moments_power_sum(const PowerSum& IR, double mu0, double t)
{
    const PowerSum i2 = IR.integral();
    const PowerSum sq = multiply(IR, IR);
    const double ii = convolve(IR, IR)(t);
    const double sqi = convolve(sq, IR)(t);
    const double isq = sq.integral()(t);
    const double v2 = i2(t);
    return {mu0 * (t + v2), mu0 * (t + 3.0 * v2 + 2.0 * ii + sqi + isq)};
}

namespace {

constexpr double index_tolerance = 1e-12;

bool is_index(double a, double v)
{
    return std::fabs(a - v) <= index_tolerance;
}

void check_mu0(double mu0)
{
    if (!(mu0 > 0.0) || !std::isfinite(mu0))
        throw InvalidSpec("mu0 must be positive");
}

} // namespace

MomentPair first_order_approx(const Kernel& k, double mu0, double t)
{
    check_mu0(mu0);
    if (!(t > 0.0))
        throw DomainError("first_order_approx: t must be positive");
    switch (classify_regime(k)) {
    case Regime::Subcritical: {
        const double q = 1.0 - k.m();
        return {mu0 * t / q, mu0 * t / (q * q * q)};
    }
    case Regime::WeaklyCritical: {
        const double s = k.sigma();
        return {mu0 * t * t / (2.0 * s), mu0 * std::pow(t, 4) / (12.0 * s * s * s)};
    }
    case Regime::StronglyCritical: {
        const double a = k.tail_index();
        if (is_index(a, 1.0)) {
            const double p1 = k.psi(1.0, t);
            return {mu0 * t * t / (2.0 * p1), mu0 * std::pow(t, 4) / (12.0 * p1 * p1 * p1)};
        }
        if (!(a >= 0.0 && a < 1.0))
            throw UnsupportedRegime("first_order_approx: strongly critical kernel needs tail index in [0, 1]");
        const double phi = k.tail(t);
        const double g = gamma_fn(1.0 - a) * gamma_fn(1.0 + a);
        return {mu0 * t / (gamma_fn(1.0 - a) * gamma_fn(2.0 + a) * phi),
                mu0 * beta_fn(2.0 * a + 1.0, a + 1.0) * t / std::pow(std::fabs(g) * phi, 3)};
    }
    }
    throw UnsupportedRegime("first_order_approx: unknown regime");
}

MomentCurve first_order_curve(const Kernel& k, double mu0, const TimeGrid& grid)
{
    grid.validate();
    MomentCurve c;
    c.grid = grid;
    c.source = MomentSource::FirstOrder;
    c.regime = classify_regime(k);
    c.mu0 = mu0;
    c.regime_case = to_string(c.regime);
    c.mean.assign(grid.n_steps + 1, 0.0);
    c.variance.assign(grid.n_steps + 1, 0.0);
    for (std::size_t i = 1; i <= grid.n_steps; ++i) {
        const MomentPair p = first_order_approx(k, mu0, grid.node(i));
        c.mean[i] = p.mean;
        c.variance[i] = p.variance;
    }
    return c;
}

double SecondOrderTerm::leading(double t) const
{
    return leading_coeff * std::pow(t, leading_exponent);
}

double SecondOrderTerm::approx(double t) const
{
    return leading(t) + (correction ? correction(t) : 0.0);
}

double strongly_critical_c_ir(double alpha, double c_phi)
{
    return 1.0 / (c_phi * gamma_fn(1.0 - alpha) * gamma_fn(1.0 + alpha));
}

double hp_constant_1(double alpha, double rho)
{
    return beta_fn(2.0 + alpha, 1.0 - alpha + rho) / beta_fn(2.0 + alpha + rho, 1.0 - alpha);
}

double hp_constant_2(double alpha, double rho)
{
    return (2.0 * beta_fn(2.0 * alpha + rho + 1.0, alpha + 1.0) + beta_fn(2.0 * alpha + 1.0, alpha + rho + 1.0)) *
           beta_fn(alpha + 1.0, 1.0 - alpha + rho) / beta_fn(alpha + 1.0 + rho, 1.0 - alpha);
}

namespace {

struct StrongCase {
    double alpha;
    double rho;
    double c_ir;
    double c_ir2;
    RealFn A;
};

StrongCase strong_case(const Kernel& k, const std::optional<SecondOrderParams>& so)
{
    if (!so)
        throw InvalidSpec("strongly critical kernel: second-order parameters of the tail are required");
    so->validate();
    const double a = -so->alpha;
    const double ti = k.tail_index();
    if (std::isfinite(ti) && std::fabs(ti - a) > 1e-9)
        throw InvalidSpec("second-order alpha (" + format_number(so->alpha) +
                          ") does not match the kernel tail index -" + format_number(ti));
    if (!(a > 0.0 && a < 1.0))
        throw UnsupportedRegime("strongly critical second order needs tail index in (0, 1)");
    if (!(so->rho > a - 1.0 && so->rho < 0.0))
        throw UnmatchedCase("strongly critical second order needs rho in (alpha - 1, 0)");
    if (is_index(so->rho, -a))
        throw UnmatchedCase("rho = -alpha is excluded from the strongly critical case table");
    if (!so->C_F)
        throw InvalidSpec("strongly critical second order needs C_F = lim t^alpha Phi(t)");
    const double c_ir = strongly_critical_c_ir(a, *so->C_F);
    return {a, so->rho, c_ir, c_ir / (1.0 + a), so->A};
}

} // namespace

double resolvent_gap_energy(const Kernel& k)
{
    const double m = k.m();
    if (!(m < 1.0 - critical_mass_tolerance))
        throw UnsupportedRegime("resolvent_gap_energy: kernel must be subcritical");
    const double kappa = m / (1.0 - m);
    if (m == 0.0)
        return 0.0;
    if (const auto spec = k.spec()) {
        if (const auto* e = std::get_if<ExponentialParams>(&spec->params))
            return kappa * kappa / (2.0 * (1.0 - m) * e->beta);
    }
    const double sigma = k.sigma();
    if (!std::isfinite(sigma))
        throw UnsupportedRegime("resolvent_gap_energy: sigma must be finite");
    // grid on the scale of the mean lag sigma/m; D = kappa - I_R ~ Phi/(1-m)^2 past the horizon
    const double h = sigma / m / 50.0;
    const std::size_t n = 100000;
    ResolveOptions opt;
    opt.allow_closed_form = false;
    const ResolventProfile p = solve_resolvent(k, TimeGrid(h, n), opt);
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d0 = kappa - p.IR[i], d1 = kappa - p.IR[i + 1];
        q += 0.5 * h * (d0 * d0 + d1 * d1);
    }
    const double a = k.tail_index();
    if (std::isfinite(a)) {
        const double T = p.grid.horizon();
        const double dT = kappa - p.IR[n];
        q += dT * dT * T / (2.0 * a - 1.0);
    }
    return q;
}

SecondOrderReport second_order_approx(const Kernel& k, double mu0, const std::optional<SecondOrderParams>& so)
{
    check_mu0(mu0);
    SecondOrderReport r;
    r.regime = classify_regime(k);
    const double m = k.m();
    const double a = k.tail_index();
    const double sigma = k.sigma();

    if (r.regime == Regime::Subcritical) {
        const double q = 1.0 - m;
        r.mean.leading_coeff = mu0 / q;
        r.mean.leading_exponent = 1.0;
        r.variance.leading_coeff = mu0 / (q * q * q);
        r.variance.leading_exponent = 1.0;
        const double q2 = q * q, q4 = q2 * q2;
        if (a >= 0.0 && a < 1.0) {
            r.regime_case = "1.a";
            r.mean.correction = [k, mu0, q2, a](double t) { return -mu0 * t * k.tail(t) / (q2 * (1.0 - a)); };
            r.variance.correction = [k, mu0, q4, a](double t) {
                return -3.0 * mu0 * t * k.tail(t) / (q4 * (1.0 - a));
            };
        } else if (is_index(a, 1.0) && !std::isfinite(sigma)) {
            r.regime_case = "1.b";
            r.mean.correction = [k, mu0, q2](double t) { return -mu0 * k.psi(1.0, t) / q2; };
            r.variance.correction = [k, mu0, q4](double t) { return -3.0 * mu0 * k.psi(1.0, t) / q4; };
        } else if (a >= 1.0) {
            r.regime_case = "1.c";
            r.mean.correction = [c = -mu0 * sigma / q2](double) { return c; };
            // the squared gap of I_R contributes at the same (constant) order as sigma
            const double c = -3.0 * mu0 * sigma / q4 + mu0 * resolvent_gap_energy(k) / q;
            r.variance.correction = [c](double) { return c; };
        } else {
            throw UnmatchedCase("subcritical kernel with negative tail index");
        }
        return r;
    }

    if (r.regime == Regime::WeaklyCritical) {
        const double s = sigma, s2 = s * s, s4 = s2 * s2;
        r.mean.leading_coeff = mu0 / (2.0 * s);
        r.mean.leading_exponent = 2.0;
        r.variance.leading_coeff = mu0 / (12.0 * s * s2);
        r.variance.leading_exponent = 4.0;
        const double psi2 = k.psi2_infinity();
        if (std::isfinite(psi2)) {
            r.regime_case = "2.d";
            r.mean.correction = [c = mu0 * psi2 / (2.0 * s2)](double t) { return c * t; };
            r.variance.correction = [c = mu0 * psi2 / (3.0 * s4)](double t) { return c * t * t * t; };
        } else if (is_index(a, 1.0)) {
            r.regime_case = "2.a";
            r.mean.correction = [k, mu0, s, s2](double t) { return mu0 / (2.0 * s2) * t * t * (s - k.psi(1.0, t)); };
            r.variance.correction = [k, mu0, s, s4](double t) {
                return mu0 / (4.0 * s4) * std::pow(t, 4) * (s - k.psi(1.0, t));
            };
        } else if (a > 1.0 && a < 2.0) {
            r.regime_case = "2.b";
            const double g = gamma_fn(1.0 - a) / gamma_fn(4.0 - a);
            r.mean.correction = [k, c = -mu0 * g / s2](double t) { return c * t * t * t * k.tail(t); };
            r.variance.correction = [k, c = -2.0 * mu0 * g / (s4 * (5.0 - a))](double t) {
                return c * std::pow(t, 5) * k.tail(t);
            };
        } else if (is_index(a, 2.0)) {
            r.regime_case = "2.c";
            r.mean.correction = [k, c = mu0 / (2.0 * s2)](double t) { return c * t * k.psi(2.0, t); };
            r.variance.correction = [k, c = mu0 / (3.0 * s4)](double t) { return c * t * t * t * k.psi(2.0, t); };
        } else {
            throw UnmatchedCase("weakly critical kernel with tail index " + format_number(a) +
                                " and infinite second moment");
        }
        return r;
    }

    if (auto spec = k.spec()) {
        if (auto mp = std::get_if<MixedMittagLefflerParams>(&spec->params))
            return mixed_ml_second_order(*mp, mu0);
    }
    const StrongCase sc = strong_case(k, so);
    const double al = sc.alpha, rho = sc.rho;
    r.mean.leading_coeff = mu0 * sc.c_ir2;
    r.mean.leading_exponent = al + 1.0;
    const double c3 = std::pow(std::fabs(sc.c_ir), 3);
    r.variance.leading_coeff = mu0 * c3 * beta_fn(2.0 * al + 1.0, al + 1.0);
    r.variance.leading_exponent = 3.0 * al + 1.0;
    if (rho < -al) {
        r.regime_case = "3.a";
        r.mean.correction = [](double) { return 0.0; };
        r.variance.correction = [](double) { return 0.0; };
        r.mean.correction_order = "o(1)";
        r.variance.correction_order = "o(t)";
    } else {
        r.regime_case = "3.b";
        const double k1 = -hp_constant_1(al, rho) * mu0 * sc.c_ir2 / rho;
        const double k2 = -hp_constant_2(al, rho) * mu0 * c3 / rho;
        r.mean.correction = [A = sc.A, k1, e = al + 1.0](double t) { return k1 * std::pow(t, e) * A(t); };
        r.variance.correction = [A = sc.A, k2, e = 3.0 * al + 1.0](double t) { return k2 * std::pow(t, e) * A(t); };
    }
    return r;
}

MomentCurve second_order_curve(const SecondOrderReport& report, double mu0, const TimeGrid& grid)
{
    grid.validate();
    MomentCurve c;
    c.grid = grid;
    c.source = MomentSource::SecondOrder;
    c.regime = report.regime;
    c.mu0 = mu0;
    c.regime_case = report.regime_case;
    c.mean.assign(grid.n_steps + 1, 0.0);
    c.variance.assign(grid.n_steps + 1, 0.0);
    for (std::size_t i = 1; i <= grid.n_steps; ++i) {
        const double t = grid.node(i);
        c.mean[i] = report.mean.approx(t);
        c.variance[i] = report.variance.approx(t);
    }
    return c;
}

ResolventEstimates second_order_resolvent_estimates(const Kernel& k, double t,
                                                    const std::optional<SecondOrderParams>& so)
{
    if (!(t > 0.0))
        throw DomainError("second_order_resolvent_estimates: t must be positive");
    ResolventEstimates e;
    const Regime regime = classify_regime(k);
    const double m = k.m();
    const double a = k.tail_index();
    if (regime == Regime::Subcritical) {
        const double q2 = (1.0 - m) * (1.0 - m);
        e.regime_case = "subcritical";
        // The tail relation needs Phi regularly varying; light tails decay faster than any power.
        if (std::isfinite(a))
            e.ir_correction = -k.tail(t) / q2;
        if (a >= 0.0 && a < 1.0)
            e.ir2_correction = -t * k.tail(t) / (q2 * (1.0 - a));
        else
            e.ir2_correction = -k.psi(1.0, t) / q2;
        return e;
    }
    if (regime == Regime::WeaklyCritical) {
        const double s = k.sigma(), s2 = s * s;
        const double psi2 = k.psi2_infinity();
        if (std::isfinite(psi2)) {
            e.regime_case = "2.d";
            e.ir_correction = psi2 / (2.0 * s2) - 1.0;
            e.ir2_correction = (psi2 / (2.0 * s2) - 1.0) * t;
        } else if (is_index(a, 1.0)) {
            e.regime_case = "2.a";
            const double d = s - k.psi(1.0, t);
            e.ir_correction = t * d / s2;
            e.ir2_correction = t * t * d / (2.0 * s2);
        } else if (a > 1.0 && a < 2.0) {
            e.regime_case = "2.b";
            const double ph = k.tail(t);
            e.ir_correction = -gamma_fn(1.0 - a) / (gamma_fn(3.0 - a) * s2) * t * t * ph;
            e.ir2_correction = -gamma_fn(1.0 - a) / (gamma_fn(4.0 - a) * s2) * t * t * t * ph;
        } else if (is_index(a, 2.0)) {
            e.regime_case = "2.c";
            const double p2 = k.psi(2.0, t);
            e.ir_correction = p2 / (2.0 * s2);
            e.ir2_correction = t * p2 / (2.0 * s2);
        } else {
            throw UnmatchedCase("weakly critical kernel outside the case table");
        }
        return e;
    }
    if (auto spec = k.spec()) {
        if (auto mp = std::get_if<MixedMittagLefflerParams>(&spec->params)) {
            e.regime_case = "mixed";
            e.ir_correction = mixed_ml_ir_deviation(*mp, t);
            const double g = 2.0 * mp->alpha1 - mp->alpha2;
            if (mp->alpha1 == mp->alpha2)
                e.ir2_correction = *e.ir_correction * t;
            else
                e.ir2_correction = *e.ir_correction * t / (1.0 + g);
            return e;
        }
    }
    const StrongCase sc = strong_case(k, so);
    const double al = sc.alpha, rho = sc.rho;
    SecondOrderParams p1, p2;
    p1.alpha = al;
    p2.alpha = al + 1.0;
    p1.C_F = sc.c_ir;
    p2.C_F = sc.c_ir2;
    if (rho < -al) {
        e.regime_case = "3.a";
        const double g1 = al * gamma_fn(1.0 - al) * gamma_fn(1.0 + al);
        const double g2 = al * gamma_fn(1.0 - al) * gamma_fn(2.0 + al);
        p1.rho = p2.rho = -al;
        p1.A = [k, g1](double s) { return g1 * k.tail(s); };
        p2.A = [k, g2](double s) { return g2 * k.tail(s); };
    } else {
        e.regime_case = "3.b";
        const double g1 = -gamma_fn(1.0 + al) * gamma_fn(1.0 - al + rho) / (gamma_fn(1.0 + al + rho) * gamma_fn(1.0 - al));
        const double g2 = -gamma_fn(2.0 + al) * gamma_fn(1.0 - al + rho) / (gamma_fn(2.0 + al + rho) * gamma_fn(1.0 - al));
        p1.rho = p2.rho = rho;
        p1.A = [A = sc.A, g1](double s) { return g1 * A(s); };
        p2.A = [A = sc.A, g2](double s) { return g2 * A(s); };
    }
    // F = C t^a (1 + A/rho + ...)
    e.ir_correction = sc.c_ir * std::pow(t, al) * p1.A(t) / p1.rho;
    e.ir2_correction = sc.c_ir2 * std::pow(t, al + 1.0) * p2.A(t) / p2.rho;
    e.ir_2rv = p1;
    e.ir2_2rv = p2;
    return e;
}

double mixed_ml_ir_deviation(const MixedMittagLefflerParams& p, double t)
{
    KernelSpec{p}.validate();
    if (p.alpha1 == p.alpha2)
        return -p.beta1 * p.beta2 / ((p.beta1 + p.beta2) * (p.beta1 + p.beta2));
    const double g = 2.0 * p.alpha1 - p.alpha2;
    return -(p.beta1 * p.beta1 / p.beta2) * std::pow(t, g) / gamma_fn(1.0 + g);
}

SecondOrderReport mixed_ml_second_order(const MixedMittagLefflerParams& p, double mu0)
{
    KernelSpec{p}.validate();
    check_mu0(mu0);
    const double a = p.alpha1, b1 = p.beta1, b2 = p.beta2;
    const double c_ir = 1.0 / (mixed_ml_c_beta(p) * gamma_fn(1.0 + a));
    const double c_ir2 = c_ir / (1.0 + a);
    const double cv1 = mu0 * std::pow(c_ir, 3) * beta_fn(1.0 + 2.0 * a, 1.0 + a);
    const double cv2 = mu0 * c_ir * c_ir * (2.0 * beta_fn(1.0 + a, 1.0 + a) + beta_fn(1.0 + 2.0 * a, 1.0));

    SecondOrderReport r;
    r.regime = Regime::StronglyCritical;
    r.mean.leading_coeff = mu0 * c_ir2;
    r.mean.leading_exponent = a + 1.0;
    r.variance.leading_coeff = cv1;
    r.variance.leading_exponent = 3.0 * a + 1.0;
    const double ev = 2.0 * a + 1.0;

    // The mean correction is mu0 t plus mu0 int_0^t of the I_R deviation; the variance
    // correction collects the t^{2a+1} terms and the first-order effect of the deviation
    // inside |I_R|^2 * I_R.
    if (p.alpha1 == p.alpha2) {
        r.regime_case = "mixed:a1=a2";
        const double d = b1 * b2 / ((b1 + b2) * (b1 + b2));
        r.mean.correction = [c = mu0 * (1.0 - d)](double t) { return c * t; };
        r.variance.correction = [c = cv2 * (1.0 - d), ev](double t) { return c * std::pow(t, ev); };
        return r;
    }
    const double g = 2.0 * a - p.alpha2;
    if (g > 0.0) {
        r.regime_case = "mixed:a1<a2<2a1";
        const double D = (b1 * b1 / b2) / gamma_fn(1.0 + g);
        const double cm = -mu0 * (b1 * b1 / b2) / gamma_fn(2.0 + g);
        const double cv = -mu0 * D * c_ir * c_ir *
                          (beta_fn(2.0 * a + 1.0, g + 1.0) + 2.0 * beta_fn(a + g + 1.0, a + 1.0));
        r.mean.correction = [cm, e = 1.0 + g](double t) { return cm * std::pow(t, e); };
        r.variance.correction = [cv, e = ev + g](double t) { return cv * std::pow(t, e); };
    } else if (g == 0.0) {
        r.regime_case = "mixed:2a1=a2";
        const double d = b1 * b1 / b2;
        r.mean.correction = [c = mu0 * (1.0 - d)](double t) { return c * t; };
        r.variance.correction = [c = cv2 * (1.0 - d), ev](double t) { return c * std::pow(t, ev); };
    } else {
        r.regime_case = "mixed:2a1<a2";
        r.mean.correction = [mu0](double t) { return mu0 * t; };
        r.variance.correction = [cv2, ev](double t) { return cv2 * std::pow(t, ev); };
    }
    return r;
}

void write_csv(const MomentCurve& curve, std::ostream& out, bool header)
{
    if (header)
        out << "t,mean,variance,source,regime_case\n";
    const std::string src = to_string(curve.source);
    for (std::size_t i = 1; i <= curve.grid.n_steps; ++i) {
        out << format_number(curve.grid.node(i)) << ',' << format_number(curve.mean[i]) << ','
            << format_number(curve.variance[i]) << ',' << src << ',' << curve.regime_case << '\n';
    }
}

} // namespace hawkes
