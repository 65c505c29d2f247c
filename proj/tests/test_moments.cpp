#include "oracles.hpp"

#include "hawkes/error.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/special_functions.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace hawkes;

TEST_CASE("fractional Hawkes moments reproduce the closed forms")
{
    const Kernel k = build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}});
    const TimeGrid g = TimeGrid::from_horizon(10.0, 0.005);
    for (bool closed : {true, false}) {
        ResolveOptions o;
        o.allow_closed_form = closed;
        const MomentCurve c = exact_moments(solve_resolvent(k, g, o), 1.0, Regime::StronglyCritical);
        for (std::size_t i = 200; i <= g.n_steps; ++i) {
            const double t = g.node(i);
            CHECK(c.mean[i] == doctest::Approx(oracles::fractional_mean(0.5, 1.0, 1.0, t)).epsilon(1e-3));
            CHECK(c.variance[i] == doctest::Approx(oracles::fractional_variance(0.5, 1.0, 1.0, t)).epsilon(1e-3));
        }
    }
}

TEST_CASE("moments scale linearly in mu0")
{
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}});
    const ResolventProfile p = solve_resolvent(k, TimeGrid::from_horizon(5.0, 0.01));
    const MomentCurve a = exact_moments(p, 1.0), b = exact_moments(p, 3.0);
    CHECK(b.mean.back() == doctest::Approx(3.0 * a.mean.back()).epsilon(1e-14));
    CHECK(b.variance.back() == doctest::Approx(3.0 * a.variance.back()).epsilon(1e-14));
}

TEST_CASE("Poisson moments for the zero kernel")
{
    const Kernel k = build_kernel(KernelSpec{ZeroParams{}});
    const MomentCurve c = exact_moments(solve_resolvent(k, TimeGrid::from_horizon(4.0, 0.5)), 2.0);
    CHECK(c.mean.back() == doctest::Approx(8.0));
    CHECK(c.variance.back() == doctest::Approx(8.0));
}

TEST_CASE("power-sum moments agree with quadrature")
{
    const PowerSum ir{{{1.0, 0.5}, {0.3, 1.0}}};
    const PowerSum ir2 = ir.integral();
    for (double t : {0.5, 3.0, 40.0}) {
        const MomentPair a = exact_moments_power_sum(ir, 1.5, t);
        const MomentPair b = exact_moments_at(ir, ir2, 1.5, t);
        CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-10));
        CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-8));
    }
}

TEST_CASE("second-order corrections improve on the leading term")
{
    for (const oracles::CorrectionCase& c : oracles::correction_cases(1.0)) {
        double pm = std::numeric_limits<double>::infinity(), pv = pm;
        for (double t : {1e2, 1e3, 1e4}) {
            const auto [rm, rv] = oracles::residual_ratios(c, 1.0, t);
            CHECK_MESSAGE(rm < pm, c.label << " t=" << t);
            CHECK_MESSAGE(rv < pv, c.label << " t=" << t);
            pm = rm;
            pv = rv;
        }
        CHECK_MESSAGE(pm <= 0.3, c.label);
        CHECK_MESSAGE(pv <= 0.3, c.label);
    }
}

TEST_CASE("case 1.c constants are exact for the exponential kernel")
{
    const double m = 0.5, mu0 = 2.0;
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{m, 1.0}});
    CHECK(resolvent_gap_energy(k) == doctest::Approx(1.0).epsilon(1e-14));
    const SecondOrderReport r = second_order_approx(k, mu0, std::nullopt);
    REQUIRE(r.regime_case == "1.c");
    const auto ir = [m](double t) { return m / (1 - m) * -std::expm1(-(1 - m) * t); };
    const auto ir2 = [m](double t) { return m / (1 - m) * (t + std::expm1(-(1 - m) * t) / (1 - m)); };
    for (double t : {50.0, 100.0}) {
        const MomentPair ex = exact_moments_at(ir, ir2, mu0, t);
        CHECK(ex.mean - (r.mean.leading(t) + r.mean.correction(t)) == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(ex.variance - (r.variance.leading(t) + r.variance.correction(t)) ==
              doctest::Approx(0.0).epsilon(1e-6));
    }
}

namespace {
// exponential kernel without a spec, so nothing can take a closed-form shortcut
class PlainExponential : public KernelModel {
public:
    std::string name() const override { return "plain-exp"; }
    double phi(double t) const override { return 0.5 * std::exp(-t); }
    double tail(double t) const override { return 0.5 * std::exp(-t); }
    double m() const override { return 0.5; }
    double tail_index() const override { return std::numeric_limits<double>::infinity(); }
    double sigma() const override { return 0.5; }
};
} // namespace

TEST_CASE("numeric gap energy matches the exponential closed form")
{
    CHECK(resolvent_gap_energy(Kernel(std::make_shared<PlainExponential>())) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("first-order approximations are asymptotically exact")
{
    const double mu0 = 1.0;
    struct Case {
        Kernel k;
        RealFn ir, ir2;
    };
    const double m = 0.5;
    const Kernel ke = build_kernel(KernelSpec{ExponentialParams{m, 1.0}});
    auto g2 = std::make_shared<oracles::Gamma2Kernel>(1.0);
    const Kernel kf = build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}});
    const std::vector<Case> cases{
        {ke, [m](double t) { return m / (1 - m) * -std::expm1(-(1 - m) * t); },
         [m](double t) { return m / (1 - m) * (t + std::expm1(-(1 - m) * t) / (1 - m)); }},
        {Kernel(g2), [g2](double t) { return g2->ir(t); }, [g2](double t) { return g2->ir2(t); }},
        {kf, [](double t) { return std::sqrt(t) / gamma_fn(1.5); },
         [](double t) { return std::pow(t, 1.5) / gamma_fn(2.5); }},
    };
    for (const Case& c : cases) {
        double pm = 1e300, pv = 1e300;
        for (double t : {1e2, 1e3, 1e4}) {
            const MomentPair ex = exact_moments_at(c.ir, c.ir2, mu0, t);
            const MomentPair fo = first_order_approx(c.k, mu0, t);
            const double em = std::fabs(fo.mean / ex.mean - 1.0), ev = std::fabs(fo.variance / ex.variance - 1.0);
            CHECK_MESSAGE(em <= pm, c.k.name() << " t=" << t);
            CHECK_MESSAGE(ev <= pv, c.k.name() << " t=" << t);
            pm = em;
            pv = ev;
        }
        CHECK(pm < 0.05);
        CHECK(pv < 0.05);
    }
}

TEST_CASE("case dispatch")
{
    auto label = [](const KernelSpec& s, std::optional<SecondOrderParams> so = std::nullopt) {
        return second_order_approx(build_kernel(s), 1.0, so).regime_case;
    };
    CHECK(label(KernelSpec{ExponentialParams{0.5, 1.0}}) == "1.c");
    CHECK(label(KernelSpec{MittagLefflerParams{0.5, 1.0, 0.5}}) == "1.a");
    CHECK(label(KernelSpec{ParetoTailParams{1.5, 0.2, 1.0}}) == "1.c");
    CHECK(label(KernelSpec{ExponentialParams{1.0, 1.0}}) == "2.d");
    CHECK(label(KernelSpec{MixedMittagLefflerParams{}}).rfind("mixed:", 0) == 0);

    // the fractional kernel sits on the excluded boundary rho = -alpha
    SecondOrderParams so;
    so.alpha = -0.5;
    so.rho = -0.5;
    so.A = PowerAuxiliary{0.5, -0.5}.fn();
    so.C_F = 1.0 / gamma_fn(0.5);
    CHECK_THROWS_AS(label(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}}, so), UnmatchedCase);
    CHECK_THROWS_AS(label(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}}), InvalidSpec);
}

TEST_CASE("strongly critical constants")
{
    const double a = 0.6, rho = -0.3;
    CHECK(hp_constant_1(a, rho) ==
          doctest::Approx(beta_fn(2 + a, 1 - a + rho) / beta_fn(2 + a + rho, 1 - a)).epsilon(1e-14));
    CHECK(hp_constant_1(0.5, -0.2) == doctest::Approx(beta_fn(2.5, 0.3) / beta_fn(2.3, 0.5)).epsilon(1e-14));
    CHECK(strongly_critical_c_ir(0.5, 1.0 / gamma_fn(0.5)) == doctest::Approx(1.0 / gamma_fn(1.5)).epsilon(1e-14));
}

TEST_CASE("mixed Mittag-Leffler deviation")
{
    MixedMittagLefflerParams p;
    CHECK(mixed_ml_ir_deviation(p, 1e3) == doctest::Approx(-0.25).epsilon(1e-12));
    const double lead = std::sqrt(1e3) / (mixed_ml_c_beta(p) * gamma_fn(1.5));
    CHECK(oracles::mixed_ml_ir_inverse_laplace(p, 1e3) - lead == doctest::Approx(-0.25).epsilon(0.05));
}

TEST_CASE("mixed Mittag-Leffler deviation is non-positive on the discretized profile")
{
    MixedMittagLefflerParams p;
    p.alpha1 = 0.4;
    p.alpha2 = 0.6;
    p.beta2 = 2.0;
    const Kernel k = build_kernel(KernelSpec{p});
    const double h = 0.01;
    ResolveOptions o;
    o.allow_closed_form = false;
    const ResolventProfile r = solve_resolvent(k, TimeGrid::from_horizon(100.0, h), o);
    const double c = 1.0 / (mixed_ml_c_beta(p) * gamma_fn(1.0 + p.alpha1));
    for (std::size_t i = 1; i <= r.grid.n_steps; ++i) {
        const double t = r.grid.node(i);
        CHECK(r.IR[i] - c * std::pow(t, p.alpha1) <= 10.0 * h * std::pow(t, p.alpha1));
    }
}

TEST_CASE("resolvent estimates")
{
    const Kernel sub = build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}});
    const ResolventEstimates e = second_order_resolvent_estimates(sub, 10.0);
    CHECK(e.regime_case == "subcritical");
    CHECK_FALSE(e.ir_correction.has_value());
    const Kernel ml = build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 0.5}});
    const ResolventEstimates f = second_order_resolvent_estimates(ml, 1e4);
    REQUIRE(f.ir_correction.has_value());
    // I_R(t) - 1 ~ -t^{-1/2}/(0.5 Gamma(1/2)) for mass 1/2
    CHECK(*f.ir_correction < 0.0);
}

TEST_CASE("moment CSV layout")
{
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}});
    const MomentCurve c = exact_moments(solve_resolvent(k, TimeGrid::from_horizon(1.0, 0.5)), 1.0);
    std::ostringstream out;
    write_csv(c, out);
    const std::string s = out.str();
    CHECK(s.rfind("t,mean,variance,source,regime_case\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}
