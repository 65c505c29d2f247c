#include "hawkes/error.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/special_functions.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace hawkes;

namespace {

ResolventProfile discretized(const Kernel& k, double T, double h)
{
    ResolveOptions o;
    o.allow_closed_form = false;
    return solve_resolvent(k, TimeGrid::from_horizon(T, h), o);
}

// max_i |R_i - phi(t_i) - (R * phi)(t_i)| at cell midpoints, R piecewise constant
double equation_residual(const Kernel& k, const ResolventProfile& p)
{
    const TimeGrid& g = p.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_steps; ++i) {
        const double t = g.midpoint(i);
        double conv = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const double a = g.node(j), b = std::min(g.node(j + 1), t);
            conv += p.R[j] * (k.cumulative(t - a) - k.cumulative(t - b));
        }
        worst = std::max(worst, std::fabs(p.R[i] - k.phi(t) - conv));
    }
    return worst;
}

} // namespace

TEST_CASE("time grid")
{
    const TimeGrid g = TimeGrid::from_horizon(10.0, 0.01);
    CHECK(g.n_steps == 1000);
    CHECK(g.horizon() == doctest::Approx(10.0));
    CHECK_THROWS_AS(TimeGrid::from_horizon(10.0, 0.3), InvalidSpec);
    CHECK_THROWS_AS(TimeGrid(0.0, 10).validate(), InvalidSpec);
}

TEST_CASE("resolvent equation residual is first order in h")
{
    for (const KernelSpec& spec : {KernelSpec{ExponentialParams{0.5, 1.0}}, KernelSpec{ParetoTailParams{1.5, 0.4, 1.0}},
                                   KernelSpec{ExponentialParams{1.0, 2.0}}}) {
        const Kernel k = build_kernel(spec);
        const double r1 = equation_residual(k, discretized(k, 5.0, 0.02));
        const double r2 = equation_residual(k, discretized(k, 5.0, 0.01));
        CHECK_MESSAGE(r1 <= 1.0 * 0.02, k.name() << " residual " << r1);
        CHECK_MESSAGE(r2 <= 1.0 * 0.01, k.name() << " residual " << r2);
    }
}

TEST_CASE("subcritical limit of I_R")
{
    for (double m : {0.3, 0.5, 0.8})
        for (double beta : {1.0, 2.0}) {
            const Kernel k = build_kernel(KernelSpec{ExponentialParams{m, beta}});
            const double T = 50.0 / ((1.0 - m) * beta);
            ResolveOptions o;
            o.allow_closed_form = false;
            const ResolventProfile p =
                solve_resolvent(k, TimeGrid(0.01, static_cast<std::size_t>(std::ceil(T / 0.01))), o);
            CHECK(std::fabs(p.IR.back() - m / (1.0 - m)) <= 1e-4);
        }
}

TEST_CASE("exponential resolvent matches its closed form")
{
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}});
    const ResolventProfile d = discretized(k, 10.0, 0.01);
    const ResolventProfile c = solve_resolvent(k, TimeGrid::from_horizon(10.0, 0.01));
    CHECK(c.method == ResolventMethod::ClosedFormExponential);
    for (std::size_t i = 0; i < d.R.size(); ++i)
        CHECK(d.R[i] == doctest::Approx(c.R[i]).epsilon(1e-3));
    CHECK(d.IR.back() == doctest::Approx(c.IR.back()).epsilon(1e-5));
    CHECK(d.IR2.back() == doctest::Approx(c.IR2.back()).epsilon(1e-4));
}

TEST_CASE("grid refinement on the fractional kernel")
{
    const Kernel k = build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}});
    auto err = [&](double h) {
        const ResolventProfile p = discretized(k, 10.0, h);
        double e = 0.0;
        for (std::size_t i = 1; i <= p.grid.n_steps; ++i)
            e = std::max(e, std::fabs(p.IR[i] - std::sqrt(p.grid.node(i)) / gamma_fn(1.5)));
        return e;
    };
    const double e1 = err(0.02), e2 = err(0.01), e3 = err(0.005);
    CHECK(e1 / e2 >= 1.7);
    CHECK(e2 / e3 >= 1.7);
}

TEST_CASE("FFT recursion agrees with the direct solve")
{
    const Kernel k = build_kernel(KernelSpec{MittagLefflerParams{0.6, 1.5, 0.8}});
    ResolveOptions direct, fast;
    direct.allow_closed_form = fast.allow_closed_form = false;
    direct.direct_limit = 1 << 20;
    fast.direct_limit = 256;
    const TimeGrid g = TimeGrid::from_horizon(30.0, 0.01);
    const ResolventProfile a = solve_resolvent(k, g, direct), b = solve_resolvent(k, g, fast);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.R.size(); ++i)
        worst = std::max(worst, std::fabs(a.R[i] - b.R[i]) / std::fabs(a.R[i]));
    CHECK(worst <= 1e-10);
}

TEST_CASE("Neumann partial sums approach the direct solve")
{
    const double m = 0.5;
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{m, 1.0}});
    const TimeGrid g = TimeGrid::from_horizon(20.0, 0.01);
    const ResolventProfile d = discretized(k, 20.0, 0.01);
    for (int N : {5, 10, 20, 40}) {
        const ResolventProfile n = neumann_partial_sum(k, g, N, 1.0);
        double worst = 0.0;
        for (std::size_t i = 0; i <= g.n_steps; ++i)
            worst = std::max(worst, std::fabs(n.IR[i] - d.IR[i]));
        CHECK(worst <= 1e-6 + std::pow(m, N + 1) / (1.0 - m));
    }
}

TEST_CASE("Neumann warns when the truncation bound is loose")
{
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{0.9, 1.0}});
    const ResolventProfile n = neumann_partial_sum(k, TimeGrid::from_horizon(5.0, 0.05), 3);
    CHECK(n.warning.has_value());
}

TEST_CASE("Mittag-Leffler closed form with mass below one")
{
    const MittagLefflerParams p{0.5, 1.0, 0.5};
    const Kernel k = build_kernel(KernelSpec{p});
    const TimeGrid g = TimeGrid::from_horizon(20.0, 0.01);
    const ResolventProfile c = closed_form_mittag_leffler_profile(p, g);
    const ResolventProfile d = discretized(k, 20.0, 0.01);
    for (std::size_t i = 100; i <= g.n_steps; i += 100)
        CHECK(d.IR[i] == doctest::Approx(c.IR[i]).epsilon(1e-3));
    // I_R -> m/(1-m)
    CHECK(c.IR.back() < 1.0);
}

TEST_CASE("zero kernel and CSV output")
{
    const Kernel k = build_kernel(KernelSpec{ZeroParams{}});
    const ResolventProfile p = solve_resolvent(k, TimeGrid::from_horizon(1.0, 0.25));
    CHECK(std::all_of(p.IR.begin(), p.IR.end(), [](double v) { return v == 0.0; }));
    std::ostringstream out;
    write_csv(p, out);
    const std::string s = out.str();
    CHECK(s.rfind("t,R,IR,IR2\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}

TEST_CASE("supercritical kernels are rejected")
{
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{1.2, 1.0}});
    CHECK_THROWS_AS(solve_resolvent(k, TimeGrid::from_horizon(1.0, 0.1)), UnsupportedRegime);
}
