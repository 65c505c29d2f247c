#include "hawkes/error.hpp"
#include "hawkes/regvar.hpp"
#include "hawkes/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hawkes;

namespace {
// powers of two keep t x, 1/t and t^theta exact
const std::vector<double> ts{16.0, 64.0, 256.0};
const std::vector<double> xs{0.25, 0.5, 2.0, 4.0};
} // namespace

TEST_CASE("scaling identity")
{
    for (double alpha : {-0.5, 0.5, 1.0})
        for (double rho : {-0.1, -0.5, -1.0}) {
            const PowerPerturbedFamily f{alpha, rho, 1.0};
            const SecondOrderParams p = f.params();
            for (double theta : {-1.0, 0.5, 2.0}) {
                SecondOrderParams q = p;
                q.alpha = alpha + theta;
                const RealFn g = [f, theta](double t) { return std::pow(t, theta) * f(t); };
                for (double t : ts)
                    for (double x : xs) {
                        const double v = std::pow(x, theta) * second_order_limit(f.fn(), p, t, x);
                        CHECK(std::fabs(second_order_limit(g, q, t, x) - v) <= 1e-12 * std::fabs(v));
                        CHECK(std::fabs(second_order_target(q.alpha, rho, x) -
                                        std::pow(x, theta) * second_order_target(alpha, rho, x)) <= 1e-14);
                    }
            }
        }
}

TEST_CASE("reciprocity identity")
{
    for (double alpha : {-0.5, 0.5, 1.0})
        for (double rho : {-0.1, -0.5, -1.0}) {
            const PowerPerturbedFamily f{alpha, rho, 1.0};
            const SecondOrderParams p = f.params();
            SecondOrderParams r;
            r.alpha = -alpha;
            r.rho = -rho;
            r.A = [A = p.A](double s) { return -A(1.0 / s); };
            const RealFn g = [f](double s) { return f(1.0 / s); };
            for (double t : ts)
                for (double x : xs) {
                    const double v = second_order_limit(f.fn(), p, t, x);
                    CHECK(std::fabs(second_order_limit(g, r, 1.0 / t, 1.0 / x) + v) <= 1e-12 * std::fabs(v));
                }
        }
}

TEST_CASE("reciprocity carries membership to zero")
{
    const PowerPerturbedFamily f{0.5, -0.2, 0.05};
    const SecondOrderParams p = f.params();
    REQUIRE(check_membership(f.fn(), p).pass);
    SecondOrderParams r;
    r.alpha = -p.alpha;
    r.rho = -p.rho;
    r.A = [A = p.A](double s) { return -A(1.0 / s); };
    MembershipPolicy at_zero = MembershipPolicy::at_zero();
    at_zero.x_values = {2.0, 0.5, 0.2};  // 1/x for the default x values
    const MembershipReport z = check_membership_at_zero([f](double s) { return f(1.0 / s); }, r, at_zero);
    CHECK(z.pass);
}

TEST_CASE("Pi-variation pre-limit equals the 2RV pre-limit when alpha = rho = 0")
{
    const std::vector<std::pair<RealFn, RealFn>> corpus{
        {[](double t) { return std::log(t); }, [](double t) { return 1.0 / std::log(t); }},
        {[](double t) { return std::log(t) * std::log(t) + std::log(std::log(t)); },
         [](double t) { return 2.0 / std::log(t); }},
        {[](double t) { return 3.0 + std::log1p(t); }, [](double t) { return 1.0 / (3.0 + std::log1p(t)); }},
    };
    for (const auto& [F, A] : corpus) {
        SecondOrderParams p;
        p.alpha = 0.0;
        p.rho = 0.0;
        p.A = A;
        for (double t : ts)
            for (double x : xs) {
                const double v = second_order_limit(F, p, t, x);
                CHECK(std::fabs(pi_variation_prelimit(F, A, t, x) - v) <= 1e-12 * std::max(1.0, std::fabs(v)));
            }
    }
}

TEST_CASE("round trip through the representation")
{
    // F = C_F t^alpha (1 + A(t)/rho) with A = 0.01 rho t^rho
    for (double alpha : {-0.5, 0.0, 0.5, 1.0})
        for (double rho : {-0.1, -0.5, -1.0}) {
            const double CF = 1.7;
            SecondOrderParams p;
            p.alpha = alpha;
            p.rho = rho;
            p.A = PowerAuxiliary{0.01 * rho, rho}.fn();
            const RealFn F = [=](double t) { return CF * std::pow(t, alpha) * (1.0 + 0.01 * std::pow(t, rho)); };
            for (double x : {0.5, 2.0, 5.0})
                CHECK(second_order_limit(F, p, 1e6, x) ==
                      doctest::Approx(second_order_target(alpha, rho, x)).epsilon(0.01));
        }
}

TEST_CASE("membership check")
{
    const PowerPerturbedFamily f{0.5, -0.2, 0.05};
    const MembershipReport ok = check_membership(f.fn(), f.params());
    CHECK(ok.pass);
    CHECK(ok.samples.size() == 9);

    // wrong second-order index
    SecondOrderParams wrong = f.params();
    wrong.rho = -0.6;
    wrong.A = PowerAuxiliary{0.05 * -0.6, -0.6}.fn();
    const MembershipReport bad = check_membership(f.fn(), wrong);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("Karamata representation")
{
    const KaramataRepresentation r = build_karamata_representation(0.5, 2.0, 0.3, PowerAuxiliary{0.2, -0.4});
    const SecondOrderParams p = r.params();
    CHECK(p.alpha == 0.5);
    CHECK(p.rho == -0.4);
    REQUIRE(p.C_F.has_value());
    CHECK(r(1e12) / std::pow(1e12, 0.5) == doctest::Approx(*p.C_F).epsilon(1e-3));
    CHECK(check_membership(r.fn(), p).pass);

    // quadrature for the inner integral agrees with the closed form
    const KaramataRepresentation q = build_karamata_representation(0.5, 2.0, 0.3, -0.4, PowerAuxiliary{0.2, -0.4}.fn());
    for (double t : {0.5, 10.0, 1e5})
        CHECK(q(t) == doctest::Approx(r(t)).epsilon(1e-9));
}

TEST_CASE("Karamata ratios converge slowly toward their limits")
{
    const PowerPerturbedFamily f{0.5, -0.2, 1.0};
    const SecondOrderParams p = f.params();
    const RealFn up_int = [f](double s) { return f.up_integral(1.0, 0.0, s); };
    const RealFn down_int = [f](double s) { return f.down_integral(-1.0, s); };
    const double tu = karamata_ratio_target(p, 1.0, KaramataDirection::Up);
    const double td = karamata_ratio_target(p, -1.0, KaramataDirection::Down);
    CHECK(tu == doctest::Approx(1.5 / 1.3));
    CHECK(td == doctest::Approx(-0.5 / 0.7));
    double pu = 1e300, pd = 1e300;
    for (double t : {1e4, 1e6, 1e9, 1e12, 1e15}) {
        const double eu = std::fabs(second_order_karamata_ratio(f.fn(), p, 1.0, 0.0, t, KaramataDirection::Up, up_int) / tu - 1);
        const double ed =
            std::fabs(second_order_karamata_ratio(f.fn(), p, -1.0, 0.0, t, KaramataDirection::Down, down_int) / td - 1);
        CHECK(eu < pu);
        CHECK(ed < pd);
        pu = eu;
        pd = ed;
    }
    CHECK(pu < 0.01);
    CHECK(pd < 0.01);
}

TEST_CASE("Karamata ratio by quadrature matches the closed-form integral")
{
    const PowerPerturbedFamily f{0.5, -0.2, 1.0};
    const SecondOrderParams p = f.params();
    const double t = 1e4;
    const double a = second_order_karamata_ratio(f.fn(), p, -1.0, 0.0, t, KaramataDirection::Down);
    const double b = second_order_karamata_ratio(f.fn(), p, -1.0, 0.0, t, KaramataDirection::Down,
                                                 RealFn([f](double s) { return f.down_integral(-1.0, s); }));
    CHECK(a == doctest::Approx(b).epsilon(1e-5));
    const double c = second_order_karamata_ratio(f.fn(), p, 1.0, 1.0, t, KaramataDirection::Up);
    const double d = second_order_karamata_ratio(f.fn(), p, 1.0, 1.0, t, KaramataDirection::Up,
                                                 RealFn([f](double s) { return f.up_integral(1.0, 1.0, s); }));
    CHECK(c == doctest::Approx(d).epsilon(1e-5));
}

TEST_CASE("powers and convolutions of second-order regularly varying functions")
{
    const PowerPerturbedFamily f{0.5, -0.3, 0.1};
    const SecondOrderParams p = f.params();
    for (double theta : {0.5, 2.0, -1.0}) {
        const SecondOrderParams q = power_2rv_params(p, theta);
        const RealFn g = [f, theta](double t) { return std::pow(std::fabs(f(t)), theta); };
        for (double x : {0.5, 2.0, 5.0})
            CHECK(second_order_limit(g, q, 1e8, x) ==
                  doctest::Approx(second_order_target(q.alpha, q.rho, x)).epsilon(0.02));
    }

    // int_0^t F1(s) F2(t - s) ds of power-perturbed functions is a sum of beta functions
    const PowerPerturbedFamily f1{0.5, -0.3, 0.1}, f2{0.2, -0.5, 0.2};
    const SecondOrderParams c = convolve_2rv_params(f1.params(), f2.params());
    CHECK(c.alpha == doctest::Approx(1.7));
    CHECK(c.rho == doctest::Approx(-0.3));
    auto conv = [&](double t) {
        double s = 0.0;
        for (const auto& [c1, a1] : {std::pair{1.0, 0.5}, std::pair{0.1, 0.2}})
            for (const auto& [c2, a2] : {std::pair{1.0, 0.2}, std::pair{0.2, -0.3}})
                s += c1 * c2 * beta_fn(a1 + 1, a2 + 1) * std::pow(t, a1 + a2 + 1);
        return s;
    };
    for (double x : {0.5, 2.0, 5.0})
        CHECK(second_order_limit(conv, c, 1e8, x) ==
              doctest::Approx(second_order_target(c.alpha, c.rho, x)).epsilon(0.05));
}

TEST_CASE("parameter validation")
{
    SecondOrderParams p;
    p.alpha = 0.5;
    p.rho = 0.3;
    p.A = PowerAuxiliary{0.1, 0.3}.fn();
    CHECK_THROWS_AS(p.validate(), InvalidSpec);
    SecondOrderParams q;
    q.alpha = 0.5;
    q.rho = -0.3;
    CHECK_THROWS_AS(q.validate(), InvalidSpec);  // missing A
    const RealFn zero = [](double) { return 0.0; };
    SecondOrderParams r;
    r.rho = -0.3;
    r.A = PowerAuxiliary{0.1, -0.3}.fn();
    CHECK_THROWS_AS(second_order_limit(zero, r, 10.0, 2.0), DomainError);
    MembershipPolicy bad;
    bad.x_values = {1.0};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
}
