#include "hawkes/error.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/mixed_ml.hpp"
#include "hawkes/quadrature.hpp"
#include "hawkes/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace hawkes;

namespace {

std::vector<KernelSpec> corpus()
{
    return {KernelSpec{ExponentialParams{0.5, 2.0}},  KernelSpec{ExponentialParams{1.0, 1.0}},
            KernelSpec{ParetoTailParams{1.5, 0.4, 1.0}}, KernelSpec{ParetoTailParams{0.6, 0.3, 2.0}},
            KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}}, KernelSpec{MittagLefflerParams{0.7, 2.0, 0.5}},
            KernelSpec{MixedMittagLefflerParams{}}};
}

} // namespace

TEST_CASE("cell masses add up to the cumulative mass")
{
    for (const KernelSpec& spec : corpus()) {
        const Kernel k = build_kernel(spec);
        for (double T : {1.0, 10.0, 100.0}) {
            const int n = 1000;
            const double h = T / n;
            double sum = 0.0;
            for (int i = 0; i < n; ++i)
                sum += k.cell_mass(i * h, (i + 1) * h);
            const double ref = k.m() - k.tail(T);
            CHECK_MESSAGE(std::fabs(sum - ref) <= 1e-10 * ref, k.name() << " T=" << T);
        }
    }
}

TEST_CASE("majorant dominates phi")
{
    for (const KernelSpec& spec : corpus()) {
        const Kernel k = build_kernel(spec);
        for (double t = 1e-3; t < 1e4; t *= 1.17)
            CHECK_MESSAGE(k.majorant(t) >= k.phi(t) * (1.0 - 1e-12), k.name() << " t=" << t);
    }
}

TEST_CASE("Mittag-Leffler tail two-term expansion")
{
    // 1/Gamma(1 - 2 alpha) vanishes at alpha = 1/2
    for (const auto& [a, b] : {std::pair{0.5, 1.0}, std::pair{0.7, 2.0}, std::pair{0.3, 1.0}}) {
        const Kernel k = build_kernel(KernelSpec{MittagLefflerParams{a, b, 1.0}});
        double prev = 1e300;
        for (double t : {1e2, 1e3, 1e4}) {
            const double two = std::pow(t, -a) / (b * gamma_fn(1.0 - a)) -
                               std::pow(t, -2.0 * a) * rgamma_fn(1.0 - 2.0 * a) / (b * b);
            const double ratio = std::fabs(k.tail(t) - two) / std::pow(t, -2.0 * a);
            CHECK(ratio < prev);
            prev = ratio;
        }
        CHECK(prev < 0.1);
    }
}

TEST_CASE("mixed Mittag-Leffler density integrates to one")
{
    MixedMittagLefflerParams p;
    p.alpha1 = 0.5;
    p.alpha2 = 0.7;
    p.beta1 = 1.0;
    p.beta2 = 2.0;
    const Kernel k = build_kernel(KernelSpec{p});
    // integrate past the table, where phi and Phi are extrapolated as regularly varying
    const double T = 100.0 * p.table_horizon;
    const double body = integrate_singular([&](double t) { return k.phi(t); }, 0.0, 1e-3) +
                        integrate_log_panels([&](double t) { return k.phi(t); }, 1e-3, T, 8, 1e-10);
    CHECK(body + k.tail(T) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mixed Mittag-Leffler table matches direct evaluation")
{
    const auto model = std::make_shared<MixedMittagLefflerModel>(MixedMittagLefflerParams{});
    for (double t : {0.05, 0.7, 3.0, 40.0, 900.0, 2.5e4}) {
        CHECK(model->phi(t) == doctest::Approx(model->phi_direct(t)).epsilon(1e-5));
        CHECK(model->tail(t) == doctest::Approx(model->tail_direct(t)).epsilon(1e-5));
    }
}

TEST_CASE("regime classification")
{
    CHECK(classify_regime(build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}})) == Regime::Subcritical);
    CHECK(classify_regime(build_kernel(KernelSpec{ExponentialParams{1.0, 1.0}})) == Regime::WeaklyCritical);
    CHECK(classify_regime(build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}})) ==
          Regime::StronglyCritical);
    CHECK_THROWS_AS(classify_regime(build_kernel(KernelSpec{ExponentialParams{1.5, 1.0}})), UnsupportedRegime);
}

TEST_CASE("exponential kernel closed forms")
{
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{0.5, 2.0}});
    CHECK(k.m() == 0.5);
    CHECK(k.phi(1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(k.tail(1.0) == doctest::Approx(0.5 * std::exp(-2.0)));
    CHECK(std::isinf(k.tail_index()));
    CHECK(k.laplace_phi(1.0).value() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Pareto tail is continuous at the cutoff and regularly varying")
{
    const ParetoTailParams p{1.5, 0.4, 2.0};
    const Kernel k = build_kernel(KernelSpec{p});
    CHECK(k.tail(p.cutoff * (1 - 1e-12)) == doctest::Approx(k.tail(p.cutoff)).epsilon(1e-9));
    CHECK(k.tail(1e4) == doctest::Approx(p.c * std::pow(1e4, -p.alpha)));
    CHECK(k.tail_index() == p.alpha);
    CHECK(k.bounded_at_zero());
}

TEST_CASE("kernel specs round-trip through JSON")
{
    for (const KernelSpec& spec : corpus()) {
        const nlohmann::json j = to_json(spec);
        const KernelSpec back = kernel_spec_from_json(j);
        CHECK(to_json(back) == j);
        CHECK(kernel_spec_from_string(j.dump()).family() == spec.family());
    }
    CHECK(kernel_spec_from_string(R"({"family":"Zero"})").family() == KernelFamily::Zero);
}

TEST_CASE("malformed kernel specs are rejected")
{
    CHECK_THROWS_AS(kernel_spec_from_string("{"), InvalidSpec);
    CHECK_THROWS_AS(kernel_spec_from_string(R"({"family":"Nope"})"), InvalidSpec);
    CHECK_THROWS_AS(kernel_spec_from_string(R"({"family":"Exponential","params":{"m":0.5,"gamma":1}})"),
                    InvalidSpec);
    CHECK_THROWS_AS(build_kernel(KernelSpec{MittagLefflerParams{1.2, 1.0, 1.0}}), InvalidSpec);
    CHECK_THROWS_AS(build_kernel(KernelSpec{ExponentialParams{0.5, -1.0}}), InvalidSpec);
}
