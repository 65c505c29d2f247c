#include "hawkes/error.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/philox.hpp"
#include "hawkes/simulator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace hawkes;

namespace {

SimConfig config(KernelSpec spec, double horizon, std::size_t paths, std::uint64_t seed)
{
    SimConfig c;
    c.kernel = spec;
    c.horizon = horizon;
    c.n_paths = paths;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("Philox known-answer vectors")
{
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(P::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(P::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform draws lie in the open unit interval")
{
    PhiloxStream s(7, 3);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("paths are pure functions of seed and index")
{
    for (const KernelSpec& spec : {KernelSpec{ExponentialParams{0.7, 1.0}}, KernelSpec{MittagLefflerParams{0.5, 1.0, 0.8}},
                                   KernelSpec{ParetoTailParams{1.5, 0.4, 1.0}}}) {
        const SimConfig cfg = config(spec, 20.0, 4, 99);
        const EventSequence a = simulate_path(cfg, 3), b = simulate_path(cfg, 3);
        CHECK(a.times == b.times);
        a.validate();
        CHECK(simulate_path(cfg, 2).times != a.times);
        SimConfig other = cfg;
        other.seed = 100;
        CHECK(simulate_path(other, 3).times != a.times);
    }
}

TEST_CASE("results do not depend on the number of workers")
{
    for (const KernelSpec& spec : {KernelSpec{ExponentialParams{0.7, 1.0}}, KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}}}) {
        SimConfig cfg = config(spec, 10.0, 48, 5);
        cfg.checkpoint_times = {1.0, 3.0, 10.0};
        SimOptions one;
        one.workers = 1;
        const auto ref = simulate_counts(cfg, one);
        for (unsigned w : {2u, 3u, 8u}) {
            SimOptions o;
            o.workers = w;
            CHECK(simulate_counts(cfg, o) == ref);
            const MonteCarloResult a = monte_carlo_moments(cfg, one), b = monte_carlo_moments(cfg, o);
            CHECK(to_json(a).dump() == to_json(b).dump());
        }
        for (const auto& row : ref)
            CHECK(std::is_sorted(row.begin(), row.end()));
    }
}

TEST_CASE("simulation method follows boundedness at zero")
{
    CHECK(simulation_method(build_kernel(KernelSpec{ExponentialParams{}})) == SimMethod::Thinning);
    CHECK(simulation_method(build_kernel(KernelSpec{MittagLefflerParams{}})) == SimMethod::CompensatorInversion);
}

TEST_CASE("thinning reproduces the exponential-kernel mean")
{
    SimConfig cfg = config(KernelSpec{ExponentialParams{0.5, 1.0}}, 10.0, 10000, 2024);
    cfg.checkpoint_times = {1.0, 2.0, 4.0, 7.0, 10.0};
    const MonteCarloResult r = monte_carlo_moments(cfg);
    const Kernel k = build_kernel(cfg.kernel);
    const ResolventProfile p = solve_resolvent(k, TimeGrid::from_horizon(10.0, 0.01));
    const MomentCurve exact = exact_moments(p, 1.0);
    int outside = 0;
    for (const CheckpointMoments& c : r.checkpoints) {
        const auto i = static_cast<std::size_t>(std::lround(c.checkpoint / 0.01));
        outside += std::fabs(c.mean - exact.mean[i]) > 3.0 * c.mean_se;
    }
    CHECK(outside < 2);
}

TEST_CASE("Poisson counts for the zero kernel")
{
    const MonteCarloResult r = monte_carlo_moments(config(KernelSpec{ZeroParams{}}, 100.0, 2000, 42));
    REQUIRE(r.checkpoints.size() == 1);
    CHECK(std::fabs(r.checkpoints[0].mean - 100.0) < 4.0 * r.checkpoints[0].mean_se);
    CHECK(std::fabs(r.checkpoints[0].var - 100.0) < 4.0 * r.checkpoints[0].var_se);
}

TEST_CASE("summary statistics")
{
    const std::vector<std::vector<std::uint64_t>> counts{{1, 2}, {3, 4}, {5, 9}, {7, 9}};
    const MonteCarloResult r = summarize_counts(counts, {1.0, 2.0}, 11);
    CHECK(r.n_paths == 4);
    CHECK(r.checkpoints[0].mean == doctest::Approx(4.0));
    CHECK(r.checkpoints[0].var == doctest::Approx(20.0 / 3.0));
    CHECK(r.checkpoints[0].mean_se == doctest::Approx(std::sqrt(20.0 / 3.0 / 4.0)));
    const auto j = to_json(r);
    REQUIRE(j.is_array());
    for (const char* key : {"checkpoint", "mean", "mean_se", "var", "var_se", "n_paths", "seed"})
        CHECK(j[0].contains(key));
}

TEST_CASE("config JSON round trip and validation")
{
    SimConfig cfg = config(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}}, 10.0, 100, 3);
    cfg.checkpoint_times = {2.0, 5.0, 10.0};
    const SimConfig back = sim_config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    auto j = to_json(cfg);
    j["bogus"] = 1;
    CHECK_THROWS_AS(sim_config_from_json(j), InvalidSpec);

    SimConfig bad = cfg;
    bad.checkpoint_times = {11.0};
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad = cfg;
    bad.mu0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
    bad = cfg;
    bad.kernel = KernelSpec{ExponentialParams{1.5, 1.0}};
    CHECK_THROWS_AS(bad.validate(), UnsupportedRegime);
}

TEST_CASE("event sequences")
{
    EventSequence e{5.0, {0.5, 1.0, 4.0}};
    e.validate();
    CHECK(e.count_until(1.0) == 2);
    CHECK(e.count_until(0.1) == 0);
    std::ostringstream out;
    write_csv(e, out);
    CHECK(out.str() == "time\n0.5\n1\n4\n");
    EventSequence bad{5.0, {1.0, 0.5}};
    CHECK_THROWS_AS(bad.validate(), NumericalError);
}
