#include "suite.hpp"

#include "oracles.hpp"

#include "hawkes/error.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/regvar.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulator.hpp"
#include "hawkes/special_functions.hpp"
#include "hawkes/transforms.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

namespace hawkes::acceptance {

namespace {

constexpr double pi = boost::math::constants::pi<double>();

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b)
{
    return std::fabs(a - b) / std::fabs(b);
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome fractional_closed_forms()
{
    const Kernel k = build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}});
    const TimeGrid grid = TimeGrid::from_horizon(10.0, 0.005);
    std::ostringstream d;
    bool pass = true;
    // closed-form and discretized resolvent profiles must both reproduce the moments
    for (bool closed : {true, false}) {
        ResolveOptions opt;
        opt.allow_closed_form = closed;
        const MomentCurve c = exact_moments(solve_resolvent(k, grid, opt), 1.0, classify_regime(k));
        double em = 0.0, ev = 0.0;
        for (std::size_t i = 0; i <= grid.n_steps; ++i) {
            const double t = grid.node(i);
            if (t < 1.0 - 1e-12)
                continue;
            em = std::max(em, rel(c.mean[i], oracles::fractional_mean(0.5, 1.0, 1.0, t)));
            ev = std::max(ev, rel(c.variance[i], oracles::fractional_variance(0.5, 1.0, 1.0, t)));
        }
        pass = pass && em <= 1e-3 && ev <= 1e-3;
        d << (closed ? "closed-form" : "discretized") << " max rel err mean " << fmt("%.2e", em) << " var "
          << fmt("%.2e", ev) << (closed ? "; " : "");
    }
    return {pass, d.str()};
}

Outcome resolvent_solver()
{
    ResolveOptions opt;
    opt.allow_closed_form = false;

    const Kernel ke = build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}});
    const TimeGrid ge = TimeGrid::from_horizon(10.0, 0.01);
    const ResolventProfile pe = solve_resolvent(ke, ge, opt);
    double err_exp = 0.0;
    for (std::size_t i = 0; i < ge.n_steps; ++i) {
        // cell average of 0.5 e^{-0.5 t}
        const double a = ge.node(i), b = ge.node(i + 1);
        const double avg = (std::exp(-0.5 * a) - std::exp(-0.5 * b)) / (b - a);
        err_exp = std::max(err_exp, rel(pe.R[i], avg));
    }

    const Kernel kml = build_kernel(KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}});
    const ResolventProfile pm = solve_resolvent(kml, ge, opt);
    double err_ml = 0.0;
    for (std::size_t i = 100; i <= ge.n_steps; ++i) {
        const double t = ge.node(i);
        err_ml = std::max(err_ml, rel(pm.IR[i], std::sqrt(t) / gamma_fn(1.5)));
    }
    return {err_exp <= 1e-3 && err_ml <= 1e-3,
            "exponential R max rel err " + fmt("%.2e", err_exp) + "; Mittag-Leffler I_R on [1,10] " +
                fmt("%.2e", err_ml)};
}

Outcome subcritical_limit()
{
    ResolveOptions opt;
    opt.allow_closed_form = false;
    const Kernel k = build_kernel(KernelSpec{ExponentialParams{0.5, 1.0}});
    const ResolventProfile p = solve_resolvent(k, TimeGrid::from_horizon(100.0, 0.01), opt);
    const double err = std::fabs(p.IR.back() - 1.0);
    return {err <= 1e-4, "|I_R(100) - 1| = " + fmt("%.2e", err)};
}

Outcome monte_carlo(const SuiteOptions& o)
{
    SimConfig cfg;
    cfg.mu0 = 1.0;
    cfg.kernel = KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}};
    cfg.horizon = 10.0;
    cfg.n_paths = 10000;
    cfg.seed = o.seed;
    cfg.checkpoint_times = {2.0, 5.0, 10.0};
    SimOptions so;
    so.workers = o.workers;
    const MonteCarloResult r = monte_carlo_moments(cfg, so);
    int excursions = 0;
    std::ostringstream d;
    d << "z-scores (mean, var):";
    for (const CheckpointMoments& c : r.checkpoints) {
        const double zm = (c.mean - oracles::fractional_mean(0.5, 1.0, 1.0, c.checkpoint)) / c.mean_se;
        const double zv = (c.var - oracles::fractional_variance(0.5, 1.0, 1.0, c.checkpoint)) / c.var_se;
        excursions += (std::fabs(zm) > 3.0) + (std::fabs(zv) > 3.0);
        d << " t=" << c.checkpoint << " (" << fmt("%+.2f", zm) << ", " << fmt("%+.2f", zv) << ")";
    }
    d << "; excursions " << excursions << "/6";
    return {excursions <= 1, d.str()};
}

Outcome tauberian()
{
    const PowerPerturbedFamily f{0.5, -0.2, 1.0};
    const SecondOrderParams p = f.params();
    const double factor = tauberian_auxiliary_factor(p.alpha, p.rho);
    bool pass = true;
    std::ostringstream d;
    for (double lambda : {1e3, 1e4}) {
        const double measured = measured_tauberian_auxiliary(f.fn(), p, lambda);
        const double predicted = factor * p.A(lambda);
        const double e = rel(measured, predicted);
        pass = pass && e <= 0.02;
        d << (lambda == 1e3 ? "" : "; ") << "lambda=" << fmt("%g", lambda) << " rel err " << fmt("%.2e", e);
    }
    return {pass, d.str()};
}

Outcome karamata()
{
    const PowerPerturbedFamily f{0.5, -0.2, 1.0};
    const SecondOrderParams p = f.params();
    const double t = 1e6;
    const double up = second_order_karamata_ratio(f.fn(), p, 1.0, 0.0, t, KaramataDirection::Up,
                                                  RealFn([f](double s) { return f.up_integral(1.0, 0.0, s); }));
    const double down = second_order_karamata_ratio(f.fn(), p, -1.0, 0.0, t, KaramataDirection::Down,
                                                    RealFn([f](double s) { return f.down_integral(-1.0, s); }));
    const double tu = karamata_ratio_target(p, 1.0, KaramataDirection::Up);
    const double td = karamata_ratio_target(p, -1.0, KaramataDirection::Down);
    const double eu = rel(up, tu), ed = rel(down, td);
    return {eu <= 0.01 && ed <= 0.01, "Up " + fmt("%.5f", up) + " vs " + fmt("%.5f", tu) + " (rel err " +
                                          fmt("%.2e", eu) + "); Down " + fmt("%.5f", down) + " vs " +
                                          fmt("%.5f", td) + " (rel err " + fmt("%.2e", ed) + ")"};
}

Outcome correction_quality()
{
    bool pass = true;
    std::ostringstream d;
    bool first = true;
    for (const oracles::CorrectionCase& c : oracles::correction_cases(1.0)) {
        double pm = std::numeric_limits<double>::infinity(), pv = pm;
        bool ok = true;
        std::pair<double, double> last{};
        for (double t : {1e2, 1e3, 1e4}) {
            last = oracles::residual_ratios(c, 1.0, t);
            ok = ok && last.first < pm && last.second < pv;
            pm = last.first;
            pv = last.second;
        }
        ok = ok && last.first <= 0.3 && last.second <= 0.3;
        pass = pass && ok;
        d << (first ? "" : "; ") << c.label << " " << fmt("%.3f", last.first) << "/" << fmt("%.3f", last.second)
          << (ok ? "" : " (bad)");
        first = false;
    }
    return {pass, "residual ratios mean/var at t=1e4: " + d.str()};
}

Outcome mixed_ml_constants()
{
    MixedMittagLefflerParams mp;
    mp.alpha1 = mp.alpha2 = 0.5;
    mp.beta1 = mp.beta2 = 1.0;
    const Kernel k = build_kernel(KernelSpec{mp});
    const double t = 1e3, h = 0.01;
    ResolveOptions opt;
    opt.allow_closed_form = false;
    const ResolventProfile p = solve_resolvent(k, TimeGrid::from_horizon(t, h), opt);
    const double lead_c = 1.0 / (mixed_ml_c_beta(mp) * gamma_fn(1.5));
    const double disc = p.IR.back() - lead_c * std::sqrt(t);
    const double oracle = oracles::mixed_ml_ir_inverse_laplace(mp, t) - lead_c * std::sqrt(t);
    const double target = -0.25;
    // sign of the deviation along the discretized profile
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= p.grid.n_steps; ++i) {
        const double s = p.grid.node(i);
        worst = std::max(worst, (p.IR[i] - lead_c * std::sqrt(s)) / std::sqrt(s) - 10.0 * h);
    }
    const bool pass = rel(disc, target) <= 0.05 && rel(oracle, target) <= 0.05 && worst <= 0.0;
    return {pass, "I_R(1e3) - leading: discretized " + fmt("%.5f", disc) + ", inverse Laplace " +
                      fmt("%.5f", oracle) + ", target -0.25 (rel err " + fmt("%.2e", rel(disc, target)) +
                      "); sign check " + (worst <= 0.0 ? "ok" : "violated")};
}

Outcome properties(const SuiteOptions& o)
{
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok)
            failures.push_back(what);
    };

    double e_beta = 0.0, e_refl = 0.0;
    for (double a : {0.3, 0.5, 1.0, 1.7, 2.5, 4.2})
        for (double b : {0.2, 0.5, 1.3, 3.0, 6.5})
            e_beta = std::max(e_beta, rel(gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b), beta_fn(a, b)));
    for (double z : {-1.7, -0.5, -0.2, 0.3, 0.6, 1.4})
        e_refl = std::max(e_refl, rel(gamma_fn(z) * gamma_fn(1.0 - z), pi / std::sin(pi * z)));
    expect(e_beta <= 1e-12, "beta/gamma identity " + fmt("%.1e", e_beta));
    expect(e_refl <= 1e-12, "gamma reflection " + fmt("%.1e", e_refl));

    double e_exp = 0.0;
    for (double x = -30.0; x <= 1.0; x += 0.25)
        e_exp = std::max(e_exp, rel(mittag_leffler(1.0, 1.0, x), std::exp(x)));
    expect(e_exp <= 1e-10, "E_1 vs exp " + fmt("%.1e", e_exp));

    double e_branch = 0.0;
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
        const MittagLeffler ml(a, 1.0);
        const double x = -ml.policy().series_cutoff;
        e_branch = std::max(e_branch, rel(ml.series_branch(x), ml.asymptotic_branch(x)));
    }
    expect(e_branch <= 1e-5, "ML branch consistency " + fmt("%.1e", e_branch));

    // regular-variation identities; sample points are powers of two so that t x, 1/t and
    // t^theta are exact and the identities hold up to a few roundings
    const std::vector<double> ts{16.0, 64.0, 256.0}, xs{0.25, 0.5, 2.0, 4.0};
    double e_scale = 0.0, e_recip = 0.0, e_pi = 0.0;
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
                        e_scale = std::max(e_scale, rel(second_order_limit(g, q, t, x), v));
                    }
            }
            SecondOrderParams r;
            r.alpha = -alpha;
            r.rho = -rho;
            r.A = [A = p.A](double s) { return -A(1.0 / s); };
            const RealFn g = [f](double s) { return f(1.0 / s); };
            for (double t : ts)
                for (double x : xs) {
                    const double v = second_order_limit(f.fn(), p, t, x);
                    e_recip = std::max(e_recip, rel(-second_order_limit(g, r, 1.0 / t, 1.0 / x), v));
                }
        }
    {
        const RealFn logf = [](double t) { return std::log(t); };
        const RealFn loga = [](double t) { return 1.0 / std::log(t); };
        const RealFn log2f = [](double t) { return std::log(t) * std::log(t) + std::log(std::log(t)); };
        const RealFn log2a = [](double t) { return 2.0 / std::log(t); };
        for (const auto& [F, A] : {std::pair{logf, loga}, std::pair{log2f, log2a}}) {
            SecondOrderParams p;
            p.alpha = 0.0;
            p.rho = 0.0;
            p.A = A;
            for (double t : ts)
                for (double x : xs) {
                    const double v = second_order_limit(F, p, t, x);
                    e_pi = std::max(e_pi, std::fabs(pi_variation_prelimit(F, A, t, x) - v) / std::max(1.0, v));
                }
        }
    }
    expect(e_scale <= 1e-12, "scaling identity " + fmt("%.1e", e_scale));
    expect(e_recip <= 1e-12, "reciprocity identity " + fmt("%.1e", e_recip));
    expect(e_pi <= 1e-12, "Pi-variation identity " + fmt("%.1e", e_pi));

    // seeded simulation does not depend on the worker count
    bool bit_exact = true, monotone = true;
    for (const KernelSpec& spec :
         {KernelSpec{ExponentialParams{0.5, 1.0}}, KernelSpec{MittagLefflerParams{0.5, 1.0, 1.0}}}) {
        SimConfig cfg;
        cfg.kernel = spec;
        cfg.horizon = 10.0;
        cfg.n_paths = 64;
        cfg.seed = o.seed;
        cfg.checkpoint_times = {1.0, 2.5, 5.0, 10.0};
        SimOptions one, many;
        one.workers = 1;
        many.workers = 4;
        const auto a = simulate_counts(cfg, one);
        const auto b = simulate_counts(cfg, many);
        bit_exact = bit_exact && a == b;
        for (const auto& row : a)
            monotone = monotone && std::is_sorted(row.begin(), row.end());
        const Kernel k = build_kernel(spec);
        for (std::uint64_t i : {0u, 17u, 63u})
            bit_exact = bit_exact && simulate_path(cfg, k, i, one).times == simulate_path(cfg, k, i, many).times;
    }
    expect(bit_exact, "simulation differs across worker counts");
    expect(monotone, "non-monotone counts");

    if (failures.empty())
        return {true, "gamma/beta " + fmt("%.1e", std::max(e_beta, e_refl)) + ", ML branches " +
                          fmt("%.1e", e_branch) + ", scaling/reciprocity/Pi " +
                          fmt("%.1e", std::max({e_scale, e_recip, e_pi})) + ", simulation bit-exact (1 vs 4 workers)"};
    std::string d;
    for (const std::string& f : failures)
        d += (d.empty() ? "" : "; ") + f;
    return {false, d};
}

} // namespace

std::string criterion_name(int id)
{
    switch (id) {
    case 1: return "fractional closed forms";
    case 2: return "resolvent solver";
    case 3: return "subcritical limit";
    case 4: return "Monte-Carlo agreement";
    case 5: return "second-order Tauberian";
    case 6: return "second-order Karamata";
    case 7: return "second-order correction quality";
    case 8: return "mixed Mittag-Leffler constants";
    case 9: return "property suites";
    default: throw InvalidSpec("unknown criterion " + std::to_string(id));
    }
}

namespace {
double budget(int id)
{
    switch (id) {
    case 1: return 30.0;
    case 2: return 10.0;
    case 3: return 5.0;
    case 4: return 300.0;
    default: return 0.0;
    }
}
} // namespace

CriterionResult run_criterion(int id, const SuiteOptions& options)
{
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    r.budget_seconds = budget(id);
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome out{false, ""};
        switch (id) {
        case 1: out = fractional_closed_forms(); break;
        case 2: out = resolvent_solver(); break;
        case 3: out = subcritical_limit(); break;
        case 4: out = monte_carlo(options); break;
        case 5: out = tauberian(); break;
        case 6: out = karamata(); break;
        case 7: out = correction_quality(); break;
        case 8: out = mixed_ml_constants(); break;
        case 9: out = properties(options); break;
        }
        r.pass = out.pass;
        r.detail = out.detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.budget_seconds > 0.0 && r.seconds > r.budget_seconds) {
        r.pass = false;
        r.detail += "; over runtime budget of " + fmt("%g", r.budget_seconds) + " s";
    }
    return r;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options, std::ostream& out)
{
    std::vector<CriterionResult> results;
    for (int id = 1; id <= criterion_count; ++id) {
        if (!options.only.empty() && !options.only.count(id))
            continue;
        results.push_back(run_criterion(id, options));
        out << format_result(results.back()) << std::endl;
    }
    return results;
}

std::string format_result(const CriterionResult& r)
{
    return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " + r.detail +
           " (" + fmt("%.2f", r.seconds) + " s)";
}

} // namespace hawkes::acceptance
