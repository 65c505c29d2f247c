#include "hawkes/resolvent.hpp"

#include "hawkes/convolution.hpp"
#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

namespace hawkes {

TimeGrid::TimeGrid(double step_, std::size_t n) : step(step_), n_steps(n)
{
    validate();
}

TimeGrid TimeGrid::from_horizon(double horizon, double step)
{
    if (!(step > 0.0) || !(horizon > 0.0))
        throw InvalidSpec("TimeGrid: step and horizon must be positive");
    const double n = std::round(horizon / step);
    if (n < 1.0 || std::fabs(n * step - horizon) > 1e-9 * horizon)
        throw InvalidSpec("TimeGrid: horizon must be a positive multiple of step");
    return TimeGrid(step, static_cast<std::size_t>(n));
}

void TimeGrid::validate() const
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw InvalidSpec("TimeGrid: step must be positive");
    if (n_steps < 1)
        throw InvalidSpec("TimeGrid: n_steps must be >= 1");
}

std::string to_string(ResolventMethod m)
{
    switch (m) {
    case ResolventMethod::Discretized: return "Discretized";
    case ResolventMethod::ClosedFormExponential: return "ClosedFormExponential";
    case ResolventMethod::ClosedFormFractional: return "ClosedFormFractional";
    }
    return "Discretized";
}

namespace {

void fill_ir2(ResolventProfile& p)
{
    const double h = p.grid.step;
    p.IR2.assign(p.IR.size(), 0.0);
    for (std::size_t i = 1; i < p.IR.size(); ++i)
        p.IR2[i] = p.IR2[i - 1] + 0.5 * h * (p.IR[i - 1] + p.IR[i]);
}

ResolventProfile profile_from_nodes(const TimeGrid& grid, std::vector<double> U, ResolventMethod method)
{
    ResolventProfile p;
    p.grid = grid;
    p.method = method;
    p.R.resize(grid.n_steps);
    for (std::size_t i = 0; i < grid.n_steps; ++i)
        p.R[i] = (U[i + 1] - U[i]) / grid.step;
    p.IR = std::move(U);
    fill_ir2(p);
    return p;
}

// Solves U_n (1 - c_0) = K_n + sum_{k=1}^{n-1} c_k U_{n-k}, n >= 1, U_0 = 0.
// Blocks are processed divide-and-conquer; the contribution of a finished left half
// to the right half is one (FFT) convolution.
class VolterraSolver {
public:
    VolterraSolver(const VolterraWeights& w, std::size_t direct_limit)
        : c_(w.c), K_(w.K), n_(w.K.size() - 1), U_(w.K.size(), 0.0), S_(w.K.size(), 0.0),
          denom_(1.0 - w.c[0]), direct_limit_(direct_limit)
    {
        if (!(denom_ > 0.0))
            throw NumericalError("solve_resolvent: first cell mass >= 1, grid too coarse");
    }

    std::vector<double> run()
    {
        if (n_ <= direct_limit_)
            direct(1, n_ + 1);
        else
            recurse(1, n_ + 1);
        return std::move(U_);
    }

private:
    void direct(std::size_t lo, std::size_t hi)
    {
        for (std::size_t n = lo; n < hi; ++n) {
            double s = S_[n];
            for (std::size_t j = lo; j < n; ++j)
                s += c_[n - j] * U_[j];
            U_[n] = (K_[n] + s) / denom_;
        }
    }

    void recurse(std::size_t lo, std::size_t hi)
    {
        if (hi - lo <= 128) {
            direct(lo, hi);
            return;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        recurse(lo, mid);
        std::vector<double> a(U_.begin() + static_cast<std::ptrdiff_t>(lo), U_.begin() + static_cast<std::ptrdiff_t>(mid));
        const std::size_t len = std::min(hi - lo, c_.size());
        std::vector<double> b(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(len));
        const std::vector<double> conv = linear_convolution(a, b);
        for (std::size_t n = mid; n < hi; ++n) {
            const std::size_t idx = n - lo;
            if (idx < conv.size())
                S_[n] += conv[idx];
        }
        recurse(mid, hi);
    }

    const std::vector<double>& c_;
    const std::vector<double>& K_;
    std::size_t n_;
    std::vector<double> U_;
    std::vector<double> S_;
    double denom_;
    std::size_t direct_limit_;
};

void check_mass(const Kernel& k)
{
    if (k.m() > 1.0 + critical_mass_tolerance)
        throw UnsupportedRegime("solve_resolvent: supercritical kernel (m > 1) is not supported");
}

} // namespace

VolterraWeights volterra_weights(const Kernel& k, const TimeGrid& grid)
{
    const std::size_t n = grid.n_steps;
    const double h = grid.step;
    std::vector<double> a(n + 1, 0.0), b(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const double lo = grid.node(j - 1), hi = grid.node(j);
        const double w = k.cell_mass(lo, hi);
        const double mom = k.cell_moment(lo, hi) / h;
        b[j] = mom;
        a[j] = std::max(0.0, w - mom);
    }
    VolterraWeights out;
    out.c.assign(n, 0.0);
    out.c[0] = a[1];
    for (std::size_t kk = 1; kk < n; ++kk)
        out.c[kk] = a[kk + 1] + b[kk];
    out.K.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i)
        out.K[i] = k.cumulative(grid.node(i));
    return out;
}

ResolventProfile solve_resolvent(const Kernel& k, const TimeGrid& grid, const ResolveOptions& options)
{
    grid.validate();
    check_mass(k);

    if (options.allow_closed_form) {
        if (auto spec = k.spec()) {
            if (auto e = std::get_if<ExponentialParams>(&spec->params))
                return closed_form_exponential_profile(e->m, e->beta, grid);
            if (auto ml = std::get_if<MittagLefflerParams>(&spec->params))
                return closed_form_mittag_leffler_profile(*ml, grid);
        }
    }

    if (k.family() == KernelFamily::Zero || k.m() == 0.0) {
        ResolventProfile p;
        p.grid = grid;
        p.R.assign(grid.n_steps, 0.0);
        p.IR.assign(grid.n_steps + 1, 0.0);
        p.IR2.assign(grid.n_steps + 1, 0.0);
        return p;
    }

    const VolterraWeights w = volterra_weights(k, grid);
    std::vector<double> U = VolterraSolver(w, options.direct_limit).run();
    ResolventProfile p = profile_from_nodes(grid, std::move(U), ResolventMethod::Discretized);

    double rmax = 0.0;
    for (double r : p.R) {
        if (!std::isfinite(r))
            throw NumericalError("solve_resolvent: non-finite resolvent value");
        rmax = std::max(rmax, std::fabs(r));
    }
    for (std::size_t i = 0; i < p.R.size(); ++i)
        if (p.R[i] < -options.negativity_tolerance * std::max(1.0, rmax))
            throw NumericalError("solve_resolvent: negative resolvent at t = " + format_number(grid.midpoint(i)) +
                                 "; grid too coarse");
    return p;
}

ResolventProfile closed_form_fractional_profile(double alpha, double beta, const TimeGrid& grid)
{
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0))
        throw InvalidSpec("closed_form_fractional_profile: need alpha in (0,1), beta > 0");
    grid.validate();
    ResolventProfile p;
    p.grid = grid;
    p.method = ResolventMethod::ClosedFormFractional;
    const double g0 = gamma_fn(alpha), g1 = gamma_fn(alpha + 1.0), g2 = gamma_fn(alpha + 2.0);
    p.R.resize(grid.n_steps);
    for (std::size_t i = 0; i < grid.n_steps; ++i)
        p.R[i] = beta * std::pow(grid.midpoint(i), alpha - 1.0) / g0;
    p.IR.resize(grid.n_steps + 1);
    p.IR2.resize(grid.n_steps + 1);
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.node(i);
        p.IR[i] = beta * std::pow(t, alpha) / g1;
        p.IR2[i] = beta * std::pow(t, alpha + 1.0) / g2;
    }
    return p;
}

ResolventProfile closed_form_mittag_leffler_profile(const MittagLefflerParams& ml, const TimeGrid& grid)
{
    KernelSpec{ml}.validate();
    if (ml.mass > 1.0 + critical_mass_tolerance)
        throw UnsupportedRegime("closed_form_mittag_leffler_profile: mass > 1");
    if (std::fabs(ml.mass - 1.0) <= critical_mass_tolerance)
        return closed_form_fractional_profile(ml.alpha, ml.beta, grid);
    grid.validate();
    const double a = ml.alpha, m = ml.mass;
    const double q = (1.0 - m) * ml.beta;  // resolvent Laplace transform m beta / (q + lambda^a)
    const MittagLeffler e_aa(a, a), e_1a(a, 1.0 + a), e_2a(a, 2.0 + a);
    ResolventProfile p;
    p.grid = grid;
    p.method = ResolventMethod::ClosedFormFractional;
    p.R.resize(grid.n_steps);
    for (std::size_t i = 0; i < grid.n_steps; ++i) {
        const double t = grid.midpoint(i);
        p.R[i] = m * ml.beta * std::pow(t, a - 1.0) * e_aa(-q * std::pow(t, a));
    }
    p.IR.resize(grid.n_steps + 1);
    p.IR2.resize(grid.n_steps + 1);
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.node(i);
        const double ta = std::pow(t, a);
        // 1 - E_a(-x) = x E_{a,1+a}(-x), 1 - E_{a,2}(-x) = x E_{a,2+a}(-x)
        p.IR[i] = m * ml.beta * ta * e_1a(-q * ta);
        p.IR2[i] = m * ml.beta * t * ta * e_2a(-q * ta);
    }
    return p;
}

ResolventProfile closed_form_exponential_profile(double m, double beta, const TimeGrid& grid)
{
    if (!(m >= 0.0) || !(beta > 0.0))
        throw InvalidSpec("closed_form_exponential_profile: need m >= 0, beta > 0");
    if (m > 1.0 + critical_mass_tolerance)
        throw UnsupportedRegime("closed_form_exponential_profile: m > 1");
    grid.validate();
    ResolventProfile p;
    p.grid = grid;
    p.method = ResolventMethod::ClosedFormExponential;
    const double q = (1.0 - m) * beta;
    p.R.resize(grid.n_steps);
    for (std::size_t i = 0; i < grid.n_steps; ++i)
        p.R[i] = m * beta * std::exp(-q * grid.midpoint(i));
    p.IR.resize(grid.n_steps + 1);
    p.IR2.resize(grid.n_steps + 1);
    for (std::size_t i = 0; i <= grid.n_steps; ++i) {
        const double t = grid.node(i);
        if (q * t < 1e-6) {
            // series in q t, exact for m = 1
            const double x = q * t;
            p.IR[i] = m * beta * t * (1.0 - 0.5 * x + x * x / 6.0);
            p.IR2[i] = m * beta * t * t * (0.5 - x / 6.0 + x * x / 24.0);
        } else {
            p.IR[i] = -m * beta * std::expm1(-q * t) / q;
            p.IR2[i] = m * beta * (t + std::expm1(-q * t) / q) / q;
        }
    }
    return p;
}

ResolventProfile neumann_partial_sum(const Kernel& k, const TimeGrid& grid, int n_terms, double mass_gap_tolerance)
{
    grid.validate();
    check_mass(k);
    if (n_terms < 1)
        throw InvalidSpec("neumann_partial_sum: n_terms must be >= 1");
    const std::size_t n = grid.n_steps;
    std::vector<double> U(n + 1, 0.0);
    std::optional<std::string> warning;
    const double m = k.m();
    if (m > 0.0) {
        const VolterraWeights w = volterra_weights(k, grid);
        U = w.K;
        for (int term = 2; term <= n_terms; ++term) {
            const std::vector<double> conv = linear_convolution(w.c, U);
            std::vector<double> next(n + 1, 0.0);
            // sum_{k=0}^{i-1} c_k U_{i-k} = conv[i] (U_0 = 0)
            for (std::size_t i = 1; i <= n; ++i)
                next[i] = w.K[i] + conv[i];
            U = std::move(next);
        }
        const double gap = m < 1.0 ? std::pow(m, n_terms + 1) / (1.0 - m) : std::numeric_limits<double>::infinity();
        if (gap > mass_gap_tolerance)
            warning = "neumann_partial_sum: truncated mass bound " + format_number(gap) + " exceeds tolerance " +
                      format_number(mass_gap_tolerance);
    }
    ResolventProfile p = profile_from_nodes(grid, std::move(U), ResolventMethod::Discretized);
    p.warning = warning;
    return p;
}

void write_csv(const ResolventProfile& profile, std::ostream& out)
{
    out << "t,R,IR,IR2\n";
    for (std::size_t i = 1; i <= profile.grid.n_steps; ++i) {
        out << format_number(profile.grid.node(i)) << ',' << format_number(profile.R[i - 1]) << ','
            << format_number(profile.IR[i]) << ',' << format_number(profile.IR2[i]) << '\n';
    }
}

} // namespace hawkes
