#include "hawkes/simulator.hpp"

#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/philox.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace hawkes {

void EventSequence::validate() const
{
    double prev = 0.0;
    for (double t : times) {
        if (!(t > prev) || t > horizon)
            throw NumericalError("EventSequence: times must be strictly increasing in (0, horizon]");
        prev = t;
    }
}

std::size_t EventSequence::count_until(double t) const
{
    return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

void SimConfig::validate() const
{
    if (!(mu0 > 0.0) || !std::isfinite(mu0))
        throw InvalidSpec("SimConfig: mu0 must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidSpec("SimConfig: horizon must be positive");
    if (n_paths < 1)
        throw InvalidSpec("SimConfig: n_paths must be >= 1");
    kernel.validate();
    // mixed kernels are critical by construction; skip building their table
    if (kernel.family() != KernelFamily::MixedMittagLeffler &&
        build_kernel(kernel).m() > 1.0 + critical_mass_tolerance)
        throw UnsupportedRegime("SimConfig: kernel mass m > 1 (explosive process)");
    for (double c : checkpoint_times)
        if (!(c > 0.0 && c <= horizon))
            throw InvalidSpec("SimConfig: checkpoint " + format_number(c) + " outside (0, horizon]");
}

std::vector<double> SimConfig::checkpoints() const
{
    if (checkpoint_times.empty())
        return {horizon};
    std::vector<double> c = checkpoint_times;
    std::sort(c.begin(), c.end());
    return c;
}

void SimOptions::validate() const
{
    if (!(refresh_interval > 0.0))
        throw InvalidSpec("SimOptions: refresh_interval must be positive");
    if (!(active_cutoff >= 0.0))
        throw InvalidSpec("SimOptions: active_cutoff must be >= 0");
}

SimMethod simulation_method(const Kernel& k)
{
    return k.bounded_at_zero() ? SimMethod::Thinning : SimMethod::CompensatorInversion;
}

namespace {

double exponential(PhiloxStream& rng)
{
    return -std::log(rng.uniform());
}

// Ogata thinning with a piecewise-constant bound mu0 + sum majorant(s - tau).
EventSequence thin(const SimConfig& cfg, const Kernel& k, PhiloxStream& rng, const SimOptions& opt)
{
    EventSequence out;
    out.horizon = cfg.horizon;
    std::deque<double> active;
    const double cutoff = opt.active_cutoff * cfg.mu0;
    const double T = cfg.horizon;
    double s = 0.0;
    while (s < T) {
        while (!active.empty() && k.majorant(s - active.front()) < cutoff)
            active.pop_front();
        double bound = cfg.mu0;
        for (double tau : active)
            bound += k.majorant(s - tau);
        const double window_end = std::min(T, s + opt.refresh_interval);
        const double c = s + exponential(rng) / bound;
        if (c > window_end) {
            s = window_end;
            continue;
        }
        const double u = rng.uniform();
        double lambda = cfg.mu0;
        for (double tau : active) {
            const double age = c - tau;
            const double ph = k.phi(age);
            const double mj = k.majorant(age);
            if (ph > mj * (1.0 + 1e-12) + 1e-300)
                throw NumericalError("simulate_path: majorant violated at lag " + format_number(age));
            lambda += ph;
        }
        if (lambda > bound * (1.0 + 1e-12))
            throw NumericalError("simulate_path: intensity exceeds thinning bound");
        s = c;
        if (u * bound <= lambda) {
            if (!out.times.empty() && !(c > out.times.back()))
                continue;
            out.times.push_back(c);
            active.push_back(c);
        }
    }
    return out;
}

// Exact inversion of the compensator between events: solve
// mu0 (u - s) + sum_i int_{s - tau_i}^{u - tau_i} phi = E with E ~ Exp(1).
EventSequence invert(const SimConfig& cfg, const Kernel& k, PhiloxStream& rng, const SimOptions& opt)
{
    EventSequence out;
    out.horizon = cfg.horizon;
    std::deque<double> active;
    const double cutoff = opt.active_cutoff * cfg.mu0;
    const double T = cfg.horizon;
    std::vector<double> base;
    std::vector<bool> use_tail;
    double s = 0.0;
    while (true) {
        while (!active.empty() && s > active.front() && k.majorant(s - active.front()) < cutoff)
            active.pop_front();
        const double E = exponential(rng);
        // Increments per active event measured from s, through the tail when it is small.
        base.clear();
        use_tail.clear();
        for (double tau : active) {
            const double a = s - tau;
            const double tl = a > 0.0 ? k.tail(a) : k.m();
            const bool t_route = tl < 0.5 * k.m();
            use_tail.push_back(t_route);
            base.push_back(t_route ? tl : k.cumulative(a));
        }
        // comp(w) = compensator over (s, s + w]; rate(w) its derivative
        auto comp = [&](double w, double* rate) {
            double v = cfg.mu0 * w, r = cfg.mu0;
            std::size_t i = 0;
            for (double tau : active) {
                const double age = s + w - tau;
                v += use_tail[i] ? base[i] - k.tail(age) : k.cumulative(age) - base[i];
                if (rate)
                    r += k.phi(age);
                ++i;
            }
            if (rate)
                *rate = r;
            return v;
        };
        double w_hi = E / cfg.mu0;  // the compensator grows at least at rate mu0
        if (s + w_hi > T) {
            if (comp(T - s, nullptr) < E)
                break;
            w_hi = T - s;
        }
        // Newton on log C(w) = log E in y = log w: near-linear for power-law behaviour at 0.
        double y_hi = std::log(w_hi), y_lo = y_hi - 120.0;
        double y = y_hi;
        const double logE = std::log(E);
        for (int it = 0; it < 200; ++it) {
            double r = 0.0;
            const double w = std::exp(y);
            const double C = comp(w, &r);
            const double f = std::log(C) - logE;
            if (f > 0.0)
                y_hi = y;
            else
                y_lo = y;
            if (f == 0.0 || y_hi - y_lo <= 1e-14)
                break;
            const double slope = w * r / C;
            double next = y - f / slope;
            if (!(next > y_lo && next < y_hi) || !std::isfinite(next))
                next = 0.5 * (y_lo + y_hi);
            if (std::fabs(next - y) <= 1e-13) {
                y = next;
                break;
            }
            y = next;
        }
        double u = s + std::exp(y);
        if (!(u > s) || (!out.times.empty() && !(u > out.times.back())))
            u = std::nextafter(std::max(s, out.times.empty() ? 0.0 : out.times.back()), T + 1.0);
        if (u > T)
            break;
        out.times.push_back(u);
        active.push_back(u);
        s = u;
    }
    return out;
}

unsigned resolve_workers(unsigned w)
{
    if (w == 0)
        w = std::max(1u, std::thread::hardware_concurrency());
    return w;
}

} // namespace

EventSequence simulate_path(const SimConfig& cfg, const Kernel& k, std::uint64_t path_index, const SimOptions& options)
{
    cfg.validate();
    options.validate();
    if (k.m() > 1.0 + critical_mass_tolerance)
        throw UnsupportedRegime("simulate_path: supercritical kernel");
    PhiloxStream rng(cfg.seed, path_index);
    return simulation_method(k) == SimMethod::Thinning ? thin(cfg, k, rng, options) : invert(cfg, k, rng, options);
}

EventSequence simulate_path(const SimConfig& cfg, std::uint64_t path_index, const SimOptions& options)
{
    return simulate_path(cfg, build_kernel(cfg.kernel), path_index, options);
}

std::vector<std::vector<std::uint64_t>> simulate_counts(const SimConfig& cfg, const SimOptions& options)
{
    cfg.validate();
    options.validate();
    const Kernel k = build_kernel(cfg.kernel);
    const std::vector<double> cps = cfg.checkpoints();
    std::vector<std::vector<std::uint64_t>> counts(cfg.n_paths, std::vector<std::uint64_t>(cps.size(), 0));
    const unsigned workers = std::min<std::size_t>(resolve_workers(options.workers), cfg.n_paths);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t i = next++; i < cfg.n_paths; i = next++) {
                const EventSequence ev = simulate_path(cfg, k, i, options);
                for (std::size_t c = 0; c < cps.size(); ++c)
                    counts[i][c] = ev.count_until(cps[c]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = cfg.n_paths;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return counts;
}

MonteCarloResult summarize_counts(const std::vector<std::vector<std::uint64_t>>& counts,
                                  const std::vector<double>& checkpoints, std::uint64_t seed)
{
    MonteCarloResult r;
    r.n_paths = counts.size();
    r.seed = seed;
    const double n = static_cast<double>(counts.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        CheckpointMoments m;
        m.checkpoint = checkpoints[c];
        double sum = 0.0;
        for (const auto& row : counts)
            sum += static_cast<double>(row[c]);
        const double mean = sum / n;
        double m2 = 0.0, m4 = 0.0;
        for (const auto& row : counts) {
            const double d = static_cast<double>(row[c]) - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m.mean = mean;
        if (counts.size() > 1) {
            const double s2 = m2 / (n - 1.0);
            m4 /= n;
            m.var = s2;
            m.mean_se = std::sqrt(s2 / n);
            // Var(s^2) = (mu4 - (n-3)/(n-1) sigma^4)/n
            const double vv = (m4 - (n - 3.0) / (n - 1.0) * s2 * s2) / n;
            m.var_se = std::sqrt(std::max(0.0, vv));
        }
        r.checkpoints.push_back(m);
    }
    return r;
}

MonteCarloResult monte_carlo_moments(const SimConfig& cfg, const SimOptions& options)
{
    return summarize_counts(simulate_counts(cfg, options), cfg.checkpoints(), cfg.seed);
}

nlohmann::json to_json(const MonteCarloResult& r)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckpointMoments& m : r.checkpoints) {
        arr.push_back({{"checkpoint", m.checkpoint},
                       {"mean", m.mean},
                       {"mean_se", m.mean_se},
                       {"var", m.var},
                       {"var_se", m.var_se},
                       {"n_paths", r.n_paths},
                       {"seed", r.seed}});
    }
    return arr;
}

nlohmann::json to_json(const SimConfig& cfg)
{
    return {{"mu0", cfg.mu0},
            {"kernel", to_json(cfg.kernel)},
            {"horizon", cfg.horizon},
            {"paths", cfg.n_paths},
            {"seed", cfg.seed},
            {"checkpoints", cfg.checkpoints()}};
}

SimConfig sim_config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw InvalidSpec("SimConfig: expected a JSON object");
    SimConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "mu0")
            c.mu0 = value.get<double>();
        else if (key == "kernel")
            c.kernel = kernel_spec_from_json(value);
        else if (key == "horizon")
            c.horizon = value.get<double>();
        else if (key == "paths")
            c.n_paths = value.get<std::size_t>();
        else if (key == "seed")
            c.seed = value.get<std::uint64_t>();
        else if (key == "checkpoints")
            c.checkpoint_times = value.get<std::vector<double>>();
        else
            throw InvalidSpec("SimConfig: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

void write_csv(const EventSequence& events, std::ostream& out)
{
    out << "time\n";
    for (double t : events.times)
        out << format_number(t) << '\n';
}

} // namespace hawkes
