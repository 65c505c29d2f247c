#pragma once

#include "hawkes/kernels.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hawkes {

struct EventSequence {
    double horizon = 0.0;
    std::vector<double> times;  // strictly increasing, in (0, horizon]

    void validate() const;
    // N(t)
    std::size_t count_until(double t) const;
};

struct SimConfig {
    double mu0 = 1.0;
    KernelSpec kernel{ZeroParams{}};
    double horizon = 10.0;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 0;
    std::vector<double> checkpoint_times;  // defaults to {horizon} when empty

    void validate() const;
    std::vector<double> checkpoints() const;
};

struct SimOptions {
    unsigned workers = 0;              // 0: hardware concurrency
    double refresh_interval = 1.0;     // thinning bound recomputed at least this often
    double active_cutoff = 1e-12;      // drop past events whose majorant falls below cutoff * mu0

    void validate() const;
};

// Singular kernels (unbounded at 0) are simulated by inverting the compensator,
// bounded ones by thinning against the majorant.
enum class SimMethod { Thinning, CompensatorInversion };

SimMethod simulation_method(const Kernel& k);

// Deterministic in (cfg.seed, path_index).
EventSequence simulate_path(const SimConfig& cfg, const Kernel& k, std::uint64_t path_index,
                            const SimOptions& options = {});
EventSequence simulate_path(const SimConfig& cfg, std::uint64_t path_index, const SimOptions& options = {});

struct CheckpointMoments {
    double checkpoint = 0.0;
    double mean = 0.0;
    double mean_se = 0.0;
    double var = 0.0;
    double var_se = 0.0;
};

struct MonteCarloResult {
    std::vector<CheckpointMoments> checkpoints;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Sample mean and unbiased variance of N(t) per checkpoint. Paths run on options.workers
// threads; counts are merged in path order so results do not depend on the schedule.
MonteCarloResult monte_carlo_moments(const SimConfig& cfg, const SimOptions& options = {});

// Per-path counts at each checkpoint, row = path index.
std::vector<std::vector<std::uint64_t>> simulate_counts(const SimConfig& cfg, const SimOptions& options = {});

MonteCarloResult summarize_counts(const std::vector<std::vector<std::uint64_t>>& counts,
                                  const std::vector<double>& checkpoints, std::uint64_t seed);

nlohmann::json to_json(const MonteCarloResult& r);
nlohmann::json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const nlohmann::json& j);

// One time per row under a "time" header.
void write_csv(const EventSequence& events, std::ostream& out);

} // namespace hawkes
