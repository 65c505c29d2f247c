#pragma once

#include "hawkes/kernels.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hawkes {

struct TimeGrid {
    double step = 0.01;
    std::size_t n_steps = 1000;

    TimeGrid() = default;
    TimeGrid(double step, std::size_t n_steps);
    // n_steps = round(horizon / step); rejects horizons that are not a multiple of step.
    static TimeGrid from_horizon(double horizon, double step);

    double horizon() const { return step * static_cast<double>(n_steps); }
    double node(std::size_t i) const { return step * static_cast<double>(i); }
    double midpoint(std::size_t cell) const { return step * (static_cast<double>(cell) + 0.5); }
    void validate() const;
    bool operator==(const TimeGrid& o) const { return step == o.step && n_steps == o.n_steps; }
};

enum class ResolventMethod { Discretized, ClosedFormExponential, ClosedFormFractional };

std::string to_string(ResolventMethod m);

struct ResolventProfile {
    TimeGrid grid;
    std::vector<double> R;    // cell midpoints, n_steps values (cell i covers [i h, (i+1) h])
    std::vector<double> IR;   // nodes, n_steps + 1 values
    std::vector<double> IR2;  // nodes, n_steps + 1 values
    ResolventMethod method = ResolventMethod::Discretized;
    std::optional<std::string> warning;
};

struct ResolveOptions {
    bool allow_closed_form = true;       // use a closed form when the kernel admits one
    double negativity_tolerance = 1e-9;  // relative to max |R|
    std::size_t direct_limit = 4096;     // above this many steps the recursion uses FFT blocks
};

ResolventProfile solve_resolvent(const Kernel& k, const TimeGrid& grid, const ResolveOptions& options = {});

// R = beta t^{alpha-1}/Gamma(alpha), I_R = beta t^alpha/Gamma(alpha+1), I_R^2 = beta t^{alpha+1}/Gamma(alpha+2).
ResolventProfile closed_form_fractional_profile(double alpha, double beta, const TimeGrid& grid);

// Mittag-Leffler kernel with mass scale m <= 1: I_R = m/(1-m) (1 - E_alpha(-(1-m) beta t^alpha)).
ResolventProfile closed_form_mittag_leffler_profile(const MittagLefflerParams& p, const TimeGrid& grid);

// Exponential kernel: R = m beta e^{-(1-m) beta t}.
ResolventProfile closed_form_exponential_profile(double m, double beta, const TimeGrid& grid);

// sum_{n=1}^{N} phi^{*n} under the same discretization as solve_resolvent.
ResolventProfile neumann_partial_sum(const Kernel& k, const TimeGrid& grid, int n_terms,
                                     double mass_gap_tolerance = 1e-6);

// Columns t, R, IR, IR2 for t = h, 2h, ..., T; R is the cell average over (t - h, t].
void write_csv(const ResolventProfile& profile, std::ostream& out);

// Product-integration weights of the discrete Volterra recursion:
// U_n = K_n + sum_{k=0}^{n-1} c_k U_{n-k}.
struct VolterraWeights {
    std::vector<double> c;   // size n_steps
    std::vector<double> K;   // K(t_n), size n_steps + 1
};
VolterraWeights volterra_weights(const Kernel& k, const TimeGrid& grid);

} // namespace hawkes
