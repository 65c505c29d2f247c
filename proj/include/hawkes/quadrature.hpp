#pragma once

#include <functional>

namespace hawkes {

using RealFn = std::function<double(double)>;

// Finite interval, tolerates integrable endpoint singularities (tanh-sinh).
double integrate_singular(const RealFn& f, double a, double b, double rel_tol = 1e-12);

// [a, inf) for decaying integrands (exp-sinh).
double integrate_to_infinity(const RealFn& f, double a, double rel_tol = 1e-12);

// Smooth integrand on [a, b] (adaptive Gauss-Kronrod 31).
double integrate_smooth(const RealFn& f, double a, double b, double rel_tol = 1e-12);

// Composite rule on log-spaced panels over [a, b], 0 < a < b: per_decade panels per
// factor of ten, adaptive Gauss-Kronrod on each. For integrands spanning many decades.
double integrate_log_panels(const RealFn& f, double a, double b, int per_decade = 4, double rel_tol = 1e-12);

// Fixed 10-point Gauss-Legendre on [a, b].
double gauss_legendre10(const RealFn& f, double a, double b);

} // namespace hawkes
