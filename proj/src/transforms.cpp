#include "hawkes/transforms.hpp"

#include "hawkes/error.hpp"
#include "hawkes/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace hawkes {

namespace {

// int_0^U g(u) du: tanh-sinh near 0, then adaptive panels spaced evenly in log u.
double panel_integral(const RealFn& g, double U, const TransformPolicy& policy)
{
    const double u_min = U * 1e-10;
    const int panels_per_decade = std::max(2, policy.quad_nodes_per_decade / 16);
    return integrate_singular(g, 0.0, u_min, 1e-12) + integrate_log_panels(g, u_min, U, panels_per_decade, 1e-12);
}

} // namespace

void TransformPolicy::validate() const
{
    if (!(truncation_exponent >= 12.0))
        throw InvalidSpec("TransformPolicy: truncation_exponent must be >= 12");
    if (quad_nodes_per_decade < 32)
        throw InvalidSpec("TransformPolicy: quad_nodes_per_decade must be >= 32");
}

double laplace_stieltjes(const RealFn& F, double lambda, const TransformPolicy& policy,
                         std::optional<double> tail_index)
{
    policy.validate();
    if (!(lambda > 0.0))
        throw DomainError("laplace_stieltjes: lambda must be positive");
    // Substituting u = lambda t: int_0^U e^{-u} F(u / lambda) du.
    const double U = policy.truncation_exponent * std::log(10.0);
    auto g = [&](double u) { return std::exp(-u) * F(u / lambda); };
    double value = panel_integral(g, U, policy);
    if (policy.tail_extrapolation) {
        const double T = U / lambda;
        const double FT = F(T);
        if (FT != 0.0) {
            const double a = tail_index ? *tail_index : std::log2(std::fabs(F(T) / F(0.5 * T)));
            // int_U^inf e^{-u} (u/U)^a du = U^{-a} Gamma(a + 1, U)
            if (std::isfinite(a) && a > -1.0)
                value += FT * std::pow(U, -a) * boost::math::tgamma(a + 1.0, U);
        }
    }
    if (!std::isfinite(value))
        throw NumericalError("laplace_stieltjes: quadrature did not converge");
    return value;
}

double mellin_convolve(const RealFn& K, const RealFn& F, double lambda, const TransformPolicy& policy)
{
    policy.validate();
    if (!(lambda > 0.0))
        throw DomainError("mellin_convolve: lambda must be positive");
    const double X = policy.truncation_exponent * std::log(10.0);
    auto g = [&](double x) { return K(x) * F(lambda * x); };
    double value = panel_integral(g, X, policy) + integrate_to_infinity(g, X, 1e-12);
    if (!std::isfinite(value))
        throw NumericalError("mellin_convolve: quadrature did not converge");
    return value;
}

double tauberian_auxiliary_factor(double alpha, double rho)
{
    if (!(alpha > -1.0))
        throw DomainError("tauberian_auxiliary_factor: alpha must exceed -1");
    if (!(rho <= 0.0))
        throw DomainError("tauberian_auxiliary_factor: rho must be <= 0");
    if (!(alpha + rho + 1.0 > 0.0))
        throw DomainError("tauberian_auxiliary_factor: alpha + rho + 1 must be positive");
    if (rho == 0.0)
        return 1.0;
    return gamma_fn(alpha + rho + 1.0) / gamma_fn(alpha + 1.0);
}

} // namespace hawkes
