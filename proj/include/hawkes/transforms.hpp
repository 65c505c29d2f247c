#pragma once

#include "hawkes/quadrature.hpp"

#include <optional>

namespace hawkes {

struct TransformPolicy {
    double truncation_exponent = 14.0;  // integrate while e^{-lambda t} >= 10^{-truncation_exponent}
    int quad_nodes_per_decade = 64;
    bool tail_extrapolation = true;     // add the regularly varying tail beyond truncation

    void validate() const;
};

// F^(lambda) = lambda int_0^inf e^{-lambda t} F(t) dt.
// tail_index: index a with F(t) ~ F(T) (t/T)^a past truncation; estimated from F when absent.
double laplace_stieltjes(const RealFn& F, double lambda, const TransformPolicy& policy = {},
                         std::optional<double> tail_index = std::nullopt);

// int_0^inf K(x) F(lambda x) dx
double mellin_convolve(const RealFn& K, const RealFn& F, double lambda, const TransformPolicy& policy = {});

// Gamma(alpha + rho + 1) / Gamma(alpha + 1)
double tauberian_auxiliary_factor(double alpha, double rho);

} // namespace hawkes
