#pragma once

#include "hawkes/kernels.hpp"

#include <cmath>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
namespace boost::math {
using std::isnan;
}

#include <boost/math/interpolators/pchip.hpp>

#include <vector>

namespace hawkes {

// Convolution of two Mittag-Leffler densities. Small lags use the double power
// series; phi and Phi are tabulated on log-spaced nodes up to table_horizon from the
// branch-cut form of the inverse Laplace transform and interpolated monotonically
// in log-log coordinates; beyond the table the first-order regularly varying tail is used.
class MixedMittagLefflerModel final : public KernelModel {
public:
    explicit MixedMittagLefflerModel(MixedMittagLefflerParams p);

    std::string name() const override { return "MixedMittagLeffler"; }
    KernelFamily family() const override { return KernelFamily::MixedMittagLeffler; }
    double phi(double t) const override;
    double tail(double t) const override;
    double m() const override { return 1.0; }
    double tail_index() const override { return p_.alpha1; }
    double cumulative(double t) const override;
    double integrated_cumulative(double t) const override;
    double sigma() const override;
    double psi2_infinity() const override;
    std::optional<double> laplace_phi(double lambda) const override;
    double majorant(double t) const override;
    bool bounded_at_zero() const override { return p_.alpha1 + p_.alpha2 >= 1.0; }
    std::optional<KernelSpec> spec() const override { return KernelSpec{p_}; }

    // Direct (untabulated) evaluations, used to build and check the table.
    double phi_direct(double t) const;
    double tail_direct(double t) const;
    // Double power series; shift -1 gives phi, 0 gives K, +1 gives int_0^t K.
    double series(double t, int shift) const;

    double series_limit() const { return t_lo_; }

private:
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

    MixedMittagLefflerParams p_;
    double t_lo_;
    double log_t_lo_;
    double log_t_hi_;
    struct Term {
        double coef;   // (-1)^{k+l} beta1^{k+1} beta2^{l+1}
        int k1;        // k + 1
        int k2;        // l + 1
        double rg[3];  // 1/Gamma(p + shift + 1) for shift -1, 0, 1
    };
    std::vector<Term> terms_;
    std::vector<Pchip> log_phi_;   // single element; pchip is not default constructible
    std::vector<Pchip> log_tail_;
    double tail_hi_ = 0.0;
    double k2_lo_ = 0.0;
    std::vector<double> major_t_;  // ascending nodes
    std::vector<double> major_v_;  // running max of phi from the right
};

} // namespace hawkes
