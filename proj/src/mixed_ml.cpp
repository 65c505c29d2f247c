#include "hawkes/mixed_ml.hpp"

#include "hawkes/error.hpp"
#include "hawkes/quadrature.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace hawkes {

namespace {

constexpr double pi = boost::math::constants::pi<double>();
constexpr int series_order = 40;
constexpr int series_region_nodes = 64;

using cplx = std::complex<double>;

} // namespace

MixedMittagLefflerModel::MixedMittagLefflerModel(MixedMittagLefflerParams p) : p_(p)
{
    KernelSpec{p_}.validate();

    // Below t_lo both beta_i t^{alpha_i} <= 1/4 and the double series converges fast.
    t_lo_ = std::min(std::pow(0.25 / p_.beta1, 1.0 / p_.alpha1), std::pow(0.25 / p_.beta2, 1.0 / p_.alpha2));
    t_lo_ = std::min(t_lo_, 0.5 * p_.table_horizon);
    log_t_lo_ = std::log(t_lo_);
    log_t_hi_ = std::log(p_.table_horizon);

    for (int k1 = 1; k1 <= series_order; ++k1) {
        for (int k2 = 1; k2 <= series_order; ++k2) {
            Term term{};
            term.coef = ((k1 + k2) % 2 == 0 ? 1.0 : -1.0) * std::pow(p_.beta1, k1) * std::pow(p_.beta2, k2);
            term.k1 = k1;
            term.k2 = k2;
            const double pw = p_.alpha1 * k1 + p_.alpha2 * k2;
            for (int s = -1; s <= 1; ++s)
                term.rg[s + 1] = rgamma_fn(pw + s + 1.0);
            terms_.push_back(term);
        }
    }

    const int n = p_.table_nodes;
    std::vector<double> lt(n), lphi(n), ltail(n);
    for (int i = 0; i < n; ++i) {
        const double x = log_t_lo_ + (log_t_hi_ - log_t_lo_) * i / (n - 1);
        const double t = std::exp(x);
        const double ph = phi_direct(t);
        const double ta = tail_direct(t);
        if (!(ph > 0.0) || !(ta > 0.0) || !std::isfinite(ph) || !std::isfinite(ta))
            throw NumericalError("MixedMittagLeffler: convolution quadrature failed at t = " + std::to_string(t));
        lt[i] = x;
        lphi[i] = std::log(ph);
        ltail[i] = std::log(ta);
    }
    tail_hi_ = std::exp(ltail.back());
    std::vector<double> lt2 = lt;
    log_phi_.emplace_back(std::move(lt), std::move(lphi));
    log_tail_.emplace_back(std::move(lt2), std::move(ltail));
    k2_lo_ = series(t_lo_, 1);

    // Majorant: running maximum from the right over series-region and table nodes.
    for (int i = 0; i < series_region_nodes; ++i)
        major_t_.push_back(t_lo_ * std::pow(1e-8, 1.0 - static_cast<double>(i) / series_region_nodes));
    for (int i = 0; i < n; ++i)
        major_t_.push_back(std::exp(log_t_lo_ + (log_t_hi_ - log_t_lo_) * i / (n - 1)));
    major_v_.resize(major_t_.size());
    double running = 0.0;
    for (std::size_t i = major_t_.size(); i-- > 0;) {
        running = std::max(running, phi(major_t_[i]));
        major_v_[i] = running;
    }
}

double MixedMittagLefflerModel::series(double t, int shift) const
{
    if (t <= 0.0)
        return 0.0;
    const double u1 = std::pow(t, p_.alpha1);
    const double u2 = std::pow(t, p_.alpha2);
    std::vector<double> pw1(series_order + 1), pw2(series_order + 1);
    pw1[0] = pw2[0] = 1.0;
    for (int k = 1; k <= series_order; ++k) {
        pw1[k] = pw1[k - 1] * u1;
        pw2[k] = pw2[k - 1] * u2;
    }
    double sum = 0.0;
    for (const Term& term : terms_)
        sum += term.coef * pw1[term.k1] * pw2[term.k2] * term.rg[shift + 1];
    return sum * std::pow(t, shift);
}

double MixedMittagLefflerModel::phi_direct(double t) const
{
    if (t <= 0.0)
        return phi(t);
    const double a1 = p_.alpha1, a2 = p_.alpha2, b1 = p_.beta1, b2 = p_.beta2;
    // phi(t) = (1/pi) int_0^inf e^{-rt} Im L(r e^{-i pi}) dr, with r = u / t.
    auto integrand = [=](double u) {
        if (u <= 0.0)
            return 0.0;
        const double r = u / t;
        const cplx a = std::polar(std::pow(r, a1), -pi * a1);
        const cplx b = std::polar(std::pow(r, a2), -pi * a2);
        const cplx lap = b1 * b2 / ((b1 + a) * (b2 + b));
        return std::exp(-u) * lap.imag();
    };
    const double v = integrate_singular(integrand, 0.0, 1.0, 1e-13) + integrate_to_infinity(integrand, 1.0, 1e-13);
    return v / (pi * t);
}

double MixedMittagLefflerModel::tail_direct(double t) const
{
    if (t <= 0.0)
        return 1.0;
    const double a1 = p_.alpha1, a2 = p_.alpha2, b1 = p_.beta1, b2 = p_.beta2;
    auto integrand = [=](double u) {
        if (u <= 0.0)
            return 0.0;
        const double r = u / t;
        const cplx a = std::polar(std::pow(r, a1), -pi * a1);
        const cplx b = std::polar(std::pow(r, a2), -pi * a2);
        // (1 - L_phi(lambda)) / lambda without cancellation; 1/lambda = -1/r on the cut.
        const cplx lap = -(b1 * b + b2 * a + a * b) / ((b1 + a) * (b2 + b)) / r;
        return std::exp(-u) * lap.imag();
    };
    const double v = integrate_singular(integrand, 0.0, 1.0, 1e-13) + integrate_to_infinity(integrand, 1.0, 1e-13);
    return v / (pi * t);
}

double MixedMittagLefflerModel::phi(double t) const
{
    if (t < 0.0)
        return 0.0;
    if (t == 0.0) {
        const double s = p_.alpha1 + p_.alpha2;
        if (s < 1.0)
            return std::numeric_limits<double>::infinity();
        return s == 1.0 ? p_.beta1 * p_.beta2 : 0.0;
    }
    if (t < t_lo_)
        return series(t, -1);
    if (t <= p_.table_horizon)
        return std::exp(log_phi_.front()(std::log(t)));
    // derivative of the extrapolated tail, so that mass is conserved past the table
    return p_.alpha1 * tail(t) / t;
}

double MixedMittagLefflerModel::tail(double t) const
{
    if (t <= 0.0)
        return 1.0;
    if (t < t_lo_)
        return 1.0 - series(t, 0);
    if (t <= p_.table_horizon)
        return std::exp(log_tail_.front()(std::log(t)));
    return tail_hi_ * std::pow(p_.table_horizon / t, p_.alpha1);
}

double MixedMittagLefflerModel::cumulative(double t) const
{
    if (t <= 0.0)
        return 0.0;
    if (t < t_lo_)
        return series(t, 0);
    return 1.0 - tail(t);
}

double MixedMittagLefflerModel::integrated_cumulative(double t) const
{
    if (t <= 0.0)
        return 0.0;
    if (t <= t_lo_)
        return series(t, 1);
    return k2_lo_ + integrate_log_panels([this](double s) { return cumulative(s); }, t_lo_, t, 8, 1e-12);
}

double MixedMittagLefflerModel::sigma() const
{
    return std::numeric_limits<double>::infinity();
}

double MixedMittagLefflerModel::psi2_infinity() const
{
    return std::numeric_limits<double>::infinity();
}

std::optional<double> MixedMittagLefflerModel::laplace_phi(double lambda) const
{
    return p_.beta1 * p_.beta2 /
           ((p_.beta1 + std::pow(lambda, p_.alpha1)) * (p_.beta2 + std::pow(lambda, p_.alpha2)));
}

double MixedMittagLefflerModel::majorant(double t) const
{
    if (t < 0.0)
        t = 0.0;
    const double safety = 1.0 + 1e-9;
    auto it = std::upper_bound(major_t_.begin(), major_t_.end(), t);
    if (it == major_t_.end())
        return phi(t) * safety;  // regularly varying extrapolation, decreasing
    const double right = major_v_[static_cast<std::size_t>(it - major_t_.begin())];
    if (it == major_t_.begin() && bounded_at_zero())
        return right * safety;  // phi increases from 0 up to the first node
    return std::max(phi(t), right) * safety;
}

} // namespace hawkes
