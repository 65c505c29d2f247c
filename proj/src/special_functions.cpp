#include "hawkes/special_functions.hpp"

#include "hawkes/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

namespace hawkes {

namespace {

using namespace boost::math::policies;
using quiet_policy = policy<overflow_error<ignore_error>, underflow_error<ignore_error>,
                            domain_error<errno_on_error>, pole_error<errno_on_error>,
                            promote_double<false>>;

constexpr double pi = boost::math::constants::pi<double>();
constexpr long double ld_eps = std::numeric_limits<long double>::epsilon();
constexpr int asymptotic_table_size = 400;

bool is_nonpositive_integer(double z)
{
    return z <= 0.0 && std::floor(z) == z;
}

long double rgamma_ld(long double z)
{
    if (z <= 0.0L && std::floor(z) == z)
        return 0.0L;
    if (z < 0.5L) {
        // 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi
        const long double g = boost::math::tgamma(1.0L - z, quiet_policy());
        return g * boost::math::sin_pi(z, quiet_policy()) / boost::math::constants::pi<long double>();
    }
    const long double g = boost::math::tgamma(z, quiet_policy());
    if (!std::isfinite(g))
        return 0.0L;
    return 1.0L / g;
}

std::string describe(double alpha, double kappa, double x)
{
    std::ostringstream os;
    os << "E_{" << alpha << "," << kappa << "}(" << x << ")";
    return os.str();
}

} // namespace

double gamma_fn(double z)
{
    if (std::isnan(z))
        throw DomainError("gamma_fn: NaN argument");
    if (is_nonpositive_integer(z))
        throw DomainError("gamma_fn: pole at non-positive integer");
    if (z < 0.5)
        return pi / (boost::math::sin_pi(z) * boost::math::tgamma(1.0 - z, quiet_policy()));
    return boost::math::tgamma(z, quiet_policy());
}

double rgamma_fn(double z)
{
    return static_cast<double>(rgamma_ld(z));
}

double beta_fn(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("beta_fn: arguments must be positive");
    return boost::math::beta(a, b, quiet_policy());
}

void MLEvalPolicy::validate() const
{
    if (!(series_cutoff > 0.0))
        throw InvalidSpec("MLEvalPolicy: series_cutoff must be positive");
    if (asymptotic_terms < 2)
        throw InvalidSpec("MLEvalPolicy: asymptotic_terms must be >= 2");
    if (max_series_terms < 50)
        throw InvalidSpec("MLEvalPolicy: max_series_terms must be >= 50");
    if (!(tolerance > 0.0))
        throw InvalidSpec("MLEvalPolicy: tolerance must be positive");
}

MittagLeffler::MittagLeffler(double alpha, double kappa, MLEvalPolicy policy)
    : alpha_(alpha), kappa_(kappa), policy_(policy)
{
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
    if (!(kappa > 0.0))
        throw DomainError("mittag_leffler: kappa must be positive");
    policy_.validate();

    coeff_.resize(static_cast<std::size_t>(policy_.max_series_terms));
    for (std::size_t k = 0; k < coeff_.size(); ++k)
        coeff_[k] = rgamma_ld(static_cast<long double>(kappa) + k * static_cast<long double>(alpha));

    asym_coeff_.resize(asymptotic_table_size + 1);
    asym_coeff_[0] = 0.0L;
    for (int k = 1; k <= asymptotic_table_size; ++k)
        asym_coeff_[k] = rgamma_ld(static_cast<long double>(kappa) - k * static_cast<long double>(alpha));
}

MittagLeffler::Estimate MittagLeffler::series(double x) const
{
    Estimate est;
    const long double xl = x;
    long double power = 1.0L;
    long double sum = 0.0L;
    long double abs_weighted = 0.0L;
    long double prev = std::numeric_limits<long double>::infinity();
    const std::size_t n = coeff_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const long double term = coeff_[k] * power;
        sum += term;
        const long double mag = std::fabs(term);
        abs_weighted += (k + 8) * mag;
        // Converged once terms are past their peak and negligible.
        if (k > 2 && mag <= prev && mag <= 1e-3L * ld_eps * std::fabs(sum)) {
            est.converged = true;
            break;
        }
        if (k > 2 && mag == 0.0L && prev == 0.0L) {
            est.converged = true;
            break;
        }
        prev = mag;
        power *= xl;
        if (!std::isfinite(power))
            break;
    }
    est.value = static_cast<double>(sum);
    est.error = static_cast<double>(ld_eps * abs_weighted) + std::numeric_limits<double>::epsilon() * std::fabs(est.value);
    return est;
}

MittagLeffler::Estimate MittagLeffler::asymptotic(double x) const
{
    Estimate est;
    if (!(x < 0.0)) {
        est.error = std::numeric_limits<double>::infinity();
        return est;
    }
    // Term magnitudes oscillate through the sin factor of 1/Gamma, so truncation is
    // driven by the envelope Gamma(1 - kappa + k alpha) / (pi |x|^k).
    const long double zinv = 1.0L / static_cast<long double>(x);
    const long double log_y = std::log(-static_cast<long double>(x));
    const long double ld_pi = boost::math::constants::pi<long double>();
    long double power = 1.0L;
    long double sum = 0.0L;
    long double prev_env = std::numeric_limits<long double>::infinity();
    long double omitted = std::numeric_limits<long double>::infinity();
    for (int k = 1; k <= asymptotic_table_size; ++k) {
        power *= zinv;
        const long double term = -asym_coeff_[k] * power;
        const long double shifted = 1.0L - kappa_ + k * static_cast<long double>(alpha_);
        long double env = std::fabs(term);
        if (shifted > 0.0L)
            env = std::max(env, std::exp(std::lgamma(shifted) - k * log_y) / ld_pi);
        if (k > policy_.asymptotic_terms && env > prev_env) {
            omitted = prev_env;
            break;
        }
        sum += term;
        omitted = env;
        if (k > policy_.asymptotic_terms && env <= ld_eps * std::fabs(sum))
            break;
        prev_env = env;
    }
    if (alpha_ == 1.0) {
        // E_{1,kappa}(z) also carries e^z z^{1-kappa}; only defined here for kappa integer.
        if (std::floor(kappa_) != kappa_) {
            est.error = std::numeric_limits<double>::infinity();
            return est;
        }
        sum += std::exp(static_cast<long double>(x)) * std::pow(static_cast<long double>(x), 1.0L - kappa_);
    }
    est.value = static_cast<double>(sum);
    est.error = static_cast<double>(omitted) + std::numeric_limits<double>::epsilon() * std::fabs(est.value);
    est.converged = std::isfinite(est.error);
    return est;
}

double MittagLeffler::integral(double x) const
{
    if (!(x < 0.0))
        throw DomainError("mittag_leffler: integral representation needs x < 0");
    if (!(alpha_ < 1.0))
        throw NumericalError("mittag_leffler: integral representation needs alpha < 1");

    // Shift kappa down with E_{a,k}(z) = (E_{a,k-a}(z) - 1/Gamma(k-a)) / z until kappa < 1 + alpha.
    double kap = kappa_;
    std::vector<double> shifts;
    while (kap >= 1.0 + alpha_) {
        kap -= alpha_;
        shifts.push_back(kap);
    }

    const double a = alpha_;
    const double y = -x;
    const double s_k = std::sin(pi * kap);
    const double s_ka = std::sin(pi * (kap - a));
    const double c_a = std::cos(pi * a);
    auto integrand = [=](double r) -> double {
        if (r <= 0.0)
            return 0.0;
        const double ra = std::pow(r, a);
        const double den = ra * ra + 2.0 * y * ra * c_a + y * y;
        return std::exp(-r) * std::pow(r, a - kap) * (ra * s_k + y * s_ka) / den;
    };

    double split = std::pow(y, 1.0 / a);
    if (c_a < 0.0)
        split = std::pow(-y * c_a, 1.0 / a);
    split = std::clamp(split, 1e-3, 50.0);

    boost::math::quadrature::tanh_sinh<double> ts(15);
    boost::math::quadrature::exp_sinh<double> es(12);
    double err1 = 0.0, err2 = 0.0;
    const double tol = 1e-14;
    const double i1 = ts.integrate(integrand, 0.0, split, tol, &err1);
    const double i2 = es.integrate(integrand, split, std::numeric_limits<double>::infinity(), tol, &err2);
    double value = (i1 + i2) / pi;

    for (auto it = shifts.rbegin(); it != shifts.rend(); ++it)
        value = (value - rgamma_fn(*it)) / x;
    return value;
}

double MittagLeffler::series_branch(double x) const
{
    if (alpha_ == 1.0 && kappa_ == 1.0)
        return std::exp(x);
    if (alpha_ == 1.0 && kappa_ == 2.0)
        return x == 0.0 ? 1.0 : std::expm1(x) / x;
    const Estimate s = series(x);
    if (s.converged && s.error <= policy_.tolerance * std::fabs(s.value))
        return s.value;
    if (x < 0.0) {
        const Estimate a = asymptotic(x);
        if (a.converged && a.error <= policy_.tolerance * std::fabs(a.value))
            return a.value;
        if (alpha_ < 1.0)
            return integral(x);
    }
    if (!s.converged)
        throw NumericalError("mittag_leffler: series did not converge within max_series_terms for " +
                             describe(alpha_, kappa_, x));
    throw NumericalError("mittag_leffler: series lost accuracy to cancellation for " + describe(alpha_, kappa_, x));
}

double MittagLeffler::asymptotic_branch(double x) const
{
    if (!(x < 0.0))
        throw DomainError("mittag_leffler: asymptotic branch needs x < 0");
    if (alpha_ == 1.0 && kappa_ == 1.0)
        return std::exp(x);
    if (alpha_ == 1.0 && kappa_ == 2.0)
        return std::expm1(x) / x;
    const Estimate a = asymptotic(x);
    if (a.converged && a.error <= policy_.tolerance * std::fabs(a.value))
        return a.value;
    if (alpha_ < 1.0)
        return integral(x);
    const Estimate s = series(x);
    if (s.converged && s.error <= policy_.tolerance * std::fabs(s.value))
        return s.value;
    throw NumericalError("mittag_leffler: no accurate evaluator for " + describe(alpha_, kappa_, x));
}

double MittagLeffler::operator()(double x) const
{
    if (std::isnan(x))
        throw DomainError("mittag_leffler: NaN argument");
    if (x > policy_.series_cutoff)
        throw DomainError("mittag_leffler: positive argument beyond series_cutoff for " + describe(alpha_, kappa_, x));
    if (x == 0.0)
        return static_cast<double>(coeff_[0]);
    if (x >= -policy_.series_cutoff)
        return series_branch(x);
    return asymptotic_branch(x);
}

double mittag_leffler(double alpha, double kappa, double x, const MLEvalPolicy& policy)
{
    using Key = std::tuple<double, double, double, int, int, double>;
    thread_local std::map<Key, std::shared_ptr<MittagLeffler>> cache;
    const Key key{alpha, kappa, policy.series_cutoff, policy.asymptotic_terms, policy.max_series_terms,
                  policy.tolerance};
    auto it = cache.find(key);
    if (it == cache.end()) {
        if (cache.size() > 64)
            cache.clear();
        it = cache.emplace(key, std::make_shared<MittagLeffler>(alpha, kappa, policy)).first;
    }
    return (*it->second)(x);
}

} // namespace hawkes
