#include "hawkes/quadrature.hpp"

#include "hawkes/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace hawkes {

namespace {

void check_finite(double v, const char* who)
{
    if (!std::isfinite(v))
        throw NumericalError(std::string(who) + ": non-finite quadrature result");
}

} // namespace

double integrate_singular(const RealFn& f, double a, double b, double rel_tol)
{
    if (a == b)
        return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    const double v = ts.integrate(f, a, b, rel_tol);
    check_finite(v, "integrate_singular");
    return v;
}

double integrate_to_infinity(const RealFn& f, double a, double rel_tol)
{
    thread_local boost::math::quadrature::exp_sinh<double> es(12);
    const double v = es.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol);
    check_finite(v, "integrate_to_infinity");
    return v;
}

double integrate_smooth(const RealFn& f, double a, double b, double rel_tol)
{
    if (a == b)
        return 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol);
    check_finite(v, "integrate_smooth");
    return v;
}

double integrate_log_panels(const RealFn& f, double a, double b, int per_decade, double rel_tol)
{
    if (!(a > 0.0) || !(b > a))
        throw DomainError("integrate_log_panels: need 0 < a < b");
    const double decades = std::log10(b / a);
    const int panels = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
    const double ratio = std::pow(b / a, 1.0 / panels);
    double sum = 0.0;
    double lo = a;
    for (int i = 0; i < panels; ++i) {
        const double hi = (i + 1 == panels) ? b : lo * ratio;
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 8, rel_tol);
        lo = hi;
    }
    check_finite(sum, "integrate_log_panels");
    return sum;
}

double gauss_legendre10(const RealFn& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

} // namespace hawkes
