#include "hawkes/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <mutex>

namespace hawkes {

namespace {

// FFTW planning is not thread safe; execution with new-array functions is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::size_t fft_size(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

std::vector<double> fft_convolution(const std::vector<double>& a, const std::vector<double>& b)
{
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = fft_size(out_len);
    const std::size_t nc = n / 2 + 1;

    double* ra = fftw_alloc_real(n);
    double* rb = fftw_alloc_real(n);
    fftw_complex* ca = fftw_alloc_complex(nc);
    fftw_complex* cb = fftw_alloc_complex(nc);

    fftw_plan pa, pb, pinv;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra, ca, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb, cb, FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), ca, ra, FFTW_ESTIMATE);
    }

    std::fill(ra, ra + n, 0.0);
    std::fill(rb, rb + n, 0.0);
    std::copy(a.begin(), a.end(), ra);
    std::copy(b.begin(), b.end(), rb);
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t k = 0; k < nc; ++k) {
        const std::complex<double> x(ca[k][0], ca[k][1]);
        const std::complex<double> y(cb[k][0], cb[k][1]);
        const std::complex<double> z = x * y;
        ca[k][0] = z.real();
        ca[k][1] = z.imag();
    }
    fftw_execute(pinv);

    std::vector<double> out(out_len);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < out_len; ++k)
        out[k] = ra[k] * scale;

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pinv);
    }
    fftw_free(ra);
    fftw_free(rb);
    fftw_free(ca);
    fftw_free(cb);
    return out;
}

} // namespace

std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.empty() || b.empty())
        return {};
    if (a.size() * b.size() > direct_convolution_limit && a.size() > 64 && b.size() > 64)
        return fft_convolution(a, b);
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += ai * b[j];
    }
    return out;
}

std::vector<double> piecewise_linear_convolution(const std::vector<double>& f, const std::vector<double>& g,
                                                 double h)
{
    const std::size_t n_nodes = f.size();
    std::vector<double> out(n_nodes, 0.0);
    if (n_nodes < 2)
        return out;
    const std::vector<double> c = linear_convolution(f, g);
    auto cc = [&](std::size_t k) { return k < c.size() ? c[k] : 0.0; };
    auto ff = [&](std::size_t k) { return k < n_nodes ? f[k] : 0.0; };
    auto gg = [&](std::size_t k) { return k < n_nodes ? g[k] : 0.0; };
    for (std::size_t n = 1; n < n_nodes; ++n) {
        const double s1 = cc(n) - f[0] * g[n];
        const double s2 = cc(n) - f[n] * g[0];
        const double s3 = cc(n + 1) - ff(n + 1) * g[0] - f[0] * gg(n + 1);
        const double s4 = cc(n - 1);
        out[n] = h * ((s1 + s2) / 3.0 + (s3 + s4) / 6.0);
    }
    return out;
}

std::vector<double> piecewise_linear_product_integral(const std::vector<double>& f, const std::vector<double>& g,
                                                      double h)
{
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
        const double cell = (f[j] * g[j] + f[j + 1] * g[j + 1]) / 3.0 + (f[j] * g[j + 1] + f[j + 1] * g[j]) / 6.0;
        out[j + 1] = out[j] + h * cell;
    }
    return out;
}

} // namespace hawkes
