#pragma once

#include <cstddef>
#include <vector>

namespace hawkes {

// Full discrete linear convolution c_k = sum_j a_j b_{k-j}, length |a| + |b| - 1.
// Direct summation for short inputs, FFT (FFTW) otherwise.
std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b);

// Above this product of lengths the FFT path is used.
inline constexpr std::size_t direct_convolution_limit = 4096u * 4096u;

// Convolution on a uniform grid of step h of the piecewise-linear interpolants of
// nodal values f_0..f_n and g_0..g_n: returns (f * g)(t_k) = int_0^{t_k} f(t_k - s) g(s) ds
// exactly for the interpolants, k = 0..n.
std::vector<double> piecewise_linear_convolution(const std::vector<double>& f, const std::vector<double>& g,
                                                 double h);

// Cumulative integral of the product of two piecewise-linear interpolants.
std::vector<double> piecewise_linear_product_integral(const std::vector<double>& f, const std::vector<double>& g,
                                                      double h);

} // namespace hawkes
