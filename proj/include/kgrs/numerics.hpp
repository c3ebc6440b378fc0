#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kgrs::num {

// Recursive adaptive Simpson on [a, b]. Each panel is accepted when the
// Richardson error estimate falls below max(abs_tol, rel_tol * |estimate|).
// Throws NumericalError if the recursion bottoms out without converging.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol = 0.0);

// Starting index of the m-point window nearest to `at` within sorted
// abscissae. Clipped at the ends, so boundary windows come out one-sided.
std::size_t window_start(std::span<const double> x, double at, std::size_t m);

// Monomial coefficients around `center` of the interpolating polynomial
// through the nodes (x[i], y[i]): p(t) = sum c_j (t - center)^j.
std::vector<double> interp_coeffs(std::span<const double> x, std::span<const double> y,
                                  double center);

// Order-th derivative at `at` of the interpolating polynomial through the
// given window. Nodes need not be uniformly spaced.
double poly_window_derivative(std::span<const double> x, std::span<const double> y,
                              double at, int order);

// Integral over [a, b] of the interpolating polynomial through the window.
double poly_window_integral(std::span<const double> x, std::span<const double> y,
                            double a, double b);

// Window selection plus polynomial differentiation over a sampled series.
// A window of (order + 4) points keeps the result O(h^4) for smooth data.
double sampled_derivative(std::span<const double> x, std::span<const double> y,
                          double at, int order, std::size_t window);

// Interpolated value at `at` over a sampled series (same window machinery).
double sampled_value(std::span<const double> x, std::span<const double> y,
                     double at, std::size_t window);

// Least-squares polynomial fit, degree <= 5. Abscissae should be pre-scaled
// to O(1); the system is assembled in a shifted-Legendre basis for
// conditioning and converted back to monomial coefficients.
std::vector<double> polyfit(std::span<const double> u, std::span<const double> y, int degree);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double rms(std::span<const double> r);

}  // namespace kgrs::num
