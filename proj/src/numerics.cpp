#include "kgrs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "kgrs/errors.hpp"

namespace kgrs::num {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

// tol is the absolute error budget for this panel; it halves per split.
double adapt(const std::function<double(double)>& f, double a, double fa, double m,
             double fm, double b, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol) return left + right + err;
  if (depth <= 0) {
    if (std::abs(err) <= 1e3 * tol) return left + right + err;
    throw NumericalError("adaptive quadrature failed to converge");
  }
  return adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson(fa, fm, fb, b - a);
  const double tol = std::max({abs_tol, rel_tol * std::abs(whole), 1e-307});
  return adapt(f, a, fa, m, fm, b, fb, whole, tol, 48);
}

std::size_t window_start(std::span<const double> x, double at, std::size_t m) {
  const std::size_t n = x.size();
  if (m >= n) return 0;
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  std::size_t center = static_cast<std::size_t>(it - x.begin());
  if (center > 0 && (center == n || at - x[center - 1] <= x[center] - at)) --center;
  const std::size_t half = m / 2;
  std::size_t start = center > half ? center - half : 0;
  return std::min(start, n - m);
}

std::vector<double> interp_coeffs(std::span<const double> x, std::span<const double> y,
                                  double center) {
  const std::size_t m = x.size();
  // Divided differences c[k] = f[x_0 .. x_k].
  std::vector<double> c(y.begin(), y.end());
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = m - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - j]);
  // Expand the Newton form in powers of u = t - center.
  std::vector<double> acc(m, 0.0);
  std::vector<double> basis(m, 0.0);
  basis[0] = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j <= k; ++j) acc[j] += c[k] * basis[j];
    if (k + 1 == m) break;
    const double shift = center - x[k];
    for (std::size_t j = k + 1; j >= 1; --j) basis[j] = basis[j - 1] + shift * basis[j];
    basis[0] *= shift;
  }
  return acc;
}

double poly_window_derivative(std::span<const double> x, std::span<const double> y,
                              double at, int order) {
  const auto c = interp_coeffs(x, y, at);
  if (static_cast<std::size_t>(order) >= c.size()) return 0.0;
  double fact = 1.0;
  for (int j = 2; j <= order; ++j) fact *= j;
  return fact * c[static_cast<std::size_t>(order)];
}

double poly_window_integral(std::span<const double> x, std::span<const double> y,
                            double a, double b) {
  const auto c = interp_coeffs(x, y, a);
  const double w = b - a;
  double total = 0.0;
  double wpow = w;
  for (std::size_t j = 0; j < c.size(); ++j) {
    total += c[j] * wpow / static_cast<double>(j + 1);
    wpow *= w;
  }
  return total;
}

double sampled_derivative(std::span<const double> x, std::span<const double> y,
                          double at, int order, std::size_t window) {
  window = std::min(window, x.size());
  const std::size_t start = window_start(x, at, window);
  return poly_window_derivative(x.subspan(start, window), y.subspan(start, window), at, order);
}

double sampled_value(std::span<const double> x, std::span<const double> y, double at,
                     std::size_t window) {
  return sampled_derivative(x, y, at, 0, window);
}

namespace {

// Shifted Legendre polynomials on [0, 1], monomial coefficients by degree.
constexpr double kLegendre[6][6] = {
    {1, 0, 0, 0, 0, 0},
    {-1, 2, 0, 0, 0, 0},
    {1, -6, 6, 0, 0, 0},
    {-1, 12, -30, 20, 0, 0},
    {1, -20, 90, -140, 70, 0},
    {-1, 30, -210, 560, -630, 252},
};

double legendre_eval(int j, double u) {
  double v = 0.0;
  double upow = 1.0;
  for (int p = 0; p <= j; ++p) {
    v += kLegendre[j][p] * upow;
    upow *= u;
  }
  return v;
}

// Gaussian elimination with partial pivoting; A is n x n row-major.
void solve_dense(std::vector<double>& A, std::vector<double>& rhs, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
    if (A[piv * n + col] == 0.0) throw NumericalError("singular least-squares system");
    if (piv != col) {
      for (std::size_t cc = 0; cc < n; ++cc) std::swap(A[piv * n + cc], A[col * n + cc]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = A[r * n + col] / A[col * n + col];
      for (std::size_t cc = col; cc < n; ++cc) A[r * n + cc] -= factor * A[col * n + cc];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (std::size_t row = n; row-- > 0;) {
    double v = rhs[row];
    for (std::size_t cc = row + 1; cc < n; ++cc) v -= A[row * n + cc] * rhs[cc];
    rhs[row] = v / A[row * n + row];
  }
}

}  // namespace

std::vector<double> polyfit(std::span<const double> u, std::span<const double> y, int degree) {
  if (degree < 0 || degree > 5) throw ValidationError("polyfit supports degree 0..5");
  const std::size_t n = static_cast<std::size_t>(degree) + 1;
  if (u.size() < n) throw ValidationError("polyfit needs at least degree+1 samples");
  std::vector<double> G(n * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  std::vector<double> basis(n);
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) basis[j] = legendre_eval(static_cast<int>(j), u[i]);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t cc = 0; cc < n; ++cc) G[r * n + cc] += basis[r] * basis[cc];
      rhs[r] += basis[r] * y[i];
    }
  }
  solve_dense(G, rhs, n);
  std::vector<double> mono(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p <= j; ++p) mono[p] += rhs[j] * kLegendre[j][p];
  return mono;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("linear_fit needs at least 2 samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("linear_fit abscissae are degenerate");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double rms(std::span<const double> r) {
  if (r.empty()) return 0.0;
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::sqrt(s / static_cast<double>(r.size()));
}

}  // namespace kgrs::num
