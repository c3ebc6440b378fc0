#include "kgrs/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "kgrs/errors.hpp"
#include "kgrs/numerics.hpp"

namespace kgrs {

namespace {

constexpr std::size_t kMinSamples = 5;

void check_monotone(const std::vector<double>& t) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ValidationError("profile abscissae must be strictly increasing");
}

// H and F must be positive away from the singular-orbit endpoints.
void check_positivity(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (!(v[i] > 0.0)) throw ValidationError(std::string(name) + " must be positive on the interior");
  if (v.front() < 0.0 || v.back() < 0.0)
    throw ValidationError(std::string(name) + " must be nonnegative at the endpoints");
}

const std::vector<double>& series(const ProfileGrid& grid, ProfileField field) {
  switch (field) {
    case ProfileField::H: return grid.H;
    case ProfileField::F: return grid.F;
    default: return grid.f;
  }
}

const AnalyticProfile& callbacks(const AnalyticSpec& spec, ProfileField field) {
  switch (field) {
    case ProfileField::H: return spec.H;
    case ProfileField::F: return spec.F;
    default: return spec.f;
  }
}

// Finite differences on a callback for missing closed-form derivatives.
// The stencil is clipped into the span, so endpoint queries stay valid.
double callback_fd(const std::function<double(double)>& fn, double t, int order, double lo,
                   double hi) {
  const std::size_t m = static_cast<std::size_t>(order) + 4;
  const double span = hi - lo;
  const double h = std::max(span * 5e-3, 1e-6);
  double start = t - h * static_cast<double>(m - 1) / 2.0;
  start = std::clamp(start, lo, hi - h * static_cast<double>(m - 1));
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = start + h * static_cast<double>(i);
    y[i] = fn(x[i]);
  }
  return num::poly_window_derivative(x, y, t, order);
}

void check_span(const ProfileGrid& grid, double t) {
  if (t < grid.span_lo() || t > grid.span_hi())
    throw ValidationError("query point outside the profile span");
}

}  // namespace

void AnsatzParams::validate() const {
  if (n < 2) throw ValidationError("base complex dimension requires n >= 2");
  const bool sign_ok = (k > 0.0 && base_kind == BaseKind::ComplexProjective) ||
                       (k == 0.0 && base_kind == BaseKind::Flat) ||
                       (k < 0.0 && base_kind == BaseKind::ComplexHyperbolic);
  if (!sign_ok) throw ValidationError("base_kind inconsistent with sign of k");
}

AnsatzParams make_ansatz(int n, double k, double lambda, int q) {
  AnsatzParams p;
  p.n = n;
  p.k = k;
  p.lambda = lambda;
  p.q = q;
  p.base_kind = k > 0.0 ? BaseKind::ComplexProjective
                        : (k < 0.0 ? BaseKind::ComplexHyperbolic : BaseKind::Flat);
  p.fiber_kind = FiberKind::Circle;
  p.validate();
  return p;
}

ProfileGrid build_grid(const AnalyticSpec& spec, double t0, double t1, int count) {
  if (!(t1 > t0)) throw ValidationError("grid interval must have positive length");
  if (count < static_cast<int>(kMinSamples)) throw ValidationError("grid needs at least 5 samples");
  if (!spec.H.value || !spec.F.value || !spec.f.value)
    throw ValidationError("analytic spec must provide all three value callbacks");
  ProfileGrid grid;
  grid.derivative_source = DerivativeSource::AnalyticCallback;
  grid.analytic = spec;
  const std::size_t n = static_cast<std::size_t>(count);
  grid.t.resize(n);
  grid.H.resize(n);
  grid.F.resize(n);
  grid.f.resize(n);
  const double h = (t1 - t0) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? t1 : t0 + h * static_cast<double>(i);
    grid.t[i] = t;
    grid.H[i] = spec.H.value(t);
    grid.F[i] = spec.F.value(t);
    grid.f[i] = spec.f.value(t);
  }
  check_positivity(grid.H, "H");
  check_positivity(grid.F, "F");
  return grid;
}

ProfileGrid build_grid(std::vector<double> t, std::vector<double> H, std::vector<double> F,
                       std::vector<double> f) {
  if (t.size() != H.size() || t.size() != F.size() || t.size() != f.size())
    throw ValidationError("profile columns must have equal length");
  if (t.size() < kMinSamples) throw ValidationError("grid needs at least 5 samples");
  check_monotone(t);
  check_positivity(H, "H");
  check_positivity(F, "F");
  ProfileGrid grid;
  grid.derivative_source = DerivativeSource::FiniteDifference;
  grid.t = std::move(t);
  grid.H = std::move(H);
  grid.F = std::move(F);
  grid.f = std::move(f);
  return grid;
}

double value(const ProfileGrid& grid, ProfileField field, double t) {
  check_span(grid, t);
  if (grid.derivative_source == DerivativeSource::AnalyticCallback)
    return callbacks(*grid.analytic, field).value(t);
  return num::sampled_value(grid.t, series(grid, field), t, 6);
}

double derivative(const ProfileGrid& grid, ProfileField field, int order, double t) {
  if (order < 1 || order > 3) throw ValidationError("derivative order must be 1, 2, or 3");
  check_span(grid, t);
  if (grid.derivative_source == DerivativeSource::AnalyticCallback) {
    const AnalyticProfile& p = callbacks(*grid.analytic, field);
    const auto& cb = p.deriv[static_cast<std::size_t>(order - 1)];
    if (cb) return cb(t);
    return callback_fd(p.value, t, order, grid.span_lo(), grid.span_hi());
  }
  const std::size_t window = static_cast<std::size_t>(order) + 4;
  if (grid.size() < window)
    throw ValidationError("finite-difference derivative needs at least order+4 samples");
  return num::sampled_derivative(grid.t, series(grid, field), t, order, window);
}

SProfile to_s(const ProfileGrid& grid, int q) {
  if (q == 0) throw ValidationError("the s coordinate requires a twisted fiber (q != 0)");
  const std::size_t n = grid.size();
  std::vector<double> ffp(n);
  for (std::size_t i = 0; i < n; ++i)
    ffp[i] = grid.F[i] * derivative(grid, ProfileField::F, 1, grid.t[i]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (!(ffp[i] > 0.0))
      throw ValidationError("F F' must be positive on the interior for the s coordinate");

  SProfile sp;
  sp.s.resize(n);
  sp.alpha.resize(n);
  sp.beta.resize(n);
  sp.phi.resize(n);
  sp.s[0] = grid.s_origin.value_or(0.5 * grid.F.front() * grid.F.front());
  if (grid.derivative_source == DerivativeSource::AnalyticCallback) {
    const AnalyticSpec& spec = *grid.analytic;
    auto integrand = [&](double t) {
      const double Fp = spec.F.deriv[0] ? spec.F.deriv[0](t)
                                        : callback_fd(spec.F.value, t, 1, grid.span_lo(),
                                                      grid.span_hi());
      return spec.F.value(t) * Fp;
    };
    for (std::size_t i = 1; i < n; ++i)
      sp.s[i] = sp.s[i - 1] + num::integrate_adaptive(integrand, grid.t[i - 1], grid.t[i], 1e-12);
  } else {
    for (std::size_t i = 1; i < n; ++i) {
      const double mid = 0.5 * (grid.t[i - 1] + grid.t[i]);
      const std::size_t window = std::min<std::size_t>(6, n);
      const std::size_t start = num::window_start(grid.t, mid, window);
      sp.s[i] = sp.s[i - 1] +
                num::poly_window_integral(std::span(grid.t).subspan(start, window),
                                          std::span(ffp).subspan(start, window), grid.t[i - 1],
                                          grid.t[i]);
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!(sp.s[i] > sp.s[i - 1])) throw ValidationError("s coordinate is not strictly increasing");

  std::vector<double> beta_defect(n);
  for (std::size_t i = 0; i < n; ++i) {
    sp.alpha[i] = grid.H[i] * grid.H[i];
    sp.beta[i] = grid.F[i] * grid.F[i];
    sp.phi[i] = grid.f[i];
    beta_defect[i] = sp.beta[i] - 2.0 * sp.s[i];
  }
  double mean_defect = 0.0;
  for (double d : beta_defect) mean_defect += d;
  sp.constants.A = mean_defect / static_cast<double>(n);
  const num::LinearFit fit = num::linear_fit(sp.s, sp.phi);
  sp.constants.B = static_cast<double>(q) * fit.slope;
  sp.constants.C = fit.intercept;
  return sp;
}

ProfileGrid from_s(const SProfile& sp, int q, double t_anchor) {
  if (q == 0) throw ValidationError("the s coordinate requires a twisted fiber (q != 0)");
  const std::size_t n = sp.size();
  if (n < kMinSamples || sp.alpha.size() != n || sp.beta.size() != n || sp.phi.size() != n)
    throw ValidationError("s-profile columns must have equal length >= 5");
  for (std::size_t i = 1; i < n; ++i)
    if (!(sp.s[i] > sp.s[i - 1])) throw ValidationError("s must be strictly increasing");
  for (std::size_t i = 0; i < n; ++i) {
    const bool endpoint = i == 0 || i + 1 == n;
    if (sp.alpha[i] < 0.0 || (!endpoint && sp.alpha[i] == 0.0))
      throw ValidationError("alpha must be positive on the interior");
    if (sp.beta[i] < 0.0 || (!endpoint && sp.beta[i] == 0.0))
      throw ValidationError("beta must be positive on the interior");
  }

  const double qd = static_cast<double>(q);
  const std::size_t window = std::min<std::size_t>(6, n);
  auto alpha_at = [&](double x) {
    const double a = num::sampled_value(sp.s, sp.alpha, x, window);
    if (!(a > 0.0)) throw ValidationError("alpha must be positive inside the integration range");
    return a;
  };
  auto speed = [&](double x) { return 1.0 / (qd * std::sqrt(alpha_at(x))); };

  double amax = 0.0;
  for (double a : sp.alpha) amax = std::max(amax, a);
  const double zero_floor = 1e-12 * std::max(amax, 1.0);

  // Half-open rule for a vanishing endpoint: substitute x = s* +/- u^2 so the
  // 1/sqrt(alpha) singularity cancels against the Jacobian. Returns the signed
  // segment integral of dt from s* towards the neighbouring node.
  auto open_segment = [&](double s_star, double a_end, double dir, double s_to) {
    const double du = std::sqrt(std::abs(s_to - s_star));
    const double aslope = num::sampled_derivative(sp.s, sp.alpha, s_star, 1, window);
    if (!(aslope * dir > 0.0))
      throw NumericalError("alpha does not grow away from its vanishing endpoint");
    auto g = [&](double u) {
      if (u == 0.0) return a_end > 0.0 ? 0.0 : 2.0 / (qd * std::sqrt(std::abs(aslope)));
      return 2.0 * u / (qd * std::sqrt(alpha_at(s_star + dir * u * u)));
    };
    const double val = num::integrate_adaptive(g, 0.0, du, 1e-12);
    return dir * val;
  };

  ProfileGrid grid;
  grid.t.resize(n);
  grid.t[0] = t_anchor;
  for (std::size_t i = 1; i < n; ++i) {
    double seg;
    if (i == 1 && sp.alpha.front() <= zero_floor) {
      seg = open_segment(sp.s.front(), sp.alpha.front(), 1.0, sp.s[1]);
    } else if (i + 1 == n && sp.alpha.back() <= zero_floor) {
      seg = -open_segment(sp.s.back(), sp.alpha.back(), -1.0, sp.s[n - 2]);
    } else {
      seg = num::integrate_adaptive(speed, sp.s[i - 1], sp.s[i], 1e-12);
    }
    grid.t[i] = grid.t[i - 1] + seg;
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!(grid.t[i] > grid.t[i - 1]))
      throw ValidationError("recovered t coordinate is not strictly increasing");

  grid.H.resize(n);
  grid.F.resize(n);
  grid.f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.H[i] = std::sqrt(std::max(sp.alpha[i], 0.0));
    grid.F[i] = std::sqrt(std::max(sp.beta[i], 0.0));
    grid.f[i] = sp.phi[i];
  }
  grid.derivative_source = DerivativeSource::FiniteDifference;
  grid.s_origin = sp.s.front();
  return grid;
}

std::string to_string(ProfileField field) {
  switch (field) {
    case ProfileField::H: return "H";
    case ProfileField::F: return "F";
    default: return "f";
  }
}

}  // namespace kgrs
