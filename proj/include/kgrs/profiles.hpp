#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kgrs {

enum class BaseKind { ComplexProjective, Flat, ComplexHyperbolic };
enum class FiberKind { Line, Circle };

// Parameters of the warped metric dt^2 + H(t)^2 eta (x) eta + F(t)^2 g_N over
// a base of complex dimension n-1 with normalized Einstein constant k.
// q is the twisting integer of the fiber connection (d eta = q pullback(omega)).
struct AnsatzParams {
  int n = 2;
  double k = 0.0;
  double lambda = 0.0;
  int q = 1;
  BaseKind base_kind = BaseKind::Flat;
  FiberKind fiber_kind = FiberKind::Circle;

  void validate() const;
};

// base_kind derived from sign(k); convenient for parameter sweeps.
AnsatzParams make_ansatz(int n, double k, double lambda, int q);

enum class DerivativeSource { FiniteDifference, AnalyticCallback };
enum class ProfileField { H, F, f };

struct AnalyticProfile {
  std::function<double(double)> value;
  // Optional closed-form derivatives, orders 1..3. Missing entries fall back
  // to finite differences evaluated on the callback itself.
  std::array<std::function<double(double)>, 3> deriv{};
};

struct AnalyticSpec {
  AnalyticProfile H, F, f;
};

struct ProfileGrid {
  std::vector<double> t, H, F, f;
  DerivativeSource derivative_source = DerivativeSource::FiniteDifference;
  std::optional<AnalyticSpec> analytic;
  // Arc-length gauge: value of the s coordinate at t.front(), carried so the
  // transform in each direction inverts the other exactly. Unset for grids
  // built directly from samples or callbacks.
  std::optional<double> s_origin;

  std::size_t size() const { return t.size(); }
  double span_lo() const { return t.front(); }
  double span_hi() const { return t.back(); }
};

// Profiles of the same metric in the s coordinate (ds = F F' dt):
// alpha = H^2, beta = F^2, phi = f. For the twisted Kaehler family beta is
// affine and phi is affine in s; the fitted constants are recorded here.
struct SProfile {
  std::vector<double> s, alpha, beta, phi;
  struct Constants {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
  } constants;

  std::size_t size() const { return s.size(); }
};

ProfileGrid build_grid(const AnalyticSpec& spec, double t0, double t1, int count);
ProfileGrid build_grid(std::vector<double> t, std::vector<double> H, std::vector<double> F,
                       std::vector<double> f);

// Interpolated profile value at t (exact callback value in analytic mode).
double value(const ProfileGrid& grid, ProfileField field, double t);

// Derivative of order 1..3 at t. Finite-difference mode differentiates the
// local interpolating polynomial on an (order+4)-point window, O(h^4) with
// one-sided windows at the boundaries.
double derivative(const ProfileGrid& grid, ProfileField field, int order, double t);

// Pushes a grid to the s coordinate: s by cumulative quadrature of F F' dt,
// anchored at grid.s_origin when present (F(t0)^2 / 2 otherwise, which makes
// beta = 2s exact for profiles collapsing at t = 0). Requires q != 0 and
// F F' > 0 on the interior.
SProfile to_s(const ProfileGrid& grid, int q);

// Inverse transform: t by cumulative quadrature of ds / (q sqrt(alpha)),
// anchored at t_anchor. alpha may vanish at an endpoint (integrable
// singularity, handled by a half-open substitution rule); it must be
// positive on the interior.
ProfileGrid from_s(const SProfile& sp, int q, double t_anchor);

std::string to_string(ProfileField field);

}  // namespace kgrs
