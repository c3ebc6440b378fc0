#include "kgrs/curvature.hpp"

#include <cmath>

#include "kgrs/errors.hpp"

namespace kgrs {

namespace {

struct Jet {
  double H, Hp, Hpp;
  double F, Fp, Fpp;
};

Jet jet_at(const ProfileGrid& grid, double t) {
  Jet j;
  j.H = value(grid, ProfileField::H, t);
  j.Hp = derivative(grid, ProfileField::H, 1, t);
  j.Hpp = derivative(grid, ProfileField::H, 2, t);
  j.F = value(grid, ProfileField::F, t);
  j.Fp = derivative(grid, ProfileField::F, 1, t);
  j.Fpp = derivative(grid, ProfileField::F, 2, t);
  if (!(j.H > 0.0) || !(j.F > 0.0))
    throw ValidationError("curvature evaluation requires H > 0 and F > 0");
  return j;
}

}  // namespace

ShapeDiag shape_operator(const ProfileGrid& grid, double t, int n) {
  const Jet j = jet_at(grid, t);
  const double m2 = 2.0 * (n - 1);
  ShapeDiag s;
  s.l_fiber = j.Hp / j.H;
  s.l_base = j.Fp / j.F;
  s.trace = s.l_fiber + m2 * s.l_base;
  s.trace_sq = s.l_fiber * s.l_fiber + m2 * s.l_base * s.l_base;
  s.trace_prime =
      j.Hpp / j.H + m2 * j.Fpp / j.F - s.l_fiber * s.l_fiber - m2 * s.l_base * s.l_base;
  return s;
}

ShapePrime shape_prime(const ProfileGrid& grid, double t, int n) {
  (void)n;
  const Jet j = jet_at(grid, t);
  ShapePrime p;
  p.fiber = j.Hpp / j.H - (j.Hp / j.H) * (j.Hp / j.H);
  p.base = j.Fpp / j.F - (j.Fp / j.F) * (j.Fp / j.F);
  return p;
}

RicciDiag ricci_from_shape(double rc_slice_fiber, double rc_slice_base, const ShapeDiag& shape,
                           const ShapePrime& prime) {
  RicciDiag rc;
  rc.rc_normal = -shape.trace_prime - shape.trace_sq;
  rc.rc_fiber = rc_slice_fiber - shape.trace * shape.l_fiber - prime.fiber;
  rc.rc_base = rc_slice_base - shape.trace * shape.l_base - prime.base;
  return rc;
}

RicciDiag ricci_ansatz(const AnsatzParams& params, const ProfileGrid& grid, double t) {
  params.validate();
  const Jet j = jet_at(grid, t);
  const double m2 = 2.0 * (params.n - 1);
  const double q2 = static_cast<double>(params.q) * static_cast<double>(params.q);
  const double F2 = j.F * j.F;
  const double twist = j.H * j.H * q2 / (F2 * F2);
  RicciDiag rc;
  rc.rc_normal = -j.Hpp / j.H - m2 * j.Fpp / j.F;
  rc.rc_fiber = m2 * twist - j.Hpp / j.H - m2 * (j.Fp / j.F) * (j.Hp / j.H);
  rc.rc_base = params.k / F2 - 2.0 * twist - j.Fpp / j.F - (j.Fp / j.F) * (j.Hp / j.H) -
               (m2 - 1.0) * (j.Fp / j.F) * (j.Fp / j.F);
  return rc;
}

double oneill_scalar(const AnsatzParams& params, double H, double F) {
  if (!(F > 0.0)) throw ValidationError("oneill_scalar requires F > 0");
  return H * static_cast<double>(params.q) / (F * F);
}

SubmersionCurvature submersion_curvature(const AnsatzParams& params, double H, double F,
                                         double base_hol_sec) {
  if (!(F > 0.0)) throw ValidationError("submersion curvature requires F > 0");
  const double q2 = static_cast<double>(params.q) * static_cast<double>(params.q);
  const double F2 = F * F;
  const double twist = H * H * q2 / (F2 * F2);
  SubmersionCurvature sc;
  sc.vertical_sec = twist;
  sc.rc_fiber = 2.0 * (params.n - 1) * twist;
  sc.rc_base_offset = -2.0 * twist;
  sc.phi_sectional = base_hol_sec / F2 - 3.0 * twist;
  sc.oneill_scalar = H * static_cast<double>(params.q) / F2;
  return sc;
}

double kahler_residual(const ProfileGrid& grid, int q, double t) {
  const double F = value(grid, ProfileField::F, t);
  const double Fp = derivative(grid, ProfileField::F, 1, t);
  const double H = value(grid, ProfileField::H, t);
  return F * Fp - static_cast<double>(q) * H;
}

HyperbolicCurvature hyperbolic_curvature(double a_slope, double H, int n) {
  if (!(H > 0.0)) throw ValidationError("hyperbolic slice requires H > 0");
  if (n < 2) throw ValidationError("hyperbolic slice requires n >= 2");
  HyperbolicCurvature hc;
  const double r = a_slope / H;
  hc.sec = -r * r;
  hc.rc_unit = 2.0 * (n - 1) * hc.sec;
  return hc;
}

}  // namespace kgrs
