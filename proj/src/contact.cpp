#include "kgrs/contact.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "kgrs/errors.hpp"

namespace kgrs {

namespace {

void check_orbit(const FramedOrbit& orbit) {
  if (orbit.n < 2) throw ValidationError("orbit requires n >= 2");
  if (orbit.metric.size() != static_cast<std::size_t>(orbit.dim()))
    throw ValidationError("orbit metric has the wrong dimension");
  for (double g : orbit.metric)
    if (!(g > 0.0)) throw ValidationError("orbit metric entries must be positive");
}

void check_structure(const FramedOrbit& orbit, const ContactStructure& cs) {
  const std::size_t d = static_cast<std::size_t>(orbit.dim());
  if (cs.zeta.size() != d || cs.eta.size() != d || cs.phi.size() != d * d)
    throw ValidationError("contact structure has the wrong dimension");
}

// Deformations update the metric diagonally; that requires eta to stay
// supported on the fiber leg of the frame, which every structure produced
// here satisfies.
void check_fiber_supported(const ContactStructure& cs) {
  for (std::size_t i = 1; i < cs.eta.size(); ++i)
    if (cs.eta[i] != 0.0)
      throw ValidationError("deformations expect eta supported on the fiber direction");
}

}  // namespace

double AcmsResidual::max_abs() const {
  return std::max({std::abs(r_phi2), std::abs(r_metric), std::abs(r_eta)});
}

FramedOrbit make_orbit(int n, double H, double F) {
  if (n < 2) throw ValidationError("orbit requires n >= 2");
  if (!(H > 0.0) || !(F > 0.0)) throw ValidationError("orbit radii must be positive");
  FramedOrbit orbit;
  orbit.n = n;
  orbit.metric.assign(static_cast<std::size_t>(orbit.dim()), F * F);
  orbit.metric[0] = H * H;
  return orbit;
}

ContactStructure induce_level_set(const FramedOrbit& orbit, double H, double f_prime) {
  check_orbit(orbit);
  if (!(H > 0.0)) throw ValidationError("level-set induction requires H > 0");
  if (f_prime == 0.0)
    throw ValidationError("level sets of the potential are singular where f' = 0");
  const int d = orbit.dim();
  const double sign = f_prime > 0.0 ? 1.0 : -1.0;
  ContactStructure cs;
  cs.zeta.assign(static_cast<std::size_t>(d), 0.0);
  cs.eta.assign(static_cast<std::size_t>(d), 0.0);
  cs.phi.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
  cs.zeta[0] = sign / H;
  cs.eta[0] = sign * H;
  // The fiber direction is sent to zero; base legs rotate pairwise.
  for (int p = 1; p + 1 < d; p += 2) {
    cs.phi_at(p + 1, p, d) = 1.0;
    cs.phi_at(p, p + 1, d) = -1.0;
  }
  return cs;
}

AcmsResidual acms_residual(const FramedOrbit& orbit, const ContactStructure& cs) {
  check_orbit(orbit);
  check_structure(orbit, cs);
  const int d = orbit.dim();
  AcmsResidual r;
  for (int row = 0; row < d; ++row) {
    for (int col = 0; col < d; ++col) {
      double phi2 = 0.0;
      for (int mid = 0; mid < d; ++mid) phi2 += cs.phi_at(row, mid, d) * cs.phi_at(mid, col, d);
      const double id = row == col ? 1.0 : 0.0;
      r.r_phi2 = std::max(r.r_phi2, std::abs(phi2 + id - cs.zeta[static_cast<std::size_t>(row)] *
                                                             cs.eta[static_cast<std::size_t>(col)]));
      double gram = 0.0;
      for (int mid = 0; mid < d; ++mid)
        gram += orbit.metric[static_cast<std::size_t>(mid)] * cs.phi_at(mid, row, d) *
                cs.phi_at(mid, col, d);
      const double target = (row == col ? orbit.metric[static_cast<std::size_t>(row)] : 0.0) -
                            cs.eta[static_cast<std::size_t>(row)] *
                                cs.eta[static_cast<std::size_t>(col)];
      r.r_metric = std::max(r.r_metric, std::abs(gram - target));
    }
  }
  double pairing = 0.0;
  for (int i = 0; i < d; ++i)
    pairing += cs.eta[static_cast<std::size_t>(i)] * cs.zeta[static_cast<std::size_t>(i)];
  r.r_eta = std::abs(pairing - 1.0);
  return r;
}

DeformedOrbit homothety(const FramedOrbit& orbit, const ContactStructure& cs, double a) {
  check_orbit(orbit);
  check_structure(orbit, cs);
  check_fiber_supported(cs);
  if (!(a > 0.0)) throw ValidationError("homothety factor must be positive");
  DeformedOrbit out{orbit, cs};
  out.cs.eta[0] = a * cs.eta[0];
  out.cs.zeta[0] = cs.zeta[0] / a;
  out.orbit.metric[0] = out.cs.eta[0] * out.cs.eta[0];
  for (std::size_t i = 1; i < out.orbit.metric.size(); ++i)
    out.orbit.metric[i] = a * orbit.metric[i];
  return out;
}

DeformedOrbit pm_deform(const FramedOrbit& orbit, const ContactStructure& cs, double b,
                        int sign) {
  check_orbit(orbit);
  check_structure(orbit, cs);
  check_fiber_supported(cs);
  if (!(b > 0.0)) throw ValidationError("deformation factor must be positive");
  if (sign != 1 && sign != -1) throw ValidationError("deformation sign must be +1 or -1");
  DeformedOrbit out{orbit, cs};
  // b g_0 + (1 - b) eta_0^2, arranged so the fiber entry is exact when the
  // unit-dual identity eta_0^2 == g_0 holds.
  const double eta_sq = cs.eta[0] * cs.eta[0];
  out.orbit.metric[0] = eta_sq + b * (orbit.metric[0] - eta_sq);
  for (std::size_t i = 1; i < out.orbit.metric.size(); ++i)
    out.orbit.metric[i] = b * orbit.metric[i];
  if (sign == -1)
    for (double& v : out.cs.phi) v = -v;
  return out;
}

DeformedOrbit compose_deform(const FramedOrbit& orbit, const ContactStructure& cs, double a,
                             double b, int sign) {
  check_orbit(orbit);
  check_structure(orbit, cs);
  check_fiber_supported(cs);
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("deformation factors must be positive");
  if (sign != 1 && sign != -1) throw ValidationError("deformation sign must be +1 or -1");
  DeformedOrbit out{orbit, cs};
  out.cs.eta[0] = a * cs.eta[0];
  out.cs.zeta[0] = cs.zeta[0] / a;
  out.orbit.metric[0] = out.cs.eta[0] * out.cs.eta[0];
  const double ab = a * b;
  for (std::size_t i = 1; i < out.orbit.metric.size(); ++i)
    out.orbit.metric[i] = ab * orbit.metric[i];
  if (sign == -1)
    for (double& v : out.cs.phi) v = -v;
  return out;
}

ModelSpace model_space(ModelKind kind, int n, double k) {
  ModelSpace model;
  model.kind = kind;
  model.n = n;
  model.k = k;
  model.orbit = make_orbit(n, 1.0, 1.0);
  model.cs = induce_level_set(model.orbit, 1.0, 1.0);
  switch (kind) {
    case ModelKind::FlatSasakian:
      if (k != 0.0) throw ValidationError("the flat model requires k = 0");
      model.expected_phi_sec = -3.0;
      model.classification_case = "i";
      model.note = "unit-twist bundle over a flat base; constant value -3";
      break;
    case ModelKind::SphereSasakian:
      if (!(k > 0.0)) throw ValidationError("the sphere model requires k > 0");
      model.expected_phi_sec = 4.0 * k / (n + 1) - 3.0;
      model.classification_case = "i";
      model.note = "round-sphere bundle over a positive base";
      break;
    case ModelKind::HyperbolicSasakian:
      if (!(k < 0.0)) throw ValidationError("the negatively curved fibration requires k < 0");
      model.expected_phi_sec = k / (2 * n - 1) - 3.0;
      model.classification_case = "i";
      model.note = "unit-twist bundle over a negative base";
      break;
    case ModelKind::Product:
      model.expected_phi_sec = 4.0 * k / (n + 1);
      model.classification_case = "ii";
      model.note = "untwisted product with a Kaehler base; the catalog value "
                   "is the base holomorphic sectional curvature";
      break;
    case ModelKind::Hyperbolic:
      if (k > 0.0) throw ValidationError("the constant-curvature model requires k <= 0");
      model.expected_phi_sec = -1.0;
      model.classification_case = "iii";
      model.note = "constant negative curvature at unit slope";
      break;
  }
  return model;
}

double phi_sectional(const FramedOrbit& orbit, const ContactStructure& cs, double base_hol_sec,
                     double H, double F, int q) {
  check_orbit(orbit);
  check_structure(orbit, cs);
  if (!(F > 0.0)) throw ValidationError("phi_sectional requires F > 0");
  const double F2 = F * F;
  const double qd = static_cast<double>(q);
  return base_hol_sec / F2 - 3.0 * H * H * qd * qd / (F2 * F2);
}

SymmetryResiduals symmetry_residuals(const ProfileGrid& grid, double t) {
  const double H = value(grid, ProfileField::H, t);
  const double Hp = derivative(grid, ProfileField::H, 1, t);
  const double fp = derivative(grid, ProfileField::f, 1, t);
  const double fpp = derivative(grid, ProfileField::f, 2, t);
  SymmetryResiduals r;
  r.r_fiber_rotation = 0.0;  // profiles depend on t only
  r.r_phi_gradient = fpp * H - fp * Hp;
  r.r_potential_invariance = 0.0;  // f is a function of t only
  return r;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::FlatSasakian: return "flat-sasakian";
    case ModelKind::SphereSasakian: return "sphere-sasakian";
    case ModelKind::HyperbolicSasakian: return "hyperbolic-sasakian";
    case ModelKind::Product: return "product";
    default: return "hyperbolic";
  }
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "flat-sasakian") return ModelKind::FlatSasakian;
  if (name == "sphere-sasakian") return ModelKind::SphereSasakian;
  if (name == "hyperbolic-sasakian") return ModelKind::HyperbolicSasakian;
  if (name == "product") return ModelKind::Product;
  if (name == "hyperbolic") return ModelKind::Hyperbolic;
  throw ValidationError("unknown model kind: " + name);
}

}  // namespace kgrs
