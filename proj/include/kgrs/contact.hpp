#pragma once

#include <string>
#include <vector>

#include "kgrs/profiles.hpp"

namespace kgrs {

// One orbit P with its invariant frame {fiber direction, E_1 .. E_{2n-2}} and
// the induced metric, diagonal in that frame. The base pairing couples
// E_{2i-1} with E_{2i}.
struct FramedOrbit {
  int n = 2;  // ambient complex dimension; the orbit has dimension 2n - 1
  std::vector<double> metric;

  int dim() const { return 2 * n - 1; }
};

// Almost contact metric data (zeta, eta, Phi) in frame components.
struct ContactStructure {
  std::vector<double> zeta;
  std::vector<double> eta;
  std::vector<double> phi;  // dim x dim, row-major

  double& phi_at(int row, int col, int dim) { return phi[static_cast<std::size_t>(row * dim + col)]; }
  double phi_at(int row, int col, int dim) const {
    return phi[static_cast<std::size_t>(row * dim + col)];
  }
};

struct AcmsResidual {
  double r_phi2 = 0.0;    // Phi^2 + Id - zeta (x) eta
  double r_metric = 0.0;  // g(Phi X, Phi Y) - g(X, Y) + eta(X) eta(Y)
  double r_eta = 0.0;     // eta(zeta) - 1
  double max_abs() const;
};

FramedOrbit make_orbit(int n, double H, double F);

// Structure induced on a level set of the potential: zeta is the opposite of
// the complex rotation of the unit gradient direction. Scaling f by a
// positive constant leaves the output unchanged.
ContactStructure induce_level_set(const FramedOrbit& orbit, double H, double f_prime);

AcmsResidual acms_residual(const FramedOrbit& orbit, const ContactStructure& cs);

struct DeformedOrbit {
  FramedOrbit orbit;
  ContactStructure cs;
};

// g -> a g + (a^2 - a) eta (x) eta, zeta -> zeta / a, eta -> a eta. The fiber
// metric entry is written as (a eta_0)^2 so the unit-dual identity
// eta_0^2 == g_0 survives bitwise through chains of deformations.
DeformedOrbit homothety(const FramedOrbit& orbit, const ContactStructure& cs, double a);

// g -> b g + (1 - b) eta (x) eta with Phi -> sign * Phi and zeta, eta fixed.
DeformedOrbit pm_deform(const FramedOrbit& orbit, const ContactStructure& cs, double b, int sign);

// Homothety followed by the sign deformation, emitted through the closed-form
// update (base entries a b F^2, fiber entry a^2 H^2).
DeformedOrbit compose_deform(const FramedOrbit& orbit, const ContactStructure& cs, double a,
                             double b, int sign);

enum class ModelKind { FlatSasakian, SphereSasakian, HyperbolicSasakian, Product, Hyperbolic };

struct ModelSpace {
  ModelKind kind = ModelKind::FlatSasakian;
  int n = 2;
  double k = 0.0;
  FramedOrbit orbit;
  ContactStructure cs;
  // Catalog metadata only: the constant is quoted under the catalog's own
  // normalization and is not an oracle for phi_sectional.
  double expected_phi_sec = 0.0;
  std::string classification_case;  // maximal-symmetry classification: i, ii, iii
  std::string note;
};

ModelSpace model_space(ModelKind kind, int n, double k);

// Holomorphic sectional curvature of the plane (X, Phi X) for unit horizontal
// X, given the base value on the corresponding base plane.
double phi_sectional(const FramedOrbit& orbit, const ContactStructure& cs, double base_hol_sec,
                     double H, double F, int q);

// Structural isometry defects of a profile at one t: the fiber rotation is
// Killing and f is orbit-invariant by construction (identically zero
// residuals); the middle entry measures whether the complex rotation of
// grad f preserves the metric.
struct SymmetryResiduals {
  double r_fiber_rotation = 0.0;
  double r_phi_gradient = 0.0;  // f'' H - f' H'
  double r_potential_invariance = 0.0;
};
SymmetryResiduals symmetry_residuals(const ProfileGrid& grid, double t);

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

}  // namespace kgrs
