#pragma once

#include "kgrs/profiles.hpp"

namespace kgrs {

// Diagonal of the shape operator of the orbit family, unit-frame normalized.
// l_base carries multiplicity 2n-2 inside the traces.
struct ShapeDiag {
  double l_fiber = 0.0;  // H'/H
  double l_base = 0.0;   // F'/F
  double trace = 0.0;
  double trace_sq = 0.0;
  double trace_prime = 0.0;
};

// t-derivatives of the shape eigenvalues.
struct ShapePrime {
  double fiber = 0.0;  // (H'/H)' = H''/H - (H'/H)^2
  double base = 0.0;   // (F'/F)' = F''/F - (F'/F)^2
};

// Unit-frame diagonal Ricci entries of the ambient metric: normal direction,
// fiber direction, and any base direction.
struct RicciDiag {
  double rc_normal = 0.0;
  double rc_fiber = 0.0;
  double rc_base = 0.0;
};

// Curvature data of one orbit viewed as a twisted circle bundle over the base.
struct SubmersionCurvature {
  double vertical_sec = 0.0;    // K(X, fiber) = H^2 q^2 / F^4
  double rc_fiber = 0.0;        // slice Ricci of the fiber direction
  double rc_base_offset = 0.0;  // slice Ricci correction on base directions
  double phi_sectional = 0.0;   // holomorphic sectional curvature of (X, Phi X)
  double oneill_scalar = 0.0;   // H q / F^2
};

struct HyperbolicCurvature {
  double sec = 0.0;      // -(a_slope / H)^2
  double rc_unit = 0.0;  // 2(n-1) * sec
};

ShapeDiag shape_operator(const ProfileGrid& grid, double t, int n);
ShapePrime shape_prime(const ProfileGrid& grid, double t, int n);

// Ricci of the ambient metric assembled from slice Ricci data plus the shape
// operator of the orbit family. Mixed entries Rc(X, N) vanish for homogeneous
// orbits and are not represented.
RicciDiag ricci_from_shape(double rc_slice_fiber, double rc_slice_base, const ShapeDiag& shape,
                           const ShapePrime& prime);

// Ricci evaluated directly from the warped-product formulas.
RicciDiag ricci_ansatz(const AnsatzParams& params, const ProfileGrid& grid, double t);

// Scalar norm of the O'Neill integrability tensor of the bundle projection.
double oneill_scalar(const AnsatzParams& params, double H, double F);

SubmersionCurvature submersion_curvature(const AnsatzParams& params, double H, double F,
                                         double base_hol_sec);

// F F' - q H; zero exactly on the twisted Kaehler family.
double kahler_residual(const ProfileGrid& grid, int q, double t);

// Slice curvature of the untwisted branch dz^2 + e^{2 (a_slope/H) z} g_flat.
HyperbolicCurvature hyperbolic_curvature(double a_slope, double H, int n);

}  // namespace kgrs
