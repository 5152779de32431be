#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dbar/common.hpp"
#include "dbar/field.hpp"
#include "dbar/geometry.hpp"

namespace dbar {

/// eps_k = exp(-2^k) for k = 2..6.
std::vector<double> default_pv_epsilons();

/// Resolution and tolerance knobs shared by every singular quadrature.
///
/// Radial cells are uniform in ln s (edges s_j = s_max * rho^j), each carrying a
/// `gauss_order`-point Gauss-Legendre rule in ln s. Refinement level l halves the
/// cell width in ln s and doubles `angular_nodes`.
struct QuadratureSpec {
  int boundary_nodes = 1024;
  int radial_cells = 16;         // minimum radial cells per ray at level 0
  double radial_grading = 2.0;   // max ratio between consecutive radial edges at level 0
  int angular_nodes = 256;
  double inner_cutoff = 1e-10;   // smallest resolved radius when integrating from s = 0
  double target_rel_tol = 1e-6;
  int max_refinements = 6;
  std::vector<double> pv_epsilons = default_pv_epsilons();
  int gauss_order = 6;

  void validate() const;
};

struct IntegralResult {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  int refinements_used = 0;
  bool converged = false;
};

/// Integrand of a contour integral; receives zeta, dzeta/dt and conj(dzeta/dt).
using BoundaryIntegrand = std::function<cplx(cplx zeta, cplx dzeta, cplx dzeta_bar)>;

/// N-point trapezoid rule on [0, 2pi) of the integrand (spectral for analytic data).
cplx boundary_integral(const BoundaryCurve& curve, const BoundaryIntegrand& integrand, int nodes);

/// g(s, theta, zeta) with zeta = center + s e^{i theta}; integrated against s ds dtheta.
using PolarIntegrand = std::function<cplx(double s, double theta, cplx zeta)>;

enum class PolarScheme {
  automatic,  // rays
  rays,       // theta outer, exact ray/boundary intersections, graded radial rule
  chords,     // s outer with exact chord arcs; disks only
};

struct PolarRegion {
  double s_inner = 0.0;
  double s_outer = std::numeric_limits<double>::infinity();
  /// Point where the integrand is only log-continuous; meshes are graded toward it.
  std::optional<cplx> focus;
  PolarScheme scheme = PolarScheme::automatic;
};

/// Area integral of g over {zeta in domain : s_inner < |zeta - center| < s_outer}
/// in real area measure, refined until target_rel_tol or max_refinements.
IntegralResult polar_area_integral(const PlanarDomain& domain, cplx center, const PolarIntegrand& integrand,
                                   const QuadratureSpec& spec, const PolarRegion& region = {});

/// Single fixed-resolution evaluation at refinement `level`.
cplx polar_area_sum(const PlanarDomain& domain, cplx center, const PolarIntegrand& integrand,
                    const QuadratureSpec& spec, const PolarRegion& region, int level);

enum class RadialLogKind { inverse_square, inverse_first };

/// inverse_square: int_h^h0 s^-2 |ln s|^-nu ds by adaptive Gauss-Kronrod.
/// inverse_first:  int_0^h s^-1 |ln s|^-nu ds = |ln h|^(1-nu) / (nu-1), closed form.
double radial_log_integral(RadialLogKind kind, double nu, double h, double h0);

/// Adaptive-quadrature route for inverse_first (double-exponential rule after s = e^-t),
/// kept independent of the closed form.
double radial_log_integral_adaptive(double nu, double h);

struct PvLimitResult {
  IntegralResult result;
  std::vector<double> epsilons;
  std::vector<cplx> partials;      // integral over domain minus D(z, eps_k)
  std::vector<double> partial_errors;
};

/// p.v. of the integral of f(zeta)/(zeta-z)^2 dzeta_bar^dzeta by exclusion
/// of D(z, eps) along spec.pv_epsilons and Aitken extrapolation of the last three values.
PvLimitResult pv_limit_partials(const PlanarDomain& domain, cplx z, const ScalarField& f,
                                const QuadratureSpec& spec);

IntegralResult pv_limit_integral(const PlanarDomain& domain, cplx z, const ScalarField& f,
                                 const QuadratureSpec& spec);

}  // namespace dbar
