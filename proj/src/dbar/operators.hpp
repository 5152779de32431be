#pragma once

#include <string>
#include <vector>

#include "dbar/field.hpp"
#include "dbar/geometry.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

enum class OperatorKind { T, H_identity, H_direct, TwoT, Phi, S, NWResidual };

const char* operator_name(OperatorKind op);
OperatorKind parse_operator(const std::string& name);

struct OperatorEvaluation {
  OperatorKind op = OperatorKind::T;
  cplx point{0.0, 0.0};
  cplx value{0.0, 0.0};
  IntegralResult quadrature;
  std::string warning;
};

/// Tf(z) = -(1/pi) int f(zeta)/(zeta - z) dA.
OperatorEvaluation op_T(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec);

/// Phi(z) = (1/2 pi i) contour integral of dzeta_bar/(zeta - z).
OperatorEvaluation op_Phi(const PlanarDomain& domain, cplx z, const QuadratureSpec& spec);

/// Sf(z) = -contour integral of g(zeta)/(zeta - z) dzeta.
OperatorEvaluation op_S(const PlanarDomain& domain, const std::function<cplx(cplx)>& boundary_fn, cplx z,
                        const QuadratureSpec& spec);

/// Values of 2Tf(z) with the disk D(z, eps) removed, for each cutoff.
struct TwoTPartials {
  std::vector<double> cutoffs;
  std::vector<cplx> values;
  std::vector<double> errors;
  /// Angular moment m(eps) = int (f(z + eps e^it) - f(z)) e^{-2it} dt at the last cutoff.
  cplx last_moment{0.0, 0.0};
};

/// Cutoff ladder used when f is only log-continuous at z: spec.pv_epsilons, extended
/// by spec.inner_cutoff when it is smaller.
std::vector<double> twoT_cutoffs(const QuadratureSpec& spec);

TwoTPartials twoT_partials(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec);

/// 2Tf(z) = -(1/pi) int (f(zeta) - f(z))/(zeta - z)^2 dA.
/// Throws divergent_evaluation when the cutoff sequence escapes.
OperatorEvaluation op_2T(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec);

enum class HMethod { identity, direct_pv };

/// identity: 2Tf(z) - f(z) Phi(z). direct_pv: -(1/2 pi i) p.v. int f/(zeta - z)^2 dzeta_bar^dzeta.
OperatorEvaluation op_H(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec,
                        HMethod method = HMethod::identity);

struct HComparison {
  OperatorEvaluation identity;
  OperatorEvaluation direct;
  double difference = 0.0;
  double combined_error = 0.0;
};

/// Both methods; throws inconsistency when they differ by more than 10x the combined error.
HComparison op_H_checked(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec);

/// int over domain minus D(z, r) of (zeta - z)^-2 dzeta_bar^dzeta.
OperatorEvaluation nw_residual(const PlanarDomain& domain, cplx z, double r, const QuadratureSpec& spec);

/// Contour integral of dzeta_bar/(zeta - z); the domain-dependent part of the general NW bound.
cplx nw_boundary_term(const PlanarDomain& domain, cplx z, const QuadratureSpec& spec);

struct NormReport {
  double order = 0.0;         // nu - 1
  double sup_u = 0.0;
  double sup_dz = 0.0;
  double sup_dzbar = 0.0;
  double seminorm_dz = 0.0;   // sup over grid pairs |du(w)-du(w')| |ln|w-w'||^order, |w-w'| <= 1/2
  double seminorm_dzbar = 0.0;
  double total = 0.0;
  size_t pairs = 0;
};

struct SolutionField {
  std::vector<cplx> grid;
  std::vector<cplx> values;
  std::vector<cplx> dz_values;
  std::vector<cplx> dzbar_values;
  /// |finite-difference dbar of Tf - f| per point; NaN where not checked.
  std::vector<double> dbar_check;
  std::vector<double> value_errors;
  std::vector<double> dz_errors;
  NormReport norm_report;
};

struct SolveOptions {
  double fd_step = 1e-3;
  /// Check every `fd_stride`-th grid point; 0 disables the check.
  size_t fd_stride = 1;
  /// Tolerance used for the operator evaluations feeding the finite differences.
  double fd_rel_tol = 1e-10;
};

SolutionField solve_dbar(const PlanarDomain& domain, const ScalarField& f, const std::vector<cplx>& grid, double nu,
                         const QuadratureSpec& spec, const SolveOptions& options = {});

/// nx * ny points on the bounding box shrunk by `margin`, keeping those with
/// boundary distance above `margin`.
std::vector<cplx> interior_grid(const PlanarDomain& domain, int nx, int ny, double margin);

}  // namespace dbar
