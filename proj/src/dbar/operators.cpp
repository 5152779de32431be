#include "dbar/operators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dbar/logspace.hpp"
#include "dbar/parallel.hpp"
#include "dbar/testfields.hpp"

namespace dbar {

namespace {

std::string point_str(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

void require_interior(const PlanarDomain& domain, cplx z) {
  if (!is_finite(z)) fail(ErrorCode::invalid_argument, "evaluation point must be finite");
  if (!domain.contains(z)) fail(ErrorCode::invalid_center, "evaluation point " + point_str(z) + " is not interior");
}

std::optional<cplx> focus_for(const ScalarField& f, cplx z) {
  if (f.declared_singularity && *f.declared_singularity != z) return f.declared_singularity;
  return std::nullopt;
}

bool singular_at(const ScalarField& f, cplx z) { return f.declared_singularity && *f.declared_singularity == z; }

IntegralResult scaled(IntegralResult r, cplx factor) {
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  return r;
}

cplx angular_moment(const ScalarField& f, cplx z, double eps, int nodes) {
  const cplx fz = f(z);
  cplx acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double t = kTwoPi * k / nodes;
    acc += (f(z + std::polar(eps, t)) - fz) * std::polar(1.0, -2.0 * t);
  }
  return acc * (kTwoPi / nodes);
}

constexpr int kMomentNodes = 1024;
constexpr double kBoundaryRoundoff = 1e-15;

}  // namespace

const char* operator_name(OperatorKind op) {
  switch (op) {
    case OperatorKind::T: return "T";
    case OperatorKind::H_identity: return "H_identity";
    case OperatorKind::H_direct: return "H_direct";
    case OperatorKind::TwoT: return "2T";
    case OperatorKind::Phi: return "Phi";
    case OperatorKind::S: return "S";
    case OperatorKind::NWResidual: return "NW";
  }
  return "?";
}

OperatorKind parse_operator(const std::string& name) {
  if (name == "T") return OperatorKind::T;
  if (name == "H" || name == "H_identity") return OperatorKind::H_identity;
  if (name == "H_direct") return OperatorKind::H_direct;
  if (name == "2T" || name == "TwoT") return OperatorKind::TwoT;
  if (name == "Phi") return OperatorKind::Phi;
  if (name == "S") return OperatorKind::S;
  if (name == "NW" || name == "NWResidual") return OperatorKind::NWResidual;
  fail(ErrorCode::invalid_argument, "unknown operator '" + name + "'");
}

OperatorEvaluation op_T(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec) {
  require_interior(domain, z);
  PolarIntegrand g = [&f](double s, double theta, cplx zeta) { return f(zeta) * std::polar(1.0 / s, -theta); };
  PolarRegion region;
  region.focus = focus_for(f, z);
  OperatorEvaluation out;
  out.op = OperatorKind::T;
  out.point = z;
  out.quadrature = scaled(polar_area_integral(domain, z, g, spec, region), -1.0 / kPi);
  out.value = out.quadrature.value;
  return out;
}

OperatorEvaluation op_Phi(const PlanarDomain& domain, cplx z, const QuadratureSpec& spec) {
  require_interior(domain, z);
  spec.validate();
  const cplx fine = nw_boundary_term(domain, z, spec) / (kTwoPi * kI);
  // Compare with half the nodes, or with twice as many when half would drop below 16.
  QuadratureSpec coarse_spec = spec;
  coarse_spec.boundary_nodes = spec.boundary_nodes >= 32 ? spec.boundary_nodes / 2 : 2 * spec.boundary_nodes;
  const cplx coarse = nw_boundary_term(domain, z, coarse_spec) / (kTwoPi * kI);
  OperatorEvaluation out;
  out.op = OperatorKind::Phi;
  out.point = z;
  out.value = fine;
  out.quadrature = {fine, std::abs(fine - coarse) + kBoundaryRoundoff * std::max(std::abs(fine), 1.0), 1, true};
  out.quadrature.converged = out.quadrature.error_estimate <= spec.target_rel_tol * std::max(std::abs(fine), 1.0);
  if (domain.boundary_distance(z) < 1e-8) out.warning = "evaluation point within 1e-8 of the boundary";
  return out;
}

OperatorEvaluation op_S(const PlanarDomain& domain, const std::function<cplx(cplx)>& boundary_fn, cplx z,
                        const QuadratureSpec& spec) {
  require_interior(domain, z);
  spec.validate();
  auto integral = [&](int nodes) {
    return -boundary_integral(
        domain.boundary(), [&](cplx zeta, cplx dzeta, cplx) { return boundary_fn(zeta) * dzeta / (zeta - z); },
        nodes);
  };
  const cplx fine = integral(spec.boundary_nodes);
  const cplx coarse = integral(spec.boundary_nodes >= 32 ? spec.boundary_nodes / 2 : 2 * spec.boundary_nodes);
  OperatorEvaluation out;
  out.op = OperatorKind::S;
  out.point = z;
  out.value = fine;
  out.quadrature = {fine, std::abs(fine - coarse) + kBoundaryRoundoff * std::max(std::abs(fine), 1.0), 1, true};
  out.quadrature.converged = out.quadrature.error_estimate <= spec.target_rel_tol * std::max(std::abs(fine), 1.0);
  if (domain.boundary_distance(z) < 1e-8) out.warning = "evaluation point within 1e-8 of the boundary";
  return out;
}

std::vector<double> twoT_cutoffs(const QuadratureSpec& spec) {
  std::vector<double> eps = spec.pv_epsilons;
  if (spec.inner_cutoff < eps.back()) eps.push_back(spec.inner_cutoff);
  return eps;
}

TwoTPartials twoT_partials(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec) {
  require_interior(domain, z);
  spec.validate();
  const cplx fz = f(z);
  PolarIntegrand g = [&f, fz](double s, double theta, cplx zeta) {
    return (f(zeta) - fz) * std::polar(1.0 / (s * s), -2.0 * theta);
  };
  const cplx scale = -1.0 / kPi;
  TwoTPartials out;
  if (!singular_at(f, z)) {
    PolarRegion region;
    region.focus = focus_for(f, z);
    const IntegralResult r = scaled(polar_area_integral(domain, z, g, spec, region), scale);
    out.cutoffs = {0.0};
    out.values = {r.value};
    out.errors = {r.error_estimate};
    return out;
  }
  const auto eps = twoT_cutoffs(spec);
  PolarRegion outer;
  outer.s_inner = eps[0];
  IntegralResult r = scaled(polar_area_integral(domain, z, g, spec, outer), scale);
  out.cutoffs.push_back(eps[0]);
  out.values.push_back(r.value);
  out.errors.push_back(r.error_estimate);
  for (size_t k = 0; k + 1 < eps.size(); ++k) {
    PolarRegion ring;
    ring.s_inner = eps[k + 1];
    ring.s_outer = eps[k];
    const IntegralResult a = scaled(polar_area_integral(domain, z, g, spec, ring), scale);
    out.cutoffs.push_back(eps[k + 1]);
    out.values.push_back(out.values.back() + a.value);
    out.errors.push_back(out.errors.back() + a.error_estimate);
  }
  out.last_moment = angular_moment(f, z, eps.back(), kMomentNodes);
  return out;
}

OperatorEvaluation op_2T(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec) {
  const TwoTPartials p = twoT_partials(domain, f, z, spec);
  OperatorEvaluation out;
  out.op = OperatorKind::TwoT;
  out.point = z;
  const size_t n = p.values.size();
  if (n == 1) {
    out.value = p.values[0];
    out.quadrature = {p.values[0], p.errors[0], 1, p.errors[0] <= spec.target_rel_tol * std::max(std::abs(p.values[0]), 1.0)};
    return out;
  }

  const double tol = spec.target_rel_tol;
  const cplx scale = -1.0 / kPi;
  const bool has_order = f.declared_log_order && *f.declared_log_order > 1.0;
  // Tail below a cutoff under |f(z + s e^it) - f(z)| ~ |ln s|^-nu.
  auto tail = [&](double eps, cplx m) { return scale * m * std::log(1.0 / eps) / (*f.declared_log_order - 1.0); };
  std::vector<cplx> seq = p.values;
  if (has_order) {
    for (size_t k = 0; k + 1 < n; ++k) seq[k] += tail(p.cutoffs[k], angular_moment(f, z, p.cutoffs[k], kMomentNodes));
    seq[n - 1] += tail(p.cutoffs[n - 1], p.last_moment);
  }
  if (n >= 4) {
    bool growing = true;
    for (size_t k = n - 3; k < n; ++k) {
      const double inc = std::abs(seq[k]) - std::abs(seq[k - 1]);
      if (!(inc > 10.0 * tol)) growing = false;
    }
    const double last = std::abs(seq[n - 1]) - std::abs(seq[n - 2]);
    const double prev = std::abs(seq[n - 2]) - std::abs(seq[n - 3]);
    if (growing && last >= 0.8 * prev) {
      std::ostringstream os;
      os.precision(10);
      os << "2T at " << point_str(z) << " diverges as the cutoff shrinks; |partial| =";
      for (size_t k = 0; k < n; ++k) os << " " << std::abs(seq[k]) << "@" << p.cutoffs[k];
      fail(ErrorCode::divergent_evaluation, os.str());
    }
  }

  const double eps_last = p.cutoffs[n - 1];
  const cplx value = seq[n - 1];
  double err = p.errors[n - 1];
  if (has_order) err += std::abs(seq[n - 1] - seq[n - 2]);
  else err += std::abs(scale * p.last_moment) * std::log(1.0 / eps_last);
  out.value = value;
  out.quadrature = {value, err, static_cast<int>(n), err <= tol * std::max(std::abs(value), 1.0)};
  return out;
}

OperatorEvaluation op_H(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec,
                        HMethod method) {
  OperatorEvaluation out;
  out.point = z;
  if (method == HMethod::identity) {
    const OperatorEvaluation two_t = op_2T(domain, f, z, spec);
    const OperatorEvaluation phi = op_Phi(domain, z, spec);
    const cplx fz = f(z);
    out.op = OperatorKind::H_identity;
    out.value = two_t.value - fz * phi.value;
    out.quadrature = {out.value, two_t.quadrature.error_estimate + std::abs(fz) * phi.quadrature.error_estimate,
                      two_t.quadrature.refinements_used,
                      two_t.quadrature.converged && phi.quadrature.converged};
    out.warning = phi.warning;
    return out;
  }
  require_interior(domain, z);
  out.op = OperatorKind::H_direct;
  out.quadrature = scaled(pv_limit_integral(domain, z, f, spec), -1.0 / (kTwoPi * kI));
  out.value = out.quadrature.value;
  return out;
}

HComparison op_H_checked(const PlanarDomain& domain, const ScalarField& f, cplx z, const QuadratureSpec& spec) {
  HComparison c;
  c.identity = op_H(domain, f, z, spec, HMethod::identity);
  c.direct = op_H(domain, f, z, spec, HMethod::direct_pv);
  c.difference = std::abs(c.identity.value - c.direct.value);
  c.combined_error = c.identity.quadrature.error_estimate + c.direct.quadrature.error_estimate;
  if (c.difference > 10.0 * c.combined_error) {
    std::ostringstream os;
    os << "H methods disagree at " << point_str(z) << ": |identity - direct| = " << c.difference
       << " exceeds 10 x combined error " << c.combined_error;
    fail(ErrorCode::inconsistency, os.str());
  }
  return c;
}

cplx nw_boundary_term(const PlanarDomain& domain, cplx z, const QuadratureSpec& spec) {
  return boundary_integral(
      domain.boundary(), [z](cplx zeta, cplx, cplx dzeta_bar) { return dzeta_bar / (zeta - z); },
      spec.boundary_nodes);
}

OperatorEvaluation nw_residual(const PlanarDomain& domain, cplx z, double r, const QuadratureSpec& spec) {
  require_interior(domain, z);
  require(r > 0.0 && std::isfinite(r), "nw_residual requires r > 0");
  PolarIntegrand g = [](double s, double theta, cplx) { return 2.0 * kI * std::polar(1.0 / (s * s), -2.0 * theta); };
  PolarRegion region;
  region.s_inner = r;
  OperatorEvaluation out;
  out.op = OperatorKind::NWResidual;
  out.point = z;
  out.quadrature = polar_area_integral(domain, z, g, spec, region);
  out.value = out.quadrature.value;
  return out;
}

std::vector<cplx> interior_grid(const PlanarDomain& domain, int nx, int ny, double margin) {
  require(nx >= 1 && ny >= 1, "grid dimensions must be positive");
  require(margin > 0.0, "grid margin must be positive");
  const BoundingBox b = domain.bounding_box();
  const double x0 = b.xmin + margin;
  const double x1 = b.xmax - margin;
  const double y0 = b.ymin + margin;
  const double y1 = b.ymax - margin;
  require(x1 > x0 && y1 > y0, "grid margin leaves no room inside the bounding box");
  std::vector<cplx> pts;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? 0.5 * (x0 + x1) : x0 + (x1 - x0) * i / (nx - 1);
      const double y = ny == 1 ? 0.5 * (y0 + y1) : y0 + (y1 - y0) * j / (ny - 1);
      const cplx z{x, y};
      if (domain.boundary_distance(z) > margin) pts.push_back(z);
    }
  }
  return pts;
}

SolutionField solve_dbar(const PlanarDomain& domain, const ScalarField& f, const std::vector<cplx>& grid, double nu,
                         const QuadratureSpec& spec, const SolveOptions& options) {
  if (!(nu > 1.0))
    fail(ErrorCode::invalid_argument, "solve requires nu > 1: for nu <= 1 the equation need not have a C^1 solution");
  require(!grid.empty(), "solve needs at least one grid point");
  spec.validate();
  for (cplx z : grid) require_interior(domain, z);

  const size_t n = grid.size();
  SolutionField sol;
  sol.grid = grid;
  sol.values.resize(n);
  sol.dz_values.resize(n);
  sol.dzbar_values.resize(n);
  sol.value_errors.resize(n);
  sol.dz_errors.resize(n);
  sol.dbar_check.assign(n, std::numeric_limits<double>::quiet_NaN());

  QuadratureSpec fd_spec = spec;
  fd_spec.target_rel_tol = std::min(spec.target_rel_tol, options.fd_rel_tol);

  parallel_for(n, [&](size_t i) {
    const cplx z = grid[i];
    const OperatorEvaluation t = op_T(domain, f, z, spec);
    if (!t.quadrature.converged) fail(ErrorCode::not_converged, "T did not converge at z = " + point_str(z));
    const OperatorEvaluation h = op_H(domain, f, z, spec, HMethod::identity);
    if (!h.quadrature.converged) fail(ErrorCode::not_converged, "H did not converge at z = " + point_str(z));
    sol.values[i] = t.value;
    sol.value_errors[i] = t.quadrature.error_estimate;
    sol.dz_values[i] = h.value;
    sol.dz_errors[i] = h.quadrature.error_estimate;
    sol.dzbar_values[i] = f(z);
    if (options.fd_stride > 0 && i % options.fd_stride == 0) {
      const double step = options.fd_step;
      for (cplx p : {z + step, z - step, z + kI * step, z - kI * step})
        if (!domain.contains(p)) fail(ErrorCode::stencil_out_of_domain, "stencil leaves the domain at " + point_str(z));
      auto tf = [&](cplx w) {
        const OperatorEvaluation e = op_T(domain, f, w, fd_spec);
        if (!e.quadrature.converged) fail(ErrorCode::not_converged, "T did not converge at z = " + point_str(w));
        return e.value;
      };
      sol.dbar_check[i] = std::abs(wirtinger_fd_fn(tf, z, step).dzbar - sol.dzbar_values[i]);
    }
  });

  NormReport& r = sol.norm_report;
  r.order = nu - 1.0;
  for (size_t i = 0; i < n; ++i) {
    r.sup_u = std::max(r.sup_u, std::abs(sol.values[i]));
    r.sup_dz = std::max(r.sup_dz, std::abs(sol.dz_values[i]));
    r.sup_dzbar = std::max(r.sup_dzbar, std::abs(sol.dzbar_values[i]));
  }
  const GridSeminorm sdz = grid_pair_seminorm(grid, sol.dz_values, r.order);
  const GridSeminorm sdzb = grid_pair_seminorm(grid, sol.dzbar_values, r.order);
  r.seminorm_dz = sdz.value;
  r.seminorm_dzbar = sdzb.value;
  r.pairs = sdz.pairs;
  r.total = r.sup_u + r.sup_dz + r.sup_dzbar + r.seminorm_dz + r.seminorm_dzbar;
  return sol;
}

}  // namespace dbar
