#include "dbar/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dbar/gauss.hpp"

namespace dbar {

namespace {

// Geometric ratio of graded cells next to a focus, and the closest they get to it
// (relative to the graded segment in angle, absolute in ln s).
constexpr double kFocusRatio = 0.25;
constexpr double kFocusMinOffset = 1e-9;
constexpr int kClipSamples = 512;
constexpr double kRoundoff = 1e-15;

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct LevelParams {
  double max_dx;  // radial cell width in ln s
  int min_cells;
  int angular;
  int order;
};

LevelParams level_params(const QuadratureSpec& spec, int level) {
  const int scale = 1 << level;
  return {std::log(spec.radial_grading) / scale, spec.radial_cells * scale, spec.angular_nodes * scale,
          spec.gauss_order};
}

// Edges of [u, v] graded geometrically toward u (toward_u) or toward v.
void graded_segment(std::vector<double>& edges, double u, double v, bool toward_u, double min_offset) {
  const double len = v - u;
  std::vector<double> offs;
  for (double off = len * kFocusRatio; off > min_offset; off *= kFocusRatio) offs.push_back(off);
  if (toward_u) {
    edges.push_back(u);
    for (auto it = offs.rbegin(); it != offs.rend(); ++it) edges.push_back(u + *it);
  } else {
    edges.push_back(u);
    for (double off : offs) edges.push_back(v - off);
  }
}

// Sorted cell edges on [a, b]: breaks at `kinks`, geometric grading toward `foci`,
// and no cell wider than max_cell.
std::vector<double> build_edges(double a, double b, const std::vector<double>& kinks,
                                const std::vector<double>& foci, double max_cell, double min_offset) {
  const double tiny = 1e-14 * std::max(1.0, std::abs(b - a));
  std::vector<double> pts{a, b};
  for (double k : kinks)
    if (k > a + tiny && k < b - tiny) pts.push_back(k);
  for (double f : foci)
    if (f > a + tiny && f < b - tiny) pts.push_back(f);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [&](double x, double y) { return y - x <= tiny; }), pts.end());
  auto is_focus = [&](double x) {
    return std::any_of(foci.begin(), foci.end(), [&](double f) { return std::abs(f - x) <= tiny; });
  };

  std::vector<double> coarse;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double x0 = pts[i];
    const double x1 = pts[i + 1];
    const bool f0 = is_focus(x0);
    const bool f1 = is_focus(x1);
    if (f0 && f1) {
      const double mid = 0.5 * (x0 + x1);
      graded_segment(coarse, x0, mid, true, min_offset);
      graded_segment(coarse, mid, x1, false, min_offset);
    } else if (f0) {
      graded_segment(coarse, x0, x1, true, min_offset);
    } else if (f1) {
      graded_segment(coarse, x0, x1, false, min_offset);
    } else {
      coarse.push_back(x0);
    }
  }
  coarse.push_back(pts.back());

  std::vector<double> edges;
  for (size_t i = 0; i + 1 < coarse.size(); ++i) {
    const double len = coarse[i + 1] - coarse[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_cell - 1e-9)));
    for (int k = 0; k < pieces; ++k) edges.push_back(coarse[i] + len * k / pieces);
  }
  edges.push_back(coarse.back());
  return edges;
}

void append_gauss(Rule& rule, const std::vector<double>& edges, int order) {
  const GaussRule& g = gauss_legendre(order);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    const double mid = 0.5 * (edges[i + 1] + edges[i]);
    if (half <= 0.0) continue;
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + half * g.nodes[k]);
      rule.weights.push_back(half * g.weights[k]);
    }
  }
}

Rule angular_rule(int n_trapezoid, int order, const std::vector<double>& kinks, const std::vector<double>& foci) {
  Rule rule;
  if (kinks.empty() && foci.empty()) {
    rule.nodes.resize(n_trapezoid);
    rule.weights.assign(n_trapezoid, kTwoPi / n_trapezoid);
    for (int i = 0; i < n_trapezoid; ++i) rule.nodes[i] = kTwoPi * i / n_trapezoid;
    return rule;
  }
  // Unroll the circle at the first break so every break lies in [start, start + 2pi].
  std::vector<double> all = kinks;
  all.insert(all.end(), foci.begin(), foci.end());
  const double start = *std::min_element(all.begin(), all.end());
  auto shift = [&](std::vector<double> v) {
    std::vector<double> out;
    for (double x : v) {
      double y = std::fmod(x - start, kTwoPi);
      if (y < 0) y += kTwoPi;
      out.push_back(start + y);
      if (y == 0.0) out.push_back(start + kTwoPi);
    }
    return out;
  };
  const double max_cell = kTwoPi * order / n_trapezoid;
  const auto edges = build_edges(start, start + kTwoPi, shift(kinks), shift(foci), max_cell, kFocusMinOffset);
  append_gauss(rule, edges, order);
  return rule;
}

// Radial nodes on [a, b] with weights for ds. Cells are uniform in ln s with
// `cells` pieces above `floor`; a single linear cell covers [0, floor] when a == 0.
void radial_rule(Rule& rule, double a, double b, int cells, double floor_cut, int order,
                 const std::optional<double>& focus_s) {
  rule.nodes.clear();
  rule.weights.clear();
  const GaussRule& g = gauss_legendre(order);
  double lo = a;
  if (a <= 0.0) {
    lo = std::min(floor_cut, 0.5 * b);
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(0.5 * lo * (1.0 + g.nodes[k]));
      rule.weights.push_back(0.5 * lo * g.weights[k]);
    }
  }
  const double x0 = std::log(lo);
  const double x1 = std::log(b);
  std::vector<double> edges(cells + 1);
  for (int j = 0; j <= cells; ++j) edges[j] = x0 + (x1 - x0) * j / cells;
  if (focus_s && *focus_s > lo && *focus_s < b) {
    const double xf = std::log(*focus_s);
    edges = build_edges(x0, x1, {}, {xf}, (x1 - x0) / cells, kFocusMinOffset);
  }
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    const double mid = 0.5 * (edges[i + 1] + edges[i]);
    for (int k = 0; k < order; ++k) {
      const double s = std::exp(mid + half * g.nodes[k]);
      rule.nodes.push_back(s);
      rule.weights.push_back(s * half * g.weights[k]);
    }
  }
}

int cells_for(double lo, double b_ref, const LevelParams& lp) {
  const double span = std::log(b_ref / lo);
  return std::max(lp.min_cells, static_cast<int>(std::ceil(span / lp.max_dx)));
}

double outer_exit(const PlanarDomain& domain, cplx center, double theta) {
  const auto iv = domain.ray_intervals(center, theta);
  return iv.empty() ? 0.0 : iv.back().exit;
}

// Angles where the outermost ray exit crosses the radius c.
std::vector<double> clip_angles(const PlanarDomain& domain, cplx center, double c) {
  std::vector<double> out;
  if (domain.kind() == DomainKind::disk) {
    for (const auto& arc : chord_arcs(domain, center, c)) {
      if (arc.length() >= kTwoPi) continue;
      if (arc.begin > 0.0) out.push_back(arc.begin);
      if (arc.end < kTwoPi) out.push_back(arc.end);
    }
    return out;
  }
  auto g = [&](double t) { return outer_exit(domain, center, t) - c; };
  double t0 = 0.0;
  double g0 = g(t0);
  for (int k = 1; k <= kClipSamples; ++k) {
    const double t1 = kTwoPi * k / kClipSamples;
    const double g1 = g(t1);
    if ((g0 < 0.0) != (g1 < 0.0)) {
      double lo = t0;
      double hi = t1;
      double glo = g0;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    t0 = t1;
    g0 = g1;
  }
  return out;
}

struct PolarPlan {
  std::vector<double> kinks;
  std::vector<double> angular_foci;
  std::optional<double> focus_s;
  double b_ref = 1.0;
};

PolarPlan plan_polar(const PlanarDomain& domain, cplx center, const PolarRegion& region) {
  PolarPlan plan;
  plan.b_ref = std::min(region.s_outer, domain.diameter());
  for (double c : {region.s_inner, region.s_outer}) {
    if (c > 0.0 && std::isfinite(c) && c < domain.diameter()) {
      auto ks = clip_angles(domain, center, c);
      plan.kinks.insert(plan.kinks.end(), ks.begin(), ks.end());
    }
  }
  if (region.focus) {
    const double sp = std::abs(*region.focus - center);
    if (sp > 0.5 * region.s_inner && sp < 4.0 * plan.b_ref && sp > 0.0) {
      plan.angular_foci.push_back(std::arg(*region.focus - center));
      plan.focus_s = sp;
    }
  }
  return plan;
}

void check_finite(cplx v) {
  if (!is_finite(v)) fail(ErrorCode::non_finite_integrand, "integrand is not finite at a quadrature node");
}

cplx rays_sum(const PlanarDomain& domain, cplx center, const PolarIntegrand& integrand,
              const QuadratureSpec& spec, const PolarRegion& region, const PolarPlan& plan, int level,
              double& abs_sum) {
  const LevelParams lp = level_params(spec, level);
  const Rule ang = angular_rule(lp.angular, lp.order, plan.kinks, plan.angular_foci);
  Rule rad;
  cplx total = 0.0;
  for (size_t i = 0; i < ang.nodes.size(); ++i) {
    const double theta = ang.nodes[i];
    const cplx dir = std::polar(1.0, theta);
    cplx ray = 0.0;
    for (const RayInterval& iv : domain.ray_intervals(center, theta)) {
      const double a = std::max(iv.enter, region.s_inner);
      const double b = std::min(iv.exit, region.s_outer);
      if (!(b > a)) continue;
      const double lo = a > 0.0 ? a : std::min(spec.inner_cutoff, 0.5 * b);
      radial_rule(rad, a, b, cells_for(lo, std::max(plan.b_ref, b), lp), spec.inner_cutoff, lp.order,
                  plan.focus_s);
      for (size_t j = 0; j < rad.nodes.size(); ++j) {
        const double s = rad.nodes[j];
        const cplx g = integrand(s, theta, center + s * dir);
        check_finite(g);
        ray += g * (s * rad.weights[j]);
        abs_sum += ang.weights[i] * std::abs(g) * s * rad.weights[j];
      }
    }
    total += ang.weights[i] * ray;
  }
  return total;
}

cplx chords_sum(const PlanarDomain& domain, cplx center, const PolarIntegrand& integrand,
                const QuadratureSpec& spec, const PolarRegion& region, int level, double& abs_sum) {
  const LevelParams lp = level_params(spec, level);
  const double big_r = domain.radius();
  const double rho = std::abs(center - domain.center());
  const double dist = big_r - rho;
  const double smax = big_r + rho;
  const double lo = region.s_inner;
  const double hi = std::min(region.s_outer, smax);
  if (!(hi > lo)) return 0.0;

  cplx total = 0.0;
  const double full_hi = std::min(hi, dist);
  if (full_hi > lo) {
    Rule rad;
    const double lo_eff = lo > 0.0 ? lo : std::min(spec.inner_cutoff, 0.5 * full_hi);
    radial_rule(rad, lo, full_hi, cells_for(lo_eff, full_hi, lp), spec.inner_cutoff, lp.order, std::nullopt);
    for (size_t j = 0; j < rad.nodes.size(); ++j) {
      const double s = rad.nodes[j];
      cplx ring = 0.0;
      for (int i = 0; i < lp.angular; ++i) {
        const double theta = kTwoPi * i / lp.angular;
        const cplx g = integrand(s, theta, center + std::polar(s, theta));
        check_finite(g);
        ring += g;
        abs_sum += std::abs(g) * (kTwoPi / lp.angular) * s * rad.weights[j];
      }
      total += ring * (kTwoPi / lp.angular) * s * rad.weights[j];
    }
  }

  const double arc_lo = std::max(lo, dist);
  if (rho > 0.0 && hi > arc_lo) {
    // s = dist + (smax - dist)(1 - cos tau)/2 removes the square-root behaviour of the
    // arc endpoints at s = dist and s = smax.
    const double span = smax - dist;
    auto tau_of = [&](double s) { return std::acos(std::clamp(1.0 - 2.0 * (s - dist) / span, -1.0, 1.0)); };
    const double tau0 = tau_of(arc_lo);
    const double tau1 = tau_of(hi);
    const GaussRule& g = gauss_legendre(lp.order);
    const int cells = lp.min_cells;
    for (int c = 0; c < cells; ++c) {
      const double ta = tau0 + (tau1 - tau0) * c / cells;
      const double tb = tau0 + (tau1 - tau0) * (c + 1) / cells;
      for (int k = 0; k < lp.order; ++k) {
        const double tau = 0.5 * (ta + tb) + 0.5 * (tb - ta) * g.nodes[k];
        const double w_tau = 0.5 * (tb - ta) * g.weights[k];
        const double s = dist + 0.5 * span * (1.0 - std::cos(tau));
        const double ds = 0.5 * span * std::sin(tau) * w_tau;
        cplx ring = 0.0;
        for (const AngularInterval& arc : chord_arcs(domain, center, s)) {
          const int pieces = std::max(1, static_cast<int>(std::ceil(arc.length() / kTwoPi * lp.angular / lp.order)));
          for (int p = 0; p < pieces; ++p) {
            const double a0 = arc.begin + arc.length() * p / pieces;
            const double a1 = arc.begin + arc.length() * (p + 1) / pieces;
            for (int q = 0; q < lp.order; ++q) {
              const double theta = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * g.nodes[q];
              const cplx v = integrand(s, theta, center + std::polar(s, theta));
              check_finite(v);
              ring += v * (0.5 * (a1 - a0) * g.weights[q]);
              abs_sum += std::abs(v) * 0.5 * (a1 - a0) * g.weights[q] * s * std::abs(ds);
            }
          }
        }
        total += ring * s * ds;
      }
    }
  }
  return total;
}

void validate_region(const PlanarDomain& domain, cplx center, const PolarRegion& region) {
  if (!domain.contains(center)) fail(ErrorCode::invalid_center, "polar quadrature center lies outside the domain");
  require(region.s_inner >= 0.0 && region.s_outer > region.s_inner, "polar region needs 0 <= s_inner < s_outer");
  if (region.scheme == PolarScheme::chords && domain.kind() != DomainKind::disk)
    fail(ErrorCode::unsupported_kind, "chord-arc quadrature requires a disk domain");
}

}  // namespace

std::vector<double> default_pv_epsilons() {
  std::vector<double> eps;
  for (int k = 2; k <= 6; ++k) eps.push_back(std::exp(-std::ldexp(1.0, k)));
  return eps;
}

void QuadratureSpec::validate() const {
  require(boundary_nodes >= 16, "boundary_nodes must be >= 16");
  require(radial_cells >= 4 && angular_nodes >= 4, "radial_cells and angular_nodes must be >= 4");
  require(radial_grading > 1.0 && std::isfinite(radial_grading), "radial_grading must exceed 1");
  require(inner_cutoff > 0.0 && inner_cutoff < 1.0, "inner_cutoff must lie in (0, 1)");
  require(target_rel_tol > 0.0, "target_rel_tol must be positive");
  require(max_refinements >= 1 && max_refinements <= 12, "max_refinements must lie in [1, 12]");
  require(gauss_order >= 2 && gauss_order <= 32, "gauss_order must lie in [2, 32]");
  require(pv_epsilons.size() >= 3, "pv_epsilons needs at least three values");
  for (size_t i = 0; i < pv_epsilons.size(); ++i) {
    require(pv_epsilons[i] > 0.0 && pv_epsilons[i] < 1.0, "pv_epsilons must lie in (0, 1)");
    if (i > 0) require(pv_epsilons[i] < pv_epsilons[i - 1], "pv_epsilons must be strictly decreasing");
  }
}

cplx boundary_integral(const BoundaryCurve& curve, const BoundaryIntegrand& integrand, int nodes) {
  require(nodes >= 16, "boundary_integral needs at least 16 nodes");
  cplx acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double t = kTwoPi * k / nodes;
    const cplx d = curve.derivative(t);
    const cplx v = integrand(curve.position(t), d, std::conj(d));
    if (!is_finite(v)) fail(ErrorCode::non_finite_integrand, "boundary integrand is not finite at a node");
    acc += v;
  }
  return acc * (kTwoPi / nodes);
}

cplx polar_area_sum(const PlanarDomain& domain, cplx center, const PolarIntegrand& integrand,
                    const QuadratureSpec& spec, const PolarRegion& region, int level) {
  spec.validate();
  validate_region(domain, center, region);
  double abs_sum = 0.0;
  if (region.scheme == PolarScheme::chords) return chords_sum(domain, center, integrand, spec, region, level, abs_sum);
  return rays_sum(domain, center, integrand, spec, region, plan_polar(domain, center, region), level, abs_sum);
}

IntegralResult polar_area_integral(const PlanarDomain& domain, cplx center, const PolarIntegrand& integrand,
                                   const QuadratureSpec& spec, const PolarRegion& region) {
  spec.validate();
  validate_region(domain, center, region);
  const bool chords = region.scheme == PolarScheme::chords;
  const PolarPlan plan = chords ? PolarPlan{} : plan_polar(domain, center, region);
  double abs_sum = 0.0;
  auto sum = [&](int level) {
    abs_sum = 0.0;
    return chords ? chords_sum(domain, center, integrand, spec, region, level, abs_sum)
                  : rays_sum(domain, center, integrand, spec, region, plan, level, abs_sum);
  };
  IntegralResult res;
  cplx prev = sum(0);
  for (int level = 1; level <= spec.max_refinements; ++level) {
    const cplx cur = sum(level);
    res.value = cur;
    // Level difference plus a summation rounding bound.
    res.error_estimate = std::abs(cur - prev) + kRoundoff * abs_sum;
    res.refinements_used = level;
    if (res.error_estimate <= spec.target_rel_tol * std::max(std::abs(cur), 1.0)) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  res.converged = false;
  return res;
}

double radial_log_integral(RadialLogKind kind, double nu, double h, double h0) {
  require(std::isfinite(nu) && nu > 0.0, "radial_log_integral requires nu > 0");
  require(h > 0.0 && h <= h0 && h0 < 1.0, "radial_log_integral requires 0 < h <= h0 < 1");
  if (kind == RadialLogKind::inverse_first) {
    if (nu <= 1.0) fail(ErrorCode::divergent_integral, "int_0^h ds/(s |ln s|^nu) diverges for nu <= 1");
    return std::pow(std::abs(std::log(h)), 1.0 - nu) / (nu - 1.0);
  }
  if (h == h0) return 0.0;
  // s = e^x turns s^-2 |ln s|^-nu ds into e^-x |x|^-nu dx.
  auto f = [nu](double x) { return std::exp(-x) * std::pow(-x, -nu); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::log(h), std::log(h0), 20, 1e-14);
}

double radial_log_integral_adaptive(double nu, double h) {
  require(h > 0.0 && h < 1.0, "radial_log_integral_adaptive requires 0 < h < 1");
  if (nu <= 1.0) fail(ErrorCode::divergent_integral, "int_0^h ds/(s |ln s|^nu) diverges for nu <= 1");
  // s = e^-t maps (0, h] onto [|ln h|, inf) with integrand t^-nu.
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [nu](double t) { return std::pow(t, -nu); };
  return integrator.integrate(f, -std::log(h), std::numeric_limits<double>::infinity(), 1e-15);
}

PvLimitResult pv_limit_partials(const PlanarDomain& domain, cplx z, const ScalarField& f,
                                const QuadratureSpec& spec) {
  spec.validate();
  if (!domain.contains(z)) fail(ErrorCode::invalid_center, "p.v. point lies outside the domain");
  const auto& eps = spec.pv_epsilons;
  // dzeta_bar ^ dzeta = 2i dA
  PolarIntegrand kernel = [&f](double s, double theta, cplx zeta) {
    return 2.0 * kI * f(zeta) * std::polar(1.0 / (s * s), -2.0 * theta);
  };
  std::optional<cplx> focus;
  if (f.declared_singularity && *f.declared_singularity != z) focus = f.declared_singularity;

  PvLimitResult out;
  out.epsilons = eps;
  bool all_converged = true;
  PolarRegion outer{eps[0], std::numeric_limits<double>::infinity(), focus};
  IntegralResult main = polar_area_integral(domain, z, kernel, spec, outer);
  all_converged &= main.converged;
  out.partials.push_back(main.value);
  out.partial_errors.push_back(main.error_estimate);
  double quad_err = main.error_estimate;
  for (size_t k = 0; k + 1 < eps.size(); ++k) {
    IntegralResult ring = polar_area_integral(domain, z, kernel, spec, {eps[k + 1], eps[k], focus});
    all_converged &= ring.converged;
    quad_err += ring.error_estimate;
    out.partials.push_back(out.partials.back() + ring.value);
    out.partial_errors.push_back(quad_err);
  }

  const auto& v = out.partials;
  const size_t n = v.size();
  const cplx d1 = v[n - 2] - v[n - 3];
  const cplx d2 = v[n - 1] - v[n - 2];
  const double noise = quad_err + 1e-14 * std::max(std::abs(v[n - 1]), 1.0);
  auto aitken = [&](size_t last) {
    const cplx a = v[last - 1] - v[last - 2];
    const cplx b = v[last] - v[last - 1];
    const cplx q = b / a;
    return v[last] + b * q / (1.0 - q);
  };
  IntegralResult& res = out.result;
  res.refinements_used = static_cast<int>(n);
  bool cauchy = true;
  if (std::abs(d2) <= noise) {
    res.value = v[n - 1];
    res.error_estimate = std::abs(d2) + quad_err;
  } else if (std::abs(d2) < std::abs(d1)) {
    res.value = aitken(n - 1);
    double extrap_err = std::abs(res.value - v[n - 1]);
    if (n >= 4 && std::abs(v[n - 2] - v[n - 3]) < std::abs(v[n - 3] - v[n - 4]))
      extrap_err = std::abs(res.value - aitken(n - 2));
    res.error_estimate = extrap_err + quad_err;
  } else {
    cauchy = false;
    res.value = v[n - 1];
    res.error_estimate = std::abs(d2) + quad_err;
  }
  res.converged = cauchy && all_converged &&
                  res.error_estimate <= spec.target_rel_tol * std::max(std::abs(res.value), 1.0);
  return out;
}

IntegralResult pv_limit_integral(const PlanarDomain& domain, cplx z, const ScalarField& f,
                                 const QuadratureSpec& spec) {
  return pv_limit_partials(domain, z, f, spec).result;
}

}  // namespace dbar
