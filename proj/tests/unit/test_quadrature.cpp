#include <cmath>

#include "doctest.h"
#include "dbar/gauss.hpp"
#include "dbar/quadrature.hpp"
#include "dbar/testfields.hpp"

using namespace dbar;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

const BoundaryCurve& unit_circle() {
  static const PlanarDomain d = PlanarDomain::disk(0.0, 1.0);
  return d.boundary();
}

}  // namespace

TEST_CASE("gauss-legendre rules are exact for degree 2n-1") {
  for (int n : {2, 3, 6, 7, 20, 32}) {
    const auto& g = gauss_legendre(n);
    REQUIRE(g.nodes.size() == static_cast<size_t>(n));
    double w = 0.0, m = 0.0;
    for (int i = 0; i < n; ++i) {
      w += g.weights[i];
      m += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
      if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("boundary integral by residues") {
  const cplx in = boundary_integral(unit_circle(), [](cplx z, cplx dz, cplx) { return dz / (z - 0.3); }, 256);
  CHECK(std::abs(in - kTwoPi * kI) < 1e-12);
  const cplx out = boundary_integral(unit_circle(), [](cplx z, cplx dz, cplx) { return dz / (z - 2.0); }, 256);
  CHECK(std::abs(out) < 1e-12);
  const cplx phi = boundary_integral(unit_circle(), [](cplx z, cplx, cplx dzb) { return dzb / (z - 0.3); }, 256);
  CHECK(std::abs(phi) < 1e-10);
}

TEST_CASE("boundary integral is spectrally converged at 256 nodes") {
  const PlanarDomain e = PlanarDomain::ellipse(2.0, 1.0);
  auto g = [](cplx z, cplx dz, cplx dzb) { return std::exp(z) * dz + dzb / (z - cplx{0.3, 0.2}); };
  for (int n : {256, 512}) CHECK(std::abs(boundary_integral(e.boundary(), g, n) - boundary_integral(e.boundary(), g, 2 * n)) < 1e-10);
}

TEST_CASE("boundary integral rejects non-finite integrands") {
  CHECK(code_of([] {
          boundary_integral(unit_circle(), [](cplx z, cplx dz, cplx) { return dz / (z - 1.0); }, 256);
        }) == ErrorCode::non_finite_integrand);
}

TEST_CASE("polar area integral reproduces areas") {
  QuadratureSpec spec;
  auto one = [](double, double, cplx) { return cplx{1.0, 0.0}; };
  const auto disk = polar_area_integral(PlanarDomain::disk(0.0, 1.0), 0.0, one, spec);
  CHECK(disk.converged);
  CHECK(std::abs(disk.value - kPi) < 1e-8);
  const auto ell = polar_area_integral(PlanarDomain::ellipse(2.0, 1.0), 0.0, one, spec);
  CHECK(std::abs(ell.value - 2.0 * kPi) < spec.target_rel_tol * 2.0 * kPi);
  const PlanarDomain p = PlanarDomain::perturbed_disk(0.1, 3);
  const auto pert = polar_area_integral(p, cplx{0.2, -0.1}, one, spec);
  CHECK(std::abs(pert.value - p.area()) < spec.target_rel_tol * p.area());
  // Off-centre on a disk: the two schemes agree.
  PolarRegion rays, chords;
  rays.scheme = PolarScheme::rays;
  chords.scheme = PolarScheme::chords;
  const PlanarDomain d = PlanarDomain::disk({0.2, 0.1}, 0.7);
  auto g = [](double, double, cplx zeta) { return zeta * std::conj(zeta); };
  const cplx a = polar_area_integral(d, 0.3, g, spec, rays).value;
  const cplx b = polar_area_integral(d, 0.3, g, spec, chords).value;
  CHECK(std::abs(a - b) < 1e-7);
}

TEST_CASE("polar area integral with a log-singular radial weight") {
  // 1/(s^2 (2 ln(1/s))^2) over D(0, 1/2) is pi / ln 4; below s_inner the tail is pi / (2 ln(1/s_inner)).
  QuadratureSpec spec;
  auto g = [](double s, double, cplx) { return cplx{1.0 / (s * s * std::pow(2.0 * std::log(1.0 / s), 2.0)), 0.0}; };
  for (double cut : {1e-10, 1e-30}) {
    PolarRegion region;
    region.s_inner = cut;
    const auto r = polar_area_integral(PlanarDomain::disk(0.0, 0.5), 0.0, g, spec, region);
    CHECK(r.converged);
    const double tail = kPi / (2.0 * std::log(1.0 / cut));
    CHECK(std::abs(r.value.real() + tail - kPi / std::log(4.0)) < 1e-6);
  }
}

TEST_CASE("polar area integral rejects exterior centres and reports non-finite values") {
  QuadratureSpec spec;
  auto one = [](double, double, cplx) { return cplx{1.0, 0.0}; };
  CHECK(code_of([&] { polar_area_integral(PlanarDomain::disk(0.0, 1.0), 2.0, one, spec); }) == ErrorCode::invalid_center);
  auto bad = [](double, double, cplx) { return cplx{std::nan(""), 0.0}; };
  CHECK(code_of([&] { polar_area_integral(PlanarDomain::disk(0.0, 1.0), 0.0, bad, spec); }) ==
        ErrorCode::non_finite_integrand);
}

TEST_CASE("non-convergence is flagged") {
  QuadratureSpec spec;
  spec.max_refinements = 1;
  spec.target_rel_tol = 1e-15;
  spec.angular_nodes = 4;
  spec.radial_cells = 4;
  auto g = [](double, double theta, cplx) { return cplx{std::exp(std::cos(7.0 * theta)), 0.0}; };
  const auto r = polar_area_integral(PlanarDomain::ellipse(2.0, 1.0), 0.3, g, spec);
  CHECK_FALSE(r.converged);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  s.radial_grading = 1.0;
  CHECK(code_of([&] { s.validate(); }) == ErrorCode::invalid_argument);
  s = {};
  s.pv_epsilons = {1e-2, 1e-3};
  CHECK(code_of([&] { s.validate(); }) == ErrorCode::invalid_argument);
  s = {};
  s.pv_epsilons = {1e-2, 1e-4, 1e-3};
  CHECK(code_of([&] { s.validate(); }) == ErrorCode::invalid_argument);
  s = {};
  s.inner_cutoff = 0.0;
  CHECK(code_of([&] { s.validate(); }) == ErrorCode::invalid_argument);
  const auto eps = default_pv_epsilons();
  REQUIRE(eps.size() == 5);
  CHECK(eps.front() == doctest::Approx(std::exp(-4.0)));
  CHECK(eps.back() == doctest::Approx(std::exp(-64.0)));
}

TEST_CASE("radial log integrals") {
  CHECK(radial_log_integral(RadialLogKind::inverse_first, 2.0, 0.25, 0.25) == doctest::Approx(0.7213475204444817).epsilon(1e-14));
  CHECK(radial_log_integral(RadialLogKind::inverse_first, 3.0, 0.1, 0.1) == doctest::Approx(0.09430584850580698).epsilon(1e-14));
  const double v = radial_log_integral(RadialLogKind::inverse_square, 2.0, 0.1, 0.5);
  CHECK(v == doctest::Approx(3.66288098741521358618642866835).epsilon(1e-10));
  CHECK(code_of([] { radial_log_integral(RadialLogKind::inverse_first, 1.0, 0.1, 0.1); }) == ErrorCode::divergent_integral);
  CHECK(code_of([] { radial_log_integral(RadialLogKind::inverse_square, 2.0, 0.4, 0.3); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { radial_log_integral(RadialLogKind::inverse_first, 2.0, 1.2, 1.2); }) == ErrorCode::invalid_argument);
}

TEST_CASE("closed form matches adaptive quadrature") {
  for (double nu : {1.5, 2.0, 3.0})
    for (double h : {0.25, 0.1, 0.01}) {
      const double closed = radial_log_integral(RadialLogKind::inverse_first, nu, h, h);
      CHECK(std::abs(radial_log_integral_adaptive(nu, h) - closed) <= 1e-8 * closed);
    }
}

TEST_CASE("inverse_square bound on the parameter grid") {
  // The stated inequality does not hold on this grid; the counts are frozen from the mpmath oracle.
  int violations = 0;
  double worst = 0.0;
  for (double nu : {0.5, 1.0, 2.0, 3.0})
    for (double h : {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.4})
      for (double h0 : {0.45, 0.5}) {
        const double ratio = radial_log_integral(RadialLogKind::inverse_square, nu, h, h0) /
                             (std::pow(std::abs(std::log(h)), -nu) / h);
        violations += ratio > 1.0;
        worst = std::max(worst, ratio);
      }
  CHECK(violations == 42);
  CHECK(worst == doctest::Approx(4.736287060559055).epsilon(1e-8));
}

TEST_CASE("principal value limits") {
  QuadratureSpec spec;
  const auto one = field_constant(1.0);
  const auto disk = pv_limit_integral(PlanarDomain::disk(0.0, 1.0), 0.3, one, spec);
  CHECK(std::abs(disk.value) < 1e-6);
  const auto ell = pv_limit_integral(PlanarDomain::ellipse(2.0, 1.0), 0.0, one, spec);
  CHECK(std::abs(ell.value - kTwoPi * kI / 3.0) < 1e-4);
  const auto f2 = pv_limit_integral(PlanarDomain::disk(0.0, 0.5), 0.0, field_f_nu(2.0), spec);
  CHECK(f2.converged);
  CHECK(std::abs(f2.value - kTwoPi * kI / std::log(4.0)) < 1e-4);
}

TEST_CASE("principal value is stable under a shifted cutoff schedule") {
  QuadratureSpec a;
  QuadratureSpec b;
  b.pv_epsilons.clear();
  for (int k = 3; k <= 7; ++k) b.pv_epsilons.push_back(std::exp(-std::ldexp(1.0, k)));
  const PlanarDomain d = PlanarDomain::ellipse(0.9, 0.5);
  const auto f = field_polynomial({{{0, 1}, 1.0}, {{2, 1}, cplx{0.5, -0.2}}});
  const cplx va = pv_limit_integral(d, cplx{0.1, 0.1}, f, a).value;
  const cplx vb = pv_limit_integral(d, cplx{0.1, 0.1}, f, b).value;
  CHECK(std::abs(va - vb) < 10.0 * a.target_rel_tol * std::max(1.0, std::abs(va)));
}

TEST_CASE("partials are reported per cutoff") {
  QuadratureSpec spec;
  const auto r = pv_limit_partials(PlanarDomain::disk(0.0, 1.0), 0.2, field_constant(1.0), spec);
  CHECK(r.epsilons.size() == spec.pv_epsilons.size());
  CHECK(r.partials.size() == r.epsilons.size());
  CHECK(r.partial_errors.size() == r.epsilons.size());
}
