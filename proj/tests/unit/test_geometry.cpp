#include <cmath>
#include <random>

#include "doctest.h"
#include "dbar/gauss.hpp"
#include "dbar/geometry.hpp"
#include "dbar/quadrature.hpp"

using namespace dbar;

namespace {

std::vector<PlanarDomain> sample_domains() {
  return {PlanarDomain::disk(0.0, 0.5), PlanarDomain::disk({1.0, 1.0}, 2.0), PlanarDomain::ellipse(2.0, 1.0),
          PlanarDomain::ellipse(0.9, 0.5), PlanarDomain::perturbed_disk(0.1, 3), PlanarDomain::perturbed_disk(0.2, 2, 0.7)};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("disk membership and distance") {
  const auto d = PlanarDomain::disk(0.0, 0.5);
  CHECK(d.contains(0.4));
  CHECK_FALSE(d.contains(0.6));
  CHECK(d.contains({0.3, 0.3}));
  CHECK(d.diameter() == doctest::Approx(1.0));
  CHECK(PlanarDomain::disk(0.0, 1.0).boundary_distance(0.0) == doctest::Approx(1.0));
  CHECK(PlanarDomain::disk(0.0, 1.0).boundary_distance(0.25) == doctest::Approx(0.75));
  CHECK(d.boundary_distance(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(d.contains(0.5));
  CHECK_FALSE(PlanarDomain::disk(0.0, 1.0).contains(2.0));
}

TEST_CASE("degenerate constructions are rejected") {
  CHECK(code_of([] { PlanarDomain::disk({1.0, 1.0}, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PlanarDomain::disk(0.0, -1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PlanarDomain::ellipse(1.0, 2.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PlanarDomain::ellipse(1.0, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PlanarDomain::perturbed_disk(0.5, 3); }) == ErrorCode::invalid_argument);
}

TEST_CASE("ellipse queries") {
  const auto e = PlanarDomain::ellipse(2.0, 1.0);
  CHECK(e.contains(1.9));
  CHECK(e.contains(1.5));
  CHECK_FALSE(e.contains({0.0, 1.1}));
  CHECK(e.boundary_distance(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(std::abs(e.nearest_boundary(0.0).point.imag()) - 1.0) < 1e-10);
  CHECK(e.area() == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("perturbed disk") {
  const auto p = PlanarDomain::perturbed_disk(0.1, 3);
  CHECK(p.contains(0.0));
  CHECK(p.winding_number(0.0) == 1);
  const auto unit = PlanarDomain::perturbed_disk(0.0, 3);
  CHECK(unit.contains(0.99));
  CHECK_FALSE(unit.contains(1.01));
}

TEST_CASE("boundary curves are closed and non-degenerate") {
  for (const auto& d : sample_domains()) {
    const auto& c = d.boundary();
    CHECK(std::abs(c.position(0.0) - c.position(2.0 * kPi)) < 1e-14 * d.diameter());
    for (int k = 0; k < 256; ++k) CHECK(std::abs(c.derivative(kTwoPi * k / 256)) > 0.0);
  }
}

TEST_CASE("contains agrees with signed boundary distance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : sample_domains()) {
    const auto b = d.bounding_box();
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
      const cplx z{b.xmin - 0.1 + (b.xmax - b.xmin + 0.2) * u(rng), b.ymin - 0.1 + (b.ymax - b.ymin + 0.2) * u(rng)};
      const double dist = d.boundary_distance(z);
      if (std::abs(dist) < 1e-12) continue;
      mismatches += d.contains(z) != (dist > 0.0);
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("winding number is one about interior points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : sample_domains()) {
    const auto b = d.bounding_box();
    int checked = 0;
    while (checked < 20) {
      const cplx z{b.xmin + (b.xmax - b.xmin) * u(rng), b.ymin + (b.ymax - b.ymin) * u(rng)};
      if (d.boundary_distance(z) < 0.1 * d.diameter()) continue;
      ++checked;
      CHECK(d.winding_number(z) == 1);
      const cplx w = boundary_integral(d.boundary(), [z](cplx zeta, cplx dz, cplx) { return dz / (zeta - z); }, 1024);
      CHECK(std::abs(w - kTwoPi * kI) < 1e-8);
    }
  }
}

TEST_CASE("ray intervals start at zero and end on the boundary") {
  for (const auto& d : sample_domains()) {
    const cplx z = d.kind() == DomainKind::disk ? d.center() + 0.3 * d.radius() : cplx{0.1, 0.05};
    for (int k = 0; k < 16; ++k) {
      const double theta = kTwoPi * k / 16;
      const auto iv = d.ray_intervals(z, theta);
      REQUIRE_FALSE(iv.empty());
      CHECK(iv.front().enter == 0.0);
      const cplx exit = z + std::polar(iv.front().exit, theta);
      CHECK(std::abs(d.boundary_distance(exit)) < 1e-9);
    }
  }
}

TEST_CASE("chord arcs") {
  const auto d = PlanarDomain::disk(0.0, 1.0);
  auto full = chord_arcs(d, 0.0, 0.5);
  REQUIRE(full.size() == 1);
  CHECK(full[0].length() == doctest::Approx(kTwoPi));

  auto arc = chord_arcs(d, 0.8, 0.5);
  REQUIRE(arc.size() == 1);
  CHECK(arc[0].begin == doctest::Approx(1.4328593303765123).epsilon(1e-12));
  CHECK(arc[0].end == doctest::Approx(4.850325976803074).epsilon(1e-12));

  CHECK(chord_arcs(d, 0.8, 2.0).empty());
  CHECK(code_of([] { chord_arcs(PlanarDomain::ellipse(2.0, 1.0), 0.0, 0.5); }) == ErrorCode::unsupported_kind);
}

TEST_CASE("chord arcs reproduce the lens area") {
  // Area of D(0,1) within distance rho of z, against the closed-form lens area.
  const auto d = PlanarDomain::disk(0.0, 1.0);
  const double z = 0.6;
  const double rho = 0.9;
  const auto& g = gauss_legendre(20);
  double area = 0.0;
  const int cells = 200;
  for (int c = 0; c < cells; ++c) {
    const double a = rho * c / cells, b = rho * (c + 1) / cells;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i];
      double len = 0.0;
      for (const auto& iv : chord_arcs(d, z, s)) len += iv.length();
      area += 0.5 * (b - a) * g.weights[i] * s * len;
    }
  }
  const double R = 1.0;
  const double lens = R * R * std::acos((z * z + R * R - rho * rho) / (2 * z * R)) +
                      rho * rho * std::acos((z * z + rho * rho - R * R) / (2 * z * rho)) -
                      0.5 * std::sqrt((-z + R + rho) * (z + R - rho) * (z - R + rho) * (z + R + rho));
  CHECK(std::abs(area - lens) / lens < 1e-6);
}
