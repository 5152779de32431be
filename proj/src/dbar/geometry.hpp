#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dbar/common.hpp"

namespace dbar {

/// Positively oriented closed curve parametrized over [0, 2*pi).
struct BoundaryCurve {
  std::function<cplx(double)> position;
  std::function<cplx(double)> derivative;
  /// Hoelder exponent of the tangent. Metadata only, never verified.
  double regularity_alpha = 1.0;
};

enum class DomainKind { disk, ellipse, perturbed_disk, generic };

const char* domain_kind_name(DomainKind kind);

/// Open interval (enter, exit) of ray parameters s with z + s e^{i theta} in the domain.
struct RayInterval {
  double enter;
  double exit;
};

struct AngularInterval {
  double begin;
  double end;
  double length() const { return end - begin; }
};

struct BoundingBox {
  double xmin, xmax, ymin, ymax;
};

struct NearestBoundary {
  double distance;  // unsigned
  cplx point;
};

/// Bounded simply connected planar domain with a smooth boundary.
///
/// Immutable after construction; all queries are const and thread-safe.
/// Boundary points are treated as exterior (open-domain convention).
class PlanarDomain {
 public:
  static PlanarDomain disk(cplx center, double radius);
  /// Axis-aligned ellipse centred at the origin, semi_a >= semi_b > 0.
  static PlanarDomain ellipse(double semi_a, double semi_b);
  /// Boundary t -> radius * (1 + delta cos(mode t)) e^{it}; needs 0 <= delta < 1/(1+mode).
  static PlanarDomain perturbed_disk(double delta, int mode, double radius = 1.0);
  /// Arbitrary curve; `interior_point` is used to validate orientation.
  static PlanarDomain generic(BoundaryCurve curve, cplx interior_point);

  DomainKind kind() const { return kind_; }
  const BoundaryCurve& boundary() const { return curve_; }
  double diameter() const { return diameter_; }
  BoundingBox bounding_box() const { return bbox_; }
  double area() const;
  std::string describe() const;

  // Kind-specific parameters (meaningful only for the matching kind).
  cplx center() const { return center_; }
  double radius() const { return radius_; }
  double semi_a() const { return semi_a_; }
  double semi_b() const { return semi_b_; }
  double delta() const { return delta_; }
  int mode() const { return mode_; }

  bool contains(cplx z) const;
  /// Signed distance to the boundary: positive inside, negative outside.
  double boundary_distance(cplx z) const;
  NearestBoundary nearest_boundary(cplx z) const;
  int winding_number(cplx z) const;

  /// Sorted disjoint s-intervals of the ray from z in direction theta that lie inside.
  /// z must be interior; the first interval then starts at 0.
  std::vector<RayInterval> ray_intervals(cplx z, double theta) const;

 private:
  PlanarDomain() = default;
  void finish_setup();
  double winding_sum(cplx z) const;
  std::vector<RayInterval> ray_intervals_by_roots(cplx z, double theta) const;

  DomainKind kind_ = DomainKind::generic;
  BoundaryCurve curve_;
  cplx center_{0.0, 0.0};
  double radius_ = 0.0;
  double semi_a_ = 0.0;
  double semi_b_ = 0.0;
  double delta_ = 0.0;
  int mode_ = 0;
  double diameter_ = 0.0;
  BoundingBox bbox_{};
  // Boundary samples at t_k = 2*pi*k/N shared between copies.
  std::shared_ptr<const std::vector<cplx>> samples_;
  std::shared_ptr<const std::vector<cplx>> sample_derivs_;
};

/// Angular extent {theta in [0, 2pi): z + s e^{i theta} interior} for a disk domain,
/// from the law of cosines. Intervals that wrap past 2pi are split.
std::vector<AngularInterval> chord_arcs(const PlanarDomain& domain, cplx z, double s);

}  // namespace dbar
