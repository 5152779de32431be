#include "dbar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dbar {

namespace {

// Trapezoid resolution for winding numbers, root bracketing and nearest-point search.
constexpr int kBoundarySamples = 2048;
constexpr int kDerivativeChecks = 256;

double wrap_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Smallest positive root of s^2 + 2 b s + c = 0 with c < 0 (one positive root).
double positive_root(double b, double c) {
  double disc = std::sqrt(std::max(b * b - c, 0.0));
  if (b >= 0.0) return -c / (b + disc);
  return disc - b;
}

}  // namespace

const char* domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::disk: return "disk";
    case DomainKind::ellipse: return "ellipse";
    case DomainKind::perturbed_disk: return "perturbed_disk";
    case DomainKind::generic: return "generic";
  }
  return "generic";
}

PlanarDomain PlanarDomain::disk(cplx center, double radius) {
  require(is_finite(center), "disk center must be finite");
  require(std::isfinite(radius) && radius > 0.0, "disk radius must be positive");
  PlanarDomain d;
  d.kind_ = DomainKind::disk;
  d.center_ = center;
  d.radius_ = radius;
  d.curve_.position = [center, radius](double t) { return center + radius * std::polar(1.0, t); };
  d.curve_.derivative = [radius](double t) { return kI * radius * std::polar(1.0, t); };
  d.finish_setup();
  d.diameter_ = 2.0 * radius;
  return d;
}

PlanarDomain PlanarDomain::ellipse(double semi_a, double semi_b) {
  require(std::isfinite(semi_a) && std::isfinite(semi_b) && semi_b > 0.0,
          "ellipse semi-axes must be positive");
  require(semi_a >= semi_b, "ellipse requires semi_a >= semi_b");
  PlanarDomain d;
  d.kind_ = DomainKind::ellipse;
  d.semi_a_ = semi_a;
  d.semi_b_ = semi_b;
  d.curve_.position = [semi_a, semi_b](double t) {
    return cplx(semi_a * std::cos(t), semi_b * std::sin(t));
  };
  d.curve_.derivative = [semi_a, semi_b](double t) {
    return cplx(-semi_a * std::sin(t), semi_b * std::cos(t));
  };
  d.finish_setup();
  d.diameter_ = 2.0 * semi_a;
  return d;
}

PlanarDomain PlanarDomain::perturbed_disk(double delta, int mode, double radius) {
  require(mode >= 1, "perturbed disk mode must be >= 1");
  require(std::isfinite(radius) && radius > 0.0, "perturbed disk radius must be positive");
  require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0 / (1.0 + mode),
          "perturbed disk requires 0 <= delta < 1/(1+mode)");
  PlanarDomain d;
  d.kind_ = DomainKind::perturbed_disk;
  d.delta_ = delta;
  d.mode_ = mode;
  d.radius_ = radius;
  const double m = mode;
  d.curve_.position = [=](double t) {
    return radius * (1.0 + delta * std::cos(m * t)) * std::polar(1.0, t);
  };
  d.curve_.derivative = [=](double t) {
    cplx e = std::polar(1.0, t);
    return radius * (-delta * m * std::sin(m * t) * e + kI * (1.0 + delta * std::cos(m * t)) * e);
  };
  d.finish_setup();
  return d;
}

PlanarDomain PlanarDomain::generic(BoundaryCurve curve, cplx interior_point) {
  require(static_cast<bool>(curve.position) && static_cast<bool>(curve.derivative),
          "boundary curve needs position and derivative");
  require(curve.regularity_alpha > 0.0 && curve.regularity_alpha <= 1.0,
          "regularity_alpha must lie in (0, 1]");
  PlanarDomain d;
  d.kind_ = DomainKind::generic;
  d.curve_ = std::move(curve);
  d.finish_setup();
  const cplx p0 = d.curve_.position(0.0);
  const cplx p1 = d.curve_.position(kTwoPi);
  require(std::abs(p0 - p1) <= 1e-9 * std::max(1.0, d.diameter_), "boundary curve is not closed");
  require(d.winding_number(interior_point) == 1,
          "boundary must wind once counterclockwise about the interior point");
  return d;
}

void PlanarDomain::finish_setup() {
  auto pos = std::make_shared<std::vector<cplx>>(kBoundarySamples);
  auto der = std::make_shared<std::vector<cplx>>(kBoundarySamples);
  for (int k = 0; k < kBoundarySamples; ++k) {
    const double t = kTwoPi * k / kBoundarySamples;
    (*pos)[k] = curve_.position(t);
    (*der)[k] = curve_.derivative(t);
    require(is_finite((*pos)[k]) && is_finite((*der)[k]), "boundary curve produced a non-finite value");
  }
  for (int k = 0; k < kDerivativeChecks; ++k) {
    const double t = kTwoPi * k / kDerivativeChecks;
    require(std::abs(curve_.derivative(t)) > 0.0, "boundary derivative vanishes");
  }
  samples_ = pos;
  sample_derivs_ = der;

  bbox_ = {pos->front().real(), pos->front().real(), pos->front().imag(), pos->front().imag()};
  for (const cplx& p : *pos) {
    bbox_.xmin = std::min(bbox_.xmin, p.real());
    bbox_.xmax = std::max(bbox_.xmax, p.real());
    bbox_.ymin = std::min(bbox_.ymin, p.imag());
    bbox_.ymax = std::max(bbox_.ymax, p.imag());
  }
  double diam = 0.0;
  for (int i = 0; i < kBoundarySamples; i += 4)
    for (int j = i + 4; j < kBoundarySamples; j += 4) diam = std::max(diam, std::abs((*pos)[i] - (*pos)[j]));
  diameter_ = diam;
}

double PlanarDomain::area() const {
  switch (kind_) {
    case DomainKind::disk: return kPi * radius_ * radius_;
    case DomainKind::ellipse: return kPi * semi_a_ * semi_b_;
    default: break;
  }
  // 1/2 Im of the contour integral of conj(zeta) dzeta.
  double acc = 0.0;
  for (int k = 0; k < kBoundarySamples; ++k) acc += (std::conj((*samples_)[k]) * (*sample_derivs_)[k]).imag();
  return 0.5 * acc * kTwoPi / kBoundarySamples;
}

std::string PlanarDomain::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case DomainKind::disk:
      os << "disk(center=" << center_.real() << (center_.imag() < 0 ? "" : "+") << center_.imag()
         << "i, radius=" << radius_ << ")";
      break;
    case DomainKind::ellipse: os << "ellipse(a=" << semi_a_ << ", b=" << semi_b_ << ")"; break;
    case DomainKind::perturbed_disk:
      os << "perturbed_disk(delta=" << delta_ << ", mode=" << mode_ << ", radius=" << radius_ << ")";
      break;
    case DomainKind::generic: os << "generic(diameter=" << diameter_ << ")"; break;
  }
  return os.str();
}

double PlanarDomain::winding_sum(cplx z) const {
  cplx acc = 0.0;
  for (int k = 0; k < kBoundarySamples; ++k) acc += (*sample_derivs_)[k] / ((*samples_)[k] - z);
  return (acc * (kTwoPi / kBoundarySamples) / (kTwoPi * kI)).real();
}

int PlanarDomain::winding_number(cplx z) const {
  return static_cast<int>(std::lround(winding_sum(z)));
}

bool PlanarDomain::contains(cplx z) const {
  if (!is_finite(z)) return false;
  switch (kind_) {
    case DomainKind::disk: return std::abs(z - center_) < radius_;
    case DomainKind::ellipse: {
      const double x = z.real() / semi_a_;
      const double y = z.imag() / semi_b_;
      return x * x + y * y < 1.0;
    }
    case DomainKind::perturbed_disk: {
      const double r = std::abs(z);
      if (r == 0.0) return true;
      return r < radius_ * (1.0 + delta_ * std::cos(mode_ * std::arg(z)));
    }
    case DomainKind::generic: return winding_sum(z) > 0.5;
  }
  return false;
}

NearestBoundary PlanarDomain::nearest_boundary(cplx z) const {
  if (kind_ == DomainKind::disk) {
    const cplx d = z - center_;
    const double r = std::abs(d);
    const cplx dir = r > 0.0 ? d / r : cplx(1.0, 0.0);
    return {std::abs(radius_ - r), center_ + radius_ * dir};
  }
  const auto& pos = *samples_;
  const int n = kBoundarySamples;
  std::vector<double> d2(n);
  for (int k = 0; k < n; ++k) d2[k] = std::norm(pos[k] - z);
  std::vector<int> minima;
  for (int k = 0; k < n; ++k) {
    if (d2[k] <= d2[(k + n - 1) % n] && d2[k] <= d2[(k + 1) % n]) minima.push_back(k);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return d2[a] < d2[b]; });
  if (minima.size() > 4) minima.resize(4);

  const double dt = kTwoPi / n;
  auto slope = [&](double t) {
    return (std::conj(curve_.position(t) - z) * curve_.derivative(t)).real();
  };
  NearestBoundary best{std::sqrt(d2[minima.front()]), pos[minima.front()]};
  for (int k : minima) {
    double lo = (k - 1) * dt;
    double hi = (k + 1) * dt;
    double glo = slope(lo);
    double ghi = slope(hi);
    if (glo > 0.0 || ghi < 0.0) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (slope(mid) < 0.0) lo = mid; else hi = mid;
    }
    const cplx p = curve_.position(0.5 * (lo + hi));
    const double dist = std::abs(p - z);
    if (dist < best.distance) best = {dist, p};
  }
  return best;
}

double PlanarDomain::boundary_distance(cplx z) const {
  if (kind_ == DomainKind::disk) return radius_ - std::abs(z - center_);
  const double d = nearest_boundary(z).distance;
  return contains(z) ? d : -d;
}

std::vector<RayInterval> PlanarDomain::ray_intervals(cplx z, double theta) const {
  const cplx u = std::polar(1.0, theta);
  switch (kind_) {
    case DomainKind::disk: {
      const cplx d = z - center_;
      const double b = (std::conj(d) * u).real();
      const double c = std::norm(d) - radius_ * radius_;
      if (c >= 0.0) return {};
      return {{0.0, positive_root(b, c)}};
    }
    case DomainKind::ellipse: {
      const double ia2 = 1.0 / (semi_a_ * semi_a_);
      const double ib2 = 1.0 / (semi_b_ * semi_b_);
      const double qa = u.real() * u.real() * ia2 + u.imag() * u.imag() * ib2;
      const double qb = (z.real() * u.real() * ia2 + z.imag() * u.imag() * ib2) / qa;
      const double qc = (z.real() * z.real() * ia2 + z.imag() * z.imag() * ib2 - 1.0) / qa;
      if (qc >= 0.0) return {};
      return {{0.0, positive_root(qb, qc)}};
    }
    default: return ray_intervals_by_roots(z, theta);
  }
}

std::vector<RayInterval> PlanarDomain::ray_intervals_by_roots(cplx z, double theta) const {
  const cplx u = std::polar(1.0, -theta);
  const auto& pos = *samples_;
  const int n = kBoundarySamples;
  auto cross = [&](const cplx& p) { return ((p - z) * u).imag(); };
  std::vector<double> hits;
  double g0 = cross(pos[0]);
  for (int k = 0; k < n; ++k) {
    const double g1 = cross(pos[(k + 1) % n]);
    if (g0 == 0.0 || (g0 < 0.0) != (g1 < 0.0)) {
      double lo = kTwoPi * k / n;
      double hi = kTwoPi * (k + 1) / n;
      double glo = g0;
      if (g0 != 0.0) {
        for (int it = 0; it < 55; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = cross(curve_.position(mid));
          if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
      } else {
        hi = lo;
      }
      const double s = ((curve_.position(0.5 * (lo + hi)) - z) * u).real();
      if (s > 0.0) hits.push_back(s);
    }
    g0 = g1;
  }
  std::sort(hits.begin(), hits.end());
  std::vector<RayInterval> out;
  if (hits.empty()) return out;
  out.push_back({0.0, hits[0]});
  for (size_t k = 1; k + 1 < hits.size(); k += 2) out.push_back({hits[k], hits[k + 1]});
  return out;
}

std::vector<AngularInterval> chord_arcs(const PlanarDomain& domain, cplx z, double s) {
  if (domain.kind() != DomainKind::disk) fail(ErrorCode::unsupported_kind, "chord_arcs requires a disk domain");
  require(std::isfinite(s) && s > 0.0, "chord_arcs requires s > 0");
  const double big_r = domain.radius();
  const cplx d = z - domain.center();
  const double rho = std::abs(d);
  if (s >= big_r + rho) return {};
  if (rho + s < big_r) return {{0.0, kTwoPi}};
  if (rho == 0.0) return {};
  const double c = (big_r * big_r - rho * rho - s * s) / (2.0 * s * rho);
  if (c >= 1.0) return {{0.0, kTwoPi}};
  if (c <= -1.0) return {};
  const double a = std::acos(c);
  const double begin = wrap_angle(std::arg(d) + a);
  const double end = begin + (kTwoPi - 2.0 * a);
  if (end <= kTwoPi) return {{begin, end}};
  return {{0.0, end - kTwoPi}, {begin, kTwoPi}};
}

}  // namespace dbar
