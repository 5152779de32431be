#include "dbar/testfields.hpp"

#include <cmath>
#include <sstream>

namespace dbar {

namespace {

bool inside_unit(cplx z) { return std::norm(z) < 1.0; }

void check_unit(cplx z, const char* name) {
  if (!inside_unit(z)) {
    std::ostringstream os;
    os << name << " is defined only for |z| < 1, got z = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag()
       << "i";
    fail(ErrorCode::out_of_intended_domain, os.str());
  }
}

std::string fmt_nu(double nu) {
  std::ostringstream os;
  os << nu;
  return os.str();
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int k = 0; k < n; ++k) r *= z;
  return r;
}

}  // namespace

double log_weight(cplx z) { return -std::log(std::norm(z)); }

ScalarField field_f_nu(double nu) {
  require(std::isfinite(nu) && nu > 0.0, "field_f_nu requires nu > 0");
  ScalarField f;
  f.evaluate = [nu](cplx z) -> cplx {
    check_unit(z, "f_nu");
    if (z == cplx{0.0, 0.0}) return 0.0;
    return z / std::conj(z) * std::pow(log_weight(z), -nu);
  };
  f.declared_singularity = cplx{0.0, 0.0};
  f.declared_log_order = nu;
  f.description = "f_nu:" + fmt_nu(nu);
  f.intended_domain = inside_unit;
  return f;
}

ScalarField field_u_nu(double nu) {
  require(std::isfinite(nu) && nu > 0.0, "field_u_nu requires nu > 0");
  ScalarField u;
  if (nu == 1.0) {
    u.evaluate = [](cplx z) -> cplx {
      check_unit(z, "u_nu");
      if (z == cplx{0.0, 0.0}) return 0.0;
      return -z * std::log(log_weight(z));
    };
  } else {
    u.evaluate = [nu](cplx z) -> cplx {
      check_unit(z, "u_nu");
      if (z == cplx{0.0, 0.0}) return 0.0;
      return z * std::pow(log_weight(z), 1.0 - nu) / (nu - 1.0);
    };
  }
  u.dz = field_du_nu(nu).evaluate;
  u.dzbar = field_f_nu(nu).evaluate;
  u.declared_singularity = cplx{0.0, 0.0};
  u.declared_log_order = nu;
  u.description = "u_nu:" + fmt_nu(nu);
  u.intended_domain = inside_unit;
  return u;
}

ScalarField field_du_nu(double nu) {
  require(std::isfinite(nu) && nu > 0.0, "field_du_nu requires nu > 0");
  ScalarField d;
  d.evaluate = [nu](cplx z) -> cplx {
    check_unit(z, "du_nu");
    if (z == cplx{0.0, 0.0}) {
      if (nu > 1.0) return 0.0;
      fail(ErrorCode::out_of_intended_domain, "du_nu is unbounded at 0 for nu <= 1");
    }
    const double l = log_weight(z);
    if (nu == 1.0) return -std::log(l) + 1.0 / l;
    return std::pow(l, 1.0 - nu) / (nu - 1.0) + std::pow(l, -nu);
  };
  d.declared_singularity = cplx{0.0, 0.0};
  if (nu > 1.0) d.declared_log_order = nu - 1.0;
  d.description = "du_nu:" + fmt_nu(nu);
  d.intended_domain = [nu](cplx z) { return inside_unit(z) && (nu > 1.0 || z != cplx{0.0, 0.0}); };
  return d;
}

ScalarField field_polynomial(const PolyCoeffs& coeffs) {
  for (const auto& [pq, c] : coeffs) {
    require(pq.first >= 0 && pq.second >= 0, "polynomial exponents must be non-negative");
    require(is_finite(c), "polynomial coefficients must be finite");
  }
  auto eval = [coeffs](cplx z, int dp, int dq) {
    const cplx zb = std::conj(z);
    cplx acc = 0.0;
    for (const auto& [pq, c] : coeffs) {
      const int p = pq.first - dp;
      const int q = pq.second - dq;
      if (p < 0 || q < 0) continue;
      const double factor = dp ? pq.first : (dq ? pq.second : 1);
      acc += c * factor * ipow(z, p) * ipow(zb, q);
    }
    return acc;
  };
  ScalarField f;
  f.evaluate = [eval](cplx z) { return eval(z, 0, 0); };
  f.dz = [eval](cplx z) { return eval(z, 1, 0); };
  f.dzbar = [eval](cplx z) { return eval(z, 0, 1); };
  std::ostringstream os;
  os << "polynomial:";
  bool first = true;
  for (const auto& [pq, c] : coeffs) {
    if (!first) os << ";";
    first = false;
    os << pq.first << "," << pq.second << "=" << c.real() << "," << c.imag();
  }
  f.description = os.str();
  return f;
}

ScalarField field_constant(cplx c) {
  require(is_finite(c), "constant must be finite");
  ScalarField f;
  f.evaluate = [c](cplx) { return c; };
  f.dz = [](cplx) { return cplx{0.0, 0.0}; };
  f.dzbar = f.dz;
  std::ostringstream os;
  os << "constant:" << c.real() << "," << c.imag();
  f.description = os.str();
  return f;
}

ScalarField field_abs_power(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "field_abs_power requires 0 < alpha <= 1");
  ScalarField f;
  f.evaluate = [alpha](cplx z) { return cplx{std::pow(std::abs(z), alpha), 0.0}; };
  f.declared_singularity = cplx{0.0, 0.0};
  f.description = "abs_power:" + fmt_nu(alpha);
  return f;
}

ScalarField field_combine(cplx a, const ScalarField& f, cplx b, const ScalarField& g) {
  ScalarField h;
  h.evaluate = [a, b, fe = f.evaluate, ge = g.evaluate](cplx z) { return a * fe(z) + b * ge(z); };
  if (f.dz && g.dz) h.dz = [a, b, fd = f.dz, gd = g.dz](cplx z) { return a * fd(z) + b * gd(z); };
  if (f.dzbar && g.dzbar)
    h.dzbar = [a, b, fd = f.dzbar, gd = g.dzbar](cplx z) { return a * fd(z) + b * gd(z); };
  h.declared_singularity = f.declared_singularity ? f.declared_singularity : g.declared_singularity;
  if (f.declared_log_order && g.declared_log_order)
    h.declared_log_order = std::min(*f.declared_log_order, *g.declared_log_order);
  else
    h.declared_log_order = f.declared_log_order ? f.declared_log_order : g.declared_log_order;
  if (f.declared_singularity && g.declared_singularity && *f.declared_singularity != *g.declared_singularity)
    h.declared_log_order.reset();
  h.intended_domain = [fi = f.intended_domain, gi = g.intended_domain](cplx z) {
    return (!fi || fi(z)) && (!gi || gi(z));
  };
  h.description = "combine(" + f.description + "," + g.description + ")";
  return h;
}

WirtingerPair wirtinger_fd(const ScalarField& f, cplx z, double step) {
  require(step > 0.0 && std::isfinite(step), "wirtinger_fd step must be positive");
  for (cplx p : {z + step, z - step, z + kI * step, z - kI * step})
    if (!f.defined_at(p)) fail(ErrorCode::stencil_out_of_domain, "finite-difference stencil leaves the field's domain");
  return wirtinger_fd_fn(f.evaluate, z, step);
}

}  // namespace dbar
