#pragma once

#include <map>
#include <utility>

#include "dbar/field.hpp"

namespace dbar {

/// L(z) = -ln|z|^2, positive on the punctured unit disk.
double log_weight(cplx z);

/// f_nu(z) = (z / conj z) L(z)^-nu, 0 at z = 0. Defined for |z| < 1.
ScalarField field_f_nu(double nu);

/// u_nu(z) = z L^(1-nu) / (nu-1), and -z ln L for nu = 1; dbar u_nu = f_nu.
ScalarField field_u_nu(double nu);

/// Closed-form d/dz of u_nu: L^(1-nu)/(nu-1) + L^-nu, or -ln L + 1/L for nu = 1.
ScalarField field_du_nu(double nu);

/// Sum of c_pq z^p conj(z)^q.
using PolyCoeffs = std::map<std::pair<int, int>, cplx>;
ScalarField field_polynomial(const PolyCoeffs& coeffs);

ScalarField field_constant(cplx c);

/// |z|^alpha: Hoelder, smaller than every log weight.
ScalarField field_abs_power(double alpha);

/// a f + b g (singularity metadata taken from whichever operand declares one).
ScalarField field_combine(cplx a, const ScalarField& f, cplx b, const ScalarField& g);

struct WirtingerPair {
  cplx dz;
  cplx dzbar;
};

inline constexpr double kDefaultFdStep = 1e-5;

/// Central differences: d = (d_x - i d_y)/2, dbar = (d_x + i d_y)/2.
/// Throws stencil_out_of_domain when z +- step, z +- i step leaves the field's domain.
WirtingerPair wirtinger_fd(const ScalarField& f, cplx z, double step = kDefaultFdStep);

/// Same stencil applied to an arbitrary callable (e.g. an operator evaluation).
template <class F>
WirtingerPair wirtinger_fd_fn(F&& f, cplx z, double step) {
  const cplx fx = (f(z + step) - f(z - step)) / (2.0 * step);
  const cplx fy = (f(z + kI * step) - f(z - kI * step)) / (2.0 * step);
  return {0.5 * (fx - kI * fy), 0.5 * (fx + kI * fy)};
}

}  // namespace dbar
