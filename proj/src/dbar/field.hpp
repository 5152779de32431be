#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dbar/common.hpp"

namespace dbar {

/// Complex-valued function on the closure of a domain.
///
/// `declared_singularity` / `declared_log_order` describe a known point where
/// the field is only log-continuous, with modulus of continuity ~ |ln h|^-nu.
/// Quadrature grades its meshes toward that point and the modulus estimator
/// samples pairs through it.
struct ScalarField {
  std::function<cplx(cplx)> evaluate;
  std::optional<cplx> declared_singularity;
  std::optional<double> declared_log_order;
  std::string description;
  /// Closed-form Wirtinger derivatives when known.
  std::function<cplx(cplx)> dz;
  std::function<cplx(cplx)> dzbar;
  /// Region where `evaluate` is defined; empty means the whole plane.
  std::function<bool(cplx)> intended_domain;

  cplx operator()(cplx z) const { return evaluate(z); }
  bool defined_at(cplx z) const { return !intended_domain || intended_domain(z); }
};

}  // namespace dbar
