#pragma once

#include <vector>

namespace dbar {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; the returned reference stays valid for the program lifetime.
const GaussRule& gauss_legendre(int order);

}  // namespace dbar
