#include "dbar/gauss.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "dbar/common.hpp"

namespace dbar {

namespace {

constexpr int kMinOrder = 2;
constexpr int kMaxOrder = 32;

template <int N>
GaussRule build() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  GaussRule rule;
  // Boost stores the non-negative half, starting at the centre.
  for (size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    rule.nodes.push_back(-x[i]);
    rule.weights.push_back(w[i]);
  }
  if (N % 2 == 1) {
    rule.nodes.push_back(0.0);
    rule.weights.push_back(w[0]);
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

template <int... I>
GaussRule build_any(int n, std::integer_sequence<int, I...>) {
  GaussRule out;
  ((n == I + kMinOrder ? (out = build<I + kMinOrder>(), true) : false) || ...);
  return out;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  require(order >= kMinOrder && order <= kMaxOrder, "gauss_legendre order must be in [2, 32]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot)
    slot = std::make_unique<GaussRule>(build_any(order, std::make_integer_sequence<int, kMaxOrder - kMinOrder + 1>{}));
  return *slot;
}

}  // namespace dbar
