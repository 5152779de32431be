#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbar/field.hpp"
#include "dbar/geometry.hpp"

namespace dbar {

/// omega[i] = sampled sup |f(w+h) - f(w)| over pairs with |h| = scales[i] = 2^-ks[i].
struct ModulusProfile {
  std::vector<int> ks;
  std::vector<double> scales;
  std::vector<double> omega;
  std::vector<size_t> pair_count;
  /// Same sup restricted to the pairs w = p + alpha h e^{i phi}, w + h e^{i phi} with -1 <= alpha <= 0,
  /// i.e. segments through the declared singularity p; empty without one.
  std::vector<double> omega_segment;
  double sup_norm = 0.0;

  /// Copy restricted to k <= k_max.
  ModulusProfile truncated(int k_max) const;
};

struct ProfileOptions {
  int k_min = 4;
  int k_max = 14;
  /// Quasi-random base points per scale.
  int base_points = 1000;
  uint64_t seed = 1;
  int directions = 8;
  /// Worst-case pairs near a declared singularity p: w = p + alpha h e^{i phi},
  /// partner w + h e^{i psi}, plus the chord pairs p + (h/sqrt 2) e^{i phi}, rotated by pi/2.
  std::vector<double> singular_alphas = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
  int singular_angles = 8;
  int singular_directions = 8;
  /// Memoize evaluations by point; for fields that are expensive to evaluate.
  bool memoize = false;
};

ModulusProfile modulus_profile(const PlanarDomain& domain, const ScalarField& f, const ProfileOptions& options);

/// Dense profile; requires pairs_per_scale >= 1000 and 3 <= k_min < k_max.
ModulusProfile modulus_profile(const PlanarDomain& domain, const ScalarField& f, int k_min, int k_max,
                               int pairs_per_scale, uint64_t seed);

/// Few base points and directions, all worst-case pairs kept: for operator-valued fields.
ProfileOptions sparse_profile_options(int k_min, int k_max, uint64_t seed);

/// sup_norm + max_k omega_k |ln h_k|^nu (a sampled lower estimate of the norm).
double log_norm(const ModulusProfile& profile, double nu);

enum class FitModel {
  plain,    // ln omega = a - nu ln ln(1/h)
  shifted,  // ln omega = a - nu ln(ln(1/h) + c), c fitted
};

struct LogOrderFit {
  double nu_hat = 0.0;
  double intercept = 0.0;
  double shift = 0.0;
  double residual = 0.0;  // max |residual| of ln omega
  int k_first = 0;
  int k_last = 0;
  size_t scales_used = 0;
};

enum class FitSource {
  automatic,  // segment pairs when the profile has them, else all pairs
  all_pairs,
  segment_pairs,
};

/// Scales with omega = 0 are dropped; fewer than 4 left gives degenerate_fit.
LogOrderFit fit_log_order(const ModulusProfile& profile, FitModel model = FitModel::shifted,
                          FitSource source = FitSource::automatic);

/// sup|u| + sup|du| + sup|dbar u| + Log^nu seminorms of du and dbar u.
/// u must carry dz and dzbar closures.
double c1_log_norm(const PlanarDomain& domain, const ScalarField& u, double nu, const ProfileOptions& options);

struct GridSeminorm {
  double value = 0.0;
  size_t pairs = 0;
};

/// max over point pairs with 0 < |w - w'| <= 1/2 of |v - v'| |ln|w - w'||^order.
GridSeminorm grid_pair_seminorm(const std::vector<cplx>& points, const std::vector<cplx>& values, double order);

/// CSV with header k,h_k,omega,pair_count[,omega_segment].
std::string profile_csv(const ModulusProfile& profile);

}  // namespace dbar
