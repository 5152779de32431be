#include <cmath>

#include "doctest.h"
#include "dbar/logspace.hpp"
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

const PlanarDomain& half_disk() {
  static const PlanarDomain d = PlanarDomain::disk(0.0, 0.5);
  return d;
}

}  // namespace

TEST_CASE("constant field has zero modulus") {
  const auto p = modulus_profile(half_disk(), field_constant({1.0, -2.0}), 4, 10, 1000, 5);
  for (double w : p.omega) CHECK(w == 0.0);
  CHECK(p.sup_norm == doctest::Approx(std::sqrt(5.0)));
  CHECK(code_of([&] { fit_log_order(p); }) == ErrorCode::degenerate_fit);
}

TEST_CASE("conj z has modulus h") {
  const auto p = modulus_profile(half_disk(), field_polynomial({{{0, 1}, 1.0}}), 4, 12, 1000, 5);
  REQUIRE(p.ks.size() == 9);
  for (size_t i = 0; i < p.ks.size(); ++i) {
    CHECK(p.scales[i] == std::ldexp(1.0, -p.ks[i]));
    CHECK(p.omega[i] == doctest::Approx(p.scales[i]).epsilon(1e-12));
    CHECK(p.pair_count[i] > 0);
  }
}

TEST_CASE("f_2 modulus times |ln h|^2 stays bounded") {
  const auto p = modulus_profile(half_disk(), field_f_nu(2.0), 4, 20, 1000, 1);
  double lo = 1e300, hi = 0.0;
  for (size_t i = 0; i < p.ks.size(); ++i) {
    const double w = p.omega[i] * std::pow(std::log(p.scales[i]), 2.0);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  CHECK(hi / lo < 10.0);
  CHECK(hi < 2.0);
}

TEST_CASE("log_norm is monotone in the order") {
  const auto p = modulus_profile(half_disk(), field_f_nu(3.0), 4, 14, 1000, 2);
  double prev = 0.0;
  for (double nu : {0.5, 1.0, 2.0, 3.0}) {
    const double n = log_norm(p, nu);
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("fit recovers a synthetic order") {
  ModulusProfile p;
  for (int k = 4; k <= 20; ++k) {
    const double h = std::ldexp(1.0, -k);
    p.ks.push_back(k);
    p.scales.push_back(h);
    p.omega.push_back(0.3 * std::pow(std::log(1.0 / h), -2.5));
    p.pair_count.push_back(1);
  }
  const auto plain = fit_log_order(p, FitModel::plain);
  CHECK(std::abs(plain.nu_hat - 2.5) < 1e-6);
  CHECK(plain.residual < 1e-10);
  for (size_t i = 0; i < p.omega.size(); ++i) p.omega[i] = 0.3 * std::pow(std::log(1.0 / p.scales[i]) + 1.2, -2.5);
  CHECK(std::abs(fit_log_order(p, FitModel::shifted).nu_hat - 2.5) < 1e-6);
}

TEST_CASE("fit on sampled fields") {
  for (double nu : {2.0, 3.0}) {
    const auto p = modulus_profile(half_disk(), field_f_nu(nu), 4, 20, 1000, 1);
    CHECK(!p.omega_segment.empty());
    CHECK(std::abs(fit_log_order(p).nu_hat - nu) < 0.15);
  }
}

TEST_CASE("profiles are deterministic in the seed") {
  const auto a = modulus_profile(half_disk(), field_f_nu(1.5), 4, 10, 1000, 9);
  const auto b = modulus_profile(half_disk(), field_f_nu(1.5), 4, 10, 1000, 9);
  CHECK(a.omega == b.omega);
  CHECK(a.pair_count == b.pair_count);
  CHECK(profile_csv(a) == profile_csv(b));
}

TEST_CASE("profile arguments are validated") {
  CHECK(code_of([] { modulus_profile(half_disk(), field_f_nu(2.0), 4, 10, 10, 1); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { modulus_profile(half_disk(), field_f_nu(2.0), 10, 4, 1000, 1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("truncated keeps the leading scales") {
  const auto p = modulus_profile(half_disk(), field_f_nu(2.0), 4, 12, 1000, 1);
  const auto t = p.truncated(8);
  CHECK(t.ks.back() == 8);
  CHECK(t.omega_segment.size() == t.ks.size());
  CHECK(t.sup_norm == p.sup_norm);
}

TEST_CASE("c1 norm of conj z") {
  ProfileOptions o;
  o.k_min = 4;
  o.k_max = 10;
  // sup |conj z| = 1/2 on D(0, 1/2); du = 0, dbar u = 1 with zero modulus.
  const double n = c1_log_norm(half_disk(), field_polynomial({{{0, 1}, 1.0}}), 1.0, o);
  CHECK(n == doctest::Approx(1.5).epsilon(1e-2));
}

TEST_CASE("Hoelder data has vanishing log-weighted modulus") {
  const auto p = modulus_profile(half_disk(), field_abs_power(0.5), 4, 24, 1000, 1);
  const double first = p.omega.front() * std::pow(std::log(p.scales.front()), 2.0);
  const double last = p.omega.back() * std::pow(std::log(p.scales.back()), 2.0);
  CHECK(last < 0.05 * first);
}

TEST_CASE("grid pair seminorm") {
  const std::vector<cplx> pts{0.0, 0.25, 0.9};
  const std::vector<cplx> vals{0.0, 1.0, 5.0};
  const auto s = grid_pair_seminorm(pts, vals, 2.0);
  CHECK(s.pairs == 1);
  CHECK(s.value == doctest::Approx(std::pow(std::log(4.0), 2.0)));
  CHECK(code_of([&] { grid_pair_seminorm(pts, {0.0}, 1.0); }) == ErrorCode::invalid_argument);
}
