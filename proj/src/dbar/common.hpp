#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dbar {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Mirrors dbar_status in the C header; keep the numeric values in sync.
enum class ErrorCode {
  invalid_argument = 1,
  unsupported_kind = 2,
  invalid_center = 3,
  non_finite_integrand = 4,
  divergent_evaluation = 5,
  not_converged = 6,
  inconsistency = 7,
  out_of_intended_domain = 8,
  stencil_out_of_domain = 9,
  insufficient_sampling = 10,
  degenerate_fit = 11,
  divergent_integral = 12,
  io_error = 13,
  internal = 99,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace dbar
