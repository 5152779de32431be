#include "dbar/common.hpp"

namespace dbar {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unsupported_kind: return "unsupported-kind";
    case ErrorCode::invalid_center: return "invalid-center";
    case ErrorCode::non_finite_integrand: return "non-finite-integrand";
    case ErrorCode::divergent_evaluation: return "divergent-evaluation";
    case ErrorCode::not_converged: return "not-converged";
    case ErrorCode::inconsistency: return "inconsistency";
    case ErrorCode::out_of_intended_domain: return "out-of-intended-domain";
    case ErrorCode::stencil_out_of_domain: return "stencil-out-of-domain";
    case ErrorCode::insufficient_sampling: return "insufficient-sampling";
    case ErrorCode::degenerate_fit: return "degenerate-fit";
    case ErrorCode::divergent_integral: return "divergent-integral";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace dbar
