#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dbar/operators.hpp"
#include "dbar/specs.hpp"

namespace dbar {

enum class Suite {
  phi_disk,
  pompeiu_dbar,
  h_identity,
  disk_specialization,
  nw_bound_disk,
  nw_bound_general,
  lemma24_inequalities,
  twoT_divergence_nu1,
  twoT_boundedness,
  solve_and_certify,
  sharpness_examples,
  loss_optimality,
};

const std::vector<Suite>& all_suites();
const char* suite_name(Suite s);
Suite parse_suite(const std::string& name);

struct SuiteConfig {
  Suite suite = Suite::phi_disk;
  /// Domain / field spec strings; empty selects the suite's defaults.
  std::string domain;
  std::string field;
  QuadratureSpec quad;
  /// Sample count override (0 keeps the suite default).
  int samples = 0;
  uint64_t seed = 1;
  /// Directory for CSV tables; empty disables them.
  std::string artifact_dir;
};

enum class Compare {
  at_most,   // value <= target + tolerance
  at_least,  // value >= target - tolerance
  near,      // |value - target| <= tolerance
};

struct Measurement {
  std::string name;
  std::string claim;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  Compare compare = Compare::at_most;
  bool passed = false;
  std::string note;
};

struct VerificationReport {
  Suite suite = Suite::phi_disk;
  bool passed = false;
  std::vector<Measurement> measurements;
  std::vector<std::string> artifacts;
  double runtime_seconds = 0.0;

  /// Runtime is left out so identical runs serialize identically.
  json to_json() const;
};

Measurement measure(std::string name, std::string claim, double value, Compare compare, double target,
                    double tolerance = 0.0, std::string note = {});

VerificationReport run_suite(const SuiteConfig& config);

/// One row per resolution.
struct ConvergenceRow {
  double cost = 0.0;
  cplx value{0.0, 0.0};
  double error = 0.0;  // vs the exact value if given, else vs the richest resolution
  double order = 0.0;  // log2 of the error ratio to the previous row; NaN for the first
};

struct ConvergenceTarget {
  OperatorKind op = OperatorKind::T;
  std::string domain;
  std::string field;
  cplx point{0.0, 0.0};
  double param = 0.0;  // r for NW
  std::optional<cplx> exact;
};

/// `levels` single-refinement resolutions, node counts halving from `base` toward the first row.
std::vector<QuadratureSpec> resolution_ladder(const QuadratureSpec& base, int levels);

/// Resolutions must be ordered by increasing cost (at least three).
std::vector<ConvergenceRow> convergence_table(const ConvergenceTarget& target,
                                              const std::vector<QuadratureSpec>& resolutions);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Single-level evaluation of an operator (no refinement loop) for convergence sweeps.
cplx evaluate_operator(OperatorKind op, const PlanarDomain& domain, const ScalarField& f, cplx z, double param,
                       const QuadratureSpec& spec, IntegralResult* result = nullptr);

enum class FieldFamily { f_nu, polynomial, constant };

struct NormRatioRow {
  double nu = 0.0;
  std::string field;
  int k_max = 0;
  double norm_f = 0.0;
  double norm_2Tf = 0.0;
  double ratio = 0.0;
};

/// Log^nu norm of f against the Log^(nu-1) norm of 2Tf, for each k_max.
std::vector<NormRatioRow> norm_ratio_study(const std::vector<double>& nu_values, FieldFamily family,
                                           const std::string& domain, const std::vector<int>& k_max_values,
                                           const QuadratureSpec& spec, uint64_t seed);
std::string norm_ratio_csv(const std::vector<NormRatioRow>& rows);

}  // namespace dbar
