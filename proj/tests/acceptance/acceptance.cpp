#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dbar/operators.hpp"
#include "dbar/testfields.hpp"
#include "dbar/verify.hpp"

using namespace dbar;

namespace {

struct Check {
  std::string what;
  bool passed;
  std::string detail;
};

VerificationReport run(Suite s) {
  SuiteConfig c;
  c.suite = s;
  return run_suite(c);
}

// Every measurement whose name starts with one of the prefixes.
std::vector<Check> pick(const VerificationReport& r, const std::vector<std::string>& prefixes) {
  std::vector<Check> out;
  for (const auto& m : r.measurements) {
    for (const auto& p : prefixes) {
      if (m.name.rfind(p, 0) != 0) continue;
      std::string d = format_double(m.value);
      if (!m.note.empty()) d += " (" + m.note + ")";
      out.push_back({m.name, m.passed, d});
      break;
    }
  }
  if (out.empty()) out.push_back({prefixes.front(), false, "measurement missing from " + std::string(suite_name(r.suite))});
  return out;
}

Check direct(const std::string& what, const std::function<Check()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {what, false, std::string(error_code_name(e.code())) + ": " + e.what()};
  }
}

int failures = 0;

void report(int n, const std::string& title, const std::vector<Check>& checks) {
  bool ok = !checks.empty();
  for (const auto& c : checks) ok = ok && c.passed;
  failures += !ok;
  std::printf("criterion %2d %s: %s\n", n, ok ? "PASS" : "FAIL", title.c_str());
  for (const auto& c : checks) std::printf("    [%s] %s = %s\n", c.passed ? "ok" : "xx", c.what.c_str(), c.detail.c_str());
  std::fflush(stdout);
}

void append(std::vector<Check>& a, const std::vector<Check>& b) { a.insert(a.end(), b.begin(), b.end()); }

}  // namespace

int main() {
  const QuadratureSpec q;

  report(1, "Phi vanishes on disks", pick(run(Suite::phi_disk), {"max_abs_phi["}));

  report(2, "Phi(0) = 1/3 on ellipse(2,1)", {direct("abs_phi_minus_third", [&] {
           const auto e = op_Phi(PlanarDomain::ellipse(2.0, 1.0), 0.0, q);
           const double err = std::abs(e.value - 1.0 / 3.0);
           return Check{"abs_phi_minus_third", err < 1e-8, format_double(err)};
         })});

  report(3, "dbar Tf = f", pick(run(Suite::pompeiu_dbar), {"max_abs_T1_minus_conj_z", "unconverged_T1", "max_abs_fd_dbar_T_minus_f"}));

  {
    auto c = pick(run(Suite::h_identity),
                  {"max_difference_over_10x_combined_error", "unconverged_evaluations", "failed_evaluations"});
    append(c, pick(run(Suite::disk_specialization), {"max_abs_Hdirect_minus_2T[", "unconverged["}));
    report(4, "H identity and disk specialization", c);
  }

  {
    auto c = pick(run(Suite::nw_bound_disk), {"max_abs_nw_residual", "samples_above_one", "unconverged_evaluations"});
    append(c, pick(run(Suite::nw_bound_general), {"max_abs_nw_residual", "unconverged_evaluations"}));
    report(5, "NW residual bounds", c);
  }

  const VerificationReport lemma = run(Suite::lemma24_inequalities);
  report(6, "radial log integrals", pick(lemma, {"max_rel_diff_closed_form_vs_adaptive", "max_ratio_integral_over_bound", "grid_violations"}));

  {
    std::vector<Check> c{direct("abs_2Tf2_plus_inv_ln4", [&] {
      const auto e = op_2T(PlanarDomain::disk(0.0, 0.5), field_f_nu(2.0), 0.0, q);
      const double err = std::abs(e.value + 1.0 / std::log(4.0));
      return Check{"abs_2Tf2_plus_inv_ln4", err < 1e-4 && e.quadrature.converged, format_double(err)};
    })};
    append(c, pick(run(Suite::twoT_divergence_nu1),
                   {"divergence_detected", "partials_strictly_increasing", "growth_rate_over_half_lnln_law"}));
    report(7, "2T oracle and divergence at nu = 1", c);
  }

  const VerificationReport sharp = run(Suite::sharpness_examples);
  report(8, "log-order recovery", pick(sharp, {"log_order[f_nu:2]", "log_order[f_nu:3]", "log_order[du_nu:2]"}));
  report(9, "gradient blow-up for nu <= 1, boundedness for nu = 2",
         pick(sharp, {"du_strictly_increasing[", "du_max_over_min[nu=2]"}));

  report(10, "boundedness witness (empirical, not a proof)",
         pick(run(Suite::twoT_boundedness), {"ratio_variation[f_nu:"}));

  {
    std::vector<Check> c;
    for (Suite s : {Suite::phi_disk, Suite::lemma24_inequalities, Suite::twoT_divergence_nu1}) {
      const std::string a = run(s).to_json().dump();
      const std::string b = run(s).to_json().dump();
      c.push_back({std::string("rerun[") + suite_name(s) + "]", a == b, a == b ? "identical" : "differs"});
    }
    c.push_back({"rerun[lemma24_inequalities] vs first run", run(Suite::lemma24_inequalities).to_json().dump() ==
                                                                  lemma.to_json().dump(), "compared"});
    report(11, "determinism", c);
  }

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
