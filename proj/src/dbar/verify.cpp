#include "dbar/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "dbar/logspace.hpp"
#include "dbar/parallel.hpp"
#include "dbar/testfields.hpp"

namespace dbar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SuiteContext {
  const SuiteConfig& config;
  VerificationReport& report;

  void add(Measurement m) { report.measurements.push_back(std::move(m)); }

  // Runs a block of measurements; an exception becomes a failed measurement.
  void guarded(const std::string& name, const std::string& claim, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      Measurement m = measure(name, claim, kNaN, Compare::at_most, 0.0, 0.0,
                              std::string(error_code_name(e.code())) + ": " + e.what());
      m.passed = false;
      add(m);
    } catch (const std::exception& e) {
      Measurement m = measure(name, claim, kNaN, Compare::at_most, 0.0, 0.0, std::string("error: ") + e.what());
      m.passed = false;
      add(m);
    }
  }

  void artifact(const std::string& file, const std::string& content) {
    if (config.artifact_dir.empty()) return;
    std::filesystem::create_directories(config.artifact_dir);
    const std::string path = (std::filesystem::path(config.artifact_dir) / file).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io_error, "cannot write " + path);
    out << content;
    report.artifacts.push_back(path);
  }

  int samples(int fallback) const { return config.samples > 0 ? config.samples : fallback; }
  std::string domain_or(const std::string& fallback) const {
    return config.domain.empty() ? fallback : config.domain;
  }
  std::string field_or(const std::string& fallback) const { return config.field.empty() ? fallback : config.field; }
};

std::string suite_prefix(Suite s) { return suite_name(s); }

/// Uniform samples of the domain with boundary distance above margin.
std::vector<cplx> random_interior(const PlanarDomain& domain, int n, std::mt19937_64& rng, double margin) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const BoundingBox b = domain.bounding_box();
  std::vector<cplx> pts;
  for (long tries = 0; static_cast<int>(pts.size()) < n; ++tries) {
    if (tries > 1000L * n + 10000) fail(ErrorCode::insufficient_sampling, "cannot sample interior points");
    const cplx z{b.xmin + u(rng) * (b.xmax - b.xmin), b.ymin + u(rng) * (b.ymax - b.ymin)};
    if (domain.boundary_distance(z) > margin) pts.push_back(z);
  }
  return pts;
}

/// Square grid on [-half, half]^2 around c.
std::vector<cplx> square_grid(cplx c, double half, int n) {
  std::vector<cplx> pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      pts.push_back(c + cplx{-half + 2.0 * half * i / (n - 1), -half + 2.0 * half * j / (n - 1)});
  return pts;
}

ScalarField random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, 2);
  PolyCoeffs c;
  const int terms = 2 + deg(rng);
  for (int t = 0; t < terms; ++t) c[{deg(rng), deg(rng)}] += cplx{u(rng), u(rng)};
  return field_polynomial(c);
}

std::string fmt(double x) { return format_double(x); }

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

QuadratureSpec tightened(QuadratureSpec q, double tol) {
  q.target_rel_tol = std::min(q.target_rel_tol, tol);
  return q;
}

// ---------------------------------------------------------------------------

void suite_phi_disk(SuiteContext& ctx) {
  const std::string claim = "Phi vanishes identically on disks";
  std::vector<std::string> domains = {"disk:0,0.5", "disk:1,1,2"};
  if (!ctx.config.domain.empty()) domains = {ctx.config.domain};
  std::mt19937_64 rng(ctx.config.seed);
  for (const auto& spec_text : domains) {
    ctx.guarded("max_abs_phi[" + spec_text + "]", claim, [&] {
      const PlanarDomain d = parse_domain(spec_text);
      if (d.kind() != DomainKind::disk) fail(ErrorCode::unsupported_kind, "phi_disk needs a disk domain");
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double worst = 0.0;
      std::ostringstream csv;
      csv << "z_re,z_im,phi_abs\n";
      const int n = ctx.samples(50);
      for (int i = 0; i < n; ++i) {
        // Uniform in the disk of radius 0.9 R.
        const cplx z = d.center() + std::polar(0.9 * d.radius() * std::sqrt(u(rng)), kTwoPi * u(rng));
        const double a = std::abs(op_Phi(d, z, ctx.config.quad).value);
        worst = std::max(worst, a);
        csv << fmt(z.real()) << "," << fmt(z.imag()) << "," << fmt(a) << "\n";
      }
      ctx.add(measure("max_abs_phi[" + spec_text + "]", claim, worst, Compare::at_most, 1e-10, 0.0,
                      std::to_string(n) + " points with |z - c| <= 0.9 R, " +
                          std::to_string(ctx.config.quad.boundary_nodes) + " boundary nodes"));
      ctx.artifact("phi_disk_" + std::to_string(&spec_text - &domains[0]) + ".csv", csv.str());
    });
  }
  if (ctx.config.domain.empty()) {
    ctx.guarded("abs_phi[ellipse:1,1 @ 0.5i]", claim, [&] {
      const double a = std::abs(op_Phi(parse_domain("ellipse:1,1"), {0.0, 0.5}, ctx.config.quad).value);
      ctx.add(measure("abs_phi[ellipse:1,1 @ 0.5i]", claim, a, Compare::at_most, 1e-10));
    });
    ctx.guarded("abs_phi[perturbed_disk:0,3 @ 0.2]", claim, [&] {
      const double a = std::abs(op_Phi(parse_domain("perturbed_disk:0,3"), 0.2, ctx.config.quad).value);
      ctx.add(measure("abs_phi[perturbed_disk:0,3 @ 0.2]", claim, a, Compare::at_most, 1e-10));
    });
  }
}

void suite_pompeiu_dbar(SuiteContext& ctx) {
  const std::string claim = "dbar Tf = f";
  const QuadratureSpec& q = ctx.config.quad;
  ctx.guarded("max_abs_T1_minus_conj_z", claim, [&] {
    const PlanarDomain d = PlanarDomain::disk(0.0, 1.0);
    const ScalarField one = field_constant(1.0);
    const auto pts = square_grid(0.0, 0.55, 5);
    std::vector<double> err(pts.size());
    std::vector<int> conv(pts.size());
    parallel_for(pts.size(), [&](size_t i) {
      const OperatorEvaluation e = op_T(d, one, pts[i], q);
      err[i] = std::abs(e.value - std::conj(pts[i]));
      conv[i] = e.quadrature.converged;
    });
    double min_dist = 1.0;
    for (cplx z : pts) min_dist = std::min(min_dist, d.boundary_distance(z));
    int unconverged = 0;
    for (int c : conv) unconverged += !c;
    ctx.add(measure("max_abs_T1_minus_conj_z", claim, max_of(err), Compare::at_most, 1e-4, 0.0,
                    "25 points on disk:0,1, min boundary distance " + fmt(min_dist)));
    ctx.add(measure("unconverged_T1", claim, unconverged, Compare::at_most, 0.0));
  });
  ctx.guarded("max_abs_fd_dbar_T_minus_f", claim, [&] {
    const PlanarDomain d = parse_domain(ctx.domain_or("disk:0,0.5"));
    const ScalarField f = parse_field(ctx.field_or("f_nu:2"));
    const double half = 0.4 * (d.bounding_box().xmax - d.bounding_box().xmin) / 2.0;
    const cplx c{0.5 * (d.bounding_box().xmin + d.bounding_box().xmax),
                 0.5 * (d.bounding_box().ymin + d.bounding_box().ymax)};
    const auto pts = square_grid(c, half, 3);
    const double step = 1e-3;
    const QuadratureSpec fq = tightened(q, 1e-10);
    std::vector<double> err(pts.size());
    parallel_for(pts.size(), [&](size_t i) {
      auto tf = [&](cplx w) { return op_T(d, f, w, fq).value; };
      err[i] = std::abs(wirtinger_fd_fn(tf, pts[i], step).dzbar - f(pts[i]));
    });
    std::ostringstream csv;
    csv << "z_re,z_im,fd_dbar_error\n";
    for (size_t i = 0; i < pts.size(); ++i) csv << fmt(pts[i].real()) << "," << fmt(pts[i].imag()) << "," << fmt(err[i]) << "\n";
    ctx.artifact("pompeiu_dbar.csv", csv.str());
    ctx.add(measure("max_abs_fd_dbar_T_minus_f", claim, max_of(err), Compare::at_most, 1e-3, 0.0,
                    "9 points, " + f.description + ", step " + fmt(step)));
  });
}

struct TripleResult {
  std::string label;
  double difference = 0.0;
  double combined = 0.0;
  bool converged = false;
  std::string error;
};

void suite_h_identity(SuiteContext& ctx) {
  const std::string claim = "Hf = 2Tf - f Phi";
  const std::vector<std::string> domains = {"disk:0,0.5", "ellipse:0.9,0.5", "perturbed_disk:0.1,3,0.8"};
  const std::vector<std::string> sing_fields = {"f_nu:1.5", "f_nu:2", "f_nu:3"};
  const int n = ctx.samples(50);
  std::mt19937_64 rng(ctx.config.seed);
  struct Triple {
    std::string domain;
    ScalarField field;
    cplx z;
  };
  std::vector<Triple> triples;
  for (int i = 0; i < n; ++i) {
    const std::string dspec = domains[i % domains.size()];
    const PlanarDomain d = parse_domain(dspec);
    const int kind = (i / static_cast<int>(domains.size())) % 4;
    ScalarField f = kind == 0 ? random_polynomial(rng) : parse_field(sing_fields[kind - 1]);
    const cplx z = random_interior(d, 1, rng, 0.05)[0];
    triples.push_back({dspec, f, z});
  }
  std::vector<TripleResult> res(triples.size());
  parallel_for(triples.size(), [&](size_t i) {
    TripleResult& r = res[i];
    r.label = triples[i].domain + " " + triples[i].field.description;
    try {
      const PlanarDomain d = parse_domain(triples[i].domain);
      const OperatorEvaluation hi = op_H(d, triples[i].field, triples[i].z, ctx.config.quad, HMethod::identity);
      const OperatorEvaluation hd = op_H(d, triples[i].field, triples[i].z, ctx.config.quad, HMethod::direct_pv);
      r.difference = std::abs(hi.value - hd.value);
      r.combined = hi.quadrature.error_estimate + hd.quadrature.error_estimate;
      r.converged = hi.quadrature.converged && hd.quadrature.converged;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  double worst = 0.0;
  int unconverged = 0;
  int errors = 0;
  std::string worst_label;
  std::ostringstream csv;
  csv << "domain_field,z_re,z_im,difference,combined_error\n";
  for (size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    unconverged += !r.converged;
    const double ratio = r.difference / (10.0 * r.combined);
    if (ratio > worst) {
      worst = ratio;
      worst_label = r.label;
    }
    csv << r.label << "," << fmt(triples[i].z.real()) << "," << fmt(triples[i].z.imag()) << "," << fmt(r.difference)
        << "," << fmt(r.combined) << "\n";
  }
  ctx.artifact("h_identity.csv", csv.str());
  ctx.add(measure("max_difference_over_10x_combined_error", claim, worst, Compare::at_most, 1.0, 0.0,
                  std::to_string(n) + " triples; worst " + worst_label));
  ctx.add(measure("unconverged_evaluations", claim, unconverged, Compare::at_most, 0.0));
  ctx.add(measure("failed_evaluations", claim, errors, Compare::at_most, 0.0));
}

void suite_disk_specialization(SuiteContext& ctx) {
  const std::string claim = "Hf = 2Tf on disks";
  std::vector<std::string> domains = {"disk:0,1", "disk:0.3,-0.2,0.7"};
  if (!ctx.config.domain.empty()) domains = {ctx.config.domain};
  const int n = ctx.samples(10);
  std::mt19937_64 rng(ctx.config.seed);
  for (const auto& dspec : domains) {
    ctx.guarded("max_abs_Hdirect_minus_2T[" + dspec + "]", claim, [&] {
      const PlanarDomain d = parse_domain(dspec);
      std::vector<ScalarField> fields;
      for (int i = 0; i < n; ++i) fields.push_back(ctx.config.field.empty() ? random_polynomial(rng) : parse_field(ctx.config.field));
      const auto pts = random_interior(d, n, rng, 0.05 * d.diameter());
      std::vector<double> diff(n);
      std::vector<int> unconverged(n, 0);
      parallel_for(n, [&](size_t i) {
        const auto hd = op_H(d, fields[i], pts[i], ctx.config.quad, HMethod::direct_pv);
        const auto tt = op_2T(d, fields[i], pts[i], ctx.config.quad);
        diff[i] = std::abs(hd.value - tt.value);
        unconverged[i] = !hd.quadrature.converged || !tt.quadrature.converged;
      });
      ctx.add(measure("max_abs_Hdirect_minus_2T[" + dspec + "]", claim, max_of(diff), Compare::at_most, 1e-5, 0.0,
                      std::to_string(n) + " random polynomial fields"));
      ctx.add(measure("unconverged[" + dspec + "]", claim, std::accumulate(unconverged.begin(), unconverged.end(), 0),
                      Compare::at_most, 0.0));
    });
  }
}

void suite_nw_bound_disk(SuiteContext& ctx) {
  const std::string claim = "|NW residual| <= 8 pi on disks";
  ctx.guarded("max_abs_nw_residual", claim, [&] {
    const PlanarDomain d = parse_domain(ctx.domain_or("disk:0,1"));
    if (d.kind() != DomainKind::disk) fail(ErrorCode::unsupported_kind, "nw_bound_disk needs a disk domain");
    const int n = ctx.samples(20);
    std::mt19937_64 rng(ctx.config.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> zs;
    for (int i = 0; i < n; ++i) zs.push_back(d.center() + std::polar(0.99 * d.radius() * std::sqrt(u(rng)), kTwoPi * u(rng)));
    std::vector<double> rs;
    for (int j = 0; j < n; ++j) rs.push_back(2.0 * d.radius() * (1e-3 + (1.0 - 1e-3) * u(rng)));
    std::vector<double> mod(static_cast<size_t>(n) * n);
    std::vector<int> conv(mod.size());
    parallel_for(mod.size(), [&](size_t k) {
      const auto e = nw_residual(d, zs[k / n], rs[k % n], ctx.config.quad);
      mod[k] = std::abs(e.value);
      conv[k] = e.quadrature.converged;
    });
    std::ostringstream csv;
    csv << "z_re,z_im,r,abs_nw\n";
    int above_one = 0;
    int unconverged = 0;
    for (size_t k = 0; k < mod.size(); ++k) {
      above_one += mod[k] > 1.0;
      unconverged += !conv[k];
      csv << fmt(zs[k / n].real()) << "," << fmt(zs[k / n].imag()) << "," << fmt(rs[k % n]) << "," << fmt(mod[k]) << "\n";
    }
    ctx.artifact("nw_bound_disk.csv", csv.str());
    ctx.add(measure("max_abs_nw_residual", claim, max_of(mod), Compare::at_most, 8.0 * kPi * 1.001, 0.0,
                    std::to_string(n) + "x" + std::to_string(n) + " (z, r) sweep"));
    ctx.add(measure("samples_above_one", claim + " (bound is active)", above_one, Compare::at_least, 1.0));
    ctx.add(measure("unconverged_evaluations", claim, unconverged, Compare::at_most, 0.0));
  });
}

void suite_nw_bound_general(SuiteContext& ctx) {
  const std::string claim = "|NW residual| <= 8 pi + sup |boundary term| on smooth domains";
  ctx.guarded("max_abs_nw_residual", claim, [&] {
    const PlanarDomain d = parse_domain(ctx.domain_or("ellipse:2,1"));
    const int n = ctx.samples(20);
    std::mt19937_64 rng(ctx.config.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> zs = random_interior(d, n, rng, 0.01 * d.diameter());
    zs[0] = random_interior(d, 1, rng, 0.01 * d.diameter())[0];
    std::vector<double> rs = {0.01, 0.1, 1.0};
    while (static_cast<int>(rs.size()) < n) rs.push_back(0.01 * std::pow(100.0 * d.diameter(), u(rng)));
    double boundary_sup = 0.0;
    for (cplx z : zs) boundary_sup = std::max(boundary_sup, std::abs(nw_boundary_term(d, z, ctx.config.quad)));
    const size_t m = rs.size();
    std::vector<double> mod(zs.size() * m);
    std::vector<int> conv(mod.size());
    parallel_for(mod.size(), [&](size_t k) {
      const auto e = nw_residual(d, zs[k / m], rs[k % m], ctx.config.quad);
      mod[k] = std::abs(e.value);
      conv[k] = e.quadrature.converged;
    });
    int unconverged = 0;
    for (int c : conv) unconverged += !c;
    const double bound = 8.0 * kPi + boundary_sup;
    ctx.add(measure("max_abs_nw_residual", claim, max_of(mod), Compare::at_most, bound, 1e-2,
                    "bound = 8 pi + " + fmt(boundary_sup)));
    ctx.add(measure("unconverged_evaluations", claim, unconverged, Compare::at_most, 0.0));
  });
}

void suite_lemma24(SuiteContext& ctx) {
  ctx.guarded("max_rel_diff_closed_form_vs_adaptive", "int_0^h ds/(s |ln s|^nu) = |ln h|^(1-nu)/(nu-1)", [&] {
    double worst = 0.0;
    for (double nu : {1.5, 2.0, 3.0}) {
      for (double h : {0.25, 0.1, 0.01}) {
        const double closed = radial_log_integral(RadialLogKind::inverse_first, nu, h, h);
        const double adaptive = radial_log_integral_adaptive(nu, h);
        worst = std::max(worst, std::abs(closed - adaptive) / std::abs(closed));
      }
    }
    ctx.add(measure("max_rel_diff_closed_form_vs_adaptive", "int_0^h ds/(s |ln s|^nu) = |ln h|^(1-nu)/(nu-1)", worst,
                    Compare::at_most, 1e-8));
  });
  const std::string claim = "int_h^h0 s^-2 |ln s|^-nu ds <= h^-1 |ln h|^-nu";
  ctx.guarded("max_ratio_integral_over_bound", claim, [&] {
    double worst = 0.0;
    int violations = 0;
    int total = 0;
    std::string worst_at;
    std::ostringstream csv;
    csv << "nu,h,h0,integral,bound,ratio\n";
    for (double nu : {0.5, 1.0, 2.0, 3.0}) {
      for (double h : {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.4}) {
        for (double h0 : {0.45, 0.5}) {
          const double integral = radial_log_integral(RadialLogKind::inverse_square, nu, h, h0);
          const double bound = std::pow(std::abs(std::log(h)), -nu) / h;
          const double ratio = integral / bound;
          ++total;
          violations += ratio > 1.0;
          if (ratio > worst) {
            worst = ratio;
            worst_at = "nu=" + fmt(nu) + " h=" + fmt(h) + " h0=" + fmt(h0);
          }
          csv << fmt(nu) << "," << fmt(h) << "," << fmt(h0) << "," << fmt(integral) << "," << fmt(bound) << ","
              << fmt(ratio) << "\n";
        }
      }
    }
    ctx.artifact("lemma24_part1.csv", csv.str());
    ctx.add(measure("max_ratio_integral_over_bound", claim, worst, Compare::at_most, 1.0, 0.0, "worst at " + worst_at));
    ctx.add(measure("grid_violations", claim, violations, Compare::at_most, 0.0, 0.0,
                    std::to_string(violations) + " of " + std::to_string(total) + " grid points"));
  });
}

void suite_twoT_divergence(SuiteContext& ctx) {
  const std::string claim = "2Tf(0) is undefined for the nu = 1 field";
  const PlanarDomain d = parse_domain(ctx.domain_or("disk:0,0.5"));
  const ScalarField f = parse_field(ctx.field_or("f_nu:1"));
  ctx.guarded("divergence_detected", claim, [&] {
    int detected = 0;
    std::string note = "no error raised";
    try {
      op_2T(d, f, 0.0, ctx.config.quad);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::divergent_evaluation) {
        detected = 1;
        note = e.what();
      } else {
        throw;
      }
    }
    ctx.add(measure("divergence_detected", claim, detected, Compare::near, 1.0, 0.0, note));
  });
  ctx.guarded("partials_strictly_increasing", claim, [&] {
    const TwoTPartials p = twoT_partials(d, f, 0.0, ctx.config.quad);
    std::vector<double> mods;
    std::vector<double> x;
    std::ostringstream csv;
    csv << "cutoff,lnln_inv_cutoff,partial_re,partial_im,abs_partial\n";
    for (size_t k = 0; k < p.values.size(); ++k) {
      mods.push_back(std::abs(p.values[k]));
      x.push_back(std::log(std::log(1.0 / p.cutoffs[k])));
      csv << fmt(p.cutoffs[k]) << "," << fmt(x.back()) << "," << fmt(p.values[k].real()) << ","
          << fmt(p.values[k].imag()) << "," << fmt(mods.back()) << "\n";
    }
    ctx.artifact("twoT_divergence_partials.csv", csv.str());
    ctx.add(measure("partials_strictly_increasing", claim, strictly_increasing(mods) ? 1.0 : 0.0, Compare::near, 1.0));
    // Least-squares slope of |partial| against ln ln(1/cutoff).
    double mx = 0.0, my = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
      mx += x[k];
      my += mods[k];
    }
    mx /= x.size();
    my /= x.size();
    double sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
      sxx += (x[k] - mx) * (x[k] - mx);
      sxy += (x[k] - mx) * (mods[k] - my);
    }
    const double slope = sxy / sxx;
    ctx.add(measure("slope_vs_lnln_inv_cutoff", claim, slope, Compare::at_least, 1e-9));
    // The radial law int ds/(s 2 ln(1/s)) = (1/2) ln ln(1/s), times the angular factor 2 pi and -1/pi.
    const double predicted = 2.0 * 0.5;
    ctx.add(measure("growth_rate_over_half_lnln_law", claim, slope / predicted, Compare::near, 1.0, 0.2,
                    "predicted |partial| slope " + fmt(predicted)));
  });
}

ScalarField twoT_field(const PlanarDomain& domain, const ScalarField& f, const QuadratureSpec& q) {
  ScalarField g;
  g.evaluate = [domain, f, q](cplx z) {
    const OperatorEvaluation e = op_2T(domain, f, z, q);
    if (!e.quadrature.converged) fail(ErrorCode::not_converged, "2T did not converge inside a modulus profile");
    return e.value;
  };
  g.declared_singularity = f.declared_singularity;
  if (f.declared_log_order) g.declared_log_order = *f.declared_log_order - 1.0;
  g.intended_domain = f.intended_domain;
  g.description = "2T(" + f.description + ")";
  return g;
}

void suite_twoT_boundedness(SuiteContext& ctx) {
  const std::string claim = "2T is bounded from Log^nu into Log^(nu-1) (empirical witness, not a proof)";
  const std::string dspec = ctx.domain_or("disk:0,0.5");
  const std::vector<int> kmax = {10, 12, 14};
  std::ostringstream csv;
  csv << "nu,field,k_max,norm_f,norm_2Tf,ratio\n";
  auto record = [&](const std::vector<NormRatioRow>& rows) {
    for (const auto& r : rows)
      csv << fmt(r.nu) << "," << r.field << "," << r.k_max << "," << fmt(r.norm_f) << "," << fmt(r.norm_2Tf) << ","
          << fmt(r.ratio) << "\n";
  };
  for (double nu : {1.2, 1.5, 2.0, 3.0}) {
    const std::string name = "ratio_variation[f_nu:" + fmt(nu) + "]";
    ctx.guarded(name, claim, [&] {
      const auto rows = norm_ratio_study({nu}, FieldFamily::f_nu, dspec, kmax, ctx.config.quad, ctx.config.seed);
      record(rows);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& r : rows) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
      }
      ctx.add(measure(name, claim, hi / lo, Compare::at_most, 50.0, 0.0, "ratios " + fmt(lo) + " .. " + fmt(hi)));
    });
  }
  ctx.guarded("ratio_variation[polynomial]", claim, [&] {
    const auto rows = norm_ratio_study({2.0}, FieldFamily::polynomial, dspec, kmax, ctx.config.quad, ctx.config.seed);
    record(rows);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : rows) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    ctx.add(measure("ratio_variation[polynomial]", claim, hi / lo, Compare::at_most, 50.0));
  });
  ctx.guarded("ratio[constant]", claim, [&] {
    const auto rows = norm_ratio_study({2.0}, FieldFamily::constant, dspec, {10}, ctx.config.quad, ctx.config.seed);
    record(rows);
    ctx.add(measure("ratio[constant]", claim, rows.at(0).ratio, Compare::near, 0.0, 1e-12));
  });
  ctx.artifact("twoT_boundedness.csv", csv.str());
}

void suite_solve_and_certify(SuiteContext& ctx) {
  const std::string claim = "dbar u = f has a solution in C^{1,Log^(nu-1)} with controlled norm";
  ctx.guarded("max_fd_dbar_error", claim, [&] {
    const PlanarDomain d = parse_domain(ctx.domain_or("disk:0,0.5"));
    const ScalarField f = parse_field(ctx.field_or("f_nu:2"));
    const double nu = f.declared_log_order.value_or(2.0);
    const BoundingBox b = d.bounding_box();
    const double half = 0.1 * (b.xmax - b.xmin);
    const auto grid = square_grid({0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)}, half, 3);
    const SolutionField sol = solve_dbar(d, f, grid, nu, ctx.config.quad);
    double quad_err = 0.0;
    for (double e : sol.value_errors) quad_err = std::max(quad_err, e);
    const double tol = std::max(1e-3, 10.0 * quad_err);
    ctx.add(measure("max_fd_dbar_error", claim, max_of(sol.dbar_check), Compare::at_most, tol, 0.0,
                    std::to_string(grid.size()) + " grid points, " + f.description));
    const ModulusProfile pf = modulus_profile(d, f, 4, 14, 1000, ctx.config.seed);
    const double norm_f = log_norm(pf, nu);
    const double ratio = sol.norm_report.total / norm_f;
    ctx.add(measure("solution_norm_over_datum_norm", claim, ratio, Compare::at_most, 50.0, 0.0,
                    "grid-pair C^{1,Log^" + fmt(nu - 1.0) + "} estimate " + fmt(sol.norm_report.total) +
                        ", datum Log^" + fmt(nu) + " norm " + fmt(norm_f)));
    std::ostringstream csv;
    csv << "z_re,z_im,u_re,u_im,du_dz_re,du_dz_im,dbar_check_abs\n";
    for (size_t i = 0; i < grid.size(); ++i)
      csv << fmt(grid[i].real()) << "," << fmt(grid[i].imag()) << "," << fmt(sol.values[i].real()) << ","
          << fmt(sol.values[i].imag()) << "," << fmt(sol.dz_values[i].real()) << "," << fmt(sol.dz_values[i].imag())
          << "," << fmt(sol.dbar_check[i]) << "\n";
    ctx.artifact("solve_and_certify.csv", csv.str());
  });
  ctx.guarded("max_abs_u_minus_conj_z", claim, [&] {
    const PlanarDomain d = PlanarDomain::disk(0.0, 1.0);
    const std::vector<cplx> grid = {0.0, {0.3, 0.1}, {-0.4, 0.2}, {0.1, -0.5}, {-0.2, -0.3}};
    SolveOptions opt;
    opt.fd_stride = 0;
    const SolutionField sol = solve_dbar(d, field_constant(1.0), grid, 2.0, ctx.config.quad, opt);
    double eu = 0.0, edz = 0.0, edzb = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      eu = std::max(eu, std::abs(sol.values[i] - std::conj(grid[i])));
      edz = std::max(edz, std::abs(sol.dz_values[i]));
      edzb = std::max(edzb, std::abs(sol.dzbar_values[i] - 1.0));
    }
    ctx.add(measure("max_abs_u_minus_conj_z", claim, eu, Compare::at_most, 1e-6));
    ctx.add(measure("max_abs_du_dz", claim, edz, Compare::at_most, 1e-6));
    ctx.add(measure("max_abs_du_dzbar_minus_1", claim, edzb, Compare::at_most, 1e-12));
  });
  ctx.guarded("nu_le_1_rejected", "no C^1 solution is promised for nu <= 1", [&] {
    int rejected = 0;
    try {
      solve_dbar(PlanarDomain::disk(0.0, 0.5), field_f_nu(1.0), {cplx{0.1, 0.0}}, 1.0, ctx.config.quad);
    } catch (const Error& e) {
      rejected = e.code() == ErrorCode::invalid_argument;
    }
    ctx.add(measure("nu_le_1_rejected", "no C^1 solution is promised for nu <= 1", rejected, Compare::near, 1.0));
  });
}

void suite_sharpness(SuiteContext& ctx) {
  const std::string blowup = "the gradient of u_nu blows up at 0 for nu <= 1";
  for (double nu : {0.5, 1.0}) {
    const std::string name = "du_strictly_increasing[nu=" + fmt(nu) + "]";
    ctx.guarded(name, blowup, [&] {
      const ScalarField u = field_u_nu(nu);
      std::vector<double> mods;
      for (int k = 4; k <= 20; ++k) {
        const double x = std::ldexp(1.0, -k);
        mods.push_back(std::abs(wirtinger_fd(u, x, 1e-3 * x).dz));
      }
      ctx.add(measure(name, blowup, strictly_increasing(mods) ? 1.0 : 0.0, Compare::near, 1.0, 0.0,
                      "|du(2^-4)| = " + fmt(mods.front()) + ", |du(2^-20)| = " + fmt(mods.back())));
    });
  }
  const std::string bounded = "the gradient of u_2 stays bounded near 0";
  ctx.guarded("du_max_over_min[nu=2]", bounded, [&] {
    const ScalarField u = field_u_nu(2.0);
    std::vector<double> mods;
    for (int k = 4; k <= 20; ++k) {
      const double x = std::ldexp(1.0, -k);
      mods.push_back(std::abs(wirtinger_fd(u, x, 1e-3 * x).dz));
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double m : mods) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    ctx.add(measure("du_max_over_min[nu=2]", bounded, hi / lo, Compare::at_most, 2.0, 0.0,
                    "k = 4..20; |du| decreases to 0 like 1/L"));
    ctx.add(measure("du_max_over_k4_value[nu=2]", bounded, hi / mods.front(), Compare::at_most, 2.0));
  });

  const PlanarDomain d = parse_domain(ctx.domain_or("disk:0,0.5"));
  const int pairs = ctx.samples(10000);
  struct FitCase {
    std::string name;
    ScalarField field;
    double target;
    double tol;
    std::string claim;
  };
  const std::vector<FitCase> cases = {
      {"log_order[f_nu:2]", field_f_nu(2.0), 2.0, 0.15, "f_nu has log order nu"},
      {"log_order[f_nu:3]", field_f_nu(3.0), 3.0, 0.15, "f_nu has log order nu"},
      {"log_order[du_nu:2]", field_du_nu(2.0), 1.0, 0.2, "du_nu loses exactly one log order"},
      {"log_order[du_nu:3]", field_du_nu(3.0), 2.0, 0.2, "du_nu loses exactly one log order"},
  };
  for (const auto& c : cases) {
    ctx.guarded(c.name, c.claim, [&] {
      const ModulusProfile p = modulus_profile(d, c.field, 4, 14, pairs, ctx.config.seed);
      const LogOrderFit fit = fit_log_order(p);
      ctx.artifact("profile_" + c.name.substr(10, c.name.size() - 11) + ".csv", profile_csv(p));
      ctx.add(measure(c.name, c.claim, fit.nu_hat, Compare::near, c.target, c.tol,
                      "shift " + fmt(fit.shift) + ", max residual " + fmt(fit.residual)));
    });
  }

  const std::string c1 = "u_2 lies in C^{1,Log^1} and in no C^{1,Log^mu} with mu > 1";
  ctx.guarded("c1_norm_sampling_stability[u_nu:2,order=1]", c1, [&] {
    const ScalarField u = field_u_nu(2.0);
    ProfileOptions o;
    o.k_min = 4;
    o.k_max = 14;
    o.seed = ctx.config.seed;
    o.base_points = 1000;
    const double n1 = c1_log_norm(d, u, 1.0, o);
    o.base_points = 4000;
    const double n4 = c1_log_norm(d, u, 1.0, o);
    ctx.add(measure("c1_norm_sampling_stability[u_nu:2,order=1]", c1, std::abs(n4 / n1 - 1.0), Compare::at_most, 0.2,
                    0.0, "norms " + fmt(n1) + " and " + fmt(n4)));
  });
  ctx.guarded("c1_norm_growth[u_nu:2,order=1.5]", c1, [&] {
    const ScalarField u = field_u_nu(2.0);
    std::vector<double> norms;
    for (int k : {10, 12, 14}) {
      ProfileOptions o;
      o.k_min = 4;
      o.k_max = k;
      o.seed = ctx.config.seed;
      o.base_points = 1000;
      norms.push_back(c1_log_norm(d, u, 1.5, o));
    }
    ctx.add(measure("c1_norm_growth[u_nu:2,order=1.5]", c1, strictly_increasing(norms) ? 1.0 : 0.0, Compare::near, 1.0,
                    0.0, "k_max 10/12/14: " + fmt(norms[0]) + ", " + fmt(norms[1]) + ", " + fmt(norms[2])));
  });
}

void suite_loss_optimality(SuiteContext& ctx) {
  const std::string claim = "2Tf_nu lies in Log^(nu-1) and in no Log^mu with mu > nu - 1";
  const PlanarDomain d = parse_domain(ctx.domain_or("disk:0,0.5"));
  for (double nu : {2.0, 3.0}) {
    const std::string tag = "[f_nu:" + fmt(nu) + "]";
    ctx.guarded("log_order_2T" + tag, claim, [&] {
      const ScalarField g = twoT_field(d, field_f_nu(nu), ctx.config.quad);
      const ModulusProfile p = modulus_profile(d, g, sparse_profile_options(4, 14, ctx.config.seed));
      ctx.artifact("profile_2T_f_nu_" + fmt(nu) + ".csv", profile_csv(p));
      const LogOrderFit fit = fit_log_order(p);
      ctx.add(measure("log_order_2T" + tag, claim, fit.nu_hat, Compare::near, nu - 1.0, 0.2,
                      "shift " + fmt(fit.shift) + ", max residual " + fmt(fit.residual)));
      // Segment modulus weighted by |ln h|^mu at k = 10, 12, 14.
      auto weighted = [&](double mu) {
        std::vector<double> w;
        for (int k : {10, 12, 14}) {
          const size_t i = static_cast<size_t>(k - p.ks.front());
          w.push_back(p.omega_segment.at(i) * std::pow(std::abs(std::log(p.scales.at(i))), mu));
        }
        return w;
      };
      const auto at = weighted(nu - 1.0);
      const auto above = weighted(nu - 0.5);
      ctx.add(measure("weighted_modulus_variation_at_mu=nu-1" + tag, claim,
                      *std::max_element(at.begin(), at.end()) / *std::min_element(at.begin(), at.end()),
                      Compare::at_most, 1.5, 0.0,
                      "k = 10/12/14: " + fmt(at[0]) + ", " + fmt(at[1]) + ", " + fmt(at[2])));
      ctx.add(measure("weighted_modulus_growth_at_mu=nu-0.5" + tag, claim, strictly_increasing(above) ? 1.0 : 0.0,
                      Compare::near, 1.0, 0.0,
                      "k = 10/12/14: " + fmt(above[0]) + ", " + fmt(above[1]) + ", " + fmt(above[2])));
    });
  }
}

}  // namespace

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> s = {
      Suite::phi_disk,          Suite::pompeiu_dbar,         Suite::h_identity,       Suite::disk_specialization,
      Suite::nw_bound_disk,     Suite::nw_bound_general,     Suite::lemma24_inequalities, Suite::twoT_divergence_nu1,
      Suite::twoT_boundedness,  Suite::solve_and_certify,    Suite::sharpness_examples, Suite::loss_optimality,
  };
  return s;
}

const char* suite_name(Suite s) {
  switch (s) {
    case Suite::phi_disk: return "phi_disk";
    case Suite::pompeiu_dbar: return "pompeiu_dbar";
    case Suite::h_identity: return "h_identity";
    case Suite::disk_specialization: return "disk_specialization";
    case Suite::nw_bound_disk: return "nw_bound_disk";
    case Suite::nw_bound_general: return "nw_bound_general";
    case Suite::lemma24_inequalities: return "lemma24_inequalities";
    case Suite::twoT_divergence_nu1: return "twoT_divergence_nu1";
    case Suite::twoT_boundedness: return "twoT_boundedness";
    case Suite::solve_and_certify: return "solve_and_certify";
    case Suite::sharpness_examples: return "sharpness_examples";
    case Suite::loss_optimality: return "loss_optimality";
  }
  return "?";
}

Suite parse_suite(const std::string& name) {
  for (Suite s : all_suites())
    if (name == suite_name(s)) return s;
  fail(ErrorCode::invalid_argument, "unknown suite '" + name + "'");
}

Measurement measure(std::string name, std::string claim, double value, Compare compare, double target,
                    double tolerance, std::string note) {
  Measurement m{std::move(name), std::move(claim), value, target, tolerance, compare, false, std::move(note)};
  switch (compare) {
    case Compare::at_most: m.passed = value <= target + tolerance; break;
    case Compare::at_least: m.passed = value >= target - tolerance; break;
    case Compare::near: m.passed = std::abs(value - target) <= tolerance; break;
  }
  return m;
}

json VerificationReport::to_json() const {
  json ms = json::array();
  for (const auto& m : measurements) {
    const char* cmp = m.compare == Compare::at_most ? "at_most" : (m.compare == Compare::at_least ? "at_least" : "near");
    json jm{{"name", m.name}, {"claim", m.claim}, {"value", m.value},      {"compare", cmp},
            {"target", m.target}, {"tolerance", m.tolerance}, {"passed", m.passed}};
    if (!m.note.empty()) jm["note"] = m.note;
    ms.push_back(jm);
  }
  return json{{"suite", suite_name(suite)}, {"passed", passed}, {"measurements", ms}, {"artifacts", artifacts}};
}

VerificationReport run_suite(const SuiteConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport report;
  report.suite = config.suite;
  SuiteContext ctx{config, report};
  ctx.guarded(suite_prefix(config.suite), "suite configuration", [&] {
    config.quad.validate();
    switch (config.suite) {
      case Suite::phi_disk: suite_phi_disk(ctx); break;
      case Suite::pompeiu_dbar: suite_pompeiu_dbar(ctx); break;
      case Suite::h_identity: suite_h_identity(ctx); break;
      case Suite::disk_specialization: suite_disk_specialization(ctx); break;
      case Suite::nw_bound_disk: suite_nw_bound_disk(ctx); break;
      case Suite::nw_bound_general: suite_nw_bound_general(ctx); break;
      case Suite::lemma24_inequalities: suite_lemma24(ctx); break;
      case Suite::twoT_divergence_nu1: suite_twoT_divergence(ctx); break;
      case Suite::twoT_boundedness: suite_twoT_boundedness(ctx); break;
      case Suite::solve_and_certify: suite_solve_and_certify(ctx); break;
      case Suite::sharpness_examples: suite_sharpness(ctx); break;
      case Suite::loss_optimality: suite_loss_optimality(ctx); break;
    }
  });
  report.passed = !report.measurements.empty();
  for (const auto& m : report.measurements) report.passed = report.passed && m.passed;
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

cplx evaluate_operator(OperatorKind op, const PlanarDomain& domain, const ScalarField& f, cplx z, double param,
                       const QuadratureSpec& spec, IntegralResult* result) {
  OperatorEvaluation e;
  switch (op) {
    case OperatorKind::T: e = op_T(domain, f, z, spec); break;
    case OperatorKind::H_identity: e = op_H(domain, f, z, spec, HMethod::identity); break;
    case OperatorKind::H_direct: e = op_H(domain, f, z, spec, HMethod::direct_pv); break;
    case OperatorKind::TwoT: e = op_2T(domain, f, z, spec); break;
    case OperatorKind::Phi: e = op_Phi(domain, z, spec); break;
    case OperatorKind::S: e = op_S(domain, f.evaluate, z, spec); break;
    case OperatorKind::NWResidual: e = nw_residual(domain, z, param, spec); break;
  }
  if (result) *result = e.quadrature;
  return e.value;
}

std::vector<QuadratureSpec> resolution_ladder(const QuadratureSpec& base, int levels) {
  require(levels >= 3 && levels <= 12, "convergence sweeps need 3 to 12 levels");
  std::vector<QuadratureSpec> out;
  for (int i = 0; i < levels; ++i) {
    const int d = 1 << (levels - 1 - i);
    QuadratureSpec q = base;
    q.angular_nodes = std::max(4, base.angular_nodes / d);
    q.radial_cells = std::max(4, base.radial_cells / d);
    q.boundary_nodes = std::max(32, base.boundary_nodes / d);
    q.max_refinements = 1;
    q.target_rel_tol = 1.0;
    out.push_back(q);
  }
  return out;
}

std::vector<ConvergenceRow> convergence_table(const ConvergenceTarget& target,
                                              const std::vector<QuadratureSpec>& resolutions) {
  require(resolutions.size() >= 3, "convergence_table needs at least three resolutions");
  const PlanarDomain d = parse_domain(target.domain);
  const ScalarField f = target.field.empty() ? field_constant(1.0) : parse_field(target.field);
  const bool boundary = target.op == OperatorKind::Phi || target.op == OperatorKind::S;
  std::vector<ConvergenceRow> rows(resolutions.size());
  for (size_t i = 0; i < resolutions.size(); ++i) {
    const QuadratureSpec& q = resolutions[i];
    rows[i].cost = boundary ? q.boundary_nodes
                            : static_cast<double>(q.angular_nodes) * q.radial_cells * q.gauss_order *
                                  std::ldexp(1.0, 2 * q.max_refinements);
    if (i > 0) require(rows[i].cost >= rows[i - 1].cost, "resolutions must be ordered by increasing cost");
    rows[i].value = evaluate_operator(target.op, d, f, target.point, target.param, q);
  }
  const cplx ref = target.exact ? *target.exact : rows.back().value;
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].error = std::abs(rows[i].value - ref);
    rows[i].order = i == 0 || rows[i].error == 0.0 ? kNaN : std::log2(rows[i - 1].error / rows[i].error);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "cost,value_re,value_im,error,observed_order\n";
  for (const auto& r : rows)
    os << fmt(r.cost) << "," << fmt(r.value.real()) << "," << fmt(r.value.imag()) << "," << fmt(r.error) << ","
       << fmt(r.order) << "\n";
  return os.str();
}

std::vector<NormRatioRow> norm_ratio_study(const std::vector<double>& nu_values, FieldFamily family,
                                           const std::string& domain, const std::vector<int>& k_max_values,
                                           const QuadratureSpec& spec, uint64_t seed) {
  require(!k_max_values.empty(), "norm_ratio_study needs k_max values");
  const PlanarDomain d = parse_domain(domain);
  const int k_top = *std::max_element(k_max_values.begin(), k_max_values.end());
  std::vector<NormRatioRow> rows;
  for (double nu : nu_values) {
    if (!(nu > 1.0)) fail(ErrorCode::invalid_argument, "norm_ratio_study requires nu > 1");
    ScalarField f;
    switch (family) {
      case FieldFamily::f_nu: f = field_f_nu(nu); break;
      case FieldFamily::polynomial: f = field_polynomial({{{0, 2}, 1.0}, {{1, 1}, 0.5}, {{2, 0}, cplx{0.0, 0.25}}}); break;
      case FieldFamily::constant: f = field_constant(1.0); break;
    }
    const ModulusProfile pf = modulus_profile(d, f, 4, k_top, 2000, seed);
    const ModulusProfile pg = modulus_profile(d, twoT_field(d, f, spec), sparse_profile_options(4, k_top, seed));
    for (int k : k_max_values) {
      NormRatioRow r;
      r.nu = nu;
      r.field = f.description;
      r.k_max = k;
      r.norm_f = log_norm(pf.truncated(k), nu);
      r.norm_2Tf = log_norm(pg.truncated(k), nu - 1.0);
      r.ratio = r.norm_2Tf / r.norm_f;
      rows.push_back(r);
    }
  }
  return rows;
}

std::string norm_ratio_csv(const std::vector<NormRatioRow>& rows) {
  std::ostringstream os;
  os << "nu,field,k_max,norm_f,norm_2Tf,ratio\n";
  for (const auto& r : rows)
    os << fmt(r.nu) << ",\"" << r.field << "\"," << r.k_max << "," << fmt(r.norm_f) << "," << fmt(r.norm_2Tf) << ","
       << fmt(r.ratio) << "\n";
  return os.str();
}

}  // namespace dbar
