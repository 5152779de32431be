#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dbar/dbar.h"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse and configuration problems are usage errors; everything else is a run failure.
[[noreturn]] void raise(dbar_status st, const std::string& context) {
  const std::string msg = context + ": " + dbar_status_name(st) + ": " + dbar_last_error();
  if (st == DBAR_INVALID_ARGUMENT || st == DBAR_UNSUPPORTED_KIND) throw UsageError(msg);
  throw RunFailure(msg);
}

void check(dbar_status st, const std::string& context) {
  if (st != DBAR_OK) raise(st, context);
}

struct Free {
  void operator()(dbar_domain* p) const { dbar_domain_free(p); }
  void operator()(dbar_field* p) const { dbar_field_free(p); }
  void operator()(dbar_quad* p) const { dbar_quad_free(p); }
  void operator()(char* p) const { dbar_free(p); }
  void operator()(double* p) const { dbar_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Free>;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Settings {
  std::optional<std::string> domain, field, op, grid, quad, out, format, suite, exact, artifacts;
  std::vector<std::string> points;
  std::optional<double> margin, nu, param;
  std::optional<uint64_t> seed;
  std::optional<int> samples, levels;
  json quad_json;  // from the config file
};

template <class T>
void fill(std::optional<T>& dst, const json& cfg, const char* key) {
  if (dst || !cfg.contains(key)) return;
  try {
    dst = cfg[key].get<T>();
  } catch (const std::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

void merge_config(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  static const std::vector<std::string> known = {"command", "domain", "field", "op", "points", "grid", "margin",
                                                 "quad", "out", "format", "seed", "nu", "suite", "samples",
                                                 "levels", "exact", "param", "artifacts"};
  for (const auto& [key, val] : cfg.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key '" + key + "'");
  fill(s.domain, cfg, "domain");
  fill(s.field, cfg, "field");
  fill(s.op, cfg, "op");
  fill(s.out, cfg, "out");
  fill(s.format, cfg, "format");
  fill(s.suite, cfg, "suite");
  fill(s.exact, cfg, "exact");
  fill(s.artifacts, cfg, "artifacts");
  fill(s.margin, cfg, "margin");
  fill(s.nu, cfg, "nu");
  fill(s.param, cfg, "param");
  fill(s.seed, cfg, "seed");
  fill(s.samples, cfg, "samples");
  fill(s.levels, cfg, "levels");
  if (!s.grid && cfg.contains("grid")) {
    const json& g = cfg["grid"];
    if (g.is_string()) {
      s.grid = g.get<std::string>();
    } else if (g.is_object() && g.contains("nx") && g.contains("ny")) {
      s.grid = std::to_string(g["nx"].get<int>()) + "x" + std::to_string(g["ny"].get<int>());
      if (!s.margin && g.contains("margin")) s.margin = g["margin"].get<double>();
    } else {
      throw UsageError("config 'grid' must be \"NxM\" or {nx, ny, margin}");
    }
  }
  if (s.points.empty() && cfg.contains("points")) {
    for (const auto& p : cfg["points"]) {
      if (p.is_string()) s.points.push_back(p.get<std::string>());
      else if (p.is_array() && p.size() == 2) s.points.push_back(fmt(p[0].get<double>()) + "," + fmt(p[1].get<double>()));
      else throw UsageError("config 'points' entries must be \"re,im\" or [re, im]");
    }
  }
  if (cfg.contains("quad")) {
    if (cfg["quad"].is_object()) s.quad_json = cfg["quad"];
    else if (cfg["quad"].is_string() && !s.quad) s.quad = cfg["quad"].get<std::string>();
    else if (!cfg["quad"].is_string()) throw UsageError("config 'quad' must be an object or \"key=value,...\"");
  }
}

std::string required(const std::optional<std::string>& v, const char* flag) {
  if (!v || v->empty()) throw UsageError(std::string("missing required option ") + flag);
  return *v;
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(is >> re)) throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  std::string rest;
  if (is >> rest) throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  return {re, im};
}

std::pair<int, int> parse_grid(const std::string& text) {
  int nx = 0, ny = 0;
  char x = 0;
  std::istringstream is(text);
  if (!(is >> nx >> x >> ny) || (x != 'x' && x != 'X') || nx < 1 || ny < 1)
    throw UsageError("grid must look like NxM, got '" + text + "'");
  return {nx, ny};
}

Handle<dbar_domain> make_domain(const std::string& spec) {
  dbar_domain* d = nullptr;
  check(dbar_domain_parse(spec.c_str(), &d), "--domain");
  return Handle<dbar_domain>(d);
}

Handle<dbar_field> make_field(const std::string& spec) {
  dbar_field* f = nullptr;
  check(dbar_field_parse(spec.c_str(), &f), "--field");
  return Handle<dbar_field>(f);
}

Handle<dbar_quad> make_quad(const Settings& s) {
  dbar_quad* q = nullptr;
  if (!s.quad_json.is_null()) check(dbar_quad_from_json(s.quad_json.dump().c_str(), &q), "config quad");
  else check(dbar_quad_parse("", &q), "quad");
  Handle<dbar_quad> h(q);
  if (s.quad) check(dbar_quad_apply(h.get(), s.quad->c_str()), "--quad");
  return h;
}

std::vector<std::pair<double, double>> points_of(const Settings& s, const dbar_domain* d) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : s.points) pts.push_back(parse_pair(p, "point"));
  if (s.grid) {
    const auto [nx, ny] = parse_grid(*s.grid);
    const double margin = s.margin.value_or(0.05);
    if (!(margin > 0.0)) throw UsageError("--margin must be positive");
    double* raw = nullptr;
    size_t n = 0;
    check(dbar_interior_grid(d, nx, ny, margin, &raw, &n), "--grid");
    Handle<double> buf(raw);
    for (size_t i = 0; i < n; ++i) pts.emplace_back(raw[2 * i], raw[2 * i + 1]);
  }
  if (pts.empty()) throw UsageError("no evaluation points: give --point or --grid");
  return pts;
}

void emit(const std::optional<std::string>& out, const std::string& content) {
  if (!out) {
    std::cout << content;
    return;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!f) throw RunFailure("cannot write " + *out);
  f << content;
  if (!f) throw RunFailure("write failed for " + *out);
}

std::string format_of(const Settings& s) {
  const std::string f = s.format.value_or("csv");
  if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
  return f;
}

int cmd_eval(const Settings& s) {
  const std::string format = format_of(s);
  dbar_op op{};
  check(dbar_op_parse(required(s.op, "--op").c_str(), &op), "--op");
  auto d = make_domain(required(s.domain, "--domain"));
  Handle<dbar_field> f;
  if (op != DBAR_OP_PHI && op != DBAR_OP_NW) f = make_field(required(s.field, "--field"));
  if (op == DBAR_OP_NW && !s.param) throw UsageError("--param (the radius r) is required for NW");
  auto q = make_quad(s);
  const auto pts = points_of(s, d.get());

  std::ostringstream csv;
  csv << "z_re,z_im,value_re,value_im,error_estimate,refinements_used,converged\n";
  json rows = json::array();
  int unconverged = 0;
  for (const auto& [re, im] : pts) {
    dbar_result r{};
    check(dbar_eval(op, d.get(), f.get(), q.get(), re, im, s.param.value_or(0.0), &r),
          "evaluating at " + fmt(re) + "," + fmt(im));
    if (*dbar_last_error()) std::cerr << "warning: " << dbar_last_error() << "\n";
    unconverged += !r.converged;
    csv << fmt(re) << "," << fmt(im) << "," << fmt(r.re) << "," << fmt(r.im) << "," << fmt(r.error_estimate) << ","
        << r.refinements_used << "," << r.converged << "\n";
    rows.push_back({{"z_re", re}, {"z_im", im}, {"value_re", r.re}, {"value_im", r.im},
                    {"error_estimate", r.error_estimate}, {"refinements_used", r.refinements_used},
                    {"converged", r.converged != 0}});
  }
  if (format == "csv") {
    emit(s.out, csv.str());
  } else {
    json doc{{"op", *s.op}, {"domain", *s.domain}};
    if (s.field) doc["field"] = *s.field;
    doc["results"] = rows;
    emit(s.out, doc.dump(2) + "\n");
  }
  if (s.out) std::cout << "eval-op " << *s.op << ": " << pts.size() << " points written to " << *s.out << "\n";
  if (unconverged > 0) {
    std::cerr << "eval-op: " << unconverged << " evaluation(s) did not reach the requested tolerance\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_solve(const Settings& s) {
  const std::string format = format_of(s);
  if (!s.nu) throw UsageError("missing required option --nu");
  if (!(*s.nu > 1.0))
    throw UsageError("solve requires nu > 1: for nu <= 1 the solution need not be C^1 (got nu = " + fmt(*s.nu) + ")");
  auto d = make_domain(required(s.domain, "--domain"));
  auto f = make_field(required(s.field, "--field"));
  auto q = make_quad(s);
  const auto pts = points_of(s, d.get());
  std::vector<double> flat, u(2 * pts.size()), du(2 * pts.size()), chk(pts.size());
  for (const auto& [re, im] : pts) {
    flat.push_back(re);
    flat.push_back(im);
  }
  check(dbar_solve(d.get(), f.get(), q.get(), flat.data(), pts.size(), *s.nu, u.data(), du.data(), chk.data()),
        "solve");
  std::ostringstream csv;
  csv << "z_re,z_im,u_re,u_im,du_dz_re,du_dz_im,dbar_check_abs\n";
  json rows = json::array();
  double worst = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    csv << fmt(pts[i].first) << "," << fmt(pts[i].second) << "," << fmt(u[2 * i]) << "," << fmt(u[2 * i + 1]) << ","
        << fmt(du[2 * i]) << "," << fmt(du[2 * i + 1]) << "," << fmt(chk[i]) << "\n";
    rows.push_back({{"z_re", pts[i].first}, {"z_im", pts[i].second}, {"u_re", u[2 * i]}, {"u_im", u[2 * i + 1]},
                    {"du_dz_re", du[2 * i]}, {"du_dz_im", du[2 * i + 1]}, {"dbar_check_abs", chk[i]}});
    if (std::isfinite(chk[i])) worst = std::max(worst, chk[i]);
  }
  if (format == "csv") emit(s.out, csv.str());
  else emit(s.out, json{{"domain", *s.domain}, {"field", *s.field}, {"nu", *s.nu}, {"results", rows}}.dump(2) + "\n");
  std::cout << "solve: " << pts.size() << " points, max |dbar u - f| = " << fmt(worst);
  if (s.out) std::cout << ", written to " << *s.out;
  std::cout << "\n";
  return kExitOk;
}

int cmd_verify(const Settings& s) {
  const std::string suite = required(s.suite, "--suite");
  json cfg = json::object();
  if (s.domain) cfg["domain"] = *s.domain;
  if (s.field) cfg["field"] = *s.field;
  {
    auto q = make_quad(s);
    char* qj = nullptr;
    check(dbar_quad_to_json(q.get(), &qj), "quad");
    Handle<char> hold(qj);
    cfg["quad"] = json::parse(qj);
  }
  if (s.samples) cfg["samples"] = *s.samples;
  cfg["seed"] = s.seed.value_or(1);
  if (s.artifacts) cfg["artifact_dir"] = *s.artifacts;

  static const std::vector<std::string> all = {
      "phi_disk",         "pompeiu_dbar",      "h_identity",         "disk_specialization",
      "nw_bound_disk",    "nw_bound_general",  "lemma24_inequalities", "twoT_divergence_nu1",
      "twoT_boundedness", "solve_and_certify", "sharpness_examples", "loss_optimality"};
  const std::vector<std::string> suites = suite == "all" ? all : std::vector<std::string>{suite};
  json reports = json::array();
  bool all_passed = true;
  for (const auto& name : suites) {
    char* text = nullptr;
    int passed = 0;
    check(dbar_verify(name.c_str(), cfg.dump().c_str(), &text, &passed), "verify " + name);
    Handle<char> hold(text);
    const json report = json::parse(text);
    std::cout << (passed ? "PASS " : "FAIL ") << name << "\n";
    for (const auto& m : report["measurements"]) {
      if (m["passed"].get<bool>()) continue;
      std::cout << "  failed: " << m["name"].get<std::string>() << " = "
                << (m["value"].is_number() ? fmt(m["value"].get<double>()) : std::string("nan")) << " ("
                << m["compare"].get<std::string>() << " " << fmt(m["target"].get<double>()) << ")";
      if (m.contains("note")) std::cout << " " << m["note"].get<std::string>();
      std::cout << "\n";
    }
    all_passed = all_passed && passed;
    reports.push_back(report);
  }
  const json doc = suites.size() == 1 ? reports[0] : json{{"passed", all_passed}, {"reports", reports}};
  if (s.out) {
    emit(s.out, doc.dump(2) + "\n");
    std::cout << "report written to " << *s.out << "\n";
  }
  return all_passed ? kExitOk : kExitFailure;
}

int cmd_converge(const Settings& s) {
  dbar_op op{};
  check(dbar_op_parse(required(s.op, "--op").c_str(), &op), "--op");
  auto d = make_domain(required(s.domain, "--domain"));
  Handle<dbar_field> f;
  if (op != DBAR_OP_PHI && op != DBAR_OP_NW) f = make_field(required(s.field, "--field"));
  if (op == DBAR_OP_NW && !s.param) throw UsageError("--param (the radius r) is required for NW");
  if (s.points.size() != 1) throw UsageError("converge needs exactly one --point");
  const auto [re, im] = parse_pair(s.points[0], "point");
  auto q = make_quad(s);
  std::optional<std::pair<double, double>> exact;
  if (s.exact) exact = parse_pair(*s.exact, "exact value");
  double ex[2] = {exact ? exact->first : 0.0, exact ? exact->second : 0.0};
  char* csv = nullptr;
  check(dbar_converge(op, d.get(), f.get(), q.get(), re, im, s.param.value_or(0.0), s.levels.value_or(5),
                      exact ? ex : nullptr, &csv),
        "converge");
  Handle<char> hold(csv);
  emit(s.out, csv);
  if (s.out) std::cout << "converge " << *s.op << ": table written to " << *s.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy-Pompeiu and Beurling-Ahlfors type operators on planar domains"};
  app.require_subcommand(1);
  Settings s;
  std::string config;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON config file; flags take precedence");
    sub->add_option("--domain", s.domain, "disk:r | disk:cx,cy,r | ellipse:a,b | perturbed_disk:delta,mode[,radius]");
    sub->add_option("--quad", s.quad, "quadrature overrides key=value,...");
    sub->add_option("--out", s.out, "output file (default: standard output)");
  };
  auto* eval = app.add_subcommand("eval-op", "evaluate an operator at points");
  common(eval);
  eval->add_option("--op", s.op, "T | H | H_direct | 2T | Phi | S | NW");
  eval->add_option("--field", s.field, "field spec");
  eval->add_option("--point", s.points, "evaluation point re,im (repeatable)");
  eval->add_option("--grid", s.grid, "NxM interior grid");
  eval->add_option("--margin", s.margin, "grid distance from the boundary (default 0.05)");
  eval->add_option("--param", s.param, "radius r for NW");
  eval->add_option("--format", s.format, "csv | json");

  auto* solve = app.add_subcommand("solve", "solve dbar u = f with u = Tf");
  common(solve);
  solve->add_option("--field", s.field, "field spec");
  solve->add_option("--grid", s.grid, "NxM interior grid");
  solve->add_option("--point", s.points, "extra point re,im (repeatable)");
  solve->add_option("--margin", s.margin, "grid distance from the boundary (default 0.05)");
  solve->add_option("--nu", s.nu, "log order of the datum (must exceed 1)");
  solve->add_option("--format", s.format, "csv | json");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify);
  verify->add_option("--suite", s.suite, "suite name or 'all'");
  verify->add_option("--field", s.field, "field spec override");
  verify->add_option("--samples", s.samples, "sample count override");
  verify->add_option("--seed", s.seed, "random seed (default 1)");
  verify->add_option("--artifacts", s.artifacts, "directory for CSV tables");

  auto* converge = app.add_subcommand("converge", "convergence table for one operator value");
  common(converge);
  converge->add_option("--op", s.op, "T | H | H_direct | 2T | Phi | S | NW");
  converge->add_option("--field", s.field, "field spec");
  converge->add_option("--point", s.points, "evaluation point re,im");
  converge->add_option("--param", s.param, "radius r for NW");
  converge->add_option("--levels", s.levels, "number of resolutions (default 5)");
  converge->add_option("--exact", s.exact, "exact value re,im for the error column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!config.empty()) merge_config(s, config);
    if (eval->parsed()) return cmd_eval(s);
    if (solve->parsed()) return cmd_solve(s);
    if (verify->parsed()) return cmd_verify(s);
    return cmd_converge(s);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const RunFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
