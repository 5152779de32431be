#include "dbar/specs.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

#include "dbar/testfields.hpp"

namespace dbar {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_argument, "cannot parse " + what + " from '" + s + "'");
  }
  if (pos != t.size()) fail(ErrorCode::invalid_argument, "cannot parse " + what + " from '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != static_cast<int>(v)) fail(ErrorCode::invalid_argument, what + " must be an integer, got '" + s + "'");
  return static_cast<int>(v);
}

std::vector<double> numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, what));
  return out;
}

std::pair<std::string, std::string> kind_and_params(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {trim(text), ""};
  return {trim(text.substr(0, colon)), text.substr(colon + 1)};
}

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    fail(ErrorCode::invalid_argument, std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

cplx parse_point(const std::string& text) {
  const auto v = numbers(text, "point");
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  fail(ErrorCode::invalid_argument, "point must be 're' or 're,im', got '" + text + "'");
}

PlanarDomain parse_domain(const std::string& text) {
  const auto [kind, params] = kind_and_params(text);
  const auto v = numbers(params, "domain parameter");
  if (kind == "disk") {
    if (v.size() == 1) return PlanarDomain::disk(0.0, v[0]);
    if (v.size() == 2) return PlanarDomain::disk(v[0], v[1]);
    if (v.size() == 3) return PlanarDomain::disk({v[0], v[1]}, v[2]);
    fail(ErrorCode::invalid_argument, "disk expects r, cx,r or cx,cy,r");
  }
  if (kind == "ellipse") {
    if (v.size() != 2) fail(ErrorCode::invalid_argument, "ellipse expects a,b");
    return PlanarDomain::ellipse(v[0], v[1]);
  }
  if (kind == "perturbed_disk") {
    if (v.size() != 2 && v.size() != 3) fail(ErrorCode::invalid_argument, "perturbed_disk expects delta,mode[,radius]");
    if (v[1] != static_cast<int>(v[1])) fail(ErrorCode::invalid_argument, "perturbed_disk mode must be an integer");
    return PlanarDomain::perturbed_disk(v[0], static_cast<int>(v[1]), v.size() == 3 ? v[2] : 1.0);
  }
  fail(ErrorCode::invalid_argument, "unknown domain kind '" + kind + "'");
}

PlanarDomain domain_from_json(const json& j) {
  if (j.is_string()) return parse_domain(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) fail(ErrorCode::invalid_argument, "domain needs a 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "disk") {
    cplx c = 0.0;
    if (j.contains("center")) {
      const auto& cj = j["center"];
      if (cj.is_array() && cj.size() == 2) c = {cj[0].get<double>(), cj[1].get<double>()};
      else if (cj.is_number()) c = cj.get<double>();
      else fail(ErrorCode::invalid_argument, "disk center must be [x, y] or a number");
    }
    return PlanarDomain::disk(c, num(j, "radius"));
  }
  if (kind == "ellipse") return PlanarDomain::ellipse(num(j, "semi_a"), num(j, "semi_b"));
  if (kind == "perturbed_disk")
    return PlanarDomain::perturbed_disk(num(j, "delta"), static_cast<int>(num(j, "mode")),
                                        j.contains("radius") ? num(j, "radius") : 1.0);
  fail(ErrorCode::invalid_argument, "unknown domain kind '" + kind + "'");
}

ScalarField parse_field(const std::string& text) {
  const auto [kind, params] = kind_and_params(text);
  if (kind == "f_nu") return field_f_nu(to_double(params, "nu"));
  if (kind == "u_nu") return field_u_nu(to_double(params, "nu"));
  if (kind == "du_nu") return field_du_nu(to_double(params, "nu"));
  if (kind == "abs_power") return field_abs_power(to_double(params, "alpha"));
  if (kind == "constant") return field_constant(parse_point(params));
  if (kind == "polynomial") {
    PolyCoeffs coeffs;
    for (const auto& term : split(params, ';')) {
      if (trim(term).empty()) continue;
      const auto eq = term.find('=');
      if (eq == std::string::npos) fail(ErrorCode::invalid_argument, "polynomial term needs p,q=coefficient");
      const auto pq = numbers(term.substr(0, eq), "exponent");
      if (pq.size() != 2) fail(ErrorCode::invalid_argument, "polynomial term needs two exponents");
      coeffs[{to_int(format_double(pq[0]), "p"), to_int(format_double(pq[1]), "q")}] += parse_point(term.substr(eq + 1));
    }
    return field_polynomial(coeffs);
  }
  fail(ErrorCode::invalid_argument, "unknown field kind '" + kind + "'");
}

ScalarField field_from_json(const json& j) {
  if (j.is_string()) return parse_field(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) fail(ErrorCode::invalid_argument, "field needs a 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "f_nu") return field_f_nu(num(j, "nu"));
  if (kind == "u_nu") return field_u_nu(num(j, "nu"));
  if (kind == "du_nu") return field_du_nu(num(j, "nu"));
  if (kind == "abs_power") return field_abs_power(num(j, "alpha"));
  if (kind == "constant") return field_constant({num(j, "re"), j.contains("im") ? num(j, "im") : 0.0});
  if (kind == "polynomial") {
    PolyCoeffs coeffs;
    if (!j.contains("terms") || !j["terms"].is_array()) fail(ErrorCode::invalid_argument, "polynomial needs 'terms'");
    for (const auto& t : j["terms"])
      coeffs[{static_cast<int>(num(t, "p")), static_cast<int>(num(t, "q"))}] +=
          cplx{num(t, "re"), t.contains("im") ? num(t, "im") : 0.0};
    return field_polynomial(coeffs);
  }
  fail(ErrorCode::invalid_argument, "unknown field kind '" + kind + "'");
}

QuadratureSpec parse_quad(const std::string& text, QuadratureSpec spec) {
  for (const auto& item : split(text, ',')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::invalid_argument, "quadrature override needs key=value: '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string val = item.substr(eq + 1);
    if (key == "boundary_nodes") spec.boundary_nodes = to_int(val, key);
    else if (key == "radial_cells") spec.radial_cells = to_int(val, key);
    else if (key == "radial_grading") spec.radial_grading = to_double(val, key);
    else if (key == "angular_nodes") spec.angular_nodes = to_int(val, key);
    else if (key == "inner_cutoff") spec.inner_cutoff = to_double(val, key);
    else if (key == "target_rel_tol" || key == "tol") spec.target_rel_tol = to_double(val, key);
    else if (key == "max_refinements") spec.max_refinements = to_int(val, key);
    else if (key == "gauss_order") spec.gauss_order = to_int(val, key);
    else if (key == "pv_epsilons") {
      spec.pv_epsilons.clear();
      for (const auto& e : split(val, ';')) spec.pv_epsilons.push_back(to_double(e, key));
    } else {
      fail(ErrorCode::invalid_argument, "unknown quadrature key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

QuadratureSpec quad_from_json(const json& j, QuadratureSpec spec) {
  if (j.is_string()) return parse_quad(j.get<std::string>(), spec);
  if (!j.is_object()) fail(ErrorCode::invalid_argument, "quadrature settings must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "pv_epsilons") {
      spec.pv_epsilons = val.get<std::vector<double>>();
      continue;
    }
    if (!val.is_number()) fail(ErrorCode::invalid_argument, "quadrature key '" + key + "' must be numeric");
    const double v = val.get<double>();
    if (key == "boundary_nodes") spec.boundary_nodes = static_cast<int>(v);
    else if (key == "radial_cells") spec.radial_cells = static_cast<int>(v);
    else if (key == "radial_grading") spec.radial_grading = v;
    else if (key == "angular_nodes") spec.angular_nodes = static_cast<int>(v);
    else if (key == "inner_cutoff") spec.inner_cutoff = v;
    else if (key == "target_rel_tol" || key == "tol") spec.target_rel_tol = v;
    else if (key == "max_refinements") spec.max_refinements = static_cast<int>(v);
    else if (key == "gauss_order") spec.gauss_order = static_cast<int>(v);
    else fail(ErrorCode::invalid_argument, "unknown quadrature key '" + key + "'");
  }
  spec.validate();
  return spec;
}

json quad_to_json(const QuadratureSpec& s) {
  return json{{"boundary_nodes", s.boundary_nodes}, {"radial_cells", s.radial_cells},
              {"radial_grading", s.radial_grading}, {"angular_nodes", s.angular_nodes},
              {"inner_cutoff", s.inner_cutoff},     {"target_rel_tol", s.target_rel_tol},
              {"max_refinements", s.max_refinements}, {"gauss_order", s.gauss_order},
              {"pv_epsilons", s.pv_epsilons}};
}

}  // namespace dbar
