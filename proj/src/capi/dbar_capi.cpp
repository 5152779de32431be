#include "dbar/dbar.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include "dbar/operators.hpp"
#include "dbar/specs.hpp"
#include "dbar/verify.hpp"

struct dbar_domain {
  dbar::PlanarDomain domain;
  std::string spec;
};

struct dbar_field {
  dbar::ScalarField field;
  std::string spec;
};

struct dbar_quad {
  dbar::QuadratureSpec spec;
};

namespace {

thread_local std::string g_last_error;

template <class F>
dbar_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return DBAR_OK;
  } catch (const dbar::Error& e) {
    g_last_error = e.what();
    return static_cast<dbar_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DBAR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DBAR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) dbar::fail(dbar::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

dbar::OperatorKind to_kind(dbar_op op) {
  switch (op) {
    case DBAR_OP_T: return dbar::OperatorKind::T;
    case DBAR_OP_H_IDENTITY: return dbar::OperatorKind::H_identity;
    case DBAR_OP_H_DIRECT: return dbar::OperatorKind::H_direct;
    case DBAR_OP_2T: return dbar::OperatorKind::TwoT;
    case DBAR_OP_PHI: return dbar::OperatorKind::Phi;
    case DBAR_OP_S: return dbar::OperatorKind::S;
    case DBAR_OP_NW: return dbar::OperatorKind::NWResidual;
  }
  dbar::fail(dbar::ErrorCode::invalid_argument, "unknown operator code " + std::to_string(static_cast<int>(op)));
}

bool needs_field(dbar_op op) { return op != DBAR_OP_PHI && op != DBAR_OP_NW; }

}  // namespace

extern "C" {

const char* dbar_last_error(void) { return g_last_error.c_str(); }

const char* dbar_status_name(dbar_status status) {
  if (status == DBAR_OK) return "ok";
  return dbar::error_code_name(static_cast<dbar::ErrorCode>(static_cast<int>(status)));
}

const char* dbar_version(void) { return "1.0.0"; }

dbar_status dbar_domain_parse(const char* spec, dbar_domain** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = nullptr;
    *out = new dbar_domain{dbar::parse_domain(spec), spec};
  });
}

void dbar_domain_free(dbar_domain* domain) { delete domain; }

dbar_status dbar_domain_contains(const dbar_domain* domain, double re, double im, int* out) {
  return guarded([&] {
    need(domain, "domain");
    need(out, "out");
    *out = domain->domain.contains({re, im}) ? 1 : 0;
  });
}

dbar_status dbar_domain_boundary_distance(const dbar_domain* domain, double re, double im, double* out) {
  return guarded([&] {
    need(domain, "domain");
    need(out, "out");
    *out = domain->domain.boundary_distance({re, im});
  });
}

dbar_status dbar_interior_grid(const dbar_domain* domain, int nx, int ny, double margin, double** points,
                               size_t* count) {
  return guarded([&] {
    need(domain, "domain");
    need(points, "points");
    need(count, "count");
    *points = nullptr;
    *count = 0;
    const auto grid = dbar::interior_grid(domain->domain, nx, ny, margin);
    double* buf = static_cast<double*>(std::malloc(2 * std::max<size_t>(grid.size(), 1) * sizeof(double)));
    if (!buf) throw std::bad_alloc();
    for (size_t i = 0; i < grid.size(); ++i) {
      buf[2 * i] = grid[i].real();
      buf[2 * i + 1] = grid[i].imag();
    }
    *points = buf;
    *count = grid.size();
  });
}

dbar_status dbar_field_parse(const char* spec, dbar_field** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = nullptr;
    *out = new dbar_field{dbar::parse_field(spec), spec};
  });
}

void dbar_field_free(dbar_field* field) { delete field; }

dbar_status dbar_field_eval(const dbar_field* field, double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    need(field, "field");
    need(out_re, "out_re");
    need(out_im, "out_im");
    const dbar::cplx v = field->field({re, im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

double dbar_field_log_order(const dbar_field* field) {
  if (!field || !field->field.declared_log_order) return std::numeric_limits<double>::quiet_NaN();
  return *field->field.declared_log_order;
}

dbar_status dbar_quad_parse(const char* overrides, dbar_quad** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new dbar_quad{dbar::parse_quad(overrides ? overrides : "")};
  });
}

dbar_status dbar_quad_from_json(const char* json, dbar_quad** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    dbar::json j;
    try {
      j = dbar::json::parse(json);
    } catch (const std::exception& e) {
      dbar::fail(dbar::ErrorCode::invalid_argument, std::string("invalid JSON: ") + e.what());
    }
    *out = new dbar_quad{dbar::quad_from_json(j)};
  });
}

dbar_status dbar_quad_apply(dbar_quad* quad, const char* overrides) {
  return guarded([&] {
    need(quad, "quad");
    if (overrides) quad->spec = dbar::parse_quad(overrides, quad->spec);
  });
}

void dbar_quad_free(dbar_quad* quad) { delete quad; }

dbar_status dbar_quad_to_json(const dbar_quad* quad, char** json) {
  return guarded([&] {
    need(quad, "quad");
    need(json, "json");
    *json = copy_string(dbar::quad_to_json(quad->spec).dump());
  });
}

dbar_status dbar_op_parse(const char* name, dbar_op* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    switch (dbar::parse_operator(name)) {
      case dbar::OperatorKind::T: *out = DBAR_OP_T; break;
      case dbar::OperatorKind::H_identity: *out = DBAR_OP_H_IDENTITY; break;
      case dbar::OperatorKind::H_direct: *out = DBAR_OP_H_DIRECT; break;
      case dbar::OperatorKind::TwoT: *out = DBAR_OP_2T; break;
      case dbar::OperatorKind::Phi: *out = DBAR_OP_PHI; break;
      case dbar::OperatorKind::S: *out = DBAR_OP_S; break;
      case dbar::OperatorKind::NWResidual: *out = DBAR_OP_NW; break;
    }
  });
}

dbar_status dbar_eval(dbar_op op, const dbar_domain* domain, const dbar_field* field, const dbar_quad* quad,
                      double re, double im, double param, dbar_result* out) {
  std::string warning;
  const dbar_status st = guarded([&] {
    need(domain, "domain");
    need(out, "out");
    if (needs_field(op)) need(field, "field");
    const dbar::QuadratureSpec spec = quad ? quad->spec : dbar::QuadratureSpec{};
    const dbar::ScalarField f = field ? field->field : dbar::ScalarField{};
    const dbar::cplx z{re, im};
    dbar::OperatorEvaluation e;
    switch (op) {
      case DBAR_OP_T: e = dbar::op_T(domain->domain, f, z, spec); break;
      case DBAR_OP_H_IDENTITY: e = dbar::op_H(domain->domain, f, z, spec, dbar::HMethod::identity); break;
      case DBAR_OP_H_DIRECT: e = dbar::op_H(domain->domain, f, z, spec, dbar::HMethod::direct_pv); break;
      case DBAR_OP_2T: e = dbar::op_2T(domain->domain, f, z, spec); break;
      case DBAR_OP_PHI: e = dbar::op_Phi(domain->domain, z, spec); break;
      case DBAR_OP_S: e = dbar::op_S(domain->domain, f.evaluate, z, spec); break;
      case DBAR_OP_NW: e = dbar::nw_residual(domain->domain, z, param, spec); break;
      default: dbar::fail(dbar::ErrorCode::invalid_argument, "unknown operator code " + std::to_string(static_cast<int>(op)));
    }
    *out = dbar_result{e.value.real(), e.value.imag(), e.quadrature.error_estimate, e.quadrature.refinements_used,
                       e.quadrature.converged ? 1 : 0};
    warning = e.warning;
  });
  if (st == DBAR_OK) g_last_error = warning;
  return st;
}

dbar_status dbar_solve(const dbar_domain* domain, const dbar_field* field, const dbar_quad* quad,
                       const double* points, size_t count, double nu, double* u, double* du_dz, double* dbar_check) {
  return guarded([&] {
    need(domain, "domain");
    need(field, "field");
    if (count > 0) {
      need(points, "points");
      need(u, "u");
      need(du_dz, "du_dz");
      need(dbar_check, "dbar_check");
    }
    std::vector<dbar::cplx> grid(count);
    for (size_t i = 0; i < count; ++i) grid[i] = {points[2 * i], points[2 * i + 1]};
    const dbar::SolutionField sol =
        dbar::solve_dbar(domain->domain, field->field, grid, nu, quad ? quad->spec : dbar::QuadratureSpec{});
    for (size_t i = 0; i < count; ++i) {
      u[2 * i] = sol.values[i].real();
      u[2 * i + 1] = sol.values[i].imag();
      du_dz[2 * i] = sol.dz_values[i].real();
      du_dz[2 * i + 1] = sol.dz_values[i].imag();
      dbar_check[i] = sol.dbar_check[i];
    }
  });
}

dbar_status dbar_verify(const char* suite, const char* config_json, char** report_json, int* passed) {
  return guarded([&] {
    need(suite, "suite");
    need(report_json, "report_json");
    need(passed, "passed");
    *report_json = nullptr;
    *passed = 0;
    dbar::SuiteConfig cfg;
    cfg.suite = dbar::parse_suite(suite);
    if (config_json && *config_json) {
      dbar::json j;
      try {
        j = dbar::json::parse(config_json);
      } catch (const std::exception& e) {
        dbar::fail(dbar::ErrorCode::invalid_argument, std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) dbar::fail(dbar::ErrorCode::invalid_argument, "verify configuration must be an object");
      for (const auto& [key, val] : j.items()) {
        if (key == "domain") cfg.domain = val.get<std::string>();
        else if (key == "field") cfg.field = val.get<std::string>();
        else if (key == "quad") cfg.quad = dbar::quad_from_json(val);
        else if (key == "samples") cfg.samples = val.get<int>();
        else if (key == "seed") cfg.seed = val.get<uint64_t>();
        else if (key == "artifact_dir") cfg.artifact_dir = val.get<std::string>();
        else dbar::fail(dbar::ErrorCode::invalid_argument, "unknown verify key '" + key + "'");
      }
      if (cfg.samples < 0) dbar::fail(dbar::ErrorCode::invalid_argument, "samples must be non-negative");
    }
    const dbar::VerificationReport r = dbar::run_suite(cfg);
    *report_json = copy_string(r.to_json().dump(2));
    *passed = r.passed ? 1 : 0;
  });
}

dbar_status dbar_converge(dbar_op op, const dbar_domain* domain, const dbar_field* field, const dbar_quad* quad,
                          double re, double im, double param, int levels, const double* exact, char** csv) {
  return guarded([&] {
    need(domain, "domain");
    need(csv, "csv");
    if (needs_field(op)) need(field, "field");
    *csv = nullptr;
    dbar::ConvergenceTarget t;
    t.op = to_kind(op);
    t.domain = domain->spec;
    if (field) t.field = field->spec;
    t.point = {re, im};
    t.param = param;
    if (exact) t.exact = dbar::cplx{exact[0], exact[1]};
    const auto rows =
        dbar::convergence_table(t, dbar::resolution_ladder(quad ? quad->spec : dbar::QuadratureSpec{}, levels));
    *csv = copy_string(dbar::convergence_csv(rows));
  });
}

void dbar_free(void* p) { std::free(p); }

}  // extern "C"
