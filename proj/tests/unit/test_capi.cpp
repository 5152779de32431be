#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "dbar/dbar.h"

TEST_CASE("status names and version") {
  CHECK(std::string(dbar_status_name(DBAR_OK)) == "ok");
  CHECK(std::string(dbar_status_name(DBAR_NOT_CONVERGED)) == "not-converged");
  CHECK(std::strlen(dbar_version()) > 0);
}

TEST_CASE("domain handles") {
  dbar_domain* d = nullptr;
  REQUIRE(dbar_domain_parse("ellipse:2,1", &d) == DBAR_OK);
  int in = 0;
  CHECK(dbar_domain_contains(d, 1.5, 0.0, &in) == DBAR_OK);
  CHECK(in == 1);
  double dist = 0.0;
  CHECK(dbar_domain_boundary_distance(d, 0.0, 0.0, &dist) == DBAR_OK);
  CHECK(dist == doctest::Approx(1.0));
  double* pts = nullptr;
  size_t n = 0;
  CHECK(dbar_interior_grid(d, 5, 5, 0.1, &pts, &n) == DBAR_OK);
  CHECK(n > 0);
  dbar_free(pts);
  dbar_domain_free(d);

  dbar_domain* bad = nullptr;
  CHECK(dbar_domain_parse("disk:0,0,-1", &bad) == DBAR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(dbar_last_error()) > 0);
  CHECK(dbar_domain_parse(nullptr, &bad) == DBAR_INVALID_ARGUMENT);
}

TEST_CASE("field handles") {
  dbar_field* f = nullptr;
  REQUIRE(dbar_field_parse("f_nu:2", &f) == DBAR_OK);
  double re = 0.0, im = 0.0;
  CHECK(dbar_field_eval(f, 0.1, 0.0, &re, &im) == DBAR_OK);
  CHECK(re == doctest::Approx(0.04715292425290347).epsilon(1e-14));
  CHECK(dbar_field_log_order(f) == 2.0);
  CHECK(dbar_field_eval(f, 2.0, 0.0, &re, &im) == DBAR_OUT_OF_INTENDED_DOMAIN);
  dbar_field_free(f);
  dbar_field* c = nullptr;
  REQUIRE(dbar_field_parse("constant:1", &c) == DBAR_OK);
  CHECK(std::isnan(dbar_field_log_order(c)));
  dbar_field_free(c);
}

TEST_CASE("quadrature settings round-trip through JSON") {
  dbar_quad* q = nullptr;
  REQUIRE(dbar_quad_parse("angular_nodes=64,target_rel_tol=1e-5", &q) == DBAR_OK);
  char* js = nullptr;
  REQUIRE(dbar_quad_to_json(q, &js) == DBAR_OK);
  dbar_quad* q2 = nullptr;
  REQUIRE(dbar_quad_from_json(js, &q2) == DBAR_OK);
  char* js2 = nullptr;
  REQUIRE(dbar_quad_to_json(q2, &js2) == DBAR_OK);
  CHECK(std::string(js) == std::string(js2));
  CHECK(std::string(js).find("64") != std::string::npos);
  CHECK(dbar_quad_apply(q, "radial_grading=1") == DBAR_INVALID_ARGUMENT);
  CHECK(dbar_quad_apply(q, "no_such_key=1") == DBAR_INVALID_ARGUMENT);
  dbar_free(js);
  dbar_free(js2);
  dbar_quad_free(q);
  dbar_quad_free(q2);
}

TEST_CASE("operator evaluation") {
  dbar_domain* d = nullptr;
  dbar_field* f = nullptr;
  dbar_quad* q = nullptr;
  REQUIRE(dbar_domain_parse("disk:0,0.5", &d) == DBAR_OK);
  REQUIRE(dbar_field_parse("f_nu:2", &f) == DBAR_OK);
  REQUIRE(dbar_quad_parse(nullptr, &q) == DBAR_OK);
  dbar_op op;
  REQUIRE(dbar_op_parse("2T", &op) == DBAR_OK);
  CHECK(op == DBAR_OP_2T);
  dbar_result r{};
  REQUIRE(dbar_eval(op, d, f, q, 0.0, 0.0, 0.0, &r) == DBAR_OK);
  CHECK(r.converged == 1);
  CHECK(std::abs(r.re + 0.7213475204444817) < 1e-4);
  CHECK(dbar_eval(DBAR_OP_T, d, f, q, 0.9, 0.0, 0.0, &r) == DBAR_INVALID_CENTER);
  CHECK(dbar_eval(DBAR_OP_T, d, nullptr, q, 0.1, 0.0, 0.0, &r) == DBAR_INVALID_ARGUMENT);
  REQUIRE(dbar_eval(DBAR_OP_PHI, d, nullptr, q, 0.1, 0.0, 0.0, &r) == DBAR_OK);
  CHECK(std::hypot(r.re, r.im) < 1e-10);
  CHECK(dbar_op_parse("bogus", &op) == DBAR_INVALID_ARGUMENT);

  dbar_field* f1 = nullptr;
  REQUIRE(dbar_field_parse("f_nu:1", &f1) == DBAR_OK);
  CHECK(dbar_eval(DBAR_OP_2T, d, f1, q, 0.0, 0.0, 0.0, &r) == DBAR_DIVERGENT_EVALUATION);
  dbar_field_free(f1);
  dbar_field_free(f);
  dbar_domain_free(d);
  dbar_quad_free(q);
}

TEST_CASE("solve") {
  dbar_domain* d = nullptr;
  dbar_field* f = nullptr;
  dbar_quad* q = nullptr;
  REQUIRE(dbar_domain_parse("disk:0,0.5", &d) == DBAR_OK);
  REQUIRE(dbar_field_parse("f_nu:2", &f) == DBAR_OK);
  REQUIRE(dbar_quad_parse(nullptr, &q) == DBAR_OK);
  const double pts[] = {0.1, 0.05, -0.2, 0.1};
  double u[4], du[4], chk[2];
  REQUIRE(dbar_solve(d, f, q, pts, 2, 2.0, u, du, chk) == DBAR_OK);
  CHECK(std::abs(u[0] + 0.04931426090258131) < 1e-6);
  CHECK(chk[0] < 1e-3);
  CHECK(dbar_solve(d, f, q, pts, 2, 1.0, u, du, chk) == DBAR_INVALID_ARGUMENT);
  dbar_field_free(f);
  dbar_domain_free(d);
  dbar_quad_free(q);
}

TEST_CASE("verify and converge") {
  char* report = nullptr;
  int passed = 0;
  REQUIRE(dbar_verify("phi_disk", nullptr, &report, &passed) == DBAR_OK);
  CHECK(passed == 1);
  CHECK(std::string(report).find("\"suite\": \"phi_disk\"") != std::string::npos);
  dbar_free(report);
  CHECK(dbar_verify("phi_disk", "{\"bogus\": 1}", &report, &passed) == DBAR_INVALID_ARGUMENT);
  CHECK(dbar_verify("nope", nullptr, &report, &passed) == DBAR_INVALID_ARGUMENT);

  dbar_domain* d = nullptr;
  dbar_quad* q = nullptr;
  REQUIRE(dbar_domain_parse("ellipse:2,1", &d) == DBAR_OK);
  REQUIRE(dbar_quad_parse("boundary_nodes=256", &q) == DBAR_OK);
  char* csv = nullptr;
  const double exact[] = {1.0 / 3.0, 0.0};
  REQUIRE(dbar_converge(DBAR_OP_PHI, d, nullptr, q, 0.0, 0.0, 0.0, 4, exact, &csv) == DBAR_OK);
  const std::string s(csv);
  CHECK(s.rfind("cost,", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
  dbar_free(csv);
  dbar_domain_free(d);
  dbar_quad_free(q);
}
