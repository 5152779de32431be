#include <cmath>
#include <set>

#include "doctest.h"
#include "dbar/verify.hpp"

using namespace dbar;

TEST_CASE("measure semantics") {
  CHECK(measure("a", "c", 1.0, Compare::at_most, 1.0).passed);
  CHECK_FALSE(measure("a", "c", 1.1, Compare::at_most, 1.0).passed);
  CHECK(measure("a", "c", 1.1, Compare::at_most, 1.0, 0.2).passed);
  CHECK(measure("a", "c", 0.9, Compare::at_least, 1.0, 0.2).passed);
  CHECK_FALSE(measure("a", "c", 0.7, Compare::at_least, 1.0, 0.2).passed);
  CHECK(measure("a", "c", 1.05, Compare::near, 1.0, 0.1).passed);
  CHECK_FALSE(measure("a", "c", 0.8, Compare::near, 1.0, 0.1).passed);
  CHECK_FALSE(measure("a", "c", std::nan(""), Compare::at_most, 1.0).passed);
  CHECK_FALSE(measure("a", "c", std::nan(""), Compare::near, 1.0, 1e9).passed);
}

TEST_CASE("suite names round-trip") {
  CHECK(all_suites().size() == 12);
  std::set<std::string> names;
  for (Suite s : all_suites()) {
    names.insert(suite_name(s));
    CHECK(parse_suite(suite_name(s)) == s);
  }
  CHECK(names.size() == 12);
  CHECK_THROWS_AS(parse_suite("no_such_suite"), Error);
}

TEST_CASE("phi_disk passes and is deterministic") {
  SuiteConfig c;
  c.suite = Suite::phi_disk;
  const auto a = run_suite(c);
  const auto b = run_suite(c);
  CHECK(a.passed);
  CHECK(!a.measurements.empty());
  CHECK(a.to_json().dump() == b.to_json().dump());
  const json j = a.to_json();
  CHECK(j["suite"] == "phi_disk");
  CHECK(j.contains("measurements"));
  CHECK_FALSE(j.contains("runtime_seconds"));
}

TEST_CASE("lemma24 reports the failing grid bound") {
  SuiteConfig c;
  c.suite = Suite::lemma24_inequalities;
  const auto r = run_suite(c);
  CHECK_FALSE(r.passed);
  bool saw_part2 = false;
  for (const auto& m : r.measurements) {
    if (m.name == "max_rel_diff_closed_form_vs_adaptive") {
      saw_part2 = true;
      CHECK(m.passed);
    }
    if (m.name == "grid_violations") CHECK(m.value == 42.0);
  }
  CHECK(saw_part2);
}

TEST_CASE("an unconverged evaluation never passes silently") {
  SuiteConfig c;
  c.suite = Suite::disk_specialization;
  c.domain = "disk:0,0.5";
  c.field = "f_nu:2";
  c.samples = 2;
  c.quad.max_refinements = 1;
  c.quad.angular_nodes = 4;
  c.quad.radial_cells = 4;
  const auto r = run_suite(c);
  CHECK_FALSE(r.passed);
  bool flagged = false;
  for (const auto& m : r.measurements)
    if (m.name.rfind("unconverged", 0) == 0) flagged = flagged || (!m.passed && m.value > 0.0);
  CHECK(flagged);
}

TEST_CASE("invalid quadrature settings fail the suite") {
  SuiteConfig c;
  c.quad.radial_grading = 0.5;
  const auto r = run_suite(c);
  CHECK_FALSE(r.passed);
  REQUIRE(r.measurements.size() == 1);
  CHECK(r.measurements[0].note.find("invalid-argument") != std::string::npos);
}

TEST_CASE("resolution ladder halves node counts") {
  QuadratureSpec q;
  const auto l = resolution_ladder(q, 3);
  REQUIRE(l.size() == 3);
  CHECK(l[2].angular_nodes == q.angular_nodes);
  CHECK(l[1].angular_nodes == q.angular_nodes / 2);
  CHECK(l[0].boundary_nodes == q.boundary_nodes / 4);
  for (const auto& s : l) CHECK(s.max_refinements == 1);
}
