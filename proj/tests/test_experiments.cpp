#include "doctest.h"

#include "twistconj/experiments.hpp"

using namespace twistconj;

TEST_CASE("experiment reports: status and exit codes") {
  Report r = run_verify_relations("gf(5)[t]", 4, 200, 0);
  CHECK(r.passed());
  CHECK(r.exit_code() == 0);
  CHECK(r.to_json()["failed"] == 0);
  CHECK_THROWS_AS(run_verify_relations("z[1/6]", 1, 10, 0), UsageError);
  CHECK_THROWS_AS(run_verify_relations("q(5)", 3, 10, 0), UsageError);
}

TEST_CASE("experiment reports are reproducible for a fixed seed") {
  ReidemeisterSpec s{"gf(5)[t,t^-1]", "b2plus", "phiB(2)", 3, 1, 4};
  s.seed = 7;
  auto a = run_reidemeister(s).to_json(), b = run_reidemeister(s).to_json();
  a.erase("seconds");
  b.erase("seconds");
  CHECK(a == b);
  CHECK(a["count"] == 4);
}

TEST_CASE("reidemeister expectations drive the status") {
  ReidemeisterSpec s{"gf(4)[t,t^-1]", "aff-plus", "phiA(w)", 4, 2, 2};
  CHECK(run_reidemeister(s).passed());
  s.expect = 3;
  CHECK(run_reidemeister(s).exit_code() == 1);
  ReidemeisterSpec open{"gf(3)[t,t^-1]", "b2plus", "phiB(2)", 3, 1, 4};
  CHECK(run_reidemeister(open).exit_code() == 3);
  ReidemeisterSpec fin{"gf(3)", "b2", "flipb"};
  CHECK(run_reidemeister(fin).data["count"] == 4);
  ReidemeisterSpec add{"gf(2)[t]", "u2", "mul(1)*phiP(t^2+t+1)", 6, 0, 1};
  CHECK(run_reidemeister(add).passed());
  ReidemeisterSpec bad{"z[t]", "b3", "flipb"};
  CHECK_THROWS_AS(run_reidemeister(bad), UsageError);
}

TEST_CASE("case analysis, family and certificates") {
  auto ca = run_case_analysis("gf(2)", "t+1", 3, std::string("exception"));
  CHECK(ca.passed());
  CHECK(ca.data["exceptions"].size() == 2);
  CHECK(run_case_analysis("gf(3)", "t^2+1", 3, std::string("eigenvalue-one")).passed());
  CHECK_THROWS_AS(run_case_analysis("gf(2)", "t", 3, std::nullopt), UsageError);
  CHECK_THROWS_AS(run_case_analysis("gf(2)", "t+1", 3, std::string("maybe")), UsageError);

  CHECK(run_distinct_family(2, "t->t+1", 2, 16).passed());
  CHECK_THROWS_AS(run_distinct_family(3, "t->t", 2, std::nullopt), UsageError);
  CHECK_THROWS_AS(run_distinct_family(4, "t->t+1", 2, std::nullopt), UsageError);
  CHECK_THROWS_AS(run_distinct_family(2, "t->t+1", 2, 3), UsageError);

  CHECK(run_center("gf(3)", "b2").data["center_size"] == 2);
  CHECK(run_center("gf(2)", "u4").data["center_size"] == 2);
  CHECK(run_iso_aff("gf(3)", 3).passed());
  CHECK(run_unit_equation("6").passed());
}

TEST_CASE("catalogs are well formed") {
  CHECK(additive_catalog().size() == 20);
  for (auto& e : additive_catalog()) {
    const Ring& R = Ring::parse(e.ring);
    auto W = LinearWindow::make(R, e.lo, e.hi, e.copies);
    CHECK(window_invariant(parse_additive_auto(e.word, R), W));
  }
  for (auto& e : automorphism_catalog()) {
    const Ring& R = Ring::parse(e.ring);
    CHECK_NOTHROW(parse_auto(e.word, GroupDesc::parse(e.group, R)));
  }
}
