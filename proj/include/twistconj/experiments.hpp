#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistconj/twisted.hpp"

namespace twistconj {

// Bad flags or inputs rejected before any computation (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  enum class Status { Pass, Mismatch, Undecided };
  std::string experiment;
  Status status = Status::Pass;
  std::string summary;
  nlohmann::json data = nlohmann::json::object();
  uint64_t seed = 0;
  double seconds = 0;

  int exit_code() const { return status == Status::Pass ? 0 : status == Status::Mismatch ? 1 : 3; }
  bool passed() const { return status == Status::Pass; }
  nlohmann::json to_json() const;
};

// Catalog automorphisms by group, and additive ones by window.
struct CatalogEntry {
  const char* ring;
  const char* group;
  const char* word;
};
const std::vector<CatalogEntry>& automorphism_catalog();
struct AdditiveCatalogEntry {
  const char* ring;
  const char* word;
  long lo, hi;
  unsigned copies;
};
const std::vector<AdditiveCatalogEntry>& additive_catalog();

// Relation suite: additivity, commutator and diagonal-conjugation relations
// of elementary matrices, inverses. Returns the number of failed checks and
// the first failure.
struct RelationResult {
  size_t checked = 0, failed = 0;
  std::string first_failure;
};
RelationResult relation_suite(const Ring& R, unsigned n, size_t samples, Rng& rng, const RandomOpts& o = {});

Report run_verify_relations(const std::string& ring, unsigned n, size_t samples, uint64_t seed);

struct ReidemeisterSpec {
  std::string ring, group, auto_word;
  long exp_window = 6, diag_window = 3;
  std::optional<long> expect;
  size_t samples = 20;            // random elements per diagonal pair
  size_t enumerate_budget = 20000;
  uint64_t seed = 0;
};
Report run_reidemeister(const ReidemeisterSpec& spec);

// expect: "eigenvalue-one" or "exception"
Report run_case_analysis(const std::string& ring, const std::string& f, long box,
                         const std::optional<std::string>& expect);
Report run_distinct_family(long p, const std::string& alpha, long imax, std::optional<long> window);
Report run_center(const std::string& ring, const std::string& group);
Report run_iso_aff(const std::string& ring, unsigned n);
Report run_unit_equation(const std::string& w);

Report run_criterion(int k, uint64_t seed);
std::vector<Report> run_paper_suite(uint64_t seed);

}  // namespace twistconj
