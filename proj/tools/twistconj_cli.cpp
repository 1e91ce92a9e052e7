#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "twistconj/experiments.hpp"

using namespace twistconj;
using nlohmann::json;

namespace {

void write_atomic(const std::string& path, const json& j) {
  namespace fs = std::filesystem;
  fs::path target(path), tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, target);
}

const char* status_word(const Report& r) {
  return r.status == Report::Status::Pass ? "PASS" : r.status == Report::Status::Mismatch ? "MISMATCH" : "UNDECIDED";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted conjugacy experiments on triangular matrix groups"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read flags from a TOML/INI file");
  uint64_t seed = 0;
  std::string json_path;
  app.add_option("--seed", seed, "sampling seed (TWISTCONJ_SEED overrides)");
  app.add_option("--json", json_path, "write the report to this file");

  std::string ring, group, auto_word, f, alpha, w;
  unsigned n = 4;
  size_t samples = 1000;
  long exp_window = 6, diag_window = 3, box = 3, p = 2, imax = 2;
  std::optional<long> expect_count, window;
  std::optional<std::string> expect_verdict;
  bool paper_suite = false;

  auto* vr = app.add_subcommand("verify-relations", "elementary matrix relations on random samples");
  vr->add_option("--ring", ring)->required();
  vr->add_option("--n", n);
  vr->add_option("--samples", samples);

  auto* rd = app.add_subcommand("reidemeister", "twisted conjugacy classes of a catalog automorphism");
  rd->add_option("--ring", ring)->required();
  rd->add_option("--group", group)->required();
  rd->add_option("--auto", auto_word)->required();
  rd->add_option("--exp-window", exp_window);
  rd->add_option("--diag-window", diag_window);
  rd->add_option("--samples", samples);
  rd->add_option("--expect", expect_count);

  auto* ca = app.add_subcommand("case-analysis", "search t^c f^d = sum f_k t^(ak) f^(bk)");
  ca->add_option("--ring", ring)->required();
  ca->add_option("--f", f)->required();
  ca->add_option("--box", box);
  ca->add_option("--expect", expect_verdict, "eigenvalue-one or exception");

  auto* df = app.add_subcommand("distinct-family", "pairwise verdicts for t^(p(p-1)i+p-1)");
  df->add_option("--p", p)->required();
  df->add_option("--alpha", alpha)->required();
  df->add_option("--imax", imax);
  df->add_option("--window", window);

  auto* ce = app.add_subcommand("center", "center by enumeration against the closed form");
  ce->add_option("--ring", ring)->required();
  ce->add_option("--group", group)->required();

  auto* ia = app.add_subcommand("iso-aff", "Aff = PB2 and W_n -> Aff");
  ia->add_option("--ring", ring)->required();
  ia->add_option("--n", n);

  auto* ue = app.add_subcommand("unit-equation", "diagonal unit equation over Z[1/w]");
  ue->add_option("--w", w)->required();

  auto* all = app.add_subcommand("all", "run every acceptance experiment");
  all->add_flag("--paper-suite", paper_suite)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (const char* env = std::getenv("TWISTCONJ_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: TWISTCONJ_SEED must be a non-negative integer\n";
      return 2;
    }
  }

  try {
    if (all->parsed()) {
      std::vector<Report> reps = run_paper_suite(seed);
      json out = json::array();
      int code = 0;
      for (auto& r : reps) {
        std::cout << status_word(r) << ' ' << r.experiment << " (" << r.seconds << " s, seed " << r.seed
                  << "): " << r.summary << '\n';
        out.push_back(r.to_json());
        if (!r.passed()) code = std::max(code, r.exit_code());
      }
      if (!json_path.empty()) write_atomic(json_path, out);
      return code;
    }
    Report r;
    if (vr->parsed()) {
      r = run_verify_relations(ring, n, samples, seed);
    } else if (rd->parsed()) {
      ReidemeisterSpec s;
      s.ring = ring;
      s.group = group;
      s.auto_word = auto_word;
      s.exp_window = exp_window;
      s.diag_window = diag_window;
      s.expect = expect_count;
      s.samples = rd->count("--samples") ? samples : 20;
      s.seed = seed;
      r = run_reidemeister(s);
    } else if (ca->parsed()) {
      r = run_case_analysis(ring, f, box, expect_verdict);
    } else if (df->parsed()) {
      r = run_distinct_family(p, alpha, imax, window);
    } else if (ce->parsed()) {
      r = run_center(ring, group);
    } else if (ia->parsed()) {
      r = run_iso_aff(ring, n);
    } else {
      r = run_unit_equation(w);
    }
    r.seed = seed;
    std::cout << r.to_json().dump(2) << '\n';
    std::cerr << status_word(r) << ' ' << r.experiment << " (seed " << seed << "): " << r.summary << '\n';
    if (!json_path.empty()) write_atomic(json_path, r.to_json());
    return r.exit_code();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const MathError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
