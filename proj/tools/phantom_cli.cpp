#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "phantom/constructions.hpp"
#include "phantom/core.hpp"
#include "phantom/engine.hpp"
#include "phantom/io.hpp"
#include "phantom/search.hpp"
#include "phantom/utilitarian.hpp"
#include "phantom/verify.hpp"

namespace {

using nlohmann::json;
using namespace phantom;

void write_document(const json& doc, const std::string& output) {
  const std::string text = canonical_json(doc);
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw parse_error("cannot write " + output);
  out << text;
}

json three_type_to_json(const ThreeTypeProfile& t) {
  json doc;
  doc["x"] = t.x.shares();
  doc["singles"] = t.singles;
  json b = json::array();
  for (int j = 0; j < 3; ++j) b.push_back(t.doubles[j]);
  doc["doubles"] = std::move(b);
  doc["n"] = t.n;
  return doc;
}

int cmd_aggregate(const std::string& input, const std::string& mechanism,
                  double tol, const std::string& output) {
  const Profile v = load_profile(input);
  LossReport report = [&] {
    if (mechanism == "utilitarian") {
      return make_loss_report(v, utilitarian_outcome(v).outcome, std::nullopt);
    }
    if (mechanism == "uniform") {
      return make_loss_report(v, uniform_phantom_m2(v), std::nullopt);
    }
    const PhantomSystem y =
        system_from_descriptor(mechanism, static_cast<int>(v.voters()));
    AggregationResult res = aggregate(v, y, tol);
    return make_loss_report(v, std::move(res.outcome), res.tstar);
  }();
  json doc = loss_report_to_json(report);
  doc["mechanism"] = mechanism;
  doc["m"] = v.projects();
  doc["n"] = v.voters();
  write_document(doc, output);
  return 0;
}

int cmd_loss(const std::string& input, const std::string& outcome_text,
             const std::string& output) {
  const Profile v = load_profile(input);
  const Division outcome = division_from_string(outcome_text);
  LossReport report = make_loss_report(v, outcome, std::nullopt);
  json doc = loss_report_to_json(report);
  doc["m"] = v.projects();
  doc["n"] = v.voters();
  write_document(doc, output);
  return 0;
}

int cmd_construct(const std::string& tag, std::size_t m, std::size_t n,
                  const std::string& mechanism, const std::string& output) {
  ConstructionSpec spec{construction_from_tag(tag), m, n};
  json doc;
  doc["theorem"] = tag;
  doc["m"] = spec.m;
  doc["n"] = spec.n;
  const Construction built = build(spec);
  doc["predicted_loss"] = built.predicted_loss;
  doc["prediction_exact"] = built.prediction_is_exact;
  doc["derivation"] = built.derivation;
  doc["profile"] = profile_to_json(built.profile);
  if (!mechanism.empty()) {
    const ConstructionReport rep = verify_construction(spec, mechanism);
    doc["verified"] = {{"mechanism", mechanism},
                       {"actual_loss", rep.actual_loss},
                       {"outcome", rep.outcome.shares()},
                       {"passed", rep.passed}};
  }
  write_document(doc, output);
  return 0;
}

int cmd_search(const std::string& mechanism, long long budget,
               std::uint64_t seed, double falsify_threshold,
               const std::string& output) {
  json doc;
  doc["mechanism"] = mechanism;
  doc["budget"] = budget;
  doc["seed"] = seed;
  if (falsify_threshold > 0.0) {
    auto hit = falsify_upper_bound(mechanism, falsify_threshold, budget, seed);
    doc["threshold"] = falsify_threshold;
    doc["found"] = hit.has_value();
    if (hit) {
      doc["counterexample_loss"] = hit->loss;
      if (hit->three_type) {
        doc["counterexample"] = three_type_to_json(*hit->three_type);
      } else {
        doc["counterexample"] = profile_to_json(hit->profile);
      }
    }
    write_document(doc, output);
    return 0;
  }
  const SearchOutcome out = search_max_loss(mechanism, budget, seed);
  doc["best_relaxed_loss"] = out.best_relaxed;
  doc["witness_loss"] = out.witness_loss;
  doc["witness_voters"] = out.witness_voters;
  if (out.witness) doc["witness"] = three_type_to_json(*out.witness);
  json cells = json::array();
  for (const auto& cell : out.cells) {
    cells.push_back({{"pattern", cell.label},
                     {"status", cell.feasible ? "OPTIMAL-candidate"
                                              : "INFEASIBLE"},
                     {"best_lower_bound", cell.best_relaxed}});
  }
  doc["cells"] = std::move(cells);
  write_document(doc, output);
  return 0;
}

int cmd_verify(const std::string& suite, int trials, std::uint64_t seed,
               const std::string& output) {
  const SuiteReport rep = run_suite(suite, trials, seed);
  json doc;
  doc["suite"] = rep.suite;
  doc["trials"] = rep.trials;
  doc["violations"] = rep.violations;
  doc["passed"] = rep.passed;
  doc["summary"] = rep.summary;
  if (!rep.passed) doc["violation"] = rep.violation;
  write_document(doc, output);
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "moving-phantom budget aggregation: mechanisms, loss reports, "
      "worst-case constructions and search"};
  app.require_subcommand(1);

  std::string input, output, mechanism, outcome_text, tag, suite;
  double tol = kSimplexTol;
  double threshold = 0.0;
  std::size_t m = 3, n = 0;
  long long budget = 100000;
  int trials = 0;
  std::uint64_t seed = 0;

  auto* agg = app.add_subcommand("aggregate", "run a mechanism on a profile");
  agg->add_option("--input,-i", input, "profile file (.json or .csv)")
      ->required();
  agg->add_option("--mechanism", mechanism,
                  "uniform | im | pu | pu-prime | utilitarian")
      ->required();
  agg->add_option("--tol", tol, "feasibility sum tolerance");
  agg->add_option("--output,-o", output, "write the report here");

  auto* lss = app.add_subcommand("loss", "loss of a given outcome division");
  lss->add_option("--input,-i", input, "profile file")->required();
  lss->add_option("--outcome", outcome_text, "division, e.g. 0.5,0.25,0.25")
      ->required();
  lss->add_option("--output,-o", output, "write the report here");

  auto* con = app.add_subcommand("construct", "emit a lower-bound instance");
  con->add_option("tag", tag,
                  "truthful-lb | phantom-lb | im-lb | prop-lb | util-lb");
  con->add_option("--theorem", tag, "same as the positional tag");
  con->add_option("--m", m, "projects");
  con->add_option("--n", n, "voters (family default when omitted)");
  con->add_option("--mechanism", mechanism, "also verify against this");
  con->add_option("--output,-o", output, "write the document here");

  auto* sea = app.add_subcommand("search", "worst-case loss search");
  sea->add_option("family", mechanism, "pu | im | uniform");
  sea->add_option("--mechanism", mechanism, "same as the positional");
  sea->add_option("--budget", budget, "objective evaluation budget");
  sea->add_option("--seed", seed, "master seed");
  sea->add_option("--falsify", threshold,
                  "report the first witness with loss above this");
  sea->add_option("--output,-o", output, "write the report here");

  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("name", suite, "property suite name");
  ver->add_option("--suite", suite, "same as the positional");
  ver->add_option("--trials", trials, "trial count (0 = suite default)");
  ver->add_option("--seed", seed, "master seed");
  ver->add_option("--output,-o", output, "write the report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (agg->parsed()) return cmd_aggregate(input, mechanism, tol, output);
    if (lss->parsed()) return cmd_loss(input, outcome_text, output);
    if (con->parsed()) {
      if (tag.empty()) throw mechanism_mismatch("construct needs a theorem tag");
      if (n == 0) {
        // Family defaults: the instance sizes the families were stated at.
        switch (construction_from_tag(tag)) {
          case ConstructionKind::TruthfulLB: n = 2; break;
          case ConstructionKind::PhantomLB: n = 6; break;
          case ConstructionKind::ImLB: n = 20000; m = 3; break;
          case ConstructionKind::PropLB: n = m; break;
          case ConstructionKind::UtilLB: n = m + 1; break;
        }
      }
      if (construction_from_tag(tag) == ConstructionKind::ImLB) m = 3;
      return cmd_construct(tag, m, n, mechanism, output);
    }
    if (sea->parsed()) {
      if (mechanism.empty()) {
        throw mechanism_mismatch("search needs a mechanism");
      }
      return cmd_search(mechanism, budget, seed, threshold, output);
    }
    if (ver->parsed()) {
      if (suite.empty()) throw mechanism_mismatch("verify needs a suite name");
      return cmd_verify(suite, trials, seed, output);
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mechanism_mismatch& e) {
    std::cerr << "mechanism mismatch: " << e.what() << "\n";
    return 4;
  } catch (const invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
