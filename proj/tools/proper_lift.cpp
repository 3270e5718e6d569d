// proper-lift: run the embedding pipeline on bundled or file scenarios.
//
//   proper-lift list
//   proper-lift run --scenario <name|file> --out <dir> [--refine k] [--seed s] [--q x,y,...]
//
// Exit codes: 0 pass, 1 usage or I/O error, 2 construction/certification stage failed,
// 3 verification failed.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proper_lift/errors.hpp"
#include "proper_lift/pipeline.hpp"

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError("--q", "bad coordinate '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw CLI::ValidationError("--q", "empty point");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proper isometric lift pipeline"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  auto* run = app.add_subcommand("run", "Run a scenario and write reports");
  std::string scenario_arg, out_dir;
  int refine = -1;
  std::uint64_t seed = 0;
  std::vector<std::string> queries;
  double r_ball = -1.0, tube_margin = -1.0;
  int max_passes = -1;
  run->add_option("--scenario", scenario_arg, "Bundled name or JSON scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--refine", refine, "Midpoint refinement levels")->check(CLI::NonNegativeNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Optimizer seed");
  run->add_option("--q", queries, "Query point, comma separated (repeatable)");
  run->add_option("--r-ball", r_ball, "Override r_ball");
  run->add_option("--tube-margin", tube_margin, "Override tube_margin");
  run->add_option("--max-passes", max_passes, "Override the smoothing pass limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*list) {
    for (const auto& name : proper_lift::list_scenarios()) std::cout << name << '\n';
    return 0;
  }

  proper_lift::Scenario scenario;
  try {
    scenario = proper_lift::load_scenario(scenario_arg);
    if (refine >= 0) scenario.refine = refine;
    if (*seed_opt) scenario.optimizer.seed = seed;
    if (r_ball >= 0.0) scenario.smoothing.r_ball = r_ball;
    if (tube_margin >= 0.0) scenario.smoothing.tube_margin = tube_margin;
    if (max_passes >= 0) scenario.smoothing.max_passes = max_passes;
    for (const auto& q : queries) scenario.queries.push_back(parse_point(q));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  proper_lift::RunReport report;
  try {
    report = proper_lift::run_scenario(scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    proper_lift::emit_plots(report, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& st : report.stages) {
    const char* status = st.status == proper_lift::StageStatus::Passed   ? "ok"
                         : st.status == proper_lift::StageStatus::Failed ? "FAILED"
                                                                         : "skipped";
    std::cout << st.index << ' ' << st.name << ": " << status;
    if (!st.message.empty()) std::cout << " (" << st.message << ')';
    std::cout << '\n';
  }
  std::cout << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.exit_code();
}
