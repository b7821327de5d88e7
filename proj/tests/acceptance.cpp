// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <CLI11.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ksalg/checks.hpp"
#include "ksalg/classifier.hpp"
#include "ksalg/search.hpp"
#include "ksalg/synthetic.hpp"

using namespace ksalg;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome from_check(const CheckResult& r) { return {r.passed, r.detail}; }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Outcome end_to_end_search() {
  const Dataset data = generate_synthetic(default_synthetic_params()).data;
  SearchConfig config;
  config.zero_degree_only = true;
  config.population = 200;
  config.generations = 50;

  const auto start = std::chrono::steady_clock::now();
  const SearchResult first = evolve(data, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const SearchResult second = evolve(data, config);

  const Metrics m = evaluate_on_dataset(first.best, data);
  const double accuracy = m.accuracy().value_or(0.0);
  bool identical = write_classifier(first.best) == write_classifier(second.best) &&
                   same_bits(first.best_fitness, second.best_fitness) &&
                   first.trace.size() == second.trace.size() && first.evaluations == second.evaluations;
  for (std::size_t i = 0; identical && i < first.trace.size(); ++i) identical = same_bits(first.trace[i], second.trace[i]);
  const bool zero = homogeneity_degree(first.best.expr()) == Degree::Zero;

  std::ostringstream d;
  d << "training accuracy " << accuracy << ", coverage " << m.coverage() << ", " << seconds << " s, rerun "
    << (identical ? "bit-identical" : "DIFFERS") << ", degree " << (zero ? "zero" : "NOT zero");
  return {accuracy >= 0.95 && seconds < 120.0 && identical && zero, d.str()};
}

Outcome roundtrip_and_cli_check() {
  const CheckResult rt = check_expr_roundtrip(10000);
  const std::string cmd = std::string("\"") + KSALG_CLI + "\" check all";
  std::string failing;
  int status = -1;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    char line[4096];
    while (std::fgets(line, sizeof line, pipe)) {
      if (std::strncmp(line, "FAIL ", 5) == 0) {
        std::string name(line + 5);
        failing += (failing.empty() ? "" : ", ") + name.substr(0, name.find(':'));
      }
    }
    status = pclose(pipe);
  }
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ostringstream d;
  d << rt.detail << (rt.passed ? " ok" : " FAILED") << "; check all exit " << code;
  if (!failing.empty()) d << " (failing: " << failing << ")";
  return {rt.passed && code == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mean ordering", [] { return from_check(check_mean_ordering()); }},
      {"geometric-mean limit", [] { return from_check(check_geometric_limit()); }},
      {"additive mean contracts", [] { return from_check(check_additive_mean_contracts()); }},
      {"sorting networks", [] { return from_check(check_sorting_networks()); }},
      {"quantile circuits", [] { return from_check(check_quantile_circuits()); }},
      {"depth-2 second largest", [] { return from_check(check_second_largest()); }},
      {"negation elimination", [] { return from_check(check_negation_elimination()); }},
      {"classifier semantics", [] { return from_check(check_classifier_semantics()); }},
      {"end-to-end search", end_to_end_search},
      {"round-trip and check all", roundtrip_and_cli_check},
  };
  if (selected.empty()) {
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  }

  bool all = true;
  for (int i : selected) {
    const auto& [name, run] = criteria[static_cast<std::size_t>(i - 1)];
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i << " (" << name << "): " << o.detail << '\n';
  }
  return all ? 0 : 1;
}
