#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ksalg/expr.hpp"
#include "ksalg/nexpr.hpp"
#include "ksalg/search.hpp"

namespace ksalg {

/// Outcome of one randomized or exhaustive property run.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Each check is deterministic (fixed seeds) and self-contained.
CheckResult check_mean_ordering();
CheckResult check_geometric_limit();
CheckResult check_additive_mean_contracts();
CheckResult check_sorting_networks();
CheckResult check_quantile_circuits();
CheckResult check_second_largest();
CheckResult check_negation_elimination();
CheckResult check_classifier_semantics();
CheckResult check_expr_roundtrip(std::size_t count = 10000);

/// means, networks, quantiles, second-largest, rewrite, classifiers, roundtrip, all
std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(std::string_view name);

/// Random tree with up to max_nodes nodes, any alpha (including unusual
/// decimals) and input indices below width. Used for round-trip properties.
Expr random_test_expr(std::size_t width, std::size_t max_nodes, Rng& rng);

/// Random MIN-MAX-NEG-AVG tree with up to max_nodes nodes.
NExpr random_nexpr(std::size_t width, std::size_t max_nodes, Rng& rng);

}  // namespace ksalg
