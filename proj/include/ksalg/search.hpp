#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ksalg/classifier.hpp"
#include "ksalg/dataset.hpp"
#include "ksalg/expr.hpp"

namespace ksalg {

using Rng = std::mt19937_64;

enum class Fitness { Accuracy, AccuracyCoverage, Margin };

std::string to_string(Fitness f);
Fitness parse_fitness(std::string_view text);

/// -inf, -2, -1, 0, 1, 2, inf
std::vector<Alpha> default_palette();

struct SearchConfig {
  std::size_t population = 200;
  std::size_t generations = 50;
  std::size_t tournament = 4;
  double mutation = 0.2;
  double crossover = 0.7;
  std::size_t max_depth = 8;
  std::size_t max_size = 64;
  /// Strictly ascending; Mean nodes only ever use these exponents.
  std::vector<Alpha> palette = default_palette();
  ClassifierKind kind = ClassifierKind::Z;
  std::uint64_t seed = 1;
  Fitness fitness = Fitness::AccuracyCoverage;
  /// Restrict every candidate to homogeneity degree Zero (volume invariant).
  bool zero_degree_only = false;
  /// Worker threads for breeding and scoring; 0 picks the hardware count.
  /// Results do not depend on it.
  std::size_t threads = 0;

  /// Throws std::invalid_argument describing the first invalid field.
  void validate() const;
};

/// Sets one field from its textual key/value. Throws std::invalid_argument.
void set_config_value(SearchConfig& config, std::string_view key, std::string_view value);
/// Flat "key = value" lines; blank lines and '#' comments are ignored.
SearchConfig read_config(std::string_view text, SearchConfig base = {});
std::string write_config(const SearchConfig& config);

/// Random tree over inputs 0..width-1 no deeper than depth_budget and no larger
/// than size_budget. The root is a gate whenever depth_budget >= 1 and
/// size_budget >= 3; leaves are inputs nine times out of ten, otherwise zero.
Expr random_expr(std::size_t width, std::size_t depth_budget, std::span<const Alpha> palette, Rng& rng,
                 std::size_t size_budget = 64);

/// As random_expr, but the result has the requested homogeneity degree
/// (One or Zero) under homogeneity_degree().
Expr random_expr_of_degree(std::size_t width, std::size_t depth_budget, std::span<const Alpha> palette,
                           Degree degree, Rng& rng, std::size_t size_budget = 64);

/// Replaces a uniformly chosen subtree with a fresh random one, or moves a Mean
/// exponent to a neighbouring palette entry. The result stays within the
/// config's depth and size budgets (and degree Zero when required).
Expr mutate(const Expr& e, std::size_t width, const SearchConfig& config, Rng& rng);

/// Copies a uniformly chosen subtree of `b` over a uniformly chosen subtree of
/// `a`. Retries up to 10 times when the budgets would be exceeded, then
/// returns `a` unchanged.
Expr crossover(const Expr& a, const Expr& b, const SearchConfig& config, Rng& rng);

struct ScoredThreshold {
  double threshold = 0.0;
  double fitness = 0.0;
};

/// Best threshold for the given classifier kind. Z is fixed at 0; the others
/// sweep the midpoints between consecutive distinct values (plus one point
/// beyond each end), keeping the first candidate of maximal fitness. A+ only
/// considers thresholds <= 0. Margin fitness places the threshold with the
/// accuracy-coverage sweep and then scores the mean of tanh(y (c - f)).
ScoredThreshold fit_threshold(ClassifierKind kind, std::span<const double> values, std::span<const Label> labels,
                              Fitness fitness);

struct SearchResult {
  Classifier best;
  double best_fitness = 0.0;
  /// Best fitness of the initial population, then after each generation.
  std::vector<double> trace;
  std::size_t evaluations = 0;
};

/// Called once per generation (0 is the initial population) with every individual.
using GenerationObserver = std::function<void(std::size_t generation, const std::vector<Expr>& population)>;

/// Tournament-selection genetic programming with single-individual elitism.
/// Deterministic for a given dataset and config, whatever the thread count.
/// Throws std::invalid_argument for an invalid config or empty dataset.
SearchResult evolve(const Dataset& data, const SearchConfig& config, const GenerationObserver& observer = {});

}  // namespace ksalg
