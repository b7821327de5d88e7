#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ksalg/expr_text.hpp"
#include "ksalg/search.hpp"
#include "ksalg/synthetic.hpp"

using namespace ksalg;

namespace {

bool alphas_in_palette(const Expr& e, const std::vector<Alpha>& palette) {
  if (e.op() == Op::Mean && std::find(palette.begin(), palette.end(), e.alpha()) == palette.end()) return false;
  return std::all_of(e.children().begin(), e.children().end(),
                     [&](const Expr& c) { return alphas_in_palette(c, palette); });
}

bool fits(const Expr& e, std::size_t width, const SearchConfig& config) {
  auto supp = support(e);
  return depth(e) <= config.max_depth && size(e) <= config.max_size && (supp.empty() || *supp.rbegin() < width) &&
         alphas_in_palette(e, config.palette);
}

std::string label_of(const Expr& e) {
  switch (e.op()) {
    case Op::Zero:
      return "0";
    case Op::Input:
      return "s" + std::to_string(e.index());
    case Op::Mean:
      return "mean " + to_string(e.alpha()) + "/" + std::to_string(e.children().size());
    default:
      return std::to_string(static_cast<int>(e.op())) + "/" + std::to_string(e.children().size());
  }
}

void labels(const Expr& e, std::set<std::string>& out) {
  out.insert(label_of(e));
  for (const auto& c : e.children()) labels(c, out);
}

// Class1 iff s0 < s1, with a clear gap.
Dataset separable_by_diff(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-5, 5), gap(0.5, 3);
  Dataset d(2);
  for (std::size_t i = 0; i < per_class; ++i) {
    const double base = u(rng);
    d.add(std::vector<double>{base, base + gap(rng)}, Label::Class1);
    const double other = u(rng);
    d.add(std::vector<double>{other + gap(rng), other}, Label::Class2);
  }
  return d;
}

}  // namespace

TEST_CASE("random_expr respects budgets") {
  Rng rng(71);
  const auto palette = default_palette();
  for (int i = 0; i < 100; ++i) CHECK(random_expr(5, 0, palette, rng).is_leaf());
  SearchConfig config;
  std::size_t zeros = 0, leaves = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 8);
    const Expr e = random_expr(6, d, palette, rng, 64);
    REQUIRE(fits(e, 6, config));
    CHECK(depth(e) <= d);
    CHECK_FALSE(e.is_leaf());
    std::set<std::string> seen;
    labels(e, seen);
    zeros += seen.count("0");
    leaves += 1;
  }
  CHECK(zeros < leaves);
  Rng again(99), twice(99);
  CHECK(random_expr(8, 6, palette, again) == random_expr(8, 6, palette, twice));
  CHECK(size(random_expr(8, 8, palette, rng, 5)) <= 5);
}

TEST_CASE("leaf distribution favours inputs nine to one") {
  Rng rng(72);
  std::size_t zero = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) zero += random_expr(4, 0, default_palette(), rng).op() == Op::Zero ? 1 : 0;
  CHECK(static_cast<double>(zero) / n == doctest::Approx(0.1).epsilon(0.15));
}

TEST_CASE("typed generation yields the requested degree") {
  Rng rng(73);
  for (int i = 0; i < 2000; ++i) {
    CHECK(homogeneity_degree(random_expr_of_degree(5, 1 + i % 6, default_palette(), Degree::Zero, rng)) ==
          Degree::Zero);
    CHECK(homogeneity_degree(random_expr_of_degree(5, i % 6, default_palette(), Degree::One, rng)) == Degree::One);
  }
}

TEST_CASE("mutation and crossover stay well formed") {
  Rng rng(74);
  SearchConfig config;
  config.max_depth = 6;
  config.max_size = 30;
  for (int i = 0; i < 3000; ++i) {
    const Expr a = random_expr(5, 1 + i % 5, config.palette, rng, config.max_size);
    const Expr b = random_expr(5, 1 + (i / 5) % 5, config.palette, rng, config.max_size);
    const Expr m = mutate(a, 5, config, rng);
    const Expr c = crossover(a, b, config, rng);
    REQUIRE(fits(m, 5, config));
    REQUIRE(fits(c, 5, config));
    CHECK(parse_expr(print_expr(m)) == m);
    CHECK(parse_expr(print_expr(c)) == c);
  }
  const Expr leaf = Expr::input(2);
  for (int i = 0; i < 200; ++i) CHECK(fits(mutate(leaf, 5, config, rng), 5, config));
}

TEST_CASE("self-crossover only reuses existing nodes") {
  Rng rng(75);
  SearchConfig config;
  for (int i = 0; i < 1000; ++i) {
    const Expr a = random_expr(5, 4, config.palette, rng, 40);
    std::set<std::string> before, after;
    labels(a, before);
    labels(crossover(a, a, config, rng), after);
    CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
  }
}

TEST_CASE("operators keep degree zero under the constraint") {
  Rng rng(76);
  SearchConfig config;
  config.zero_degree_only = true;
  for (int i = 0; i < 2000; ++i) {
    const Expr a = random_expr_of_degree(6, 1 + i % 5, config.palette, Degree::Zero, rng, 40);
    const Expr b = random_expr_of_degree(6, 1 + i % 4, config.palette, Degree::Zero, rng, 40);
    CHECK(homogeneity_degree(mutate(a, 6, config, rng)) == Degree::Zero);
    CHECK(homogeneity_degree(crossover(a, b, config, rng)) == Degree::Zero);
  }
}

TEST_CASE("alpha mutation moves to a neighbouring palette entry") {
  Rng rng(77);
  SearchConfig config;
  const Expr e = Expr::mean(Alpha::finite(0), {Expr::input(0), Expr::input(1)});
  std::set<std::string> seen;
  for (int i = 0; i < 500; ++i) {
    const Expr m = mutate(e, 2, config, rng);
    if (m.op() == Op::Mean && !(m.alpha() == e.alpha())) seen.insert(to_string(m.alpha()));
  }
  CHECK(seen.count("-1") == 1);
  CHECK(seen.count("1") == 1);
}

TEST_CASE("threshold sweep") {
  const std::vector<double> values{-3, -2, -1, 1, 2, 3};
  const std::vector<Label> labels{Label::Class1, Label::Class1, Label::Class1,
                                  Label::Class2, Label::Class2, Label::Class2};
  auto z = fit_threshold(ClassifierKind::Z, values, labels, Fitness::Accuracy);
  CHECK(z.threshold == 0.0);
  CHECK(z.fitness == 1.0);

  const std::vector<double> shifted{1, 2, 3, 5, 6, 7};
  auto b = fit_threshold(ClassifierKind::B, shifted, labels, Fitness::AccuracyCoverage);
  CHECK(b.threshold == 4.0);
  CHECK(b.fitness == 1.0);
  auto zs = fit_threshold(ClassifierKind::Z, shifted, labels, Fitness::AccuracyCoverage);
  CHECK(zs.fitness == doctest::Approx(0.5));

  // A decides only below c: best accuracy-coverage is all of Class1 (3/6).
  auto a = fit_threshold(ClassifierKind::A, shifted, labels, Fitness::AccuracyCoverage);
  CHECK(a.threshold == 4.0);
  CHECK(a.fitness == doctest::Approx(0.5));
  // A+ cannot go above 0, where nothing is decided.
  auto ap = fit_threshold(ClassifierKind::APlus, shifted, labels, Fitness::AccuracyCoverage);
  CHECK(ap.threshold <= 0.0);
  CHECK(ap.fitness == 0.0);
  auto ap2 = fit_threshold(ClassifierKind::APlus, values, labels, Fitness::Accuracy);
  CHECK(ap2.threshold <= 0.0);
  CHECK(ap2.fitness == 1.0);

  auto m = fit_threshold(ClassifierKind::B, shifted, labels, Fitness::Margin);
  CHECK(m.threshold == 4.0);
  const double expected = (std::tanh(3) + std::tanh(2) + std::tanh(1)) * 2 / 6;
  CHECK(m.fitness == doctest::Approx(expected));
  CHECK_THROWS_AS(fit_threshold(ClassifierKind::B, {}, {}, Fitness::Accuracy), std::invalid_argument);
}

TEST_CASE("evolve finds a planted separator") {
  const Dataset data = separable_by_diff(100, 5);
  SearchConfig config;
  config.population = 100;
  config.generations = 30;
  config.seed = 7;
  const auto result = evolve(data, config);
  CHECK(result.best_fitness == 1.0);
  const Metrics m = evaluate_on_dataset(result.best, data);
  CHECK(m.accuracy() == 1.0);
  CHECK(m.coverage() == 1.0);
  CHECK(result.trace.size() == 31);
  CHECK(std::is_sorted(result.trace.begin(), result.trace.end()));
  CHECK(result.evaluations == 100 + 30 * 99);
}

TEST_CASE("evolve is deterministic and thread-count independent") {
  const Dataset data = separable_by_diff(50, 9);
  SearchConfig config;
  config.population = 60;
  config.generations = 10;
  config.kind = ClassifierKind::B;
  config.seed = 3;
  config.threads = 1;
  const auto serial = evolve(data, config);
  config.threads = 4;
  const auto parallel = evolve(data, config);
  const auto again = evolve(data, config);
  for (const auto* r : {&parallel, &again}) {
    CHECK(write_classifier(r->best) == write_classifier(serial.best));
    CHECK(r->trace == serial.trace);
    CHECK(r->evaluations == serial.evaluations);
  }
}

TEST_CASE("zero generations returns the best initial individual") {
  const Dataset data = separable_by_diff(30, 11);
  SearchConfig config;
  config.population = 40;
  config.generations = 0;
  double best_initial = -1;
  const auto result = evolve(data, config, [&](std::size_t g, const std::vector<Expr>& pop) {
    CHECK(g == 0);
    for (const auto& e : pop) {
      std::vector<double> values;
      for (std::size_t i = 0; i < data.size(); ++i) values.push_back(evaluate(e, data.frame(i)));
      best_initial = std::max(best_initial, fit_threshold(config.kind, values, data.labels(), config.fitness).fitness);
    }
  });
  CHECK(result.trace.size() == 1);
  CHECK(result.best_fitness == best_initial);
}

TEST_CASE("every generation is closed under the budgets") {
  const Dataset data = separable_by_diff(30, 13);
  SearchConfig config;
  config.population = 50;
  config.generations = 15;
  config.max_depth = 5;
  config.max_size = 20;
  config.zero_degree_only = true;
  std::size_t generations_seen = 0;
  evolve(data, config, [&](std::size_t, const std::vector<Expr>& pop) {
    ++generations_seen;
    CHECK(pop.size() == 50);
    for (const auto& e : pop) {
      REQUIRE(fits(e, 2, config));
      REQUIRE(homogeneity_degree(e) == Degree::Zero);
    }
  });
  CHECK(generations_seen == 16);
}

TEST_CASE("config validation and text format") {
  SearchConfig config;
  CHECK_NOTHROW(config.validate());
  config.mutation = 1.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.palette.clear();
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  CHECK_THROWS_AS(evolve(Dataset(2), SearchConfig{}), std::invalid_argument);

  SearchConfig custom;
  custom.population = 17;
  custom.palette = {Alpha::finite(-0.5), Alpha::pos_inf()};
  custom.kind = ClassifierKind::APlus;
  custom.fitness = Fitness::Margin;
  custom.zero_degree_only = true;
  custom.seed = 123456789012345ULL;
  const SearchConfig back = read_config(write_config(custom));
  CHECK(write_config(back) == write_config(custom));
  CHECK(back.palette == custom.palette);

  const SearchConfig parsed = read_config("# comment\npopulation = 30\n\npalette = inf, 0, -inf\nkind = B\n");
  CHECK(parsed.population == 30);
  CHECK(parsed.palette == std::vector<Alpha>{Alpha::neg_inf(), Alpha::finite(0), Alpha::pos_inf()});
  CHECK(parsed.kind == ClassifierKind::B);
  CHECK_THROWS_AS(read_config("populaton = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_config("population = -3\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_config("population 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_config("fitness = best\n"), std::invalid_argument);
}

TEST_CASE("synthetic data") {
  SyntheticParams p = default_synthetic_params();
  p.sigma = 0.0;
  p.shift_min = p.shift_max = 0.0;
  p.frames_per_class = 5;
  const auto exact = generate_synthetic(p);
  CHECK(exact.data.size() == 10);
  for (std::size_t i = 0; i < exact.data.size(); ++i) {
    const auto& profile = p.profiles[exact.data.label(i) == Label::Class1 ? 0 : 1];
    CHECK(std::equal(profile.begin(), profile.end(), exact.data.frame(i).begin()));
  }

  SyntheticParams noisy = default_synthetic_params();
  noisy.frames_per_class = 50;
  SyntheticParams still = noisy;
  still.shift_min = still.shift_max = 0.0;
  const auto shifted = generate_synthetic(noisy);
  const auto unshifted = generate_synthetic(still);
  for (std::size_t i = 0; i < shifted.data.size(); ++i) {
    CHECK(shifted.shifts[i] >= -5.0);
    CHECK(shifted.shifts[i] <= 5.0);
    for (std::size_t c = 0; c < 8; ++c) {
      CHECK(std::abs(shifted.data.frame(i)[c] - shifted.shifts[i] - unshifted.data.frame(i)[c]) < 1e-12);
    }
  }
  CHECK(generate_synthetic(noisy).data == shifted.data);
  SyntheticParams bad = noisy;
  bad.width = 1;
  CHECK_THROWS_AS(generate_synthetic(bad), std::invalid_argument);
}

TEST_CASE("default profiles are separated by a degree-zero difference of means") {
  SyntheticParams p = default_synthetic_params();
  p.frames_per_class = 5000;
  const auto data = generate_synthetic(p).data;
  const Expr f = Expr::diff(Expr::mean(Alpha::finite(0), {Expr::input(2), Expr::input(6)}),
                            Expr::mean(Alpha::finite(0), {Expr::input(1), Expr::input(4)}));
  CHECK(homogeneity_degree(f) == Degree::Zero);
  const Metrics m = evaluate_on_dataset(Classifier::z(f), data);
  CHECK(m.total == 10000);
  CHECK(*m.accuracy() >= 0.99);
  CHECK(m.coverage() == 1.0);
}

TEST_CASE("degree-zero search is robust to volume shifts") {
  SyntheticParams p = default_synthetic_params();
  p.frames_per_class = 150;
  SyntheticParams flat = p;
  flat.shift_min = flat.shift_max = 0.0;
  SearchConfig config;
  config.population = 80;
  config.generations = 15;
  config.zero_degree_only = true;
  config.seed = 5;
  const double with_shift = evolve(generate_synthetic(p).data, config).best_fitness;
  const double without = evolve(generate_synthetic(flat).data, config).best_fitness;
  CHECK(std::abs(with_shift - without) <= 0.02);
}
