#include "ksalg/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ksalg/expr_text.hpp"

namespace ksalg {

std::string to_string(Fitness f) {
  switch (f) {
    case Fitness::Accuracy:
      return "accuracy";
    case Fitness::AccuracyCoverage:
      return "accuracy_coverage";
    case Fitness::Margin:
      return "margin";
  }
  return "?";
}

Fitness parse_fitness(std::string_view text) {
  if (text == "accuracy") return Fitness::Accuracy;
  if (text == "accuracy_coverage") return Fitness::AccuracyCoverage;
  if (text == "margin") return Fitness::Margin;
  throw std::invalid_argument("unknown fitness '" + std::string(text) + "'");
}

std::vector<Alpha> default_palette() {
  return {Alpha::neg_inf(), Alpha::finite(-2), Alpha::finite(-1), Alpha::finite(0),
          Alpha::finite(1), Alpha::finite(2),  Alpha::pos_inf()};
}

void SearchConfig::validate() const {
  if (population < 1) throw std::invalid_argument("population must be at least 1");
  if (tournament < 1) throw std::invalid_argument("tournament size must be at least 1");
  if (!(mutation >= 0.0 && mutation <= 1.0)) throw std::invalid_argument("mutation probability outside [0, 1]");
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw std::invalid_argument("crossover probability outside [0, 1]");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  if (max_size < 3) throw std::invalid_argument("max_size must be at least 3");
  if (palette.empty()) throw std::invalid_argument("alpha palette is empty");
  for (std::size_t i = 1; i < palette.size(); ++i) {
    if (!(palette[i - 1] < palette[i])) throw std::invalid_argument("alpha palette must be strictly ascending");
  }
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  std::istringstream in{std::string(text)};
  T value{};
  bool ok = !text.empty() && !(std::is_unsigned_v<T> && text.front() == '-');
  if (!ok || !(in >> value) || !in.eof()) {
    throw std::invalid_argument("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

}  // namespace

void set_config_value(SearchConfig& config, std::string_view key, std::string_view value) {
  if (key == "population") {
    config.population = parse_value<std::size_t>(key, value);
  } else if (key == "generations") {
    config.generations = parse_value<std::size_t>(key, value);
  } else if (key == "tournament") {
    config.tournament = parse_value<std::size_t>(key, value);
  } else if (key == "mutation") {
    config.mutation = parse_value<double>(key, value);
  } else if (key == "crossover") {
    config.crossover = parse_value<double>(key, value);
  } else if (key == "max_depth") {
    config.max_depth = parse_value<std::size_t>(key, value);
  } else if (key == "max_size") {
    config.max_size = parse_value<std::size_t>(key, value);
  } else if (key == "palette") {
    std::vector<Alpha> palette;
    std::string_view rest = value;
    while (!rest.empty()) {
      auto comma = rest.find(',');
      palette.push_back(parse_alpha(trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    std::sort(palette.begin(), palette.end());
    palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
    config.palette = std::move(palette);
  } else if (key == "kind") {
    config.kind = parse_classifier_kind(value);
  } else if (key == "seed") {
    config.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "fitness") {
    config.fitness = parse_fitness(value);
  } else if (key == "zero_degree") {
    if (value == "true" || value == "1") {
      config.zero_degree_only = true;
    } else if (value == "false" || value == "0") {
      config.zero_degree_only = false;
    } else {
      throw std::invalid_argument("zero_degree must be true or false");
    }
  } else if (key == "threads") {
    config.threads = parse_value<std::size_t>(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

SearchConfig read_config(std::string_view text, SearchConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(base, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

std::string write_config(const SearchConfig& c) {
  std::ostringstream out;
  out << "population = " << c.population << '\n'
      << "generations = " << c.generations << '\n'
      << "tournament = " << c.tournament << '\n'
      << "mutation = " << format_double(c.mutation) << '\n'
      << "crossover = " << format_double(c.crossover) << '\n'
      << "max_depth = " << c.max_depth << '\n'
      << "max_size = " << c.max_size << '\n'
      << "palette = ";
  for (std::size_t i = 0; i < c.palette.size(); ++i) out << (i ? ", " : "") << to_string(c.palette[i]);
  out << '\n'
      << "kind = " << to_string(c.kind) << '\n'
      << "seed = " << c.seed << '\n'
      << "fitness = " << to_string(c.fitness) << '\n'
      << "zero_degree = " << (c.zero_degree_only ? "true" : "false") << '\n'
      << "threads = " << c.threads << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Tree generation

namespace {

constexpr double kLeafProbability = 0.3;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

class Grower {
 public:
  Grower(std::size_t width, std::span<const Alpha> palette, Rng& rng) : width_(width), palette_(palette), rng_(rng) {}

  Expr any(std::size_t depth, std::size_t budget, bool root) {
    if (leaf_here(depth, budget, root)) {
      return chance(rng_, 0.1) ? Expr::zero() : Expr::input(pick(rng_, width_));
    }
    std::vector<Op> ops = {Op::Min, Op::Max, Op::Diff};
    if (!palette_.empty()) ops.push_back(Op::Mean);
    const Op op = ops[pick(rng_, ops.size())];
    return build(op, depth, budget, [&](std::size_t, std::size_t d, std::size_t b) { return any(d, b, false); });
  }

  Expr typed(Degree degree, std::size_t depth, std::size_t budget, bool root) {
    if (leaf_here(depth, budget, root)) {
      return degree == Degree::One ? Expr::input(pick(rng_, width_)) : Expr::zero();
    }
    std::vector<Op> ops = {Op::Min, Op::Max};
    if (!palette_.empty()) ops.push_back(Op::Mean);
    Op op;
    Degree child_degree = degree;
    if (degree == Degree::Zero && chance(rng_, 0.5)) {
      op = Op::Diff;
      child_degree = chance(rng_, 0.85) ? Degree::One : Degree::Zero;
    } else {
      op = ops[pick(rng_, ops.size())];
    }
    return build(op, depth, budget,
                 [&](std::size_t, std::size_t d, std::size_t b) { return typed(child_degree, d, b, false); });
  }

 private:
  bool leaf_here(std::size_t depth, std::size_t budget, bool root) {
    if (depth == 0 || budget < 3) return true;
    return !root && chance(rng_, kLeafProbability);
  }

  template <typename ChildFn>
  Expr build(Op op, std::size_t depth, std::size_t budget, ChildFn&& child) {
    std::size_t arity = 2;
    if (op != Op::Diff && budget >= 4 && chance(rng_, 0.3)) arity = 3;
    Alpha alpha;
    if (op == Op::Mean) alpha = palette_[pick(rng_, palette_.size())];
    std::size_t remaining = budget - 1;
    std::vector<Expr> kids;
    for (std::size_t k = 0; k < arity; ++k) {
      const std::size_t left = arity - k;
      // Every later sibling needs at least one node.
      const std::size_t share = left == 1 ? remaining : std::max<std::size_t>(1, remaining / left);
      kids.push_back(child(k, depth - 1, std::min(share, remaining - (left - 1))));
      remaining -= size(kids.back());
    }
    return Expr::gate(op, std::move(kids), alpha);
  }

  std::size_t width_;
  std::span<const Alpha> palette_;
  Rng& rng_;
};

struct Located {
  const Expr* node;
  std::size_t level;
};

void collect(const Expr& e, std::size_t level, std::vector<Located>& out) {
  out.push_back({&e, level});
  for (const auto& c : e.children()) collect(c, level + 1, out);
}

std::vector<Located> preorder(const Expr& e) {
  std::vector<Located> out;
  collect(e, 0, out);
  return out;
}

bool within_budget(const Expr& e, const SearchConfig& config) {
  if (depth(e) > config.max_depth || size(e) > config.max_size) return false;
  return !config.zero_degree_only || homogeneity_degree(e) == Degree::Zero;
}

}  // namespace

Expr random_expr(std::size_t width, std::size_t depth_budget, std::span<const Alpha> palette, Rng& rng,
                 std::size_t size_budget) {
  if (width == 0) throw std::invalid_argument("random_expr needs width >= 1");
  return Grower(width, palette, rng).any(depth_budget, std::max<std::size_t>(size_budget, 1), true);
}

Expr random_expr_of_degree(std::size_t width, std::size_t depth_budget, std::span<const Alpha> palette,
                           Degree degree, Rng& rng, std::size_t size_budget) {
  if (width == 0) throw std::invalid_argument("random_expr needs width >= 1");
  if (degree == Degree::Unknown) throw std::invalid_argument("requested degree must be One or Zero");
  return Grower(width, palette, rng).typed(degree, depth_budget, std::max<std::size_t>(size_budget, 1), true);
}

Expr mutate(const Expr& e, std::size_t width, const SearchConfig& config, Rng& rng) {
  const auto nodes = preorder(e);
  std::vector<std::size_t> means;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].node->op() == Op::Mean) means.push_back(i);
  }
  if (!means.empty() && config.palette.size() > 1 && chance(rng, 0.2)) {
    const std::size_t at = means[pick(rng, means.size())];
    const Expr& target = *nodes[at].node;
    // Nearest palette slot, then one step up or down.
    const auto& pal = config.palette;
    std::size_t slot = static_cast<std::size_t>(std::lower_bound(pal.begin(), pal.end(), target.alpha()) - pal.begin());
    slot = std::min(slot, pal.size() - 1);
    if (slot == 0) {
      slot = 1;
    } else if (slot == pal.size() - 1 || chance(rng, 0.5)) {
      slot -= 1;
    } else {
      slot += 1;
    }
    std::vector<Expr> kids(target.children().begin(), target.children().end());
    return replace_subtree(e, at, Expr::mean(pal[slot], std::move(kids)));
  }
  for (int attempt = 0; attempt < 10; ++attempt) {
    const std::size_t at = pick(rng, nodes.size());
    const Expr& target = *nodes[at].node;
    const std::size_t room = config.max_depth - std::min(config.max_depth, nodes[at].level);
    const std::size_t fresh_depth = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(room, 4))(rng);
    const std::size_t size_room = config.max_size - (size(e) - size(target));
    Expr fresh = [&] {
      if (config.zero_degree_only) {
        Degree d = homogeneity_degree(target);
        if (d == Degree::Unknown) d = Degree::Zero;
        return random_expr_of_degree(width, fresh_depth, config.palette, d, rng, size_room);
      }
      return random_expr(width, fresh_depth, config.palette, rng, size_room);
    }();
    Expr child = replace_subtree(e, at, std::move(fresh));
    if (within_budget(child, config)) return child;
  }
  return e;
}

Expr crossover(const Expr& a, const Expr& b, const SearchConfig& config, Rng& rng) {
  const auto into = preorder(a);
  const auto from = preorder(b);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const std::size_t at = pick(rng, into.size());
    const Located& target = into[at];
    std::vector<std::size_t> donors;
    if (config.zero_degree_only) {
      const Degree wanted = homogeneity_degree(*target.node);
      for (std::size_t j = 0; j < from.size(); ++j) {
        if (homogeneity_degree(*from[j].node) == wanted) donors.push_back(j);
      }
      if (donors.empty()) continue;
    }
    const std::size_t j = donors.empty() ? pick(rng, from.size()) : donors[pick(rng, donors.size())];
    const Expr& donor = *from[j].node;
    if (target.level + depth(donor) > config.max_depth) continue;
    Expr child = replace_subtree(a, at, donor);
    if (within_budget(child, config)) return child;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Fitness

namespace {

struct Counts {
  std::size_t below1 = 0, below2 = 0, equal = 0, above1 = 0, above2 = 0;
};

double score_counts(ClassifierKind kind, const Counts& c, std::size_t total, Fitness fitness) {
  std::size_t decided = 0;
  std::size_t correct = 0;
  if (kind == ClassifierKind::Z || kind == ClassifierKind::B) {
    decided = c.below1 + c.below2 + c.above1 + c.above2;
    correct = c.below1 + c.above2;
  } else {
    decided = c.below1 + c.below2;
    correct = c.below1;
  }
  if (fitness == Fitness::Accuracy) {
    return decided == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(decided);
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

double margin_score(double c, std::span<const double> values, std::span<const Label> labels) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double y = labels[i] == Label::Class1 ? 1.0 : -1.0;
    sum += std::tanh(y * (c - values[i]));
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

ScoredThreshold fit_threshold(ClassifierKind kind, std::span<const double> values, std::span<const Label> labels,
                              Fitness fitness) {
  if (values.empty() || values.size() != labels.size()) {
    throw std::invalid_argument("threshold fitting needs matching, non-empty values and labels");
  }
  const std::size_t n = values.size();
  const Fitness sweep_fitness = fitness == Fitness::Margin ? Fitness::AccuracyCoverage : fitness;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> sorted(n);
  // class1_prefix[i] = Class1 count among the i smallest values
  std::vector<std::size_t> class1_prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sorted[i] = values[order[i]];
    class1_prefix[i + 1] = class1_prefix[i] + (labels[order[i]] == Label::Class1 ? 1 : 0);
  }
  const std::size_t class1_total = class1_prefix[n];

  auto counts_at = [&](double c) {
    const std::size_t lo = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
    Counts k;
    k.below1 = class1_prefix[lo];
    k.below2 = lo - k.below1;
    k.equal = hi - lo;
    k.above1 = class1_total - class1_prefix[hi];
    k.above2 = (n - hi) - k.above1;
    return k;
  };

  ScoredThreshold best{0.0, -std::numeric_limits<double>::infinity()};
  auto consider = [&](double c) {
    if (kind == ClassifierKind::APlus && c > 0.0) return;
    const double s = score_counts(kind, counts_at(c), n, sweep_fitness);
    if (s > best.fitness) best = {c, s};
  };

  if (kind == ClassifierKind::Z) {
    consider(0.0);
  } else {
    consider(sorted.front() - 1.0);
    for (std::size_t i = 1; i < n; ++i) {
      if (sorted[i] != sorted[i - 1]) consider(sorted[i - 1] + (sorted[i] - sorted[i - 1]) / 2.0);
    }
    consider(sorted.back() + 1.0);
    if (kind == ClassifierKind::APlus) consider(0.0);
  }
  if (fitness == Fitness::Margin) best.fitness = margin_score(best.threshold, values, labels);
  return best;
}

// ---------------------------------------------------------------------------
// Evolution

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (generation, individual) so breeding order is irrelevant.
Rng stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t individual) {
  return Rng(splitmix64(splitmix64(splitmix64(seed) ^ generation) ^ individual));
}

template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, std::size_t threads, Fn&& fn) {
  if (end <= begin) return;
  threads = std::min(threads, end - begin);
  if (threads <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < end;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Individual {
  Expr expr = Expr::zero();
  ScoredThreshold score;
  std::size_t nodes = 1;
};

// Higher fitness wins, then the smaller tree, then the lower index.
bool better(const std::vector<Individual>& pop, std::size_t x, std::size_t y) {
  if (pop[x].score.fitness != pop[y].score.fitness) return pop[x].score.fitness > pop[y].score.fitness;
  if (pop[x].nodes != pop[y].nodes) return pop[x].nodes < pop[y].nodes;
  return x < y;
}

}  // namespace

SearchResult evolve(const Dataset& data, const SearchConfig& config, const GenerationObserver& observer) {
  config.validate();
  if (data.empty()) throw std::invalid_argument("cannot evolve on an empty dataset");
  const std::size_t width = data.width();
  const std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());

  auto score = [&](Individual& ind) {
    std::vector<double> values(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) values[i] = evaluate(ind.expr, data.frame(i));
    ind.score = fit_threshold(config.kind, values, data.labels(), config.fitness);
    ind.nodes = size(ind.expr);
  };

  const std::size_t initial_depth = std::min<std::size_t>(config.max_depth, 5);
  std::vector<Individual> pop(config.population);
  parallel_for(0, pop.size(), threads, [&](std::size_t i) {
    Rng rng = stream(config.seed, 0, i);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, initial_depth)(rng);
    pop[i].expr = config.zero_degree_only
                      ? random_expr_of_degree(width, d, config.palette, Degree::Zero, rng, config.max_size)
                      : random_expr(width, d, config.palette, rng, config.max_size);
    score(pop[i]);
  });

  SearchResult result{Classifier::z(Expr::zero()), 0.0, {}, pop.size()};
  auto best_of = [&](const std::vector<Individual>& p) {
    std::size_t b = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (better(p, i, b)) b = i;
    }
    return b;
  };
  auto observe = [&](std::size_t g) {
    if (!observer) return;
    std::vector<Expr> exprs;
    exprs.reserve(pop.size());
    for (const auto& ind : pop) exprs.push_back(ind.expr);
    observer(g, exprs);
  };
  observe(0);
  std::size_t best = best_of(pop);
  result.trace.push_back(pop[best].score.fitness);

  for (std::size_t g = 1; g <= config.generations; ++g) {
    std::vector<Individual> next(pop.size());
    next[0] = pop[best];
    parallel_for(1, next.size(), threads, [&](std::size_t i) {
      Rng rng = stream(config.seed, g, i);
      auto tournament = [&] {
        std::size_t winner = pick(rng, pop.size());
        for (std::size_t t = 1; t < config.tournament; ++t) {
          const std::size_t rival = pick(rng, pop.size());
          if (better(pop, rival, winner)) winner = rival;
        }
        return winner;
      };
      Expr child = pop[tournament()].expr;
      if (chance(rng, config.crossover)) child = crossover(child, pop[tournament()].expr, config, rng);
      if (chance(rng, config.mutation)) child = mutate(child, width, config, rng);
      next[i].expr = std::move(child);
      score(next[i]);
    });
    result.evaluations += next.size() - 1;
    pop = std::move(next);
    observe(g);
    best = best_of(pop);
    result.trace.push_back(pop[best].score.fitness);
  }

  result.best = Classifier::make(config.kind, pop[best].expr, pop[best].score.threshold);
  result.best_fitness = pop[best].score.fitness;
  return result;
}

}  // namespace ksalg
