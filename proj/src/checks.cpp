#include "ksalg/checks.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ksalg/classifier.hpp"
#include "ksalg/expr_text.hpp"
#include "ksalg/means.hpp"
#include "ksalg/network.hpp"
#include "ksalg/quantile.hpp"

namespace ksalg {

namespace {

using Clock = std::chrono::steady_clock;

/// Collects the first few failure messages of a property run.
class Recorder {
 public:
  explicit Recorder(std::string name) : name_(std::move(name)), start_(Clock::now()) {}

  void fail(const std::string& message) {
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << message;
  }
  void expect(bool ok, const std::string& message) {
    if (!ok) fail(message);
  }
  void note(const std::string& text) { summary_ += (summary_.empty() ? "" : "; ") + text; }

  CheckResult finish() {
    CheckResult r;
    r.name = name_;
    r.passed = failures_ == 0;
    r.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    r.detail = summary_;
    if (failures_) {
      r.detail += (r.detail.empty() ? "" : "; ") + std::to_string(failures_) + " failure(s): " + notes_.str();
    }
    return r;
  }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  std::string name_;
  Clock::time_point start_;
  std::size_t failures_ = 0;
  std::ostringstream notes_;
  std::string summary_;
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::size_t random_length(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<Alpha> finite_grid(std::initializer_list<double> values) {
  std::vector<Alpha> grid;
  for (double v : values) grid.push_back(Alpha::finite(v));
  return grid;
}

std::vector<Alpha> all_alpha_tags() {
  std::vector<Alpha> tags{Alpha::neg_inf()};
  for (double v : {-40.0, -8.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 8.0, 40.0}) tags.push_back(Alpha::finite(v));
  tags.push_back(Alpha::pos_inf());
  return tags;
}

double kth_smallest(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end());
  return v[k - 1];
}

}  // namespace

CheckResult check_mean_ordering() {
  Recorder rec("mean ordering");
  Rng rng(101);
  const auto grid = finite_grid({-8, -2, -1, -0.5, 0, 0.5, 1, 2, 8});
  std::uniform_real_distribution<double> log_entry(std::log(1e-3), std::log(1e3));
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> xs(random_length(rng, 2, 16));
    for (auto& x : xs) x = std::exp(log_entry(rng));
    if (!mean_ordering_check(xs, grid, 1e-9)) rec.fail("ordering violated on trial " + std::to_string(trial));
  }
  // Harmonic <= geometric <= arithmetic <= quadratic on (1, 2, 4).
  const std::vector<double> x{1, 2, 4};
  const double h = power_mean(Alpha::finite(-1), x);
  const double g = power_mean(Alpha::finite(0), x);
  const double m = power_mean(Alpha::finite(1), x);
  const double q = power_mean(Alpha::finite(2), x);
  rec.expect(std::abs(h - 12.0 / 7.0) < 1e-12 && std::abs(g - 2.0) < 1e-12 && std::abs(m - 7.0 / 3.0) < 1e-12 &&
                 std::abs(q - std::sqrt(7.0)) < 1e-12,
             "H/G/M/M2 of (1,2,4) differ from 12/7, 2, 7/3, sqrt 7");
  const double secs = rec.elapsed();
  rec.note("10000 vectors, runtime " + num(secs) + " s");
  rec.expect(secs < 5.0, "runtime " + num(secs) + " s exceeds 5 s");
  return rec.finish();
}

CheckResult check_geometric_limit() {
  Recorder rec("geometric-mean limit");
  Rng rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto xs = random_vector(rng, random_length(rng, 2, 16), 0.1, 10.0);
    // Independent oracle: exp of the mean log, accumulated in long double.
    long double log_sum = 0.0L;
    for (double x : xs) log_sum += std::log(static_cast<long double>(x));
    const double geo = static_cast<double>(std::exp(log_sum / static_cast<long double>(xs.size())));
    const double rel = std::abs(power_mean(Alpha::finite(1e-7), xs) - geo) / geo;
    worst = std::max(worst, rel);
    rec.expect(rel < 1e-5, "relative error " + num(rel) + " on trial " + std::to_string(trial));
  }
  rec.note("max relative error " + num(worst));
  return rec.finish();
}

CheckResult check_additive_mean_contracts() {
  Recorder rec("additive mean contracts");
  Rng rng(303);

  // Finite(0) is the arithmetic mean.
  double worst_a0 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto xs = random_vector(rng, random_length(rng, 1, 16), -500.0, 500.0);
    long double sum = 0.0L;
    for (double x : xs) sum += x;
    const double oracle = static_cast<double>(sum / static_cast<long double>(xs.size()));
    const double err = std::abs(additive_mean(Alpha::finite(0), xs) - oracle);
    worst_a0 = std::max(worst_a0, err);
    rec.expect(err <= 1e-12, "A_0 differs from arithmetic mean by " + num(err));
  }

  // Min/max limits at alpha = -/+40 when the extreme is separated by >= 1.
  double worst_limit = 0.0;
  double worst_bias_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = random_length(rng, 2, 16);
    auto xs = random_vector(rng, n, -500.0, 500.0);
    const bool low = trial % 2 == 0;
    auto extreme = low ? std::min_element(xs.begin(), xs.end()) : std::max_element(xs.begin(), xs.end());
    for (double& x : xs) {
      if (&x != &*extreme) x = low ? std::max(x, *extreme + 1.0) : std::min(x, *extreme - 1.0);
    }
    const double target = *extreme;
    const double value = additive_mean(Alpha::finite(low ? -40.0 : 40.0), xs);
    const double err = std::abs(value - target);
    worst_limit = std::max(worst_limit, err);
    rec.expect(err < 1e-6, "|A_" + std::string(low ? "-40" : "40") + " - " + (low ? "min" : "max") + "| = " +
                               num(err) + " for n = " + std::to_string(n));
    // The 1/n normalisation leaves a bias of ln(n)/40 in the limit direction.
    worst_bias_gap = std::max(worst_bias_gap, std::abs(err - std::log(static_cast<double>(n)) / 40.0));
  }

  // Additive homogeneity for every alpha, magnitudes up to 500 (+100 shift).
  double worst_shift = 0.0;
  const auto tags = all_alpha_tags();
  for (int trial = 0; trial < 500; ++trial) {
    auto xs = random_vector(rng, random_length(rng, 1, 16), -500.0, 500.0);
    for (const Alpha& a : tags) {
      const double base = additive_mean(a, xs);
      rec.expect(std::isfinite(base), "non-finite A_" + to_string(a));
      const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
      rec.expect(base >= *lo - 1e-9 && base <= *hi + 1e-9, "A_" + to_string(a) + " outside [min, max]");
      for (double c : {-100.0, -1.0, 0.5, 100.0}) {
        std::vector<double> shifted = xs;
        for (double& x : shifted) x += c;
        const double err = std::abs(additive_mean(a, shifted) - (base + c));
        worst_shift = std::max(worst_shift, err);
        rec.expect(err <= 1e-9, "shift by " + num(c) + " breaks A_" + to_string(a) + " by " + num(err));
      }
    }
  }
  rec.note("A_0 max error " + num(worst_a0));
  rec.note("+-40 limit max error " + num(worst_limit) + " (deviation from ln(n)/40 bias " + num(worst_bias_gap) +
           ")");
  rec.note("shift max error " + num(worst_shift));
  return rec.finish();
}

CheckResult check_sorting_networks() {
  Recorder rec("sorting networks");
  for (std::size_t n = 1; n <= 16; ++n) {
    const auto net = batcher_bitonic(n);
    rec.expect(verify_sorts(net), "bitonic(" + std::to_string(n) + ") fails the zero-one check");
    if (std::has_single_bit(n)) {
      const std::size_t k = static_cast<std::size_t>(std::countr_zero(n));
      rec.expect(net.depth() == k * (k + 1) / 2, "bitonic(" + std::to_string(n) + ") depth " +
                                                     std::to_string(net.depth()));
    }
  }
  const auto opt = optimal_network_8();
  rec.expect(verify_sorts(opt), "optimal_network_8 fails the zero-one check");
  rec.expect(opt.depth() == 6, "optimal_network_8 depth " + std::to_string(opt.depth()));
  const double secs = rec.elapsed();
  rec.note("bitonic n=1..16 + opt8 verified in " + num(secs) + " s");
  rec.expect(secs < 60.0, "verification took " + num(secs) + " s");
  return rec.finish();
}

CheckResult check_quantile_circuits() {
  Recorder rec("quantile circuits");
  auto check_frame = [&](const Expr& q, std::span<const double> frame, std::size_t k, const std::string& tag) {
    const double got = evaluate(q, frame);
    const double want = kth_smallest({frame.begin(), frame.end()}, k);
    rec.expect(got == want, tag + ": got " + num(got) + ", want " + num(want));
    rec.expect(std::find(frame.begin(), frame.end(), got) != frame.end(), tag + ": output not an input value");
  };
  std::size_t perms = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto net = batcher_bitonic(n);
    for (std::size_t k = 1; k <= n; ++k) {
      const Expr q = quantile_circuit(n, k, net);
      rec.expect(depth(q) <= net.depth(), "depth bound broken");
      std::vector<double> frame(n);
      for (std::size_t i = 0; i < n; ++i) frame[i] = 10.0 * static_cast<double>(i + 1) + 0.25;
      do {
        check_frame(q, frame, k, "n=" + std::to_string(n) + " k=" + std::to_string(k));
        ++perms;
      } while (std::next_permutation(frame.begin(), frame.end()));
    }
  }
  Rng rng(505);
  for (const auto& [name, net] : {std::pair{std::string("bitonic"), batcher_bitonic(8)},
                                  std::pair{std::string("opt8"), optimal_network_8()}}) {
    for (std::size_t k = 1; k <= 8; ++k) {
      const Expr q = quantile_circuit(8, k, net);
      rec.expect(depth(q) <= net.depth(), name + " depth bound broken");
      for (int trial = 0; trial < 10000; ++trial) {
        auto frame = random_vector(rng, 8, -100.0, 100.0);
        check_frame(q, frame, k, name + " k=" + std::to_string(k));
      }
    }
  }
  rec.note(std::to_string(perms) + " permutation cases, 160000 random n=8 cases");
  return rec.finish();
}

CheckResult check_second_largest() {
  Recorder rec("depth-2 second largest");
  auto check = [&](std::size_t n, std::span<const double> frame) {
    const double a = evaluate(second_largest_depth2(n, SecondLargestVariant::MinOfMaxes), frame);
    const double b = evaluate(second_largest_depth2(n, SecondLargestVariant::MaxOfMins), frame);
    const double want = kth_smallest({frame.begin(), frame.end()}, n - 1);
    rec.expect(a == b && a == want, "n=" + std::to_string(n) + ": variants " + num(a) + ", " + num(b) +
                                        " vs oracle " + num(want));
  };
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<double> frame(n);
    std::iota(frame.begin(), frame.end(), 1.0);
    do {
      check(n, frame);
    } while (std::next_permutation(frame.begin(), frame.end()));
  }
  Rng rng(606);
  for (std::size_t n = 2; n <= 12; ++n) {
    const Expr a = second_largest_depth2(n, SecondLargestVariant::MinOfMaxes);
    const Expr b = second_largest_depth2(n, SecondLargestVariant::MaxOfMins);
    if (n >= 3) rec.expect(depth(a) == 2 && depth(b) == 2, "depth is not 2 for n=" + std::to_string(n));
    for (int trial = 0; trial < 10000; ++trial) {
      auto frame = random_vector(rng, n, -50.0, 50.0);
      const double va = evaluate(a, frame);
      const double vb = evaluate(b, frame);
      const double want = kth_smallest(frame, n - 1);
      rec.expect(va == vb && va == want, "random n=" + std::to_string(n) + " mismatch");
    }
  }
  rec.note("exhaustive n<=6, 10000 random frames for each n<=12");
  return rec.finish();
}

CheckResult check_negation_elimination() {
  Recorder rec("negation elimination");
  Rng rng(707);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const NExpr e = random_nexpr(6, 50, rng);
    const NExpr out = eliminate_negation(e);
    rec.expect(count_neg(out) == 0, "Neg node survived in " + print_nexpr(out));
    rec.expect(size(out) <= size(e), "output larger than input");
    if (count_neg(e) == 0) rec.expect(out == e, "negation-free input was changed");
    const auto frame = random_vector(rng, 6, 0.0, 1.0);
    const double err = std::abs(evaluate_nexpr(e, frame) - evaluate_nexpr(out, frame));
    worst = std::max(worst, err);
    rec.expect(err <= 1e-12, "semantic drift " + num(err) + " on " + print_nexpr(e));
  }
  rec.note("10000 trees, max drift " + num(worst));
  return rec.finish();
}

CheckResult check_classifier_semantics() {
  Recorder rec("classifier semantics");
  Rng rng(808);
  const auto palette = default_palette();

  // Z is B with threshold 0.
  for (int trial = 0; trial < 2000; ++trial) {
    const Expr f = random_expr(6, 4, palette, rng, 30);
    const auto z = Classifier::z(f);
    const auto b = Classifier::b(f, 0.0);
    auto frame = random_vector(rng, 6, -3.0, 3.0);
    rec.expect(classify(z, frame) == classify(b, frame), "Z and B(0) disagree on " + print_expr(f));
  }

  // A+ rejects positive thresholds.
  bool rejected = false;
  try {
    Classifier::a_plus(Expr::input(0), 0.5);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  rec.expect(rejected, "A+ accepted c > 0");
  bool accepted = true;
  try {
    Classifier::a_plus(Expr::input(0), 0.0);
    Classifier::a_plus(Expr::input(0), -2.0);
  } catch (const std::invalid_argument&) {
    accepted = false;
  }
  rec.expect(accepted, "A+ rejected c <= 0");

  // Abstention: ties abstain for every kind, A/A+ abstain unless f < c.
  const Expr diff01 = Expr::diff(Expr::input(0), Expr::input(1));
  const std::vector<double> tie{2.0, 2.0};
  rec.expect(classify(Classifier::z(diff01), tie) == Verdict::Abstain, "Z did not abstain at f = 0");
  rec.expect(classify(Classifier::b(diff01, 0.0), tie) == Verdict::Abstain, "B did not abstain at f = c");
  rec.expect(classify(Classifier::a(Expr::input(0), -1.0), std::vector<double>{-0.5}) == Verdict::Abstain,
             "A did not abstain for f >= c");
  rec.expect(classify(Classifier::a(Expr::input(0), -1.0), std::vector<double>{-1.5}) == Verdict::Class1,
             "A missed f < c");
  rec.expect(classify(Classifier::a_plus(Expr::input(0), -1.0), std::vector<double>{-1.0}) == Verdict::Abstain,
             "A+ did not abstain at f = c");
  for (int trial = 0; trial < 2000; ++trial) {
    const Expr f = random_expr(4, 3, palette, rng, 20);
    const double c = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const auto a = Classifier::a(f, c);
    auto frame = random_vector(rng, 4, -3.0, 3.0);
    const double v = evaluate(f, frame);
    rec.expect(classify(a, frame) == (v < c ? Verdict::Class1 : Verdict::Abstain), "A rule broken");
  }

  // Degree-zero Z classifiers are exactly volume invariant.
  const std::vector<double> shifts{-100.0, 100.0};
  std::size_t tested = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Expr f = random_expr_of_degree(6, 5, palette, Degree::Zero, rng, 40);
    rec.expect(homogeneity_degree(f) == Degree::Zero, "generator returned a non-zero-degree tree");
    std::vector<std::vector<double>> frames;
    for (int i = 0; i < 20; ++i) frames.push_back(random_vector(rng, 6, -20.0, 20.0));
    bool exact = true;
    for (const auto& fr : frames) {
      for (double c : shifts) {
        auto moved = fr;
        for (double& v : moved) v += c;
        // Means over shifted inputs can differ in the last bits; verdicts must not.
        exact = exact && std::abs(evaluate(f, moved) - evaluate(f, fr)) <= 1e-9;
      }
    }
    rec.expect(exact, "degree-zero value moved under shift: " + print_expr(f));
    rec.expect(volume_invariance_test(Classifier::z(f), frames, shifts),
               "volume invariance failed for " + print_expr(f));
    ++tested;
  }
  rec.note("Z==B(0), A+ rejection, abstention, " + std::to_string(tested) + " degree-zero invariance cases");
  return rec.finish();
}

CheckResult check_expr_roundtrip(std::size_t count) {
  Recorder rec("parser/printer round-trip");
  Rng rng(1010);
  for (std::size_t trial = 0; trial < count; ++trial) {
    const Expr e = random_test_expr(64, 50, rng);
    const std::string text = print_expr(e);
    Expr back = Expr::zero();
    try {
      back = parse_expr(text);
    } catch (const ParseError& err) {
      rec.fail(std::string("parse failed: ") + err.what() + " on " + text);
      continue;
    }
    rec.expect(back == e, "tree changed by round-trip: " + text);
    rec.expect(print_expr(back) == text, "text changed by round-trip: " + text);
  }
  rec.note(std::to_string(count) + " random expressions");
  return rec.finish();
}

std::vector<std::string> suite_names() {
  return {"means", "networks", "quantiles", "second-largest", "rewrite", "classifiers", "roundtrip", "all"};
}

std::vector<CheckResult> run_suite(std::string_view name) {
  if (name == "means") return {check_mean_ordering(), check_geometric_limit(), check_additive_mean_contracts()};
  if (name == "networks") return {check_sorting_networks()};
  if (name == "quantiles") return {check_quantile_circuits()};
  if (name == "second-largest") return {check_second_largest()};
  if (name == "rewrite") return {check_negation_elimination()};
  if (name == "classifiers") return {check_classifier_semantics()};
  if (name == "roundtrip") return {check_expr_roundtrip()};
  if (name == "all") {
    std::vector<CheckResult> out;
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      auto part = run_suite(s);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Generators

namespace {

Alpha random_alpha(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0:
      return Alpha::neg_inf();
    case 1:
      return Alpha::pos_inf();
    case 2:
      return Alpha::finite(std::uniform_int_distribution<int>(-10, 10)(rng));
    case 3:
      return Alpha::finite(std::uniform_real_distribution<double>(-5.0, 5.0)(rng));
    case 4:
      return Alpha::finite(std::ldexp(std::uniform_real_distribution<double>(-1.0, 1.0)(rng),
                                      std::uniform_int_distribution<int>(-60, 60)(rng)));
    default:
      return Alpha::finite(0.5 * std::uniform_int_distribution<int>(-8, 8)(rng));
  }
}

Expr grow_test_expr(std::size_t width, std::size_t budget, Rng& rng) {
  std::uniform_int_distribution<int> kind(0, 5);
  if (budget < 3 || std::uniform_real_distribution<double>(0, 1)(rng) < 0.25) {
    return std::uniform_int_distribution<int>(0, 9)(rng) == 0
               ? Expr::zero()
               : Expr::input(std::uniform_int_distribution<std::size_t>(0, width - 1)(rng));
  }
  const int k = kind(rng);
  const Op op = k == 0 ? Op::Diff : k == 1 ? Op::Min : k == 2 ? Op::Max : Op::Mean;
  std::size_t arity = op == Op::Diff ? 2 : std::uniform_int_distribution<std::size_t>(2, 4)(rng);
  arity = std::min(arity, budget - 1);
  std::size_t remaining = budget - 1;
  std::vector<Expr> kids;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::size_t left = arity - i;
    const std::size_t share = left == 1 ? remaining : std::max<std::size_t>(1, remaining / left);
    kids.push_back(grow_test_expr(width, std::min(share, remaining - (left - 1)), rng));
    remaining -= size(kids.back());
  }
  return Expr::gate(op, std::move(kids), op == Op::Mean ? random_alpha(rng) : Alpha{});
}

NExpr grow_nexpr(std::size_t width, std::size_t budget, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (budget < 2 || u(rng) < 0.25) {
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, width - 1)(rng);
    return u(rng) < 0.3 ? NExpr::neg_input(i) : NExpr::input(i);
  }
  const int k = std::uniform_int_distribution<int>(0, 3)(rng);
  if (k == 0 || budget < 3) return NExpr::neg(grow_nexpr(width, budget - 1, rng));
  const NOp op = k == 1 ? NOp::Min : k == 2 ? NOp::Max : NOp::Avg;
  const std::size_t arity = std::min(std::uniform_int_distribution<std::size_t>(2, 3)(rng), budget - 1);
  std::size_t remaining = budget - 1;
  std::vector<NExpr> kids;
  for (std::size_t i = 0; i < arity; ++i) {
    const std::size_t left = arity - i;
    const std::size_t share = left == 1 ? remaining : std::max<std::size_t>(1, remaining / left);
    kids.push_back(grow_nexpr(width, std::min(share, remaining - (left - 1)), rng));
    remaining -= size(kids.back());
  }
  return NExpr::gate(op, std::move(kids));
}

}  // namespace

Expr random_test_expr(std::size_t width, std::size_t max_nodes, Rng& rng) {
  const std::size_t budget = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_nodes))(rng);
  return grow_test_expr(width, budget, rng);
}

NExpr random_nexpr(std::size_t width, std::size_t max_nodes, Rng& rng) {
  const std::size_t budget = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_nodes))(rng);
  return grow_nexpr(width, budget, rng);
}

}  // namespace ksalg
