#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ksalg/dataset.hpp"
#include "ksalg/expr.hpp"

namespace ksalg {

enum class ClassifierKind { Z, B, A, APlus };

enum class Verdict { Class1, Class2, Abstain };

/// Threshold rule on an expression f:
///   Z:  Class1 if f < 0, Class2 if f > 0
///   B:  Class1 if f < c, Class2 if f > c
///   A:  Class1 if f < c, otherwise no conclusion
///   A+: as A, restricted to c <= 0
/// Equality with the threshold always abstains.
class Classifier {
 public:
  static Classifier z(Expr f);
  static Classifier b(Expr f, double threshold);
  static Classifier a(Expr f, double threshold);
  /// Throws std::invalid_argument if threshold > 0.
  static Classifier a_plus(Expr f, double threshold);
  /// Dispatches on kind; the threshold is ignored for Z.
  static Classifier make(ClassifierKind kind, Expr f, double threshold);

  ClassifierKind kind() const { return kind_; }
  const Expr& expr() const { return f_; }
  /// Empty for Z.
  std::optional<double> threshold() const;
  /// Threshold used by the decision rule (0 for Z).
  double cut() const { return c_; }

  /// Verdict for an already evaluated f(s).
  Verdict decide(double value) const;

 private:
  Classifier(ClassifierKind kind, Expr f, double c) : kind_(kind), f_(std::move(f)), c_(c) {}

  ClassifierKind kind_;
  Expr f_;
  double c_;
};

/// Throws std::invalid_argument if f reads a channel the frame does not have.
Verdict classify(const Classifier& cl, std::span<const double> frame);

struct Metrics {
  std::size_t total = 0;
  std::size_t decided = 0;
  std::size_t correct = 0;
  /// confusion[verdict][actual]: rows Class1, Class2, Abstain; columns Class1, Class2.
  std::array<std::array<std::size_t, 2>, 3> confusion{};

  double coverage() const;
  /// Over decided frames only; empty when nothing was decided.
  std::optional<double> accuracy() const;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

void tally(Metrics& m, Verdict verdict, Label actual);

/// Throws std::invalid_argument for an empty dataset or a width mismatch.
Metrics evaluate_on_dataset(const Classifier& cl, const Dataset& data);

/// True iff every verdict is unchanged when each frame is shifted by every c in `shifts`.
bool volume_invariance_test(const Classifier& cl, std::span<const std::vector<double>> frames,
                            std::span<const double> shifts);

/// Fixed-layout report, used by both train and classify.
std::string format_metrics(const Metrics& m);

std::string to_string(ClassifierKind kind);
/// "Z", "B", "A", or "A+". Throws std::invalid_argument otherwise.
ClassifierKind parse_classifier_kind(std::string_view text);

std::string to_string(Verdict v);

/// Three lines: kind, threshold ("none" for Z), expression.
std::string write_classifier(const Classifier& cl);
/// Throws FormatError for a malformed header and ParseError for a malformed expression.
Classifier read_classifier(std::string_view text);

}  // namespace ksalg
