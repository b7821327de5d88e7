#include "ksalg/classifier.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ksalg/expr_text.hpp"

namespace ksalg {

Classifier Classifier::z(Expr f) { return Classifier(ClassifierKind::Z, std::move(f), 0.0); }

Classifier Classifier::b(Expr f, double threshold) {
  if (!std::isfinite(threshold)) throw std::invalid_argument("threshold must be finite");
  return Classifier(ClassifierKind::B, std::move(f), threshold);
}

Classifier Classifier::a(Expr f, double threshold) {
  if (!std::isfinite(threshold)) throw std::invalid_argument("threshold must be finite");
  return Classifier(ClassifierKind::A, std::move(f), threshold);
}

Classifier Classifier::a_plus(Expr f, double threshold) {
  if (!std::isfinite(threshold)) throw std::invalid_argument("threshold must be finite");
  if (threshold > 0.0) throw std::invalid_argument("A+ classifier requires threshold <= 0");
  return Classifier(ClassifierKind::APlus, std::move(f), threshold);
}

Classifier Classifier::make(ClassifierKind kind, Expr f, double threshold) {
  switch (kind) {
    case ClassifierKind::Z:
      return z(std::move(f));
    case ClassifierKind::B:
      return b(std::move(f), threshold);
    case ClassifierKind::A:
      return a(std::move(f), threshold);
    case ClassifierKind::APlus:
      return a_plus(std::move(f), threshold);
  }
  throw std::logic_error("unreachable");
}

std::optional<double> Classifier::threshold() const {
  if (kind_ == ClassifierKind::Z) return std::nullopt;
  return c_;
}

Verdict Classifier::decide(double value) const {
  if (value < c_) return Verdict::Class1;
  if (value > c_ && (kind_ == ClassifierKind::Z || kind_ == ClassifierKind::B)) return Verdict::Class2;
  return Verdict::Abstain;
}

Verdict classify(const Classifier& cl, std::span<const double> frame) {
  auto supp = support(cl.expr());
  if (!supp.empty() && *supp.rbegin() >= frame.size()) {
    throw std::invalid_argument("expression reads channel " + std::to_string(*supp.rbegin()) +
                                " but frame has width " + std::to_string(frame.size()));
  }
  return cl.decide(evaluate(cl.expr(), frame));
}

double Metrics::coverage() const {
  return total == 0 ? 0.0 : static_cast<double>(decided) / static_cast<double>(total);
}

std::optional<double> Metrics::accuracy() const {
  if (decided == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(decided);
}

void tally(Metrics& m, Verdict verdict, Label actual) {
  ++m.total;
  const std::size_t col = actual == Label::Class1 ? 0 : 1;
  ++m.confusion[static_cast<std::size_t>(verdict)][col];
  if (verdict == Verdict::Abstain) return;
  ++m.decided;
  if ((verdict == Verdict::Class1) == (actual == Label::Class1)) ++m.correct;
}

Metrics evaluate_on_dataset(const Classifier& cl, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("cannot evaluate on an empty dataset");
  Metrics m;
  for (std::size_t i = 0; i < data.size(); ++i) tally(m, classify(cl, data.frame(i)), data.label(i));
  return m;
}

bool volume_invariance_test(const Classifier& cl, std::span<const std::vector<double>> frames,
                            std::span<const double> shifts) {
  std::vector<double> shifted;
  for (const auto& frame : frames) {
    const Verdict base = classify(cl, frame);
    for (double c : shifts) {
      shifted.assign(frame.begin(), frame.end());
      for (double& v : shifted) v += c;
      if (classify(cl, shifted) != base) return false;
    }
  }
  return true;
}

std::string format_metrics(const Metrics& m) {
  std::ostringstream out;
  out.precision(12);
  auto acc = m.accuracy();
  out << "accuracy: ";
  if (acc) {
    out << *acc;
  } else {
    out << "n/a";
  }
  out << "\ncoverage: " << m.coverage() << "\ndecided: " << m.decided << '/' << m.total << '\n';
  out << "confusion (rows: predicted 1, 2, abstain; columns: actual 1, 2)\n";
  for (const auto& row : m.confusion) out << "  " << row[0] << ' ' << row[1] << '\n';
  return out.str();
}

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Z:
      return "Z";
    case ClassifierKind::B:
      return "B";
    case ClassifierKind::A:
      return "A";
    case ClassifierKind::APlus:
      return "A+";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
  if (text == "Z") return ClassifierKind::Z;
  if (text == "B") return ClassifierKind::B;
  if (text == "A") return ClassifierKind::A;
  if (text == "A+" || text == "APlus") return ClassifierKind::APlus;
  throw std::invalid_argument("unknown classifier kind '" + std::string(text) + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Class1:
      return "1";
    case Verdict::Class2:
      return "2";
    case Verdict::Abstain:
      return "abstain";
  }
  return "?";
}

std::string write_classifier(const Classifier& cl) {
  std::string out = to_string(cl.kind()) + '\n';
  auto c = cl.threshold();
  out += c ? format_double(*c) : std::string("none");
  out += '\n';
  out += print_expr(cl.expr());
  out += '\n';
  return out;
}

Classifier read_classifier(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string kind_line;
  std::string threshold_line;
  if (!std::getline(in, kind_line) || !std::getline(in, threshold_line)) {
    throw FormatError("classifier file needs kind, threshold and expression lines");
  }
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto trim = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    return s;
  };
  kind_line = trim(kind_line);
  threshold_line = trim(threshold_line);
  ClassifierKind kind;
  try {
    kind = parse_classifier_kind(kind_line);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  double c = 0.0;
  if (kind == ClassifierKind::Z) {
    if (threshold_line != "none") throw FormatError("Z classifier takes threshold 'none'");
  } else {
    auto [ptr, ec] = std::from_chars(threshold_line.data(), threshold_line.data() + threshold_line.size(), c);
    if (threshold_line.empty() || ec != std::errc{} || ptr != threshold_line.data() + threshold_line.size()) {
      throw FormatError("malformed threshold '" + threshold_line + "'");
    }
  }
  Expr f = parse_expr(rest);
  try {
    return Classifier::make(kind, std::move(f), c);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace ksalg
