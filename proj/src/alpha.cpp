#include "ksalg/alpha.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ksalg {

Alpha Alpha::finite(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("alpha value must be finite");
  }
  return Alpha(Tag::Finite, value);
}

bool operator==(const Alpha& a, const Alpha& b) {
  if (a.tag_ != b.tag_) return false;
  return a.tag_ != Alpha::Tag::Finite || a.value_ == b.value_;
}

std::partial_ordering operator<=>(const Alpha& a, const Alpha& b) {
  auto rank = [](Alpha::Tag t) { return static_cast<int>(t); };
  if (a.tag_ != b.tag_) return rank(a.tag_) <=> rank(b.tag_);
  if (a.tag_ != Alpha::Tag::Finite) return std::partial_ordering::equivalent;
  return a.value_ <=> b.value_;
}

std::string to_string(const Alpha& alpha) {
  switch (alpha.tag()) {
    case Alpha::Tag::NegInf:
      return "-inf";
    case Alpha::Tag::PosInf:
      return "inf";
    case Alpha::Tag::Finite:
      break;
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, alpha.value());
  if (ec != std::errc{}) throw std::logic_error("alpha formatting failed");
  return std::string(buf, end);
}

Alpha parse_alpha(std::string_view text) {
  if (text == "-inf") return Alpha::neg_inf();
  if (text == "inf") return Alpha::pos_inf();
  if (text.empty()) throw std::invalid_argument("empty alpha literal");
  // from_chars also accepts "nan"/"infinity"; only plain decimals are allowed.
  for (char ch : text) {
    bool ok = (ch >= '0' && ch <= '9') || ch == '-' || ch == '+' || ch == '.' || ch == 'e' || ch == 'E';
    if (!ok) throw std::invalid_argument("malformed alpha literal '" + std::string(text) + "'");
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument("malformed alpha literal '" + std::string(text) + "'");
  }
  return Alpha::finite(value);
}

}  // namespace ksalg
