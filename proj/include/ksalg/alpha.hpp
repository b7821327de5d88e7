#pragma once

#include <compare>
#include <string>

namespace ksalg {

/// Exponent selecting a member of the mean family, on the extended real line.
///
/// NegInf and PosInf are exact tags for the min and max limits, so that those
/// means are computed as min/max rather than approached numerically.
class Alpha {
 public:
  enum class Tag { NegInf, Finite, PosInf };

  constexpr Alpha() = default;

  static constexpr Alpha neg_inf() { return Alpha(Tag::NegInf, 0.0); }
  static constexpr Alpha pos_inf() { return Alpha(Tag::PosInf, 0.0); }
  /// Throws std::invalid_argument for NaN or infinite values.
  static Alpha finite(double value);

  constexpr Tag tag() const { return tag_; }
  constexpr bool is_finite() const { return tag_ == Tag::Finite; }
  /// Only meaningful for Finite.
  constexpr double value() const { return value_; }

  friend bool operator==(const Alpha& a, const Alpha& b);
  /// Extended-real order: NegInf < every Finite < PosInf.
  friend std::partial_ordering operator<=>(const Alpha& a, const Alpha& b);

 private:
  constexpr Alpha(Tag tag, double value) : tag_(tag), value_(value) {}

  Tag tag_ = Tag::Finite;
  double value_ = 0.0;
};

/// "-inf", "inf", or the shortest decimal that round-trips the value.
std::string to_string(const Alpha& alpha);

/// Inverse of to_string. Throws std::invalid_argument on a malformed literal.
Alpha parse_alpha(std::string_view text);

}  // namespace ksalg
