#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ksalg {

enum class Label { Class1 = 1, Class2 = 2 };

/// Input file content is malformed (bad CSV, unknown label, non-finite value).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width collection of labelled spectral frames in log scale, stored row-major.
class Dataset {
 public:
  explicit Dataset(std::size_t width = 0) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  /// Throws std::invalid_argument on width mismatch or non-finite entries.
  void add(std::span<const double> frame, Label label);

  std::span<const double> frame(std::size_t i) const { return {values_.data() + i * width_, width_}; }
  Label label(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const { return labels_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t width_;
  std::vector<double> values_;
  std::vector<Label> labels_;
};

/// CSV with header "label,ch0,...,chW-1"; labels are 1 or 2.
std::string write_dataset_csv(const Dataset& data);
/// Throws FormatError on malformed input.
Dataset read_dataset_csv(std::string_view text);

/// Unlabelled numeric rows. A header line is skipped if its first field is not
/// numeric, and a leading "label" column is dropped when the header names one.
/// Throws FormatError on malformed input or ragged rows.
std::vector<std::vector<double>> read_frame_rows(std::string_view text);

/// Shortest decimal that reads back to exactly the same double.
std::string format_double(double value);

}  // namespace ksalg
