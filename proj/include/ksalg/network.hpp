#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ksalg {

/// Compare-exchange on channels (low, high), low < high. After it fires the
/// smaller value sits on `low`.
struct Comparator {
  std::size_t low = 0;
  std::size_t high = 0;

  friend bool operator==(const Comparator&, const Comparator&) = default;
};

using Layer = std::vector<Comparator>;

/// Layered comparator network. Comparators within a layer touch disjoint
/// channels, so a layer is one unit of depth.
class ComparatorNetwork {
 public:
  explicit ComparatorNetwork(std::size_t width = 0);
  /// Throws std::invalid_argument if a comparator is out of range, reversed,
  /// or shares a channel with another comparator of the same layer.
  ComparatorNetwork(std::size_t width, std::vector<Layer> layers);

  std::size_t width() const { return width_; }
  std::size_t depth() const { return layers_.size(); }
  std::size_t comparator_count() const;
  const std::vector<Layer>& layers() const { return layers_; }

  /// Sorts `values` in place (ascending). values.size() must equal width().
  void apply(std::span<double> values) const;

  friend bool operator==(const ComparatorNetwork&, const ComparatorNetwork&) = default;

 private:
  std::size_t width_;
  std::vector<Layer> layers_;
};

/// Batcher's bitonic sorter, all comparators ascending. Widths that are not a
/// power of two are padded with virtual +inf channels whose comparators are
/// dropped; for n = 2^k the depth is k(k+1)/2.
ComparatorNetwork batcher_bitonic(std::size_t n);

/// A known 19-comparator, depth-6 sorting network on 8 channels.
ComparatorNetwork optimal_network_8();

/// Largest width verify_sorts accepts.
inline constexpr std::size_t kMaxVerifyWidth = 24;

/// Zero-one principle check over all 2^width binary inputs.
/// Throws std::invalid_argument if width exceeds kMaxVerifyWidth.
bool verify_sorts(const ComparatorNetwork& net);

/// Text format: "width n" on the first line, then one line per layer with
/// space-separated "i:j" pairs.
std::string format_network(const ComparatorNetwork& net);
/// Throws std::invalid_argument on malformed text.
ComparatorNetwork parse_network(std::string_view text);

}  // namespace ksalg
