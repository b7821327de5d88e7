#include "ksalg/network.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace ksalg {

ComparatorNetwork::ComparatorNetwork(std::size_t width) : width_(width) {}

ComparatorNetwork::ComparatorNetwork(std::size_t width, std::vector<Layer> layers)
    : width_(width), layers_(std::move(layers)) {
  std::vector<std::size_t> seen(width_, 0);
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    for (const auto& c : layers_[li]) {
      if (c.low >= c.high || c.high >= width_) {
        throw std::invalid_argument("comparator " + std::to_string(c.low) + ":" + std::to_string(c.high) +
                                    " invalid for width " + std::to_string(width_));
      }
      for (std::size_t ch : {c.low, c.high}) {
        if (seen[ch] == li + 1) {
          throw std::invalid_argument("channel " + std::to_string(ch) + " used twice in layer " +
                                      std::to_string(li));
        }
        seen[ch] = li + 1;
      }
    }
  }
}

std::size_t ComparatorNetwork::comparator_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.size();
  return n;
}

void ComparatorNetwork::apply(std::span<double> values) const {
  if (values.size() != width_) throw std::invalid_argument("value count does not match network width");
  for (const auto& layer : layers_) {
    for (const auto& c : layer) {
      if (values[c.high] < values[c.low]) std::swap(values[c.low], values[c.high]);
    }
  }
}

ComparatorNetwork batcher_bitonic(std::size_t n) {
  if (n == 0) throw std::invalid_argument("network width must be positive");
  const std::size_t padded = std::bit_ceil(n);
  std::vector<Layer> layers;
  auto keep = [&](Layer& layer, std::size_t i, std::size_t j) {
    // Channels >= n hold +inf forever, so comparators touching them are no-ops.
    if (j < n) layer.push_back({i, j});
  };
  for (std::size_t block = 2; block <= padded; block <<= 1) {
    // Merge two sorted halves: the first layer compares mirrored positions,
    // the rest are half-cleaners.
    Layer mirror;
    for (std::size_t base = 0; base < padded; base += block) {
      for (std::size_t i = 0; i < block / 2; ++i) keep(mirror, base + i, base + block - 1 - i);
    }
    layers.push_back(std::move(mirror));
    for (std::size_t stride = block / 4; stride >= 1; stride >>= 1) {
      Layer layer;
      for (std::size_t base = 0; base < padded; base += 2 * stride) {
        for (std::size_t i = 0; i < stride; ++i) keep(layer, base + i, base + i + stride);
      }
      layers.push_back(std::move(layer));
    }
  }
  std::erase_if(layers, [](const Layer& l) { return l.empty(); });
  return ComparatorNetwork(n, std::move(layers));
}

ComparatorNetwork optimal_network_8() {
  return ComparatorNetwork(8, {
                                  {{0, 2}, {1, 3}, {4, 6}, {5, 7}},
                                  {{0, 4}, {1, 5}, {2, 6}, {3, 7}},
                                  {{0, 1}, {2, 3}, {4, 5}, {6, 7}},
                                  {{2, 4}, {3, 5}},
                                  {{1, 4}, {3, 6}},
                                  {{1, 2}, {3, 4}, {5, 6}},
                              });
}

bool verify_sorts(const ComparatorNetwork& net) {
  const std::size_t n = net.width();
  if (n > kMaxVerifyWidth) {
    throw std::invalid_argument("verify_sorts supports width <= " + std::to_string(kMaxVerifyWidth));
  }
  if (n <= 1) return true;
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t input = 0; input <= all; ++input) {
    std::uint32_t v = input;
    for (const auto& layer : net.layers()) {
      for (const auto& c : layer) {
        std::uint32_t lo = (v >> c.low) & 1u;
        std::uint32_t hi = (v >> c.high) & 1u;
        v &= ~((std::uint32_t{1} << c.low) | (std::uint32_t{1} << c.high));
        v |= ((lo & hi) << c.low) | ((lo | hi) << c.high);
      }
    }
    // Sorted ascending: all ones packed into the highest channels.
    const int ones = std::popcount(v);
    const std::uint32_t expected = ones == 0 ? 0u : (all & ~((std::uint32_t{1} << (n - ones)) - 1));
    if (v != expected) return false;
  }
  return true;
}

std::string format_network(const ComparatorNetwork& net) {
  std::ostringstream out;
  out << "width " << net.width() << '\n';
  for (const auto& layer : net.layers()) {
    for (std::size_t i = 0; i < layer.size(); ++i) {
      if (i) out << ' ';
      out << layer[i].low << ':' << layer[i].high;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::size_t parse_size(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

ComparatorNetwork parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t width = 0;
  bool have_width = false;
  std::vector<Layer> layers;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string word;
    if (!have_width) {
      if (!(words >> word)) continue;
      std::string count;
      if (word != "width" || !(words >> count)) throw std::invalid_argument("expected 'width <n>' header");
      width = parse_size(count, "width");
      if (words >> word) throw std::invalid_argument("trailing text after width header");
      have_width = true;
      continue;
    }
    Layer layer;
    while (words >> word) {
      auto colon = word.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("expected i:j pair, got '" + word + "'");
      std::string_view w(word);
      layer.push_back({parse_size(w.substr(0, colon), "channel"), parse_size(w.substr(colon + 1), "channel")});
    }
    if (!layer.empty()) layers.push_back(std::move(layer));
  }
  if (!have_width) throw std::invalid_argument("missing 'width <n>' header");
  return ComparatorNetwork(width, std::move(layers));
}

}  // namespace ksalg
