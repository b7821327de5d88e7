#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ksalg/dataset.hpp"

namespace ksalg {

struct SyntheticParams {
  std::size_t width = 8;
  std::size_t frames_per_class = 500;
  /// Mean log-spectrum of Class1 and Class2; each must have `width` entries.
  std::array<std::vector<double>, 2> profiles;
  double sigma = 0.5;
  /// Per-frame volume shift is uniform on [shift_min, shift_max].
  double shift_min = -5.0;
  double shift_max = 5.0;
  std::uint64_t seed = 7;
};

/// Flat zero profile with `height` added at each listed channel.
std::vector<double> bump_profile(std::size_t width, const std::vector<std::size_t>& channels, double height);

/// Width 8, Class1 bumps at channels 1 and 4, Class2 at 2 and 6, height 3,
/// sigma 0.5, shifts in [-5, 5], 500 frames per class, seed 7.
SyntheticParams default_synthetic_params();

struct SyntheticData {
  Dataset data;
  /// Volume shift that was added to each frame.
  std::vector<double> shifts;
};

/// Frames alternate Class1, Class2. Each frame is its class profile plus
/// i.i.d. N(0, sigma) noise plus one shift shared by all channels. The draw
/// order does not depend on the shift range, so regenerating with a zero range
/// gives the same frames minus their shifts.
/// Throws std::invalid_argument for width < 2, mismatched profiles, sigma < 0
/// or shift_min > shift_max.
SyntheticData generate_synthetic(const SyntheticParams& params);

}  // namespace ksalg
