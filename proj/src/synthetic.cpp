#include "ksalg/synthetic.hpp"

#include <random>
#include <stdexcept>

namespace ksalg {

std::vector<double> bump_profile(std::size_t width, const std::vector<std::size_t>& channels, double height) {
  std::vector<double> profile(width, 0.0);
  for (std::size_t c : channels) {
    if (c >= width) throw std::invalid_argument("bump channel outside profile width");
    profile[c] += height;
  }
  return profile;
}

SyntheticParams default_synthetic_params() {
  SyntheticParams p;
  p.profiles = {bump_profile(8, {1, 4}, 3.0), bump_profile(8, {2, 6}, 3.0)};
  return p;
}

SyntheticData generate_synthetic(const SyntheticParams& params) {
  if (params.width < 2) throw std::invalid_argument("synthetic data needs width >= 2");
  for (const auto& profile : params.profiles) {
    if (profile.size() != params.width) throw std::invalid_argument("class profile width mismatch");
  }
  if (!(params.sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (!(params.shift_min <= params.shift_max)) throw std::invalid_argument("empty shift range");

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SyntheticData out{Dataset(params.width), {}};
  std::vector<double> frame(params.width);
  for (std::size_t i = 0; i < params.frames_per_class; ++i) {
    for (std::size_t cls = 0; cls < 2; ++cls) {
      const auto& profile = params.profiles[cls];
      for (std::size_t c = 0; c < params.width; ++c) frame[c] = profile[c] + params.sigma * noise(rng);
      const double shift = params.shift_min + (params.shift_max - params.shift_min) * unit(rng);
      for (double& v : frame) v += shift;
      out.data.add(frame, cls == 0 ? Label::Class1 : Label::Class2);
      out.shifts.push_back(shift);
    }
  }
  return out;
}

}  // namespace ksalg
