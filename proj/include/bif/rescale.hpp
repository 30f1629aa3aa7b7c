#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bif {

// Min-max normalization of one response stream onto [0,1]. A degenerate
// stream (hi == lo) maps everything to 0.5.
struct RescaleTransform {
  double lo = 0.0;
  double hi = 0.0;

  double apply(double y) const { return hi > lo ? (y - lo) / (hi - lo) : 0.5; }
};

inline RescaleTransform fit_rescale(const std::vector<double>& stream) {
  if (stream.empty()) throw std::invalid_argument("fit_rescale: empty stream");
  auto [min_it, max_it] = std::minmax_element(stream.begin(), stream.end());
  return {*min_it, *max_it};
}

inline std::pair<RescaleTransform, std::vector<double>> rescale_stream(
    const std::vector<double>& stream) {
  RescaleTransform t = fit_rescale(stream);
  std::vector<double> normalized(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) normalized[i] = t.apply(stream[i]);
  return {t, std::move(normalized)};
}

}  // namespace bif
