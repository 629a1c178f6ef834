#pragma once

// EMD between two 1-D distributions of equal mass: the L1 distance between
// their cumulative distribution functions.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "biasaudit/colorsig.hpp"

namespace oracle {

inline double cdf_l1(const biasaudit::ColorSignature& a, const biasaudit::ColorSignature& b) {
  std::vector<std::pair<double, double>> events;  // (position, signed mass)
  for (Eigen::Index i = 0; i < a.weights.size(); ++i) events.emplace_back(a.positions[i], a.weights[i]);
  for (Eigen::Index j = 0; j < b.weights.size(); ++j) events.emplace_back(b.positions[j], -b.weights[j]);
  std::sort(events.begin(), events.end());
  double running = 0, total = 0;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    running += events[k].second;
    total += std::abs(running) * (events[k + 1].first - events[k].first);
  }
  return total / a.weights.sum();
}

}  // namespace oracle
