#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "biasaudit/corpus.hpp"

namespace biasaudit {

inline constexpr int kHueBins = 180;

/// 8-bit HSV planes on the halved hue scale: h in [0,180), s and v in [0,255].
struct HsvImage {
  std::array<std::uint8_t, kPlaneSize> h{};
  std::array<std::uint8_t, kPlaneSize> s{};
  std::array<std::uint8_t, kPlaneSize> v{};
};

using HueHistogram = Eigen::Array<double, kHueBins, 1>;

/// Sparse (weight, position) form of a histogram. Positions ascend strictly
/// and every weight is positive.
template <typename Scalar>
struct Signature {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> positions;

  Eigen::Index size() const { return weights.size(); }
  bool empty() const { return weights.size() == 0; }
};

using ColorSignature = Signature<double>;

/// Continuous HSV of one pixel: hue in degrees [0,360), s and v in [0,1].
struct HsvPixel {
  double hue_deg = 0;
  double s = 0;
  double v = 0;
};

HsvPixel rgb_to_hsv_pixel(double r, double g, double b);
/// Inverse of rgb_to_hsv_pixel; returns channels in [0,1].
std::array<double, 3> hsv_to_rgb_pixel(const HsvPixel& p);

HsvImage rgb_to_hsv(const ImageRecord& img);
HueHistogram hue_histogram(const HsvImage& img);
ColorSignature to_signature(const HueHistogram& hist);

inline ColorSignature image_signature(const ImageRecord& img) {
  return to_signature(hue_histogram(rgb_to_hsv(img)));
}

}  // namespace biasaudit
