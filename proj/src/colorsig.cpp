#include "biasaudit/colorsig.hpp"

#include <algorithm>
#include <cmath>

#include "biasaudit/errors.hpp"

namespace biasaudit {
namespace {

std::uint8_t round_clamp(double x, double hi) {
  return static_cast<std::uint8_t>(std::clamp(std::round(x), 0.0, hi));
}

}  // namespace

HsvPixel rgb_to_hsv_pixel(double r, double g, double b) {
  const double v = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = v - mn;
  HsvPixel out;
  out.v = v;
  out.s = v > 0 ? delta / v : 0.0;
  if (delta <= 0) return out;  // achromatic: hue 0

  double h;
  if (v == r) {
    h = std::fmod((g - b) / delta, 6.0);
    if (h < 0) h += 6.0;
  } else if (v == g) {
    h = (b - r) / delta + 2.0;
  } else {
    h = (r - g) / delta + 4.0;
  }
  out.hue_deg = 60.0 * h;
  if (out.hue_deg >= 360.0) out.hue_deg -= 360.0;
  return out;
}

std::array<double, 3> hsv_to_rgb_pixel(const HsvPixel& p) {
  const double c = p.v * p.s;
  double hp = std::fmod(p.hue_deg, 360.0);
  if (hp < 0) hp += 360.0;
  hp /= 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  const double m = p.v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  return {r + m, g + m, b + m};
}

HsvImage rgb_to_hsv(const ImageRecord& img) {
  HsvImage out;
  for (int i = 0; i < kPlaneSize; ++i) {
    const HsvPixel p = rgb_to_hsv_pixel(img.pixels[i] / 255.0, img.pixels[kPlaneSize + i] / 255.0,
                                        img.pixels[2 * kPlaneSize + i] / 255.0);
    out.h[i] = round_clamp(p.hue_deg / 2.0, kHueBins - 1);
    out.s[i] = round_clamp(255.0 * p.s, 255.0);
    out.v[i] = round_clamp(255.0 * p.v, 255.0);
  }
  return out;
}

HueHistogram hue_histogram(const HsvImage& img) {
  HueHistogram bins = HueHistogram::Zero();
  for (auto h : img.h) bins[h] += 1.0;
  return bins;
}

ColorSignature to_signature(const HueHistogram& hist) {
  const double total = hist.sum();
  if (!(total > 0)) fail(ErrorKind::EmptySignature, "histogram has no mass");
  const Eigen::Index n = (hist > 0).count();
  ColorSignature sig;
  sig.weights.resize(n);
  sig.positions.resize(n);
  Eigen::Index k = 0;
  for (Eigen::Index b = 0; b < kHueBins; ++b) {
    if (hist[b] > 0) {
      sig.weights[k] = hist[b] / total;
      sig.positions[k] = static_cast<double>(b);
      ++k;
    }
  }
  return sig;
}

}  // namespace biasaudit
