#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "biasaudit/corpus.hpp"

namespace biasaudit {

/// Portable 64-bit generator (Steele, Lea & Flood's splitmix64).
class SplitMix64 {
 public:
  static constexpr const char* kName = "splitmix64";

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  /// Independent stream for one (seed, image index, purpose) triple.
  static SplitMix64 keyed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

  std::uint64_t next();
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct FactorRange {
  double lo = 0.6;
  double hi = 1.4;
};

struct JitterParams {
  FactorRange brightness;
  FactorRange contrast;
  FactorRange saturation;
  double hue_lo = -18.0;  // halved-hue units, 0..179 scale
  double hue_hi = 18.0;
  std::uint64_t seed = 0;
};

struct JitterFactors {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double hue_shift = 0.0;
};

void validate(const JitterParams& p);

JitterFactors draw_jitter(const JitterParams& p, std::uint64_t image_index);

/// Brightness, contrast, saturation, hue, in that order; each stage rounds
/// and clamps to 8 bits.
ImageRecord apply_jitter(const ImageRecord& img, const JitterFactors& f);

inline ImageRecord color_jitter(const ImageRecord& img, const JitterParams& p,
                                std::uint64_t image_index) {
  return apply_jitter(img, draw_jitter(p, image_index));
}

ImageRecord hflip(const ImageRecord& img);
ImageRecord grayscale(const ImageRecord& img);

/// Counter-clockwise (as displayed) rotation about the image center with
/// inverse-mapped nearest-neighbor sampling; uncovered pixels are black.
ImageRecord rotate(const ImageRecord& img, double degrees);

struct DistortParams {
  JitterParams jitter;
  double rotate_max_degrees = 30.0;  // rotate draws uniformly in [-max, max]
};

/// kind is one of "color", "flip", "gray", "rotate"; `seed` keys all
/// per-image randomness.
Dataset distort_dataset(const Dataset& ds, std::string_view kind, const DistortParams& params,
                        std::uint64_t seed);

/// JSON sidecar recording how a distorted dataset was produced.
std::string distortion_sidecar(std::string_view kind, const DistortParams& params, std::uint64_t seed);

}  // namespace biasaudit
