#include "biasaudit/distort.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "biasaudit/colorsig.hpp"
#include "biasaudit/errors.hpp"

namespace biasaudit {
namespace {

constexpr std::uint64_t kJitterStream = 1;
constexpr std::uint64_t kRotateStream = 2;

std::uint8_t to_byte(double x) {
  return static_cast<std::uint8_t>(std::clamp(std::round(x), 0.0, 255.0));
}

double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

void check_range(const FactorRange& r, const char* name) {
  if (!(r.lo > 0) || !(r.lo <= r.hi)) {
    fail(ErrorKind::InvalidArgument, std::string(name) + " range must satisfy 0 < lo <= hi");
  }
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SplitMix64 SplitMix64::keyed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  SplitMix64 a(seed);
  SplitMix64 b(a.next() ^ index);
  SplitMix64 c(b.next() ^ stream);
  return SplitMix64(c.next());
}

void validate(const JitterParams& p) {
  check_range(p.brightness, "brightness");
  check_range(p.contrast, "contrast");
  check_range(p.saturation, "saturation");
  if (!(p.hue_lo <= p.hue_hi) || p.hue_lo < -90 || p.hue_hi > 90) {
    fail(ErrorKind::InvalidArgument, "hue shift range must lie within [-90, 90]");
  }
}

JitterFactors draw_jitter(const JitterParams& p, std::uint64_t image_index) {
  validate(p);
  auto gen = SplitMix64::keyed(p.seed, image_index, kJitterStream);
  JitterFactors f;
  f.brightness = gen.uniform(p.brightness.lo, p.brightness.hi);
  f.contrast = gen.uniform(p.contrast.lo, p.contrast.hi);
  f.saturation = gen.uniform(p.saturation.lo, p.saturation.hi);
  f.hue_shift = gen.uniform(p.hue_lo, p.hue_hi);
  return f;
}

ImageRecord apply_jitter(const ImageRecord& img, const JitterFactors& f) {
  ImageRecord out = img;
  auto& px = out.pixels;
  auto R = [&](int i) -> std::uint8_t& { return px[i]; };
  auto G = [&](int i) -> std::uint8_t& { return px[kPlaneSize + i]; };
  auto B = [&](int i) -> std::uint8_t& { return px[2 * kPlaneSize + i]; };

  for (auto& c : px) c = to_byte(c * f.brightness);

  double mean_luma = 0;
  for (int i = 0; i < kPlaneSize; ++i) mean_luma += luma(R(i), G(i), B(i));
  mean_luma /= kPlaneSize;
  for (auto& c : px) c = to_byte((c - mean_luma) * f.contrast + mean_luma);

  for (int i = 0; i < kPlaneSize; ++i) {
    const double y = luma(R(i), G(i), B(i));
    R(i) = to_byte(y + (R(i) - y) * f.saturation);
    G(i) = to_byte(y + (G(i) - y) * f.saturation);
    B(i) = to_byte(y + (B(i) - y) * f.saturation);
  }

  // Hue shift on continuous HSV; the shift is given on the halved scale.
  for (int i = 0; i < kPlaneSize; ++i) {
    HsvPixel p = rgb_to_hsv_pixel(R(i) / 255.0, G(i) / 255.0, B(i) / 255.0);
    p.hue_deg = std::fmod(p.hue_deg + 2.0 * f.hue_shift, 360.0);
    if (p.hue_deg < 0) p.hue_deg += 360.0;
    const auto rgb = hsv_to_rgb_pixel(p);
    R(i) = to_byte(255.0 * rgb[0]);
    G(i) = to_byte(255.0 * rgb[1]);
    B(i) = to_byte(255.0 * rgb[2]);
  }
  return out;
}

ImageRecord hflip(const ImageRecord& img) {
  ImageRecord out = img;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < kImageSide; ++y)
      for (int x = 0; x < kImageSide; ++x) out.at(c, y, x) = img.at(c, y, kImageSide - 1 - x);
  return out;
}

ImageRecord grayscale(const ImageRecord& img) {
  ImageRecord out = img;
  for (int i = 0; i < kPlaneSize; ++i) {
    const std::uint8_t y =
        to_byte(luma(img.pixels[i], img.pixels[kPlaneSize + i], img.pixels[2 * kPlaneSize + i]));
    out.pixels[i] = out.pixels[kPlaneSize + i] = out.pixels[2 * kPlaneSize + i] = y;
  }
  return out;
}

ImageRecord rotate(const ImageRecord& img, double degrees) {
  if (!(std::abs(degrees) <= 180.0)) fail(ErrorKind::InvalidArgument, "rotation must be within +-180 degrees");
  const double rad = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  constexpr double center = (kImageSide - 1) / 2.0;

  ImageRecord out;
  out.label = img.label;
  for (int y = 0; y < kImageSide; ++y) {
    for (int x = 0; x < kImageSide; ++x) {
      const double dx = x - center, dy = y - center;
      const double sx = center + cs * dx - sn * dy;
      const double sy = center + sn * dx + cs * dy;
      const auto ix = static_cast<long>(std::floor(sx + 0.5));
      const auto iy = static_cast<long>(std::floor(sy + 0.5));
      if (ix < 0 || iy < 0 || ix >= kImageSide || iy >= kImageSide) continue;
      for (int c = 0; c < 3; ++c) out.at(c, y, x) = img.at(c, static_cast<int>(iy), static_cast<int>(ix));
    }
  }
  return out;
}

Dataset distort_dataset(const Dataset& ds, std::string_view kind, const DistortParams& params,
                        std::uint64_t seed) {
  Dataset out;
  out.split_name = ds.split_name + "-" + std::string(kind);
  out.records.reserve(ds.size());
  if (kind == "flip") {
    for (const auto& r : ds.records) out.records.push_back(hflip(r));
  } else if (kind == "gray") {
    for (const auto& r : ds.records) out.records.push_back(grayscale(r));
  } else if (kind == "color") {
    JitterParams jp = params.jitter;
    jp.seed = seed;
    validate(jp);
    for (std::size_t i = 0; i < ds.size(); ++i) out.records.push_back(color_jitter(ds.records[i], jp, i));
  } else if (kind == "rotate") {
    const double mx = params.rotate_max_degrees;
    if (!(mx >= 0 && mx <= 180)) fail(ErrorKind::InvalidArgument, "rotate_max_degrees must be in [0, 180]");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      auto gen = SplitMix64::keyed(seed, i, kRotateStream);
      out.records.push_back(rotate(ds.records[i], gen.uniform(-mx, mx)));
    }
  } else {
    fail(ErrorKind::UnknownKind, "unknown distortion kind '" + std::string(kind) +
                                     "' (expected color, flip, gray or rotate)");
  }
  return out;
}

std::string distortion_sidecar(std::string_view kind, const DistortParams& params, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["seed"] = seed;
  j["generator"] = SplitMix64::kName;
  if (kind == "color") {
    const auto& p = params.jitter;
    j["params"] = {{"brightness", {p.brightness.lo, p.brightness.hi}},
                   {"contrast", {p.contrast.lo, p.contrast.hi}},
                   {"saturation", {p.saturation.lo, p.saturation.hi}},
                   {"hue_shift", {p.hue_lo, p.hue_hi}}};
  } else if (kind == "rotate") {
    j["params"] = {{"max_degrees", params.rotate_max_degrees}};
  } else {
    j["params"] = nlohmann::ordered_json::object();
  }
  return j.dump(2) + "\n";
}

}  // namespace biasaudit
