#pragma once

// Synthetic data shared by the unit and acceptance suites. Everything is
// derived from SplitMix64 so fixtures are identical on every platform.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "biasaudit/colorsig.hpp"
#include "biasaudit/corpus.hpp"
#include "biasaudit/distort.hpp"

namespace fixtures {

using biasaudit::ColorSignature;
using biasaudit::Dataset;
using biasaudit::FeatureMatrix;
using biasaudit::ImageRecord;
using biasaudit::SplitMix64;

inline double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline int uniform_int(SplitMix64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Normalized signature with 1..max_bins entries at distinct integer
/// positions in [0, span].
inline ColorSignature random_signature(SplitMix64& rng, int max_bins, int span = 179) {
  const int n = uniform_int(rng, 1, std::min(max_bins, span + 1));
  std::vector<int> pos(span + 1);
  std::iota(pos.begin(), pos.end(), 0);
  for (int k = 0; k < n; ++k) std::swap(pos[k], pos[uniform_int(rng, k, span)]);
  pos.resize(n);
  std::sort(pos.begin(), pos.end());
  ColorSignature sig;
  sig.weights.resize(n);
  sig.positions.resize(n);
  for (int k = 0; k < n; ++k) {
    sig.weights[k] = 0.05 + rng.uniform();
    sig.positions[k] = pos[k];
  }
  sig.weights /= sig.weights.sum();
  return sig;
}

inline ImageRecord random_image(SplitMix64& rng) {
  ImageRecord img;
  img.label = static_cast<std::uint8_t>(rng.next() % 10);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next() & 0xFF);
  return img;
}

inline ImageRecord solid_image(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t label = 0) {
  ImageRecord img;
  img.label = label;
  std::fill_n(img.pixels.begin(), biasaudit::kPlaneSize, r);
  std::fill_n(img.pixels.begin() + biasaudit::kPlaneSize, biasaudit::kPlaneSize, g);
  std::fill_n(img.pixels.begin() + 2 * biasaudit::kPlaneSize, biasaudit::kPlaneSize, b);
  return img;
}

inline FeatureMatrix random_features(SplitMix64& rng, Eigen::Index rows, Eigen::Index dim,
                                     std::string model_id = "m") {
  FeatureMatrix fm;
  fm.model_id = std::move(model_id);
  fm.rows.resize(rows, dim);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) fm.rows(r, c) = static_cast<float>(gaussian(rng));
  return fm;
}

/// Images whose hue is set by a group (i % 4) independent of their label
/// ((i / 4) % 4), with two feature matrices: one that clusters by hue
/// (projected hue histograms) and one that clusters by label (one-hots).
struct HueLabelFixture {
  Dataset images;
  FeatureMatrix color_model;  // "hue-clustered"
  FeatureMatrix label_model;  // "label-clustered"
  std::vector<int> hue_group;
};

inline HueLabelFixture make_hue_label_fixture(std::uint64_t seed, int count = 200) {
  constexpr double kGroupHue[4] = {10.0, 55.0, 100.0, 145.0};  // halved-hue units
  constexpr int kProjDim = 64;
  SplitMix64 rng(seed);
  HueLabelFixture fx;
  fx.images.split_name = "synthetic";

  Eigen::MatrixXd projection(kProjDim, biasaudit::kHueBins);
  for (Eigen::Index r = 0; r < projection.rows(); ++r)
    for (Eigen::Index c = 0; c < projection.cols(); ++c) projection(r, c) = gaussian(rng);

  fx.color_model.model_id = "hue-clustered";
  fx.label_model.model_id = "label-clustered";
  fx.color_model.rows.resize(count, kProjDim);
  fx.label_model.rows.resize(count, 10);
  for (int i = 0; i < count; ++i) {
    const int group = i % 4;
    const int label = (i / 4) % 4;
    fx.hue_group.push_back(group);
    ImageRecord img;
    img.label = static_cast<std::uint8_t>(label);
    const double base = kGroupHue[group] + rng.uniform(-4.0, 4.0);
    for (int p = 0; p < biasaudit::kPlaneSize; ++p) {
      biasaudit::HsvPixel hsv;
      hsv.hue_deg = 2.0 * (base + rng.uniform(-2.0, 2.0));
      hsv.s = rng.uniform(0.5, 1.0);
      hsv.v = rng.uniform(0.5, 1.0);
      const auto rgb = biasaudit::hsv_to_rgb_pixel(hsv);
      for (int c = 0; c < 3; ++c)
        img.pixels[c * biasaudit::kPlaneSize + p] = static_cast<std::uint8_t>(std::lround(255.0 * rgb[c]));
    }
    fx.images.records.push_back(img);

    const auto hist = biasaudit::hue_histogram(biasaudit::rgb_to_hsv(img));
    const Eigen::VectorXd proj = projection * (hist / hist.sum()).matrix();
    for (int c = 0; c < kProjDim; ++c)
      fx.color_model.rows(i, c) = static_cast<float>(proj[c] + 0.01 * gaussian(rng));
    for (int c = 0; c < 10; ++c)
      fx.label_model.rows(i, c) = static_cast<float>((c == label ? 1.0 : 0.0) + 0.1 * gaussian(rng));
  }
  return fx;
}

/// Two Gaussian blobs in 2-D, classes 0 and 1, `per_class` points each.
struct Blobs {
  FeatureMatrix features;
  std::vector<int> labels;
};

inline Blobs make_blobs(std::uint64_t seed, int per_class = 100) {
  SplitMix64 rng(seed);
  Blobs b;
  b.features.model_id = "blobs";
  b.features.rows.resize(2 * per_class, 2);
  const double centers[2][2] = {{4.0, 0.5}, {0.5, 4.0}};
  for (int i = 0; i < 2 * per_class; ++i) {
    const int cls = i % 2;
    b.labels.push_back(cls);
    for (int d = 0; d < 2; ++d)
      b.features.rows(i, d) = static_cast<float>(centers[cls][d] + 0.5 * gaussian(rng));
  }
  return b;
}

}  // namespace fixtures
