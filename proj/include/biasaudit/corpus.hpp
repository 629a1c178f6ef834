#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace biasaudit {

inline constexpr int kImageSide = 32;
inline constexpr int kPlaneSize = kImageSide * kImageSide;
inline constexpr int kPixelBytes = 3 * kPlaneSize;
inline constexpr int kRecordBytes = 1 + kPixelBytes;
inline constexpr int kNumClasses = 10;

/// One 32x32 RGB image in CIFAR-10 layout: channel-planar R, G, B, each
/// plane row-major.
struct ImageRecord {
  std::uint8_t label = 0;
  std::array<std::uint8_t, kPixelBytes> pixels{};

  std::uint8_t& at(int channel, int y, int x) {
    return pixels[channel * kPlaneSize + y * kImageSide + x];
  }
  std::uint8_t at(int channel, int y, int x) const {
    return pixels[channel * kPlaneSize + y * kImageSide + x];
  }

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

/// Ordered images. Position in `records` is the image's identity in every
/// feature, prediction and manifest file that refers to the dataset.
struct Dataset {
  std::string split_name;
  std::vector<ImageRecord> records;

  std::size_t size() const { return records.size(); }
};

using FeatureRows = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureMatrix {
  std::string model_id;
  std::string split_name;
  FeatureRows rows;

  std::size_t count() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows.cols()); }
};

struct Prediction {
  std::size_t index = 0;
  int true_label = 0;
  int pred_label = 0;

  bool correct() const { return true_label == pred_label; }
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct PredictionTable {
  std::string model_id;
  std::vector<Prediction> entries;

  std::size_t size() const { return entries.size(); }
};

struct SubsetManifest {
  std::string name;
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
};

// CIFAR-10 binary batches.
Dataset parse_cifar_batch(std::span<const std::uint8_t> bytes, std::string split_name = {});
std::vector<std::uint8_t> encode_cifar_batch(const Dataset& ds);
Dataset load_cifar_batch(const std::filesystem::path& path, std::string split_name = {});
void write_cifar_batch(const Dataset& ds, const std::filesystem::path& path);

// "RFV1" feature files: magic | count u32 LE | dim u32 LE | count*dim f32 LE.
FeatureMatrix parse_features(std::span<const std::uint8_t> bytes, std::string model_id = {},
                             std::string split_name = {});
std::vector<std::uint8_t> encode_features(const FeatureMatrix& fm);
FeatureMatrix read_features(const std::filesystem::path& path, std::string model_id = {},
                            std::string split_name = {});
void write_features(const FeatureMatrix& fm, const std::filesystem::path& path);

/// Checks the invariants a feature file must satisfy against its dataset:
/// row count and finiteness. `expected_count` of 0 skips the count check.
void validate_features(const FeatureMatrix& fm, std::size_t expected_count = 0);

// Prediction CSV: "index,true_label,pred_label" per line, no header, LF.
PredictionTable parse_predictions(std::string_view text, std::string model_id = {});
std::string format_predictions(const PredictionTable& pt);
PredictionTable read_predictions(const std::filesystem::path& path, std::string model_id = {});
void write_predictions(const PredictionTable& pt, const std::filesystem::path& path);

// Manifests: one decimal index per line, ascending.
SubsetManifest parse_manifest(std::string_view text, std::string name = {});
std::string format_manifest(const SubsetManifest& m);
SubsetManifest read_manifest(const std::filesystem::path& path, std::string name = {});
void write_manifest(const SubsetManifest& m, const std::filesystem::path& path);

/// Throws OutOfBounds if any index is >= dataset_size.
void check_manifest_bounds(const SubsetManifest& m, std::size_t dataset_size);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace biasaudit
