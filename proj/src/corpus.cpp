#include "biasaudit/corpus.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "biasaudit/errors.hpp"

namespace biasaudit {
namespace {

constexpr std::array<std::uint8_t, 4> kFeatureMagic = {'R', 'F', 'V', '1'};
constexpr std::size_t kFeatureHeaderBytes = 12;

std::uint32_t load_u32_le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(std::uint32_t v, std::uint8_t* p) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

float load_f32_le(const std::uint8_t* p) { return std::bit_cast<float>(load_u32_le(p)); }

void store_f32_le(float v, std::uint8_t* p) { store_u32_le(std::bit_cast<std::uint32_t>(v), p); }

// Splits on '\n'. A single trailing newline does not produce an extra line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

bool parse_unsigned(std::string_view field, std::size_t& out) {
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::string parse_error_at(const std::string& source, std::size_t line, const std::string& what) {
  return source + ": line " + std::to_string(line) + ": " + what;
}

}  // namespace

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::Io, "read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open for writing " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// ---------------------------------------------------------------------------
// CIFAR-10

Dataset parse_cifar_batch(std::span<const std::uint8_t> bytes, std::string split_name) {
  if (bytes.empty() || bytes.size() % kRecordBytes != 0) {
    fail(ErrorKind::MalformedFile, "CIFAR batch size " + std::to_string(bytes.size()) +
                                       " is not a positive multiple of " +
                                       std::to_string(kRecordBytes));
  }
  Dataset ds;
  ds.split_name = std::move(split_name);
  const std::size_t n = bytes.size() / kRecordBytes;
  ds.records.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* rec = bytes.data() + i * kRecordBytes;
    if (rec[0] >= kNumClasses) {
      fail(ErrorKind::CorruptRecord, "record " + std::to_string(i) + " has label byte " +
                                         std::to_string(rec[0]));
    }
    ds.records[i].label = rec[0];
    std::memcpy(ds.records[i].pixels.data(), rec + 1, kPixelBytes);
  }
  return ds;
}

std::vector<std::uint8_t> encode_cifar_batch(const Dataset& ds) {
  if (ds.records.empty()) fail(ErrorKind::InvalidArgument, "refusing to encode an empty dataset");
  std::vector<std::uint8_t> bytes(ds.records.size() * kRecordBytes);
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& r = ds.records[i];
    if (r.label >= kNumClasses) {
      fail(ErrorKind::CorruptRecord, "record " + std::to_string(i) + " has label " +
                                         std::to_string(r.label));
    }
    std::uint8_t* rec = bytes.data() + i * kRecordBytes;
    rec[0] = r.label;
    std::memcpy(rec + 1, r.pixels.data(), kPixelBytes);
  }
  return bytes;
}

Dataset load_cifar_batch(const std::filesystem::path& path, std::string split_name) {
  auto bytes = read_file_bytes(path);
  try {
    return parse_cifar_batch(bytes, std::move(split_name));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_cifar_batch(const Dataset& ds, const std::filesystem::path& path) {
  write_file_bytes(path, encode_cifar_batch(ds));
}

// ---------------------------------------------------------------------------
// Feature files

FeatureMatrix parse_features(std::span<const std::uint8_t> bytes, std::string model_id,
                             std::string split_name) {
  if (bytes.size() < kFeatureHeaderBytes) {
    fail(ErrorKind::Truncated, "feature file shorter than its 12-byte header");
  }
  if (!std::equal(kFeatureMagic.begin(), kFeatureMagic.end(), bytes.begin())) {
    fail(ErrorKind::BadMagic, "feature file does not start with \"RFV1\"");
  }
  const std::uint32_t count = load_u32_le(bytes.data() + 4);
  const std::uint32_t dim = load_u32_le(bytes.data() + 8);
  if (dim == 0) fail(ErrorKind::MalformedFile, "feature file declares dim 0");
  const std::uint64_t payload = std::uint64_t{count} * dim * 4;
  if (bytes.size() - kFeatureHeaderBytes < payload) {
    fail(ErrorKind::Truncated, "feature payload has " +
                                   std::to_string(bytes.size() - kFeatureHeaderBytes) +
                                   " bytes, header requires " + std::to_string(payload));
  }
  if (bytes.size() - kFeatureHeaderBytes > payload) {
    fail(ErrorKind::MalformedFile, "feature file has trailing bytes after the payload");
  }

  FeatureMatrix fm;
  fm.model_id = std::move(model_id);
  fm.split_name = std::move(split_name);
  fm.rows.resize(count, dim);
  const std::uint8_t* p = bytes.data() + kFeatureHeaderBytes;
  for (std::uint32_t r = 0; r < count; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c, p += 4) {
      const float v = load_f32_le(p);
      if (!std::isfinite(v)) {
        fail(ErrorKind::NonFinite,
             "non-finite feature at row " + std::to_string(r) + ", column " + std::to_string(c));
      }
      fm.rows(r, c) = v;
    }
  }
  return fm;
}

std::vector<std::uint8_t> encode_features(const FeatureMatrix& fm) {
  validate_features(fm);
  if (fm.dim() == 0) fail(ErrorKind::InvalidArgument, "feature matrix has dim 0");
  const auto count = static_cast<std::uint32_t>(fm.count());
  const auto dim = static_cast<std::uint32_t>(fm.dim());
  std::vector<std::uint8_t> bytes(kFeatureHeaderBytes + std::size_t{count} * dim * 4);
  std::copy(kFeatureMagic.begin(), kFeatureMagic.end(), bytes.begin());
  store_u32_le(count, bytes.data() + 4);
  store_u32_le(dim, bytes.data() + 8);
  std::uint8_t* p = bytes.data() + kFeatureHeaderBytes;
  for (std::uint32_t r = 0; r < count; ++r)
    for (std::uint32_t c = 0; c < dim; ++c, p += 4) store_f32_le(fm.rows(r, c), p);
  return bytes;
}

FeatureMatrix read_features(const std::filesystem::path& path, std::string model_id,
                            std::string split_name) {
  auto bytes = read_file_bytes(path);
  try {
    return parse_features(bytes, std::move(model_id), std::move(split_name));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_features(const FeatureMatrix& fm, const std::filesystem::path& path) {
  write_file_bytes(path, encode_features(fm));
}

void validate_features(const FeatureMatrix& fm, std::size_t expected_count) {
  if (expected_count != 0 && fm.count() != expected_count) {
    fail(ErrorKind::DimensionMismatch, "feature matrix '" + fm.model_id + "' has " +
                                           std::to_string(fm.count()) + " rows, dataset has " +
                                           std::to_string(expected_count));
  }
  if (!fm.rows.allFinite()) {
    fail(ErrorKind::NonFinite, "feature matrix '" + fm.model_id + "' contains non-finite values");
  }
}

// ---------------------------------------------------------------------------
// Predictions

PredictionTable parse_predictions(std::string_view text, std::string model_id) {
  PredictionTable pt;
  pt.model_id = std::move(model_id);
  const std::string source = pt.model_id.empty() ? std::string("predictions") : pt.model_id;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    const std::string_view line = lines[ln];
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      fail(ErrorKind::Parse, parse_error_at(source, line_no, "expected 3 comma-separated fields"));
    }
    std::size_t index = 0, truth = 0, pred = 0;
    if (!parse_unsigned(line.substr(0, c1), index) ||
        !parse_unsigned(line.substr(c1 + 1, c2 - c1 - 1), truth) ||
        !parse_unsigned(line.substr(c2 + 1), pred)) {
      fail(ErrorKind::Parse, parse_error_at(source, line_no, "non-numeric field"));
    }
    if (truth >= kNumClasses || pred >= kNumClasses) {
      fail(ErrorKind::Parse, parse_error_at(source, line_no, "label out of range 0..9"));
    }
    if (!pt.entries.empty() && index <= pt.entries.back().index) {
      fail(ErrorKind::Parse,
           parse_error_at(source, line_no,
                          index == pt.entries.back().index ? "duplicate index " + std::to_string(index)
                                                           : "index not increasing"));
    }
    pt.entries.push_back({index, static_cast<int>(truth), static_cast<int>(pred)});
  }
  return pt;
}

std::string format_predictions(const PredictionTable& pt) {
  std::string out;
  out.reserve(pt.entries.size() * 10);
  for (const auto& e : pt.entries) {
    out += std::to_string(e.index);
    out += ',';
    out += std::to_string(e.true_label);
    out += ',';
    out += std::to_string(e.pred_label);
    out += '\n';
  }
  return out;
}

PredictionTable read_predictions(const std::filesystem::path& path, std::string model_id) {
  if (model_id.empty()) model_id = path.stem().string();
  const auto text = read_text_file(path);
  try {
    return parse_predictions(text, std::move(model_id));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_predictions(const PredictionTable& pt, const std::filesystem::path& path) {
  write_text_file(path, format_predictions(pt));
}

// ---------------------------------------------------------------------------
// Manifests

SubsetManifest parse_manifest(std::string_view text, std::string name) {
  SubsetManifest m;
  m.name = std::move(name);
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::size_t index = 0;
    if (!parse_unsigned(lines[ln], index)) {
      fail(ErrorKind::Parse, parse_error_at("manifest", ln + 1, "expected a decimal index"));
    }
    if (!m.indices.empty() && index <= m.indices.back()) {
      fail(ErrorKind::Parse, parse_error_at("manifest", ln + 1, "indices must be strictly ascending"));
    }
    m.indices.push_back(index);
  }
  return m;
}

std::string format_manifest(const SubsetManifest& m) {
  std::string out;
  for (std::size_t i = 0; i < m.indices.size(); ++i) {
    if (i > 0 && m.indices[i] <= m.indices[i - 1]) {
      fail(ErrorKind::InvalidArgument, "manifest indices must be strictly ascending");
    }
    out += std::to_string(m.indices[i]);
    out += '\n';
  }
  return out;
}

SubsetManifest read_manifest(const std::filesystem::path& path, std::string name) {
  if (name.empty()) name = path.stem().string();
  const auto text = read_text_file(path);
  try {
    return parse_manifest(text, std::move(name));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_manifest(const SubsetManifest& m, const std::filesystem::path& path) {
  write_text_file(path, format_manifest(m));
}

void check_manifest_bounds(const SubsetManifest& m, std::size_t dataset_size) {
  for (auto i : m.indices) {
    if (i >= dataset_size) {
      fail(ErrorKind::OutOfBounds, "manifest '" + m.name + "' index " + std::to_string(i) +
                                       " out of bounds for size " + std::to_string(dataset_size));
    }
  }
}

}  // namespace biasaudit
