#include "biasaudit/audit.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "biasaudit/colorsig.hpp"
#include "biasaudit/errors.hpp"
#include "biasaudit/transport.hpp"

namespace biasaudit {

void check_aligned(const PredictionTable& a, const PredictionTable& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& x = a.entries[k];
    const auto& y = b.entries[k];
    if (x.index != y.index || x.true_label != y.true_label) {
      fail(ErrorKind::Alignment, "tables '" + a.model_id + "' and '" + b.model_id +
                                     "' disagree at entry " + std::to_string(k) + " (index " +
                                     std::to_string(x.index) + "/" + std::to_string(y.index) +
                                     ", true label " + std::to_string(x.true_label) + "/" +
                                     std::to_string(y.true_label) + ")");
    }
  }
  if (a.size() != b.size()) {
    fail(ErrorKind::Alignment, "tables '" + a.model_id + "' and '" + b.model_id + "' differ in length (" +
                                   std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                   ")");
  }
}

GapSet agreement_and_gap(std::span<const PredictionTable> unsupervised,
                         const PredictionTable& supervised) {
  if (unsupervised.empty()) fail(ErrorKind::InvalidArgument, "need at least one unsupervised table");
  for (const auto& t : unsupervised) check_aligned(supervised, t);

  GapSet gap;
  gap.indices.name = "gap";
  for (std::size_t k = 0; k < supervised.size(); ++k) {
    const int truth = supervised.entries[k].true_label;
    bool all_wrong = true;
    bool all_same = true;
    const int first_pred = unsupervised.front().entries[k].pred_label;
    for (const auto& t : unsupervised) {
      all_wrong = all_wrong && t.entries[k].pred_label != truth;
      all_same = all_same && t.entries[k].pred_label == first_pred;
    }
    if (!all_wrong) continue;
    ++gap.shared_wrong_count;
    if (!all_same) continue;
    ++gap.shared_wrong_same_count;
    if (supervised.entries[k].correct()) gap.indices.indices.push_back(supervised.entries[k].index);
  }
  gap.gap_count = gap.indices.size();
  return gap;
}

FeatureMatrix select_rows(const FeatureMatrix& fm, std::span<const std::size_t> rows) {
  FeatureMatrix out;
  out.model_id = fm.model_id;
  out.split_name = fm.split_name;
  out.rows.resize(static_cast<Eigen::Index>(rows.size()), fm.rows.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= fm.count()) {
      fail(ErrorKind::OutOfBounds, "row " + std::to_string(rows[k]) + " out of bounds for " +
                                       std::to_string(fm.count()) + " feature rows");
    }
    out.rows.row(static_cast<Eigen::Index>(k)) = fm.rows.row(static_cast<Eigen::Index>(rows[k]));
  }
  return out;
}

ColorBiasReport color_bias_score(const SubsetManifest& subset, const FeatureMatrix& query_feats,
                                 const FeatureMatrix& ref_feats, const Dataset& query_imgs,
                                 const Dataset& ref_imgs, const KnnConfig& cfg) {
  if (subset.indices.empty()) fail(ErrorKind::InvalidArgument, "color bias needs a non-empty subset");
  if (query_feats.count() != query_imgs.size() || ref_feats.count() != ref_imgs.size()) {
    fail(ErrorKind::DimensionMismatch, "feature rows are not aligned with their image datasets");
  }
  if (!rows_normalized(query_feats) || !rows_normalized(ref_feats)) {
    fail(ErrorKind::InvalidArgument, "color bias expects row-normalized features");
  }
  check_manifest_bounds(subset, query_feats.count());

  std::unordered_map<std::size_t, ColorSignature> ref_signatures;
  auto ref_signature = [&](std::size_t i) -> const ColorSignature& {
    auto it = ref_signatures.find(i);
    if (it == ref_signatures.end()) it = ref_signatures.emplace(i, image_signature(ref_imgs.records[i])).first;
    return it->second;
  };

  ColorBiasReport report;
  report.model_id = query_feats.model_id;
  report.per_query_emd.reserve(subset.size());
  double total = 0;
  for (std::size_t q : subset.indices) {
    const ColorSignature query_sig = image_signature(query_imgs.records[q]);
    const auto neighbors =
        knn_query(query_feats.rows.row(static_cast<Eigen::Index>(q)), ref_feats, cfg, q);
    double sum = 0;
    for (const auto& nb : neighbors) sum += emd(query_sig, ref_signature(nb.index));
    const double mean = sum / static_cast<double>(neighbors.size());
    report.per_query_emd.emplace_back(q, mean);
    total += mean;
  }
  report.mean_emd = total / static_cast<double>(subset.size());
  return report;
}

ShapeBiasReport shape_bias_eval(const FeatureMatrix& silhouette_feats, const SubsetManifest& manifest,
                                std::span<const int> labels, const ProbeModel& probe) {
  if (labels.size() != silhouette_feats.count()) {
    fail(ErrorKind::DimensionMismatch, "silhouette labels do not match feature rows");
  }
  if (manifest.indices.empty()) fail(ErrorKind::InvalidArgument, "shape bias needs a non-empty manifest");
  check_manifest_bounds(manifest, silhouette_feats.count());

  std::vector<int> subset_labels;
  subset_labels.reserve(manifest.size());
  for (auto i : manifest.indices) subset_labels.push_back(labels[i]);
  const auto table = probe_predict(probe, select_rows(silhouette_feats, manifest.indices),
                                   subset_labels, manifest.indices);
  return {silhouette_feats.model_id, probe_accuracy(table), manifest.size()};
}

DistortionReport distortion_eval(const PredictionTable& baseline,
                                 const std::map<std::string, PredictionTable>& distorted) {
  DistortionReport report;
  report.model_id = baseline.model_id;
  report.baseline_acc = probe_accuracy(baseline);
  for (const auto& [name, table] : distorted) {
    check_aligned(baseline, table);
    report.deltas[name] = probe_accuracy(table) - report.baseline_acc;
  }
  return report;
}

PredictionTable knn_subset_predictions(const SubsetManifest& subset, const FeatureMatrix& query_feats,
                                       std::span<const int> query_labels,
                                       const FeatureMatrix& ref_feats,
                                       std::span<const int> ref_labels, const KnnConfig& cfg) {
  if (query_labels.size() != query_feats.count()) {
    fail(ErrorKind::DimensionMismatch, "query labels do not match feature rows");
  }
  check_manifest_bounds(subset, query_feats.count());
  std::vector<int> labels;
  labels.reserve(subset.size());
  for (auto i : subset.indices) labels.push_back(query_labels[i]);
  return knn_classify(select_rows(query_feats, subset.indices), ref_feats, ref_labels, cfg,
                      subset.indices, labels);
}

}  // namespace biasaudit
