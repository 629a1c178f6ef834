#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biasaudit/corpus.hpp"
#include "biasaudit/embedspace.hpp"

namespace biasaudit {

/// Images every unsupervised model gets wrong with one shared wrong label
/// while the supervised model is right, plus the two enclosing counts:
/// gap_count <= shared_wrong_same_count <= shared_wrong_count.
struct GapSet {
  SubsetManifest indices;
  std::size_t shared_wrong_count = 0;
  std::size_t shared_wrong_same_count = 0;
  std::size_t gap_count = 0;
};

struct ColorBiasReport {
  std::string model_id;
  std::vector<std::pair<std::size_t, double>> per_query_emd;  // (dataset index, mean EMD)
  double mean_emd = 0;
};

struct ShapeBiasReport {
  std::string model_id;
  double accuracy = 0;
  std::size_t n = 0;
};

struct DistortionReport {
  std::string model_id;
  double baseline_acc = 0;
  std::map<std::string, double> deltas;  // name -> accuracy(distorted) - baseline
};

/// Throws Alignment naming the first entry where `b` disagrees with `a` on
/// index or true label.
void check_aligned(const PredictionTable& a, const PredictionTable& b);

GapSet agreement_and_gap(std::span<const PredictionTable> unsupervised,
                         const PredictionTable& supervised);

/// Mean EMD between each subset image's hue signature and those of its k
/// nearest neighbors in `ref_feats`, averaged over the subset. Subset indices
/// address rows of `query_feats`/`query_imgs`; with exclude_self they are
/// also the query's identity in the reference.
ColorBiasReport color_bias_score(const SubsetManifest& subset, const FeatureMatrix& query_feats,
                                 const FeatureMatrix& ref_feats, const Dataset& query_imgs,
                                 const Dataset& ref_imgs, const KnnConfig& cfg);

/// Probe accuracy over the manifest rows of the silhouette features.
ShapeBiasReport shape_bias_eval(const FeatureMatrix& silhouette_feats, const SubsetManifest& manifest,
                                std::span<const int> labels, const ProbeModel& probe);

DistortionReport distortion_eval(const PredictionTable& baseline,
                                 const std::map<std::string, PredictionTable>& distorted);

/// kNN classification accuracy over the subset rows of `query_feats`.
PredictionTable knn_subset_predictions(const SubsetManifest& subset, const FeatureMatrix& query_feats,
                                       std::span<const int> query_labels,
                                       const FeatureMatrix& ref_feats,
                                       std::span<const int> ref_labels, const KnnConfig& cfg);

FeatureMatrix select_rows(const FeatureMatrix& fm, std::span<const std::size_t> rows);

}  // namespace biasaudit
