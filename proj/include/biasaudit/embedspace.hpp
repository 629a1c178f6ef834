#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "biasaudit/corpus.hpp"

namespace biasaudit {

/// Cosine kNN over L2-normalized features.
struct KnnConfig {
  std::size_t k = 4;
  bool exclude_self = false;
};

struct Neighbor {
  std::size_t index = 0;
  double similarity = 0;
};

/// Scales every row to unit Euclidean norm. A zero row is an error naming
/// its index.
FeatureMatrix normalize_rows(const FeatureMatrix& fm);

/// True when every row has unit norm within `tol`.
bool rows_normalized(const FeatureMatrix& fm, double tol = 1e-4);

/// Exact top-k by cosine similarity, descending, ties to the lower index.
/// `self_index` names the query's own row in `reference`; it is skipped when
/// `cfg.exclude_self` is set.
std::vector<Neighbor> knn_query(const Eigen::Ref<const Eigen::RowVectorXf>& query,
                                const FeatureMatrix& reference, const KnnConfig& cfg,
                                std::optional<std::size_t> self_index = std::nullopt);

/// Majority vote over the k neighbors. Vote ties go to the label with the
/// larger summed similarity, then to the smaller label.
///
/// `query_ids` are the dataset indices of the query rows (defaults to
/// 0..n-1); they become the table's indices and, with exclude_self, the
/// identity used to skip the query in `reference`. `query_labels` fill the
/// true_label column (defaults to 0).
PredictionTable knn_classify(const FeatureMatrix& queries, const FeatureMatrix& reference,
                             std::span<const int> reference_labels, const KnnConfig& cfg,
                             std::span<const std::size_t> query_ids = {},
                             std::span<const int> query_labels = {});

struct ProbeConfig {
  double step_size = 0.1;
  int iterations = 500;
  double l2_penalty = 0.0;
};

/// Softmax linear head: logits = weights * x + bias.
struct ProbeModel {
  Eigen::MatrixXd weights;  // classes x dim
  Eigen::VectorXd bias;     // classes

  Eigen::Index num_classes() const { return weights.rows(); }
  Eigen::Index dim() const { return weights.cols(); }
};

/// Mean softmax cross-entropy plus 0.5 * l2 * ||W||^2 over rows of
/// `features`. When `gradient` is non-null it receives dLoss/dW and dLoss/db.
double probe_loss(const ProbeModel& model, const Eigen::MatrixXd& features,
                  std::span<const int> labels, double l2_penalty, ProbeModel* gradient = nullptr);

/// Full-batch gradient descent from all-zero parameters. `loss_trace`, when
/// given, receives the loss before each step and after the last one.
ProbeModel train_probe(const FeatureMatrix& features, std::span<const int> labels,
                       const ProbeConfig& cfg, int num_classes = kNumClasses,
                       std::vector<double>* loss_trace = nullptr);

/// Row-wise argmax of the logits, ties to the smaller class.
PredictionTable probe_predict(const ProbeModel& model, const FeatureMatrix& features,
                              std::span<const int> true_labels = {},
                              std::span<const std::size_t> ids = {});

double probe_accuracy(const PredictionTable& pt);

std::vector<int> dataset_labels(const Dataset& ds);

}  // namespace biasaudit
