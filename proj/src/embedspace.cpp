#include "biasaudit/embedspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "biasaudit/errors.hpp"

namespace biasaudit {
namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.similarity != b.similarity ? a.similarity > b.similarity : a.index < b.index;
}

void check_labels(std::span<const int> labels, std::size_t expected, const char* what) {
  if (labels.size() != expected) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + ": " + std::to_string(labels.size()) +
                                           " labels for " + std::to_string(expected) + " rows");
  }
}

}  // namespace

std::vector<int> dataset_labels(const Dataset& ds) {
  std::vector<int> labels(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) labels[i] = ds.records[i].label;
  return labels;
}

FeatureMatrix normalize_rows(const FeatureMatrix& fm) {
  FeatureMatrix out = fm;
  for (Eigen::Index r = 0; r < fm.rows.rows(); ++r) {
    const double norm = fm.rows.row(r).cast<double>().norm();
    if (!(norm > 0)) fail(ErrorKind::ZeroRow, "row " + std::to_string(r) + " has zero norm");
    out.rows.row(r) = (fm.rows.row(r).cast<double>() / norm).cast<float>();
  }
  return out;
}

bool rows_normalized(const FeatureMatrix& fm, double tol) {
  for (Eigen::Index r = 0; r < fm.rows.rows(); ++r) {
    if (std::abs(fm.rows.row(r).cast<double>().norm() - 1.0) > tol) return false;
  }
  return true;
}

std::vector<Neighbor> knn_query(const Eigen::Ref<const Eigen::RowVectorXf>& query,
                                const FeatureMatrix& reference, const KnnConfig& cfg,
                                std::optional<std::size_t> self_index) {
  if (static_cast<std::size_t>(query.size()) != reference.dim()) {
    fail(ErrorKind::DimensionMismatch, "query dim " + std::to_string(query.size()) +
                                           " does not match reference dim " +
                                           std::to_string(reference.dim()));
  }
  if (cfg.k < 1) fail(ErrorKind::InvalidArgument, "k must be at least 1");
  if (cfg.k >= reference.count()) {
    fail(ErrorKind::InvalidArgument, "k = " + std::to_string(cfg.k) +
                                         " must be smaller than the reference size " +
                                         std::to_string(reference.count()));
  }
  const bool skip = cfg.exclude_self && self_index.has_value();
  const Eigen::RowVectorXd q = query.cast<double>();

  std::vector<Neighbor> scored;
  scored.reserve(reference.count());
  for (Eigen::Index r = 0; r < reference.rows.rows(); ++r) {
    if (skip && static_cast<std::size_t>(r) == *self_index) continue;
    scored.push_back({static_cast<std::size_t>(r), reference.rows.row(r).cast<double>().dot(q)});
  }
  const std::size_t k = std::min(cfg.k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    closer);
  scored.resize(k);
  return scored;
}

PredictionTable knn_classify(const FeatureMatrix& queries, const FeatureMatrix& reference,
                             std::span<const int> reference_labels, const KnnConfig& cfg,
                             std::span<const std::size_t> query_ids,
                             std::span<const int> query_labels) {
  check_labels(reference_labels, reference.count(), "reference");
  if (!query_ids.empty() && query_ids.size() != queries.count()) {
    fail(ErrorKind::DimensionMismatch, "query id count does not match query rows");
  }
  if (!query_labels.empty()) check_labels(query_labels, queries.count(), "queries");

  PredictionTable pt;
  pt.model_id = queries.model_id;
  pt.entries.reserve(queries.count());
  for (Eigen::Index r = 0; r < queries.rows.rows(); ++r) {
    const std::size_t id = query_ids.empty() ? static_cast<std::size_t>(r) : query_ids[r];
    const auto neighbors = knn_query(queries.rows.row(r), reference, cfg, id);

    std::map<int, std::pair<int, double>> tally;  // label -> (votes, summed similarity)
    for (const auto& nb : neighbors) {
      auto& t = tally[reference_labels[nb.index]];
      t.first += 1;
      t.second += nb.similarity;
    }
    int best_label = -1;
    std::pair<int, double> best{-1, 0.0};
    for (const auto& [label, t] : tally) {  // ascending label: strict > keeps the smaller
      if (t.first > best.first || (t.first == best.first && t.second > best.second)) {
        best = t;
        best_label = label;
      }
    }
    pt.entries.push_back({id, query_labels.empty() ? 0 : query_labels[r], best_label});
  }
  return pt;
}

double probe_loss(const ProbeModel& model, const Eigen::MatrixXd& features,
                  std::span<const int> labels, double l2_penalty, ProbeModel* gradient) {
  const Eigen::Index n = features.rows();
  check_labels(labels, static_cast<std::size_t>(n), "probe");
  if (features.cols() != model.dim()) {
    fail(ErrorKind::DimensionMismatch, "probe dim " + std::to_string(model.dim()) +
                                           " does not match features dim " +
                                           std::to_string(features.cols()));
  }
  Eigen::MatrixXd logits = features * model.weights.transpose();
  logits.rowwise() += model.bias.transpose();

  // Softmax probabilities, stabilized by the row max.
  const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  Eigen::MatrixXd prob = (logits.colwise() - row_max).array().exp().matrix();
  const Eigen::VectorXd norm = prob.rowwise().sum();
  double loss = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= model.num_classes()) {
      fail(ErrorKind::InvalidArgument, "label " + std::to_string(y) + " out of range at row " +
                                           std::to_string(i));
    }
    loss += std::log(norm[i]) + row_max[i] - logits(i, y);
    prob.row(i) /= norm[i];
  }
  loss = loss / static_cast<double>(n) + 0.5 * l2_penalty * model.weights.squaredNorm();

  if (gradient) {
    Eigen::MatrixXd dlogits = prob;
    for (Eigen::Index i = 0; i < n; ++i) dlogits(i, labels[i]) -= 1.0;
    dlogits /= static_cast<double>(n);
    gradient->weights = dlogits.transpose() * features + l2_penalty * model.weights;
    gradient->bias = dlogits.colwise().sum().transpose();
  }
  return loss;
}

ProbeModel train_probe(const FeatureMatrix& features, std::span<const int> labels,
                       const ProbeConfig& cfg, int num_classes, std::vector<double>* loss_trace) {
  if (!(cfg.step_size > 0)) fail(ErrorKind::InvalidArgument, "step_size must be positive");
  if (cfg.iterations < 0) fail(ErrorKind::InvalidArgument, "iterations must be non-negative");
  if (!(cfg.l2_penalty >= 0)) fail(ErrorKind::InvalidArgument, "l2_penalty must be non-negative");
  if (num_classes < 1) fail(ErrorKind::InvalidArgument, "num_classes must be positive");
  validate_features(features);
  check_labels(labels, features.count(), "probe");

  const Eigen::MatrixXd x = features.rows.cast<double>();
  ProbeModel model{Eigen::MatrixXd::Zero(num_classes, x.cols()), Eigen::VectorXd::Zero(num_classes)};
  ProbeModel grad;
  if (loss_trace) loss_trace->clear();
  for (int it = 0; it <= cfg.iterations; ++it) {
    const bool last = it == cfg.iterations;
    const double loss = probe_loss(model, x, labels, cfg.l2_penalty, last ? nullptr : &grad);
    if (!std::isfinite(loss)) {
      fail(ErrorKind::Divergence, "probe loss became non-finite at step " + std::to_string(it) +
                                      "; try a smaller step_size");
    }
    if (loss_trace) loss_trace->push_back(loss);
    if (last) break;
    model.weights -= cfg.step_size * grad.weights;
    model.bias -= cfg.step_size * grad.bias;
  }
  return model;
}

PredictionTable probe_predict(const ProbeModel& model, const FeatureMatrix& features,
                              std::span<const int> true_labels, std::span<const std::size_t> ids) {
  if (static_cast<std::size_t>(model.dim()) != features.dim()) {
    fail(ErrorKind::DimensionMismatch, "probe dim " + std::to_string(model.dim()) +
                                           " does not match features dim " +
                                           std::to_string(features.dim()));
  }
  if (!true_labels.empty()) check_labels(true_labels, features.count(), "probe_predict");
  if (!ids.empty() && ids.size() != features.count()) {
    fail(ErrorKind::DimensionMismatch, "id count does not match feature rows");
  }
  Eigen::MatrixXd logits = features.rows.cast<double>() * model.weights.transpose();
  logits.rowwise() += model.bias.transpose();

  PredictionTable pt;
  pt.model_id = features.model_id;
  pt.entries.reserve(features.count());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = static_cast<int>(c);
    pt.entries.push_back({ids.empty() ? static_cast<std::size_t>(i) : ids[i],
                          true_labels.empty() ? 0 : true_labels[i], best});
  }
  return pt;
}

double probe_accuracy(const PredictionTable& pt) {
  if (pt.entries.empty()) fail(ErrorKind::InvalidArgument, "accuracy of an empty table");
  const auto correct = std::count_if(pt.entries.begin(), pt.entries.end(),
                                     [](const Prediction& p) { return p.correct(); });
  return static_cast<double>(correct) / static_cast<double>(pt.entries.size());
}

}  // namespace biasaudit
