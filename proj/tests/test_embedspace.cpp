#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "biasaudit/embedspace.hpp"
#include "biasaudit/errors.hpp"
#include "support/fixtures.hpp"

using namespace biasaudit;

namespace {

FeatureMatrix from_rows(std::initializer_list<std::initializer_list<float>> rows) {
  FeatureMatrix fm;
  fm.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (float v : row) fm.rows(r, c++) = v;
    ++r;
  }
  return fm;
}

// Exhaustive oracle: score everything, full sort.
std::vector<Neighbor> scan(const Eigen::RowVectorXf& q, const FeatureMatrix& ref, std::size_t k,
                           std::optional<std::size_t> skip = std::nullopt) {
  std::vector<Neighbor> all;
  for (Eigen::Index r = 0; r < ref.rows.rows(); ++r) {
    if (skip && *skip == static_cast<std::size_t>(r)) continue;
    double dot = 0;
    for (Eigen::Index c = 0; c < q.size(); ++c) dot += double(q[c]) * double(ref.rows(r, c));
    all.push_back({static_cast<std::size_t>(r), dot});
  }
  std::stable_sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.similarity > b.similarity; });
  all.resize(k);
  return all;
}

int brute_vote(const std::vector<Neighbor>& nbs, const std::vector<int>& labels) {
  std::map<int, int> votes;
  std::map<int, double> sims;
  for (const auto& n : nbs) {
    votes[labels[n.index]]++;
    sims[labels[n.index]] += n.similarity;
  }
  int best = -1;
  for (int label = 0; label < 10; ++label) {
    if (!votes.count(label)) continue;
    if (best < 0 || votes[label] > votes[best] || (votes[label] == votes[best] && sims[label] > sims[best]))
      best = label;
  }
  return best;
}

Eigen::MatrixXd as_double(const FeatureMatrix& fm) { return fm.rows.cast<double>(); }

}  // namespace

TEST_SUITE("embedspace") {
  TEST_CASE("normalize_rows") {
    const auto n = normalize_rows(from_rows({{3, 4}, {0, 2}}));
    CHECK(n.rows(0, 0) == doctest::Approx(0.6));
    CHECK(n.rows(0, 1) == doctest::Approx(0.8));
    CHECK(n.rows(1, 1) == 1.0f);
    const auto twice = normalize_rows(n);
    CHECK((twice.rows - n.rows).cwiseAbs().maxCoeff() <= 1e-7f);

    SplitMix64 rng(4);
    const auto r = normalize_rows(fixtures::random_features(rng, 50, 16));
    for (Eigen::Index i = 0; i < 50; ++i) CHECK(std::abs(r.rows.row(i).cast<double>().norm() - 1.0) <= 1e-6);
    CHECK(rows_normalized(r));

    try {
      normalize_rows(from_rows({{1, 0}, {0, 0}}));
      FAIL("expected zero-row error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroRow);
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
  }

  TEST_CASE("knn_query examples") {
    SplitMix64 rng(6);
    const auto ref = normalize_rows(fixtures::random_features(rng, 20, 8));
    const auto self = knn_query(ref.rows.row(7), ref, {1, false});
    REQUIRE(self.size() == 1);
    CHECK(self[0].index == 7);
    CHECK(self[0].similarity == doctest::Approx(1.0).epsilon(1e-6));

    const auto skipped = knn_query(ref.rows.row(7), ref, {1, true}, 7);
    CHECK(skipped[0].index != 7);

    FeatureMatrix ortho;
    ortho.rows = FeatureRows::Identity(8, 8);
    Eigen::RowVectorXf q = Eigen::RowVectorXf::Zero(8);
    q[2] = std::cos(0.2f);
    q[5] = std::sin(0.2f);
    const auto two = knn_query(q, ortho, {2, false});
    CHECK(two[0].index == 2);
    CHECK(two[1].index == 5);

    CHECK_THROWS_AS(knn_query(q, ortho, {8, false}), Error);
    CHECK_THROWS_AS(knn_query(Eigen::RowVectorXf::Zero(3), ortho, {1, false}), Error);
  }

  TEST_CASE("knn_query ties go to the lower index") {
    FeatureMatrix dup;
    dup.rows.resize(4, 2);
    dup.rows << 0, 1, 1, 0, 1, 0, 0, 1;
    const auto nb = knn_query(Eigen::RowVector2f(1, 0), dup, {2, false});
    CHECK(nb[0].index == 1);
    CHECK(nb[1].index == 2);
  }

  TEST_CASE("knn_query equals an exhaustive scan") {
    SplitMix64 rng(1000);
    const auto ref = normalize_rows(fixtures::random_features(rng, 1000, 32));
    const auto queries = normalize_rows(fixtures::random_features(rng, 30, 32));
    for (Eigen::Index q = 0; q < queries.rows.rows(); ++q) {
      const auto got = knn_query(queries.rows.row(q), ref, {5, false});
      const auto want = scan(queries.rows.row(q), ref, 5);
      for (std::size_t k = 0; k < 5; ++k) {
        CHECK(got[k].index == want[k].index);
        CHECK(std::abs(got[k].similarity - want[k].similarity) <= 1e-12);
      }
    }
  }

  TEST_CASE("knn_classify voting") {
    FeatureMatrix ref;
    ref.rows.resize(5, 2);
    // Similarities to (1,0): rows 0..3 vote {A=3,A=3,B=1,B=1}; A's sum is larger.
    ref.rows << 0.9f, 0.43589f, 0.85f, 0.52678f, 0.88f, -0.47497f, 0.8f, 0.6f, -1, 0;
    const std::vector<int> labels = {3, 3, 1, 1, 7};
    FeatureMatrix query;
    query.rows = FeatureRows(1, 2);
    query.rows << 1, 0;
    // sums: A = 0.9 + 0.85 = 1.75, B = 0.88 + 0.8 = 1.68
    CHECK(knn_classify(query, ref, labels, {4, false}).entries[0].pred_label == 3);
    CHECK(knn_classify(query, ref, labels, {1, false}).entries[0].pred_label == 3);

    // Identical rows: votes and sums tie, smaller label wins.
    FeatureMatrix same;
    same.rows = FeatureRows::Ones(5, 2);
    CHECK(knn_classify(query, same, std::vector<int>{6, 6, 2, 2, 9}, {4, false}).entries[0].pred_label == 2);
  }

  TEST_CASE("knn_classify matches a brute-force classifier and is deterministic") {
    SplitMix64 rng(500);
    const auto ref = normalize_rows(fixtures::random_features(rng, 500, 12));
    std::vector<int> labels;
    for (int i = 0; i < 500; ++i) labels.push_back(static_cast<int>(rng.next() % 10));
    std::vector<std::size_t> ids(500);
    for (std::size_t i = 0; i < 500; ++i) ids[i] = i;
    const KnnConfig cfg{4, true};
    const auto pt = knn_classify(ref, ref, labels, cfg, ids, labels);
    for (std::size_t i = 0; i < 500; ++i) {
      const auto nbs = scan(ref.rows.row(static_cast<Eigen::Index>(i)), ref, 4, i);
      CHECK(pt.entries[i].pred_label == brute_vote(nbs, labels));
      CHECK(pt.entries[i].true_label == labels[i]);
    }
    const auto again = knn_classify(ref, ref, labels, cfg, ids, labels);
    CHECK(again.entries == pt.entries);
  }

  TEST_CASE("probe gradient matches central differences") {
    SplitMix64 rng(55);
    const auto x = as_double(fixtures::random_features(rng, 5, 8));
    const std::vector<int> y = {0, 2, 1, 2, 0};
    ProbeModel model{Eigen::MatrixXd(3, 8), Eigen::VectorXd(3)};
    for (Eigen::Index i = 0; i < model.weights.size(); ++i) model.weights.data()[i] = 0.3 * fixtures::gaussian(rng);
    for (Eigen::Index i = 0; i < 3; ++i) model.bias[i] = 0.3 * fixtures::gaussian(rng);

    ProbeModel grad;
    probe_loss(model, x, y, 0.05, &grad);
    constexpr double eps = 1e-5;
    double worst = 0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1e-8, std::abs(a) + std::abs(b)); };
    for (Eigen::Index i = 0; i < model.weights.size(); ++i) {
      ProbeModel plus = model, minus = model;
      plus.weights.data()[i] += eps;
      minus.weights.data()[i] -= eps;
      const double fd = (probe_loss(plus, x, y, 0.05) - probe_loss(minus, x, y, 0.05)) / (2 * eps);
      worst = std::max(worst, rel(grad.weights.data()[i], fd));
    }
    for (Eigen::Index i = 0; i < 3; ++i) {
      ProbeModel plus = model, minus = model;
      plus.bias[i] += eps;
      minus.bias[i] -= eps;
      const double fd = (probe_loss(plus, x, y, 0.05) - probe_loss(minus, x, y, 0.05)) / (2 * eps);
      worst = std::max(worst, rel(grad.bias[i], fd));
    }
    CHECK(worst <= 1e-4);
  }

  TEST_CASE("probe training on separable blobs") {
    auto blobs = fixtures::make_blobs(3);
    const auto x = normalize_rows(blobs.features);
    std::vector<double> trace;
    const auto model = train_probe(x, blobs.labels, {0.1, 500, 0.0}, 2, &trace);
    REQUIRE(trace.size() == 501);
    for (std::size_t t = 1; t < trace.size(); ++t) CHECK(trace[t] <= trace[t - 1]);
    CHECK(probe_accuracy(probe_predict(model, x, blobs.labels)) == 1.0);
  }

  TEST_CASE("zero iterations returns the all-zero initialization") {
    auto blobs = fixtures::make_blobs(4, 10);
    std::vector<double> trace;
    const auto model = train_probe(blobs.features, blobs.labels, {0.1, 0, 0.0}, kNumClasses, &trace);
    CHECK(model.weights.isZero());
    CHECK(model.bias.isZero());
    CHECK(trace.front() == doctest::Approx(std::log(10.0)));
    const auto pt = probe_predict(model, blobs.features, blobs.labels);
    for (const auto& e : pt.entries) CHECK(e.pred_label == 0);
  }

  TEST_CASE("divergence is reported") {
    FeatureMatrix fm;
    fm.rows = FeatureRows::Constant(4, 2, 1e30f);
    fm.rows(1, 0) = -1e30f;
    try {
      train_probe(fm, std::vector<int>{0, 1, 0, 1}, {1e300, 5, 0.0}, 2);
      FAIL("expected divergence");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Divergence);
    }
  }

  TEST_CASE("probe predictions ignore a constant logit shift") {
    auto blobs = fixtures::make_blobs(8);
    const auto model = train_probe(blobs.features, blobs.labels, {0.05, 50, 0.01}, 2);
    ProbeModel shifted = model;
    shifted.bias.array() += 123.25;
    CHECK(probe_predict(shifted, blobs.features, blobs.labels).entries ==
          probe_predict(model, blobs.features, blobs.labels).entries);
  }

  TEST_CASE("probe accuracy and dimension checks") {
    PredictionTable pt;
    pt.entries = {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 4, 0}};
    CHECK(probe_accuracy(pt) == 0.75);
    pt.entries.pop_back();
    CHECK(probe_accuracy(pt) == 1.0);
    CHECK_THROWS_AS(probe_accuracy(PredictionTable{}), Error);

    ProbeModel m{Eigen::MatrixXd::Zero(10, 3), Eigen::VectorXd::Zero(10)};
    SplitMix64 rng(2);
    try {
      probe_predict(m, fixtures::random_features(rng, 4, 5));
      FAIL("expected dimension mismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
  }
}
