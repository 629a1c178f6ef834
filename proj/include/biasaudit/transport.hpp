#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "biasaudit/colorsig.hpp"
#include "biasaudit/errors.hpp"

namespace biasaudit {

/// Balanced transportation problem: ship `supply` to `demand` at per-unit
/// cost `cost(i, j)`.
template <typename Scalar>
struct TransportProblem {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> supply;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> demand;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cost;
};

template <typename Scalar>
struct Flow {
  Eigen::Index from = 0;
  Eigen::Index to = 0;
  Scalar amount = 0;
};

template <typename Scalar>
struct FlowPlan {
  std::vector<Flow<Scalar>> flows;
  Scalar total_cost = 0;
};

inline constexpr double kMassTolerance = 1e-9;

/// Ground-distance matrix |p_i - q_j| for scalar positions.
template <typename DerivedA, typename DerivedB>
auto abs_distance_matrix(const Eigen::MatrixBase<DerivedA>& p, const Eigen::MatrixBase<DerivedB>& q) {
  return (p.replicate(1, q.size()) - q.transpose().replicate(p.size(), 1)).cwiseAbs().eval();
}

namespace detail {

// Spanning-tree basis of the transportation simplex. Nodes 0..m-1 are
// sources, m..m+n-1 are sinks; each basic cell is an edge between them.
template <typename Scalar>
class TransportSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  TransportSimplex(const Vector& supply, const Vector& demand, const Matrix& cost)
      : m_(supply.size()), n_(demand.size()), cost_(cost) {
    // Degeneracy-breaking perturbation of the supplies; the matching total
    // lands on the last sink so the problem stays balanced.
    const Scalar eps = Scalar(1e-12) * std::max(Scalar(1), supply.sum());
    Vector s = supply;
    Vector d = demand;
    for (Eigen::Index i = 0; i < m_; ++i) s[i] += eps * Scalar(i + 1);
    d[n_ - 1] += eps * Scalar(m_ * (m_ + 1) / 2);
    vogel_start(s, d);
    flows_ = tree_flows(s, d);
  }

  void optimize() {
    const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), cost_.cwiseAbs().maxCoeff());
    const long max_iters = 50L * (m_ + n_) * (m_ + n_) + 1000;
    int degenerate_run = 0;
    Vector u(m_), v(n_);
    for (long iter = 0; iter < max_iters; ++iter) {
      potentials(u, v);
      // Dantzig pricing; after a run of degenerate pivots switch to the
      // first improving cell (Bland) until progress resumes.
      const bool bland = degenerate_run > static_cast<int>(m_ + n_);
      Eigen::Index ei = -1, ej = -1;
      Scalar best = -tol;
      for (Eigen::Index i = 0; i < m_; ++i) {
        for (Eigen::Index j = 0; j < n_; ++j) {
          const Scalar rc = cost_(i, j) - u[i] - v[j];
          if (rc < best) {
            best = rc;
            ei = i;
            ej = j;
            if (bland) goto priced;
          }
        }
      }
    priced:
      if (ei < 0) return;
      const Scalar theta = pivot(ei, ej);
      degenerate_run = theta > Scalar(0) ? 0 : degenerate_run + 1;
    }
    fail(ErrorKind::Infeasible, "transportation simplex did not converge");
  }

  /// Basic solution of the final basis for the unperturbed margins.
  FlowPlan<Scalar> plan(const Vector& supply, const Vector& demand) const {
    const std::vector<Scalar> x = tree_flows(supply, demand);
    FlowPlan<Scalar> out;
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      out.total_cost += x[e] * cost_(basis_[e].first, basis_[e].second);
      if (x[e] > Scalar(0)) out.flows.push_back({basis_[e].first, basis_[e].second, x[e]});
    }
    std::sort(out.flows.begin(), out.flows.end(), [](const auto& a, const auto& b) {
      return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    return out;
  }

 private:
  using Cell = std::pair<Eigen::Index, Eigen::Index>;

  Eigen::Index m_, n_;
  const Matrix& cost_;
  std::vector<Cell> basis_;
  std::vector<Scalar> flows_;

  // Vogel's approximation. Exactly one line is retired per allocation (both
  // on the final one), which yields m+n-1 basic cells forming a tree.
  void vogel_start(Vector s, Vector d) {
    std::vector<bool> row_live(m_, true), col_live(n_, true);
    Eigen::Index rows_left = m_, cols_left = n_;
    basis_.clear();
    basis_.reserve(m_ + n_ - 1);
    constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

    auto line_penalty = [&](bool is_row, Eigen::Index k, Eigen::Index& argmin) {
      Scalar lo1 = kInf, lo2 = kInf;
      argmin = -1;
      const Eigen::Index len = is_row ? n_ : m_;
      for (Eigen::Index t = 0; t < len; ++t) {
        if (is_row ? !col_live[t] : !row_live[t]) continue;
        const Scalar c = is_row ? cost_(k, t) : cost_(t, k);
        if (c < lo1) {
          lo2 = lo1;
          lo1 = c;
          argmin = t;
        } else if (c < lo2) {
          lo2 = c;
        }
      }
      return lo2 == kInf ? lo1 : lo2 - lo1;
    };

    while (rows_left > 0 && cols_left > 0) {
      Scalar best = -1;
      Eigen::Index bi = -1, bj = -1;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!row_live[i]) continue;
        Eigen::Index j;
        const Scalar p = line_penalty(true, i, j);
        if (p > best) { best = p; bi = i; bj = j; }
      }
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (!col_live[j]) continue;
        Eigen::Index i;
        const Scalar p = line_penalty(false, j, i);
        if (p > best) { best = p; bi = i; bj = j; }
      }

      const Scalar amount = std::min(s[bi], d[bj]);
      s[bi] -= amount;
      d[bj] -= amount;
      basis_.push_back({bi, bj});

      if (rows_left == 1 && cols_left == 1) {
        row_live[bi] = false;
        col_live[bj] = false;
        --rows_left;
        --cols_left;
      } else if (rows_left == 1 || (cols_left > 1 && d[bj] <= s[bi])) {
        col_live[bj] = false;
        --cols_left;
      } else {
        row_live[bi] = false;
        --rows_left;
      }
    }
  }

  std::vector<std::vector<std::pair<Eigen::Index, std::size_t>>> adjacency() const {
    std::vector<std::vector<std::pair<Eigen::Index, std::size_t>>> adj(m_ + n_);
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj[basis_[e].first].push_back({m_ + basis_[e].second, e});
      adj[m_ + basis_[e].second].push_back({basis_[e].first, e});
    }
    return adj;
  }

  // Leaf peeling: a leaf's single edge must carry the leaf's whole margin.
  std::vector<Scalar> tree_flows(const Vector& supply, const Vector& demand) const {
    std::vector<Scalar> rest(m_ + n_);
    for (Eigen::Index i = 0; i < m_; ++i) rest[i] = supply[i];
    for (Eigen::Index j = 0; j < n_; ++j) rest[m_ + j] = demand[j];
    const auto adj = adjacency();
    std::vector<int> degree(m_ + n_);
    for (std::size_t k = 0; k < adj.size(); ++k) degree[k] = static_cast<int>(adj[k].size());
    std::vector<bool> edge_done(basis_.size(), false);
    std::vector<Scalar> x(basis_.size(), Scalar(0));
    std::vector<Eigen::Index> leaves;
    for (Eigen::Index k = 0; k < m_ + n_; ++k)
      if (degree[k] == 1) leaves.push_back(k);
    while (!leaves.empty()) {
      const Eigen::Index leaf = leaves.back();
      leaves.pop_back();
      if (degree[leaf] != 1) continue;
      for (const auto& [other, e] : adj[leaf]) {
        if (edge_done[e]) continue;
        edge_done[e] = true;
        x[e] = rest[leaf];
        rest[other] -= rest[leaf];
        rest[leaf] = 0;
        degree[leaf] = 0;
        if (--degree[other] == 1) leaves.push_back(other);
        break;
      }
    }
    return x;
  }

  void potentials(Vector& u, Vector& v) const {
    const auto adj = adjacency();
    std::vector<Scalar> pot(m_ + n_, Scalar(0));
    std::vector<bool> seen(m_ + n_, false);
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const Eigen::Index k = stack.back();
      stack.pop_back();
      for (const auto& [other, e] : adj[k]) {
        if (seen[other]) continue;
        seen[other] = true;
        const Scalar c = cost_(basis_[e].first, basis_[e].second);
        pot[other] = c - pot[k];
        stack.push_back(other);
      }
    }
    for (Eigen::Index i = 0; i < m_; ++i) u[i] = pot[i];
    for (Eigen::Index j = 0; j < n_; ++j) v[j] = pot[m_ + j];
  }

  // Brings cell (ei, ej) into the basis; returns the step length.
  Scalar pivot(Eigen::Index ei, Eigen::Index ej) {
    const auto adj = adjacency();
    // Tree path from sink ej back to source ei.
    std::vector<Eigen::Index> parent(m_ + n_, -1);
    std::vector<std::size_t> parent_edge(m_ + n_, 0);
    std::vector<bool> seen(m_ + n_, false);
    std::vector<Eigen::Index> stack{ei};
    seen[ei] = true;
    while (!stack.empty()) {
      const Eigen::Index k = stack.back();
      stack.pop_back();
      for (const auto& [other, e] : adj[k]) {
        if (seen[other]) continue;
        seen[other] = true;
        parent[other] = k;
        parent_edge[other] = e;
        stack.push_back(other);
      }
    }
    std::vector<std::size_t> path;
    for (Eigen::Index k = m_ + ej; k != ei; k = parent[k]) path.push_back(parent_edge[k]);

    // Signs alternate -,+,-,... along the path from the entering sink.
    Scalar theta = std::numeric_limits<Scalar>::infinity();
    std::size_t leave = 0;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const std::size_t e = path[t];
      const Scalar f = flows_[e];
      const auto key = basis_[e].first * n_ + basis_[e].second;
      const auto leave_key = basis_[leave].first * n_ + basis_[leave].second;
      if (f < theta || (f == theta && key < leave_key)) {
        theta = f;
        leave = e;
      }
    }
    theta = std::max(theta, Scalar(0));
    for (std::size_t t = 0; t < path.size(); ++t) flows_[path[t]] += (t % 2 == 0) ? -theta : theta;
    basis_[leave] = {ei, ej};
    flows_[leave] = theta;
    return theta;
  }
};

}  // namespace detail

/// Minimum-cost transport plan. Throws Infeasible when the margins do not
/// balance within kMassTolerance, InvalidArgument on malformed inputs.
template <typename Scalar>
FlowPlan<Scalar> solve_transport(const TransportProblem<Scalar>& tp) {
  const Eigen::Index m = tp.supply.size(), n = tp.demand.size();
  if (m == 0 || n == 0) fail(ErrorKind::InvalidArgument, "transport problem has no sources or sinks");
  if (tp.cost.rows() != m || tp.cost.cols() != n) {
    fail(ErrorKind::DimensionMismatch, "cost matrix is " + std::to_string(tp.cost.rows()) + "x" +
                                           std::to_string(tp.cost.cols()) + ", expected " +
                                           std::to_string(m) + "x" + std::to_string(n));
  }
  if (!tp.supply.allFinite() || !tp.demand.allFinite() || !tp.cost.allFinite())
    fail(ErrorKind::NonFinite, "transport problem contains non-finite values");
  if ((tp.supply.array() <= Scalar(0)).any() || (tp.demand.array() <= Scalar(0)).any())
    fail(ErrorKind::InvalidArgument, "supplies and demands must be positive");
  if ((tp.cost.array() < Scalar(0)).any()) fail(ErrorKind::InvalidArgument, "costs must be non-negative");
  const Scalar total_supply = tp.supply.sum();
  const Scalar total_demand = tp.demand.sum();
  if (std::abs(total_supply - total_demand) > Scalar(kMassTolerance)) {
    fail(ErrorKind::Infeasible, "supply total " + std::to_string(total_supply) +
                                    " does not balance demand total " + std::to_string(total_demand));
  }
  // Absorb the admissible imbalance so the basic solution is exact.
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> demand = tp.demand * (total_supply / total_demand);

  detail::TransportSimplex<Scalar> simplex(tp.supply, demand, tp.cost);
  simplex.optimize();
  return simplex.plan(tp.supply, demand);
}

/// Earth Mover's Distance between two signatures under |p - q| ground
/// distance, normalized by the total flow.
template <typename Scalar>
Scalar emd(const Signature<Scalar>& a, const Signature<Scalar>& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::EmptySignature, "EMD needs non-empty signatures");
  const Scalar mass_a = a.weights.sum();
  const Scalar mass_b = b.weights.sum();
  if (std::abs(mass_a - mass_b) > Scalar(kMassTolerance)) {
    fail(ErrorKind::MassMismatch, "signature masses differ: " + std::to_string(mass_a) + " vs " +
                                      std::to_string(mass_b));
  }
  if (a.weights.size() == b.weights.size() && a.weights == b.weights && a.positions == b.positions)
    return Scalar(0);

  TransportProblem<Scalar> tp{a.weights, b.weights, abs_distance_matrix(a.positions, b.positions)};
  return solve_transport(tp).total_cost / mass_a;
}

/// Closed-form 1-D EMD: the L1 distance between cumulative weight functions,
/// normalized by total mass.
template <typename Scalar>
Scalar emd_1d_oracle(const Signature<Scalar>& a, const Signature<Scalar>& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::EmptySignature, "EMD needs non-empty signatures");
  const Scalar mass_a = a.weights.sum();
  const Scalar mass_b = b.weights.sum();
  if (std::abs(mass_a - mass_b) > Scalar(kMassTolerance)) {
    fail(ErrorKind::MassMismatch, "signature masses differ: " + std::to_string(mass_a) + " vs " +
                                      std::to_string(mass_b));
  }
  // Signed point masses: +a, -b, swept left to right.
  std::vector<std::pair<Scalar, Scalar>> events;
  events.reserve(a.size() + b.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) events.emplace_back(a.positions[k], a.weights[k]);
  for (Eigen::Index k = 0; k < b.size(); ++k)
    events.emplace_back(b.positions[k], -b.weights[k] * (mass_a / mass_b));
  std::sort(events.begin(), events.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  Scalar cdf_gap = 0, area = 0;
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    cdf_gap += events[k].second;
    area += std::abs(cdf_gap) * (events[k + 1].first - events[k].first);
  }
  return area / mass_a;
}

extern template FlowPlan<double> solve_transport(const TransportProblem<double>&);
extern template double emd(const Signature<double>&, const Signature<double>&);
extern template double emd_1d_oracle(const Signature<double>&, const Signature<double>&);

}  // namespace biasaudit
