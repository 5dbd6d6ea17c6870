#include <algorithm>
#include <stdexcept>
#include <string>

#include "noderank/centrality.hpp"
#include "noderank/error.hpp"

namespace noderank {

TransitionMatrix::TransitionMatrix(std::size_t dimension, std::vector<std::size_t> row_offsets,
                                   std::vector<NodeId> columns, std::vector<double> values)
    : dimension_(dimension),
      row_offsets_(std::move(row_offsets)),
      columns_(std::move(columns)),
      values_(std::move(values)),
      sink_mask_(dimension, 1) {
  if (row_offsets_.size() != dimension_ + 1 || columns_.size() != values_.size() ||
      row_offsets_.back() != values_.size()) {
    throw std::invalid_argument("inconsistent compressed transition matrix");
  }
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (columns_[k] >= dimension_) throw std::out_of_range("column index out of range");
    if (!(values_[k] >= 0.0 && values_[k] <= 1.0)) {
      throw std::invalid_argument("transition probability outside [0, 1]");
    }
    if (values_[k] != 0.0) sink_mask_[columns_[k]] = 0;
  }
}

TransitionMatrix TransitionMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> cols;
  std::vector<double> vals;
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("transition matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] != 0.0) {
        cols.push_back(static_cast<NodeId>(j));
        vals.push_back(row[j]);
      }
    }
    offsets.push_back(vals.size());
  }
  return TransitionMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

double TransitionMatrix::entry(std::size_t i, std::size_t j) const {
  auto cols = row_columns(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<NodeId>(j));
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> TransitionMatrix::column_sums() const {
  std::vector<double> sums(dimension_, 0.0);
  for (std::size_t k = 0; k < columns_.size(); ++k) sums[columns_[k]] += values_[k];
  return sums;
}

std::vector<std::vector<double>> TransitionMatrix::to_dense() const {
  std::vector<std::vector<double>> dense(dimension_, std::vector<double>(dimension_, 0.0));
  for (std::size_t i = 0; i < dimension_; ++i) {
    auto cols = row_columns(i);
    auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) dense[i][cols[k]] = vals[k];
  }
  return dense;
}

TransitionMatrix transition_matrix(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<NodeId> cols(g.num_edges());
  std::vector<double> vals(g.num_edges());
  std::size_t k = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.in_neighbors(i)) {
      cols[k] = j;
      vals[k] = 1.0 / static_cast<double>(g.out_degree(j));
      ++k;
    }
    offsets[i + 1] = k;
  }
  return TransitionMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

ScoreVector fatigue_vector(const SparseGraph& g, double beta, FatigueSmoothing smoothing) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw DataError("fatigue needs at least two nodes (|V| - 1 normalizes indegree)");
  if (!(beta >= 0.0)) {
    throw std::invalid_argument("beta must be >= 0 (got " + std::to_string(beta) + ")");
  }
  const DegreeVector k = indegree(g, SelfLoops::Exclude);
  const double max_in = static_cast<double>(n - 1);

  ScoreVector result{ScoreKind::Fatigue, std::vector<double>(n)};
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double kv = static_cast<double>(k[v]);
    double raw = 0.0;
    if (smoothing == FatigueSmoothing::Ratio) {
      // 1 - (k + beta) / (|V| - 1 + beta), rearranged to avoid cancellation
      raw = (max_in - kv) / (max_in + beta);
    } else {
      raw = 1.0 - kv / max_in + beta;
    }
    result.values[v] = raw;
    total += raw;
  }
  if (total == 0.0) {
    // Only when every node has the maximum indegree: all equally fatigued.
    std::fill(result.values.begin(), result.values.end(), 1.0 / static_cast<double>(n));
  } else {
    for (double& x : result.values) x /= total;
  }
  return result;
}

TransitionMatrix fatigued_transition_matrix(const SparseGraph& g, double beta,
                                            FatigueSmoothing smoothing) {
  const ScoreVector fatigue = fatigue_vector(g, beta, smoothing);
  const std::size_t n = g.num_nodes();
  const auto& kstar = fatigue.values;

  // H'(i, j) = k*_i H(i, j) / sum_t k*_t H(t, j); H's column j is uniform
  // over the targets of j, so the 1/outdeg factor cancels.
  std::vector<double> column_weight(n, 0.0);
  for (NodeId j = 0; j < n; ++j) {
    double s = 0.0;
    for (NodeId t : g.out_neighbors(j)) s += kstar[t];
    column_weight[j] = s;
  }

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<NodeId> cols;
  std::vector<double> vals;
  cols.reserve(g.num_edges());
  vals.reserve(g.num_edges());
  for (NodeId i = 0; i < n; ++i) {
    if (kstar[i] > 0.0) {
      for (NodeId j : g.in_neighbors(i)) {
        cols.push_back(j);
        vals.push_back(kstar[i] / column_weight[j]);
      }
    }
    offsets[i + 1] = vals.size();
  }
  return TransitionMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace noderank
