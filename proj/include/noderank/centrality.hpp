#pragma once

/*
  Link-analysis scores over a SparseGraph.

  The navigation matrix H is never densified. Column j holds the transition
  probabilities out of node j; a column with no entries is a sink and is
  flagged in the sink mask. Teleportation and sink handling are applied on
  the fly in each power-iteration step:

    r' = alpha * H r + teleport(r)

  where teleport() depends on SinkMode. Fatigued PageRank swaps H for H',
  whose columns are H's columns reweighted by the fatigue vector and
  renormalized.
*/

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "noderank/graph.hpp"
#include "noderank/scores.hpp"

namespace noderank {

// Row-compressed storage of H (row i lists the sources j with H(i, j) != 0)
// so that each step is a gather over rows and row blocks are independent.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(std::size_t dimension, std::vector<std::size_t> row_offsets,
                   std::vector<NodeId> columns, std::vector<double> values);

  // Small matrices only; zeros are not stored.
  static TransitionMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t num_entries() const noexcept { return values_.size(); }

  std::span<const NodeId> row_columns(std::size_t i) const {
    return {columns_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  double entry(std::size_t i, std::size_t j) const;
  std::vector<double> column_sums() const;
  std::vector<std::vector<double>> to_dense() const;

  // sink_mask()[j] == 1 iff column j has no entries.
  const std::vector<std::uint8_t>& sink_mask() const noexcept { return sink_mask_; }
  bool is_sink(std::size_t j) const { return sink_mask_[j] != 0; }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<NodeId> columns_;
  std::vector<double> values_;
  std::vector<std::uint8_t> sink_mask_;
};

enum class SinkMode {
  // Sinks link uniformly to every node; the implied Markov matrix is column
  // stochastic.
  UniformTeleport,
  // The sink correction adds alpha/|V| * sum(r) to the rows of sink nodes.
  // Not stochastic; only meaningful with per-step normalization.
  PaperLiteral,
};

enum class FatigueSmoothing {
  // k* = 1 - (k + beta) / (|V| - 1 + beta). After L1 normalization beta
  // cancels, so k* is proportional to |V| - 1 - k.
  Ratio,
  // k* = 1 - k / (|V| - 1) + beta. Every entry is at least beta, and k*
  // tends to uniform as beta grows.
  Offset,
};

// Rows are split into `blocks` contiguous ranges processed by up to
// `threads` workers. Results do not depend on either value.
struct BlockSchedule {
  std::size_t blocks = 1;
  std::size_t threads = 1;
};

struct RankingConfig {
  double alpha = 0.85;
  double beta = 0.1;
  double epsilon = 0.001;
  std::size_t max_iterations = 1000;
  SinkMode sink_mode = SinkMode::UniformTeleport;
  bool normalize_each_step = true;
  FatigueSmoothing fatigue_smoothing = FatigueSmoothing::Ratio;
  BlockSchedule schedule{};

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct ConvergenceReport {
  std::size_t iterations_used = 0;
  double final_residual = 0.0;  // L2 norm of the last successive difference
  bool converged = false;
};

struct RankingResult {
  ScoreVector scores;
  ConvergenceReport report;
};

struct IterationState {
  std::size_t iteration;      // 1 for the first step
  double mass;                // L1 norm of the step output before normalization
  double residual;
  std::span<const double> scores;  // after normalization
};

using IterationObserver = std::function<void(const IterationState&)>;

TransitionMatrix transition_matrix(const SparseGraph& g);

// Fatigue probabilities from unweighted indegree, self-loops excluded.
// Throws DataError when |V| < 2 and std::invalid_argument when beta < 0.
ScoreVector fatigue_vector(const SparseGraph& g, double beta,
                           FatigueSmoothing smoothing = FatigueSmoothing::Ratio);

// Each non-empty column of H reweighted by k* and renormalized to sum 1. A
// column whose targets all have zero fatigue weight becomes a sink.
TransitionMatrix fatigued_transition_matrix(const SparseGraph& g, double beta,
                                            FatigueSmoothing smoothing = FatigueSmoothing::Ratio);

// Unnormalized rows [first_row, first_row + out.size()) of one step applied
// to r. Exposed so block decompositions can be checked independently.
void power_step_rows(const TransitionMatrix& h, const RankingConfig& cfg,
                     std::span<const double> r, std::size_t first_row, std::span<double> out);

// Power iteration from the uniform vector until the L2 residual drops below
// epsilon or max_iterations steps have been taken.
RankingResult power_iterate(const TransitionMatrix& h, const RankingConfig& cfg,
                            ScoreKind kind = ScoreKind::PageRank,
                            const IterationObserver& observer = {});

// Throw EmptyGraphError for graphs without nodes.
RankingResult pagerank(const SparseGraph& g, const RankingConfig& cfg = {},
                       const IterationObserver& observer = {});
RankingResult reverse_pagerank(const SparseGraph& g, const RankingConfig& cfg = {},
                               const IterationObserver& observer = {});
RankingResult fatigued_pagerank(const SparseGraph& g, const RankingConfig& cfg = {},
                                const IterationObserver& observer = {});

struct HitsResult {
  ScoreVector authority;
  ScoreVector hub;
  ConvergenceReport report;
};

// Whole-graph HITS. Authority is iterated through A^T A and hub through
// A A^T, each starting from `initial` (all ones when empty) and
// L2-normalized after every half step. Graphs without edges return uniform
// unit vectors.
HitsResult hits(const SparseGraph& g, double epsilon = 1e-8, std::size_t max_iterations = 1000,
                std::span<const double> initial = {});

ScoreVector indegree_score(const SparseGraph& g);

}  // namespace noderank
