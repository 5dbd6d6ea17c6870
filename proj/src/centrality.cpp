#include "noderank/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "noderank/error.hpp"

namespace noderank {

void RankingConfig::validate() const {
  auto fail = [](const std::string& what, double got) {
    std::ostringstream msg;
    msg << what << " (got " << got << ")";
    throw std::invalid_argument(msg.str());
  };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must satisfy 0 < alpha < 1", alpha);
  if (!(beta >= 0.0)) fail("beta must satisfy beta >= 0", beta);
  if (!(epsilon > 0.0)) fail("epsilon must satisfy epsilon > 0", epsilon);
  if (max_iterations == 0) fail("max_iterations must be positive", 0);
  if (schedule.blocks == 0) fail("row block count must be positive", 0);
  if (schedule.threads == 0) fail("thread count must be positive", 0);
}

namespace {

// Rank-one corrections shared by every row of one step.
struct StepTerms {
  double uniform = 0.0;     // added to every row
  double sink_extra = 0.0;  // PaperLiteral: added to rows of sink nodes
};

StepTerms step_terms(const TransitionMatrix& h, const RankingConfig& cfg, std::span<const double> r) {
  const double n = static_cast<double>(h.dimension());
  const auto& sinks = h.sink_mask();
  double total = 0.0;
  double sink_mass = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    total += r[j];
    if (sinks[j]) sink_mass += r[j];
  }
  StepTerms terms;
  if (cfg.sink_mode == SinkMode::UniformTeleport) {
    terms.uniform = (cfg.alpha * sink_mass + (1.0 - cfg.alpha) * total) / n;
  } else {
    terms.uniform = (1.0 - cfg.alpha) * total / n;
    terms.sink_extra = cfg.alpha * total / n;
  }
  return terms;
}

void step_rows(const TransitionMatrix& h, double alpha, const StepTerms& terms,
               std::span<const double> r, std::size_t first_row, std::span<double> out) {
  const auto& sinks = h.sink_mask();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t i = first_row + k;
    auto cols = h.row_columns(i);
    auto vals = h.row_values(i);
    double acc = 0.0;
    for (std::size_t e = 0; e < cols.size(); ++e) acc += vals[e] * r[cols[e]];
    double next = alpha * acc + terms.uniform;
    if (sinks[i]) next += terms.sink_extra;
    out[k] = next;
  }
}

void step_blocks(const TransitionMatrix& h, const RankingConfig& cfg, const StepTerms& terms,
                 std::span<const double> r, std::span<double> next) {
  const std::size_t n = h.dimension();
  const std::size_t blocks = std::min(cfg.schedule.blocks, std::max<std::size_t>(n, 1));
  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * n / blocks;
    const std::size_t hi = (b + 1) * n / blocks;
    step_rows(h, cfg.alpha, terms, r, lo, next.subspan(lo, hi - lo));
  };
  const std::size_t workers = std::min(cfg.schedule.threads, blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) run_block(b);
    });
  }
  // jthread joins on destruction: the barrier before normalization
}

void require_nodes(const SparseGraph& g) {
  if (g.num_nodes() == 0) throw EmptyGraphError("cannot rank an empty graph");
}

double l2_normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return norm;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

void power_step_rows(const TransitionMatrix& h, const RankingConfig& cfg,
                     std::span<const double> r, std::size_t first_row, std::span<double> out) {
  if (r.size() != h.dimension() || first_row + out.size() > h.dimension()) {
    throw std::out_of_range("row range outside the transition matrix");
  }
  step_rows(h, cfg.alpha, step_terms(h, cfg, r), r, first_row, out);
}

RankingResult power_iterate(const TransitionMatrix& h, const RankingConfig& cfg, ScoreKind kind,
                            const IterationObserver& observer) {
  cfg.validate();
  const std::size_t n = h.dimension();
  if (n == 0) throw EmptyGraphError("cannot rank an empty graph");

  std::vector<double> r(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  ConvergenceReport report;

  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    step_blocks(h, cfg, step_terms(h, cfg, r), r, next);

    double mass = 0.0;
    for (double x : next) mass += x;
    if (cfg.normalize_each_step) {
      if (!(mass > 0.0)) throw DataError("power iteration lost all probability mass");
      for (double& x : next) x /= mass;
    }
    const double residual = l2_distance(next, r);
    r.swap(next);

    report.iterations_used = t;
    report.final_residual = residual;
    if (observer) observer(IterationState{t, mass, residual, r});
    if (residual < cfg.epsilon) {
      report.converged = true;
      break;
    }
  }
  return {ScoreVector{kind, std::move(r)}, report};
}

RankingResult pagerank(const SparseGraph& g, const RankingConfig& cfg,
                       const IterationObserver& observer) {
  cfg.validate();
  require_nodes(g);
  return power_iterate(transition_matrix(g), cfg, ScoreKind::PageRank, observer);
}

RankingResult reverse_pagerank(const SparseGraph& g, const RankingConfig& cfg,
                               const IterationObserver& observer) {
  cfg.validate();
  require_nodes(g);
  return power_iterate(transition_matrix(reverse(g)), cfg, ScoreKind::ReversePageRank, observer);
}

RankingResult fatigued_pagerank(const SparseGraph& g, const RankingConfig& cfg,
                                const IterationObserver& observer) {
  cfg.validate();
  require_nodes(g);
  return power_iterate(fatigued_transition_matrix(g, cfg.beta, cfg.fatigue_smoothing), cfg,
                       ScoreKind::FatiguedPageRank, observer);
}

namespace {

// y = A x: sum over out-neighbours.
void multiply_adjacency(const SparseGraph& g, std::span<const double> x, std::vector<double>& y) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    double acc = 0.0;
    for (NodeId v : g.out_neighbors(u)) acc += x[v];
    y[u] = acc;
  }
}

// y = A^T x: sum over in-neighbours.
void multiply_transpose(const SparseGraph& g, std::span<const double> x, std::vector<double>& y) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double acc = 0.0;
    for (NodeId u : g.in_neighbors(v)) acc += x[u];
    y[v] = acc;
  }
}

}  // namespace

HitsResult hits(const SparseGraph& g, double epsilon, std::size_t max_iterations,
                std::span<const double> initial) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must satisfy epsilon > 0");
  if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
  require_nodes(g);
  const std::size_t n = g.num_nodes();

  std::vector<double> start(n, 1.0);
  if (!initial.empty()) {
    if (initial.size() != n) throw std::invalid_argument("initial vector length mismatch");
    start.assign(initial.begin(), initial.end());
    for (double x : start) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("initial vector must be finite and non-negative");
      }
    }
  }
  if (l2_normalize(start) == 0.0) throw std::invalid_argument("initial vector is zero");

  HitsResult result{{ScoreKind::Authority, start}, {ScoreKind::Hub, start}, {}};
  if (g.num_edges() == 0) {
    const double u = 1.0 / std::sqrt(static_cast<double>(n));
    std::fill(result.authority.values.begin(), result.authority.values.end(), u);
    std::fill(result.hub.values.begin(), result.hub.values.end(), u);
    result.report.converged = true;
    return result;
  }

  auto& auth = result.authority.values;
  auto& hub = result.hub.values;
  std::vector<double> scratch(n);
  std::vector<double> next_auth(n);
  std::vector<double> next_hub(n);

  for (std::size_t t = 1; t <= max_iterations; ++t) {
    // authority <- A^T (A authority), hub <- A (A^T hub)
    multiply_adjacency(g, auth, scratch);
    l2_normalize(scratch);
    multiply_transpose(g, scratch, next_auth);
    l2_normalize(next_auth);

    multiply_transpose(g, hub, scratch);
    l2_normalize(scratch);
    multiply_adjacency(g, scratch, next_hub);
    l2_normalize(next_hub);

    const double residual = std::max(l2_distance(next_auth, auth), l2_distance(next_hub, hub));
    auth.swap(next_auth);
    hub.swap(next_hub);
    result.report.iterations_used = t;
    result.report.final_residual = residual;
    if (residual < epsilon) {
      result.report.converged = true;
      break;
    }
  }
  return result;
}

ScoreVector indegree_score(const SparseGraph& g) {
  const DegreeVector deg = indegree(g);
  return {ScoreKind::Indegree, std::vector<double>(deg.begin(), deg.end())};
}

}  // namespace noderank
