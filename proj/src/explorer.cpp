#include "noderank/explorer.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>

#include "noderank/error.hpp"

namespace noderank {

void ExplorerConfig::validate() const {
  if (steps == 0) throw std::invalid_argument("steps must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must satisfy 0 < alpha < 1");
}

WalkRng::WalkRng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t WalkRng::next_u64() { return engine_(); }

double WalkRng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t WalkRng::uniform_index(std::uint64_t n) {
  // Rejection sampling: discard the top partial bucket.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

namespace {

// Most-recent-first list of distinct visited nodes: the current node and up
// to `span` nodes before it.
class FatigueMemory {
 public:
  explicit FatigueMemory(std::size_t span) : span_(span) {}

  void visit(NodeId v) {
    if (span_ == 0) return;
    auto it = std::find(recent_.begin(), recent_.end(), v);
    if (it != recent_.end()) recent_.erase(it);
    recent_.insert(recent_.begin(), v);
    if (recent_.size() > span_ + 1) recent_.pop_back();
  }

  bool fatigued(NodeId v) const {
    // recent_[0] is the current node, which is not part of the memory
    return recent_.size() > 1 && std::find(recent_.begin() + 1, recent_.end(), v) != recent_.end();
  }

 private:
  std::size_t span_;
  std::vector<NodeId> recent_;
};

std::vector<std::uint64_t> walk(const SparseGraph& g, const ExplorerConfig& cfg,
                                std::size_t span, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint64_t> counts(n, 0);
  WalkRng rng(seed);
  FatigueMemory memory(span);
  std::vector<NodeId> choices;

  NodeId current = static_cast<NodeId>(rng.uniform_index(n));
  memory.visit(current);
  for (std::uint64_t s = 0; s < cfg.steps; ++s) {
    NodeId next = 0;
    bool teleport = true;
    if (rng.uniform01() < cfg.alpha) {
      auto targets = g.out_neighbors(current);
      if (span == 0) {
        if (!targets.empty()) {
          next = targets[rng.uniform_index(targets.size())];
          teleport = false;
        }
      } else {
        choices.clear();
        for (NodeId t : targets) {
          if (!memory.fatigued(t)) choices.push_back(t);
        }
        if (!choices.empty()) {
          next = choices[rng.uniform_index(choices.size())];
          teleport = false;
        }
      }
    }
    if (teleport) next = static_cast<NodeId>(rng.uniform_index(n));
    ++counts[next];
    memory.visit(next);
    current = next;
  }
  return counts;
}

ScoreVector frequencies(const std::vector<std::uint64_t>& counts, std::uint64_t total, ScoreKind kind) {
  ScoreVector result{kind, std::vector<double>(counts.size())};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    result.values[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return result;
}

void check_inputs(const SparseGraph& g, const ExplorerConfig& cfg) {
  cfg.validate();
  if (g.num_nodes() == 0) throw EmptyGraphError("cannot simulate a walk on an empty graph");
}

}  // namespace

ScoreVector simulate_surfer(const SparseGraph& g, const ExplorerConfig& cfg) {
  check_inputs(g, cfg);
  return frequencies(walk(g, cfg, 0, cfg.rng_seed), cfg.steps, ScoreKind::SurferFrequency);
}

ScoreVector simulate_explorer(const SparseGraph& g, const ExplorerConfig& cfg) {
  check_inputs(g, cfg);
  return frequencies(walk(g, cfg, cfg.fatigue_span, cfg.rng_seed), cfg.steps,
                     ScoreKind::ExplorerFrequency);
}

ScoreVector simulate_walks(const SparseGraph& g, const ExplorerConfig& cfg, WalkMode mode,
                           std::size_t walks, std::size_t threads) {
  check_inputs(g, cfg);
  if (walks == 0) throw std::invalid_argument("walks must be >= 1");
  if (threads == 0) throw std::invalid_argument("threads must be >= 1");
  const std::size_t span = mode == WalkMode::Explorer ? cfg.fatigue_span : 0;

  std::vector<std::vector<std::uint64_t>> per_walk(walks);
  {
    const std::size_t workers = std::min(threads, walks);
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < walks; i += workers) {
          per_walk[i] = walk(g, cfg, span, cfg.rng_seed + i);
        }
      });
    }
  }
  // Equal-length walks: the weighted average is the pooled count frequency.
  std::vector<std::uint64_t> pooled(g.num_nodes(), 0);
  for (const auto& counts : per_walk) {
    for (std::size_t v = 0; v < counts.size(); ++v) pooled[v] += counts[v];
  }
  return frequencies(pooled, cfg.steps * walks,
                     mode == WalkMode::Explorer ? ScoreKind::ExplorerFrequency
                                                : ScoreKind::SurferFrequency);
}

}  // namespace noderank
