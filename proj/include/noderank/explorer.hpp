#pragma once

/*
  Monte Carlo walkers used as an empirical cross-check on the analytic scores.

  Randomness comes from std::mt19937_64, whose output sequence is fixed by the
  C++ standard (the 10000th output of a default-seeded engine is
  9981545732273789042). Draws are mapped to reals and bounded integers by the
  code in explorer.cpp rather than by <random> distributions, whose algorithms
  are implementation-defined. Together this makes walks reproducible across
  compilers and platforms.
*/

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "noderank/graph.hpp"
#include "noderank/scores.hpp"

namespace noderank {

struct ExplorerConfig {
  std::uint64_t steps = 1'000'000;
  double alpha = 0.85;           // probability of trying to follow a link
  std::size_t fatigue_span = 2;  // distinct recent nodes the explorer avoids
  std::uint64_t rng_seed = 42;

  void validate() const;
};

// Portable sampling on top of mt19937_64.
class WalkRng {
 public:
  explicit WalkRng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();                          // [0, 1) with 53 random bits
  std::uint64_t uniform_index(std::uint64_t n);  // [0, n), unbiased

 private:
  std::mt19937_64 engine_;
};

// Visit frequencies of one walk of cfg.steps steps. The start node is drawn
// uniformly and not counted; every step's destination is.
ScoreVector simulate_surfer(const SparseGraph& g, const ExplorerConfig& cfg);

// As the surfer, but links into the last fatigue_span distinct nodes visited
// before the current one are excluded. With nothing left to follow the
// explorer teleports. fatigue_span == 0 gives the surfer's exact trajectory.
ScoreVector simulate_explorer(const SparseGraph& g, const ExplorerConfig& cfg);

enum class WalkMode { Surfer, Explorer };

// `walks` independent walks seeded rng_seed, rng_seed + 1, ..., each of
// cfg.steps steps, merged by step-weighted average. Walks run on up to
// `threads` threads; the result does not depend on the thread count.
ScoreVector simulate_walks(const SparseGraph& g, const ExplorerConfig& cfg, WalkMode mode,
                           std::size_t walks, std::size_t threads = 1);

}  // namespace noderank
