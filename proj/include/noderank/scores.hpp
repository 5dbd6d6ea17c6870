#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noderank/graph.hpp"

namespace noderank {

enum class ScoreKind {
  PageRank,
  FatiguedPageRank,
  ReversePageRank,
  Authority,
  Hub,
  Indegree,
  Fatigue,
  Visits,
  SurferFrequency,
  ExplorerFrequency,
};

std::string_view to_string(ScoreKind kind);

// Per-node scores aligned to NodeId order.
struct ScoreVector {
  ScoreKind kind;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// Node order by descending score, ties broken by ascending NodeId.
std::vector<NodeId> ranking_order(std::span<const double> scores);

// Fixed 12-significant-digit rendering shared by every text output.
std::string format_score(double value);

// `label<TAB>score` lines sorted by ranking_order.
void write_score_tsv(std::ostream& out, const SparseGraph& g, std::span<const double> scores);
std::string score_tsv(const SparseGraph& g, std::span<const double> scores);

// Scores keyed by label, in file order. Used where scores come from a
// previous pipeline stage rather than from a graph in memory.
struct LabeledScores {
  std::vector<std::string> labels;
  std::vector<double> values;
};

LabeledScores read_score_tsv(const std::string& path);
LabeledScores parse_score_tsv(std::istream& in);

}  // namespace noderank
