#include "noderank/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "noderank/error.hpp"

namespace noderank {

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::PageRank: return "pagerank";
    case ScoreKind::FatiguedPageRank: return "fatigued_pagerank";
    case ScoreKind::ReversePageRank: return "reverse_pagerank";
    case ScoreKind::Authority: return "authority";
    case ScoreKind::Hub: return "hub";
    case ScoreKind::Indegree: return "indegree";
    case ScoreKind::Fatigue: return "fatigue";
    case ScoreKind::Visits: return "visits";
    case ScoreKind::SurferFrequency: return "surfer_frequency";
    case ScoreKind::ExplorerFrequency: return "explorer_frequency";
  }
  return "unknown";
}

std::vector<NodeId> ranking_order(std::span<const double> scores) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
  return order;
}

std::string format_score(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_score_tsv(std::ostream& out, const SparseGraph& g, std::span<const double> scores) {
  if (scores.size() != g.num_nodes()) {
    throw std::invalid_argument("score vector length does not match node count");
  }
  for (NodeId v : ranking_order(scores)) {
    out << g.label(v) << '\t' << format_score(scores[v]) << '\n';
  }
}

std::string score_tsv(const SparseGraph& g, std::span<const double> scores) {
  std::ostringstream out;
  write_score_tsv(out, g, scores);
  return out.str();
}

LabeledScores parse_score_tsv(std::istream& in) {
  LabeledScores result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos) {
      throw line_error(lineno, "expected 'label<TAB>score'");
    }
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      throw line_error(lineno, "malformed score '" + std::string(first, last) + "'");
    }
    result.labels.emplace_back(line, 0, tab);
    result.values.push_back(value);
  }
  return result;
}

LabeledScores read_score_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open score file '" + path + "'");
  return parse_score_tsv(in);
}

}  // namespace noderank
