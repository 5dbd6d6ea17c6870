#pragma once

/*
  Query-independent reranking of TREC runs.

  A static per-document score s (e.g. PageRank) becomes a relevance weight
  f(s) that is added to the baseline retrieval score:

    sigm(s) = w * s^a / (k^a + s^a)
    satu(s) = w * s / (k + s)
    log(s)  = w * log(1 + s)

  Documents without a graph score get s = 0, i.e. no adjustment.

  Run format:   topic Q0 docid rank score tag   (whitespace separated)
  Qrels format: topic 0 docid relevance
*/

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace noderank {

enum class TransformKind { Sigm, Log, Satu };

std::string_view to_string(TransformKind kind);

struct TransformParams {
  TransformKind kind = TransformKind::Sigm;
  double w = 1.8;
  double k = 1.0;  // unused by log
  double a = 0.6;  // sigm only

  void validate() const;
};

// Throws std::invalid_argument for s < 0 or invalid parameters.
double transform(double s, const TransformParams& p);

struct RunEntry {
  std::string topic_id;
  std::string doc_id;
  std::int64_t rank = 0;
  double score = 0.0;
  std::string tag;
};

using RunFile = std::vector<RunEntry>;

struct QrelEntry {
  std::string topic_id;
  std::string doc_id;
  int relevance = 0;
};

using Qrels = std::vector<QrelEntry>;

RunFile parse_run(std::istream& in);
RunFile read_run(const std::string& path);
void write_run(std::ostream& out, const RunFile& run);

Qrels parse_qrels(std::istream& in);
Qrels read_qrels(const std::string& path);

// Topic ids compare numerically when both are all digits, else
// lexicographically. All per-topic output follows this order.
bool topic_less(std::string_view a, std::string_view b);

struct RerankOptions {
  TransformParams transform;
  double scale = 1.0;         // graph scores are multiplied by this first
  std::string tag_suffix;     // defaults to "+<transform name>"
};

// new score = baseline score + transform(scale * graph score); each topic is
// re-sorted by new score, ties by original rank, and ranks renumbered from 1.
// Throws DataError on duplicate (topic, doc) pairs.
RunFile rerank_run(const RunFile& baseline,
                   const std::unordered_map<std::string, double>& graph_scores,
                   const RerankOptions& options = {});

struct TopicEffectiveness {
  std::string topic_id;
  double average_precision = 0.0;
  double ndcg_at_10 = 0.0;
  double precision_at_10 = 0.0;
};

struct EffectivenessReport {
  std::vector<TopicEffectiveness> topics;  // evaluated topics, topic order
  double map = 0.0;
  double gmap = 0.0;
  double ndcg_at_10 = 0.0;
  double precision_at_10 = 0.0;
  std::vector<std::string> warnings;
};

inline constexpr double kGmapFloor = 1e-5;

// Each topic's ranking is ordered by score descending, ties by rank.
// Unjudged documents count as non-relevant; topics missing from the qrels or
// with no relevant judgments are skipped with a warning.
EffectivenessReport evaluate_run(const RunFile& run, const Qrels& qrels);

// Long-form CSV: `topic,measure,value`, aggregates under topic "all".
void write_effectiveness_csv(std::ostream& out, const EffectivenessReport& report);

}  // namespace noderank
