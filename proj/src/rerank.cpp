#include "noderank/rerank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "noderank/error.hpp"
#include "noderank/scores.hpp"

namespace noderank {

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Sigm: return "sigm";
    case TransformKind::Log: return "log";
    case TransformKind::Satu: return "satu";
  }
  return "unknown";
}

void TransformParams::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("transform weight w must be > 0");
  if (kind != TransformKind::Log && (!(k > 0.0) || !std::isfinite(k))) {
    throw std::invalid_argument("transform constant k must be > 0");
  }
  if (kind == TransformKind::Sigm && (!(a > 0.0) || !std::isfinite(a))) {
    throw std::invalid_argument("sigm exponent a must be > 0");
  }
}

double transform(double s, const TransformParams& p) {
  p.validate();
  if (!(s >= 0.0)) throw std::invalid_argument("transform input must be >= 0");
  switch (p.kind) {
    case TransformKind::Sigm: {
      if (s == 0.0) return 0.0;
      if (std::isinf(s)) return p.w;
      const double sa = std::pow(s, p.a);
      const double ka = std::pow(p.k, p.a);
      return p.w * sa / (ka + sa);
    }
    case TransformKind::Satu:
      if (std::isinf(s)) return p.w;
      return p.w * s / (p.k + s);
    case TransformKind::Log:
      return p.w * std::log1p(s);
  }
  return 0.0;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw line_error(line, std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Entries of one topic, in file order.
std::map<std::string, std::vector<const RunEntry*>, bool (*)(std::string_view, std::string_view)>
group_by_topic(const RunFile& run) {
  std::map<std::string, std::vector<const RunEntry*>, bool (*)(std::string_view, std::string_view)>
      groups(&topic_less);
  for (const auto& e : run) groups[e.topic_id].push_back(&e);
  for (const auto& [topic, entries] : groups) {
    std::set<std::string_view> seen;
    for (const RunEntry* e : entries) {
      if (!seen.insert(e->doc_id).second) {
        throw DataError("duplicate document '" + e->doc_id + "' in topic " + topic);
      }
    }
  }
  return groups;
}

}  // namespace

bool topic_less(std::string_view a, std::string_view b) {
  if (all_digits(a) && all_digits(b)) {
    const auto strip = [](std::string_view s) {
      const auto nz = s.find_first_not_of('0');
      return nz == std::string_view::npos ? std::string_view("0") : s.substr(nz);
    };
    const auto sa = strip(a);
    const auto sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

RunFile parse_run(std::istream& in) {
  RunFile run;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 6) throw line_error(lineno, "expected 'topic Q0 docid rank score tag'");
    RunEntry e;
    e.topic_id = f[0];
    e.doc_id = f[2];
    e.rank = parse_number<std::int64_t>(f[3], lineno, "rank");
    e.score = parse_number<double>(f[4], lineno, "score");
    if (!std::isfinite(e.score)) throw line_error(lineno, "score is not finite");
    e.tag = f[5];
    run.push_back(std::move(e));
  }
  return run;
}

RunFile read_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open run file '" + path + "'");
  return parse_run(in);
}

void write_run(std::ostream& out, const RunFile& run) {
  for (const auto& e : run) {
    out << e.topic_id << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << format_score(e.score) << ' '
        << e.tag << '\n';
  }
}

Qrels parse_qrels(std::istream& in) {
  Qrels qrels;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 4) throw line_error(lineno, "expected 'topic 0 docid relevance'");
    QrelEntry q;
    q.topic_id = f[0];
    q.doc_id = f[2];
    q.relevance = parse_number<int>(f[3], lineno, "relevance");
    if (q.relevance < 0) throw line_error(lineno, "relevance must be >= 0");
    if (!seen.emplace(q.topic_id, q.doc_id).second) {
      throw line_error(lineno, "duplicate judgment for " + q.topic_id + "/" + q.doc_id);
    }
    qrels.push_back(std::move(q));
  }
  return qrels;
}

Qrels read_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open qrels file '" + path + "'");
  return parse_qrels(in);
}

RunFile rerank_run(const RunFile& baseline,
                   const std::unordered_map<std::string, double>& graph_scores,
                   const RerankOptions& options) {
  options.transform.validate();
  if (!(options.scale >= 0.0) || !std::isfinite(options.scale)) {
    throw std::invalid_argument("scale must be finite and >= 0");
  }
  const std::string suffix =
      options.tag_suffix.empty() ? "+" + std::string(to_string(options.transform.kind)) : options.tag_suffix;

  RunFile out;
  out.reserve(baseline.size());
  for (const auto& [topic, entries] : group_by_topic(baseline)) {
    struct Scored {
      const RunEntry* entry;
      double score;
    };
    std::vector<Scored> scored;
    scored.reserve(entries.size());
    for (const RunEntry* e : entries) {
      const auto it = graph_scores.find(e->doc_id);
      const double s = it == graph_scores.end() ? 0.0 : it->second * options.scale;
      scored.push_back({e, e->score + transform(s, options.transform)});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.entry->rank < b.entry->rank;
    });
    std::int64_t rank = 1;
    for (const auto& s : scored) {
      out.push_back({s.entry->topic_id, s.entry->doc_id, rank++, s.score, s.entry->tag + suffix});
    }
  }
  return out;
}

EffectivenessReport evaluate_run(const RunFile& run, const Qrels& qrels) {
  std::unordered_map<std::string, std::unordered_map<std::string, int>> judged;
  for (const auto& q : qrels) judged[q.topic_id][q.doc_id] = q.relevance;

  EffectivenessReport report;
  for (const auto& [topic, entries] : group_by_topic(run)) {
    const auto jt = judged.find(topic);
    if (jt == judged.end()) {
      report.warnings.push_back("topic " + topic + " has no judgments, skipped");
      continue;
    }
    const auto& rels = jt->second;
    std::vector<int> ideal;
    std::size_t total_relevant = 0;
    for (const auto& [doc, rel] : rels) {
      ideal.push_back(rel);
      if (rel >= 1) ++total_relevant;
    }
    if (total_relevant == 0) {
      report.warnings.push_back("topic " + topic + " has no relevant documents, skipped");
      continue;
    }

    std::vector<const RunEntry*> ranked(entries.begin(), entries.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const RunEntry* a, const RunEntry* b) {
      if (a->score != b->score) return a->score > b->score;
      return a->rank < b->rank;
    });

    TopicEffectiveness te;
    te.topic_id = topic;
    double precision_sum = 0.0;
    std::size_t hits = 0;
    std::size_t hits_at_10 = 0;
    double dcg = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const auto it = rels.find(ranked[i]->doc_id);
      const int rel = it == rels.end() ? 0 : it->second;
      if (rel >= 1) {
        ++hits;
        precision_sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        if (i < 10) ++hits_at_10;
      }
      if (i < 10) dcg += rel / std::log2(static_cast<double>(i) + 2.0);
    }
    te.average_precision = precision_sum / static_cast<double>(total_relevant);
    te.precision_at_10 = static_cast<double>(hits_at_10) / 10.0;

    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal.size() && i < 10; ++i) {
      idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
    }
    te.ndcg_at_10 = dcg / idcg;
    report.topics.push_back(std::move(te));
  }

  if (report.topics.empty()) {
    report.warnings.push_back("no topic could be evaluated");
    return report;
  }
  const double n = static_cast<double>(report.topics.size());
  double log_sum = 0.0;
  double floored_sum = 0.0;
  for (const auto& t : report.topics) {
    report.map += t.average_precision;
    report.ndcg_at_10 += t.ndcg_at_10;
    report.precision_at_10 += t.precision_at_10;
    const double ap = std::max(t.average_precision, kGmapFloor);
    log_sum += std::log(ap);
    floored_sum += ap;
  }
  report.map /= n;
  report.ndcg_at_10 /= n;
  report.precision_at_10 /= n;
  // exp(log(x)) can round above x; the geometric mean never exceeds the
  // arithmetic one
  report.gmap = std::min(std::exp(log_sum / n), floored_sum / n);
  return report;
}

void write_effectiveness_csv(std::ostream& out, const EffectivenessReport& report) {
  out << "topic,measure,value\n";
  for (const auto& t : report.topics) {
    out << t.topic_id << ",AP," << format_score(t.average_precision) << '\n';
    out << t.topic_id << ",NDCG@10," << format_score(t.ndcg_at_10) << '\n';
    out << t.topic_id << ",P@10," << format_score(t.precision_at_10) << '\n';
  }
  out << "all,MAP," << format_score(report.map) << '\n';
  out << "all,GMAP," << format_score(report.gmap) << '\n';
  out << "all,NDCG@10," << format_score(report.ndcg_at_10) << '\n';
  out << "all,P@10," << format_score(report.precision_at_10) << '\n';
}

}  // namespace noderank
