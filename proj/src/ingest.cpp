#include "noderank/ingest.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string_view>

#include "gz_stream.hpp"
#include "noderank/error.hpp"

namespace noderank {

namespace {

// Splits on tabs into at most `max_fields` pieces; returns the field count,
// or max_fields + 1 when there are too many.
std::size_t split_tabs(std::string_view line, std::span<std::string_view> fields) {
  std::size_t count = 0;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (count == fields.size()) return fields.size() + 1;
    fields[count++] = line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
    if (tab == std::string_view::npos) return count;
    start = tab + 1;
  }
}

double parse_weight(std::string_view text, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw line_error(line, "malformed weight '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

SparseGraph read_edge_tsv(const std::string& path, const GraphOptions& options) {
  detail::GzReader reader(path);
  GraphBuilder builder(options);
  std::string line;
  std::size_t lineno = 0;
  std::string_view fields[3];
  while (reader.get_line(line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t n = split_tabs(line, fields);
    if (n < 2 || n > 3) {
      throw line_error(lineno, "expected 2 or 3 tab-separated columns, found " +
                                   (n > 3 ? std::string("more than 3") : std::to_string(n)));
    }
    std::optional<double> weight;
    if (n == 3) weight = parse_weight(fields[2], lineno);
    builder.add_edge(fields[0], fields[1], weight, lineno);
  }
  return std::move(builder).build();
}

void write_edge_tsv(std::ostream& out, const SparseGraph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto targets = g.out_neighbors(u);
    auto weights = g.out_weights(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      out << g.label(u) << '\t' << g.label(targets[i]) << '\t' << format_score(weights[i]) << '\n';
    }
  }
}

ClickstreamRecord parse_clickstream_line(const std::string& line, std::size_t line_number) {
  std::string_view fields[4];
  const std::size_t n = split_tabs(line, fields);
  if (n != 4) throw line_error(line_number, "expected 4 tab-separated clickstream columns");
  if (fields[0].empty() || fields[1].empty()) throw line_error(line_number, "empty page label");
  std::uint64_t count = 0;
  auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), count);
  if (ec != std::errc() || ptr != fields[3].data() + fields[3].size()) {
    throw line_error(line_number, "count must be a non-negative integer, got '" +
                                      std::string(fields[3]) + "'");
  }
  return {std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), count};
}

ClickstreamJoiner::ClickstreamJoiner(const SparseGraph& g, ClickstreamOptions options)
    : graph_(g), options_(std::move(options)), weights_(g.num_edges(), 0.0) {}

void ClickstreamJoiner::add(const ClickstreamRecord& record) {
  if (!options_.link_type_filter.empty() && record.link_type != options_.link_type_filter) {
    ++counts_.filtered_type;
    return;
  }
  const auto prev = graph_.find(record.prev_label);
  const auto curr = graph_.find(record.curr_label);
  std::optional<std::size_t> edge;
  if (prev && curr) edge = graph_.edge_index(*prev, *curr);
  if (!edge) {
    ++counts_.unmatched;
    return;
  }
  weights_[*edge] += static_cast<double>(record.count);
  ++counts_.matched;
}

JoinResult ClickstreamJoiner::finish() && {
  JoinResult result = std::move(counts_);
  result.graph = graph_.with_edge_weights(std::move(weights_));
  return result;
}

JoinResult join_clickstream(const SparseGraph& g, std::span<const ClickstreamRecord> records,
                            const ClickstreamOptions& options) {
  ClickstreamJoiner joiner(g, options);
  for (const auto& r : records) joiner.add(r);
  return std::move(joiner).finish();
}

JoinResult join_clickstream(const SparseGraph& g, const std::string& clickstream_path,
                            const ClickstreamOptions& options) {
  detail::GzReader reader(clickstream_path);
  ClickstreamJoiner joiner(g, options);
  std::string line;
  std::size_t lineno = 0;
  while (reader.get_line(line)) {
    ++lineno;
    if (line.empty()) continue;
    joiner.add(parse_clickstream_line(line, lineno));
  }
  return std::move(joiner).finish();
}

ScoreVector visits(const SparseGraph& g) {
  ScoreVector result{ScoreKind::Visits, std::vector<double>(g.num_nodes(), 0.0)};
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double sum = 0.0;
    for (double w : g.in_weights(v)) sum += w;
    result.values[v] = sum;
  }
  return result;
}

}  // namespace noderank
