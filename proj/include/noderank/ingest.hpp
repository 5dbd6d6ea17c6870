#pragma once

/*
  Readers and writers for the external graph formats:

    edge TSV      source<TAB>target[<TAB>weight], '#' starts a comment line
    GML subset    graph [ node [ id N label "..." ] edge [ source N target N
                  transitions T ] ], optionally gzipped
    clickstream   prev<TAB>curr<TAB>type<TAB>count (Wikipedia clickstream dump)

  All readers stream their input; gzip is detected transparently.
*/

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "noderank/graph.hpp"
#include "noderank/scores.hpp"

namespace noderank {

SparseGraph read_edge_tsv(const std::string& path, const GraphOptions& options = {});
void write_edge_tsv(std::ostream& out, const SparseGraph& g);

// With `gzipped` set the file must actually be gzip-compressed; otherwise
// either form is accepted. Edge weights come from the `transitions`
// attribute and default to 0 where it is absent.
SparseGraph read_gml(const std::string& path, bool gzipped = false,
                     const GraphOptions& options = {});
void write_gml(std::ostream& out, const SparseGraph& g);
void write_gml(const std::string& path, const SparseGraph& g, bool gzipped);

struct ClickstreamRecord {
  std::string prev_label;
  std::string curr_label;
  std::string link_type;
  std::uint64_t count = 0;
};

struct ClickstreamOptions {
  // Only rows of this type are joined; empty accepts every type.
  std::string link_type_filter = "link";
};

struct JoinResult {
  SparseGraph graph;
  std::size_t matched = 0;        // records added to an edge weight
  std::size_t unmatched = 0;      // right type, but no such edge in the graph
  std::size_t filtered_type = 0;  // rejected by the link-type filter
};

// Accumulates clickstream counts onto the edges of a fixed graph. Every edge
// starts at weight 0; the topology never changes.
class ClickstreamJoiner {
 public:
  explicit ClickstreamJoiner(const SparseGraph& g, ClickstreamOptions options = {});

  void add(const ClickstreamRecord& record);
  JoinResult finish() &&;

 private:
  const SparseGraph& graph_;
  ClickstreamOptions options_;
  std::vector<double> weights_;
  JoinResult counts_;
};

JoinResult join_clickstream(const SparseGraph& g, std::span<const ClickstreamRecord> records,
                            const ClickstreamOptions& options = {});
JoinResult join_clickstream(const SparseGraph& g, const std::string& clickstream_path,
                            const ClickstreamOptions& options = {});

// Parses one clickstream TSV row. Throws ParseError tagged with `line`.
ClickstreamRecord parse_clickstream_line(const std::string& line, std::size_t line_number);

// Sum of incoming edge weights per node.
ScoreVector visits(const SparseGraph& g);

}  // namespace noderank
