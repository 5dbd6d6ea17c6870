#pragma once

/*
  SparseGraph: immutable directed graph stored twice in compressed form,
  source-major (out-edges) and target-major (in-edges), plus a label table.

  Parallel edges are collapsed at build time with their weights summed.
  Node ids are dense and assigned in order of first label appearance.
*/

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace noderank {

using NodeId = std::uint32_t;

// Per-node integer counts aligned to NodeId order.
using DegreeVector = std::vector<std::uint32_t>;

struct EdgeRecord {
  std::string source;
  std::string target;
  std::optional<double> weight;  // absent counts as 1
};

struct IndexedEdge {
  NodeId source;
  NodeId target;
  double weight = 1.0;
};

struct GraphOptions {
  bool drop_self_loops = false;
};

enum class SelfLoops { Include, Exclude };

class SparseGraph {
 public:
  SparseGraph() : out_offsets_(1, 0), in_offsets_(1, 0) {}

  // Takes ownership of the label table; edges refer to label positions.
  static SparseGraph from_indexed_edges(std::vector<std::string> labels,
                                        std::vector<IndexedEdge> edges,
                                        const GraphOptions& options = {});

  std::size_t num_nodes() const noexcept { return labels_.size(); }
  std::size_t num_edges() const noexcept { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const double> out_weights(NodeId v) const {
    return {out_weights_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }
  std::span<const double> in_weights(NodeId v) const {
    return {in_weights_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  // Edge weights in source-major order (edge e is the e-th entry of the
  // concatenated out-neighbor lists).
  std::span<const double> edge_weights() const noexcept { return out_weights_; }

  const std::string& label(NodeId v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  bool has_edge(NodeId u, NodeId v) const;
  // Position of edge (u, v) in source-major order.
  std::optional<std::size_t> edge_index(NodeId u, NodeId v) const;
  std::optional<double> weight(NodeId u, NodeId v) const;

  // Same topology, weights replaced. `weights` is in source-major order.
  SparseGraph with_edge_weights(std::vector<double> weights) const;

  SparseGraph reversed() const;

 private:
  void rebuild_index();
  void rebuild_in_weights();

  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;

  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<double> out_weights_;

  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<double> in_weights_;
  // position of each in-edge within the source-major arrays
  std::vector<std::size_t> in_edge_ids_;
};

// Incremental construction from labelled records. Used by every reader so
// that validation and id assignment happen in one place.
class GraphBuilder {
 public:
  explicit GraphBuilder(GraphOptions options = {}) : options_(options) {}

  NodeId add_node(std::string_view label, std::size_t line = 0);
  // Throws ParseError (carrying `line`) for empty labels and for negative or
  // non-finite weights.
  void add_edge(std::string_view source, std::string_view target,
                std::optional<double> weight, std::size_t line = 0);
  void add_edge(NodeId source, NodeId target, double weight);

  std::size_t num_nodes() const noexcept { return labels_.size(); }

  SparseGraph build() &&;

 private:
  GraphOptions options_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<IndexedEdge> edges_;
};

// Records are numbered from 1 in error messages.
SparseGraph build_graph(std::span<const EdgeRecord> edges, const GraphOptions& options = {});

SparseGraph reverse(const SparseGraph& g);

// Counts distinct in/out neighbours. Self-loops are counted unless excluded.
DegreeVector indegree(const SparseGraph& g, SelfLoops loops = SelfLoops::Include);
DegreeVector outdegree(const SparseGraph& g, SelfLoops loops = SelfLoops::Include);

}  // namespace noderank
