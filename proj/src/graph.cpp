#include "noderank/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "noderank/error.hpp"

namespace noderank {

SparseGraph SparseGraph::from_indexed_edges(std::vector<std::string> labels,
                                            std::vector<IndexedEdge> edges,
                                            const GraphOptions& options) {
  if (labels.size() > std::numeric_limits<NodeId>::max()) {
    throw std::length_error("too many nodes for 32-bit node ids");
  }
  const std::size_t n = labels.size();
  for (const auto& e : edges) {
    if (e.source >= n || e.target >= n) {
      throw std::out_of_range("edge endpoint out of range of the label table");
    }
  }
  if (options.drop_self_loops) {
    std::erase_if(edges, [](const IndexedEdge& e) { return e.source == e.target; });
  }

  std::sort(edges.begin(), edges.end(), [](const IndexedEdge& a, const IndexedEdge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });

  SparseGraph g;
  g.labels_ = std::move(labels);
  g.out_offsets_.assign(n + 1, 0);
  g.out_targets_.reserve(edges.size());
  g.out_weights_.reserve(edges.size());

  // Merge runs of identical (source, target) pairs. Sorting made them adjacent.
  std::vector<NodeId> sources;
  sources.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size();) {
    double w = 0.0;
    std::size_t j = i;
    for (; j < edges.size() && edges[j].source == edges[i].source &&
           edges[j].target == edges[i].target;
         ++j) {
      w += edges[j].weight;
    }
    sources.push_back(edges[i].source);
    g.out_targets_.push_back(edges[i].target);
    g.out_weights_.push_back(w);
    ++g.out_offsets_[edges[i].source + 1];
    i = j;
  }
  edges.clear();
  edges.shrink_to_fit();
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());

  // Target-major form by counting sort; sources stay ascending within a target.
  const std::size_t m = g.out_targets_.size();
  g.in_offsets_.assign(n + 1, 0);
  for (NodeId t : g.out_targets_) ++g.in_offsets_[t + 1];
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.in_sources_.resize(m);
  g.in_edge_ids_.resize(m);
  std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t slot = cursor[g.out_targets_[e]]++;
    g.in_sources_[slot] = sources[e];
    g.in_edge_ids_[slot] = e;
  }
  g.rebuild_in_weights();
  g.rebuild_index();
  return g;
}

void SparseGraph::rebuild_index() {
  index_.clear();
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    index_.emplace(labels_[i], static_cast<NodeId>(i));
  }
}

void SparseGraph::rebuild_in_weights() {
  in_weights_.resize(in_edge_ids_.size());
  for (std::size_t slot = 0; slot < in_edge_ids_.size(); ++slot) {
    in_weights_[slot] = out_weights_[in_edge_ids_[slot]];
  }
}

std::optional<NodeId> SparseGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool SparseGraph::has_edge(NodeId u, NodeId v) const { return weight(u, v).has_value(); }

std::optional<std::size_t> SparseGraph::edge_index(NodeId u, NodeId v) const {
  if (u >= num_nodes() || v >= num_nodes()) return std::nullopt;
  auto targets = out_neighbors(u);
  auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return std::nullopt;
  return out_offsets_[u] + static_cast<std::size_t>(it - targets.begin());
}

std::optional<double> SparseGraph::weight(NodeId u, NodeId v) const {
  if (auto e = edge_index(u, v)) return out_weights_[*e];
  return std::nullopt;
}

SparseGraph SparseGraph::with_edge_weights(std::vector<double> weights) const {
  if (weights.size() != num_edges()) {
    throw std::invalid_argument("weight vector length does not match edge count");
  }
  SparseGraph g = *this;
  g.out_weights_ = std::move(weights);
  g.rebuild_in_weights();
  return g;
}

SparseGraph SparseGraph::reversed() const {
  SparseGraph g;
  g.labels_ = labels_;
  g.index_ = index_;
  // The two compressed forms swap roles.
  g.out_offsets_ = in_offsets_;
  g.out_targets_ = in_sources_;
  g.out_weights_ = in_weights_;
  g.in_offsets_ = out_offsets_;
  g.in_sources_.resize(out_targets_.size());
  g.in_edge_ids_.resize(out_targets_.size());
  std::vector<std::size_t> inverse(in_edge_ids_.size());
  for (std::size_t slot = 0; slot < in_edge_ids_.size(); ++slot) inverse[in_edge_ids_[slot]] = slot;
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (std::size_t e = out_offsets_[u]; e < out_offsets_[u + 1]; ++e) {
      g.in_sources_[e] = out_targets_[e];
      g.in_edge_ids_[e] = inverse[e];
    }
  }
  g.in_weights_ = out_weights_;
  return g;
}

NodeId GraphBuilder::add_node(std::string_view label, std::size_t line) {
  if (label.empty()) throw line_error(line, "empty node label");
  auto [it, inserted] = index_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
  if (inserted) {
    if (labels_.size() == std::numeric_limits<NodeId>::max()) {
      throw std::length_error("too many nodes for 32-bit node ids");
    }
    labels_.emplace_back(label);
  }
  return it->second;
}

void GraphBuilder::add_edge(std::string_view source, std::string_view target,
                            std::optional<double> weight, std::size_t line) {
  if (source.empty() || target.empty()) throw line_error(line, "empty node label");
  const double w = weight.value_or(1.0);
  if (!std::isfinite(w)) throw line_error(line, "edge weight is not finite");
  if (w < 0.0) throw line_error(line, "negative edge weight");
  const NodeId s = add_node(source, line);
  const NodeId t = add_node(target, line);
  edges_.push_back({s, t, w});
}

void GraphBuilder::add_edge(NodeId source, NodeId target, double weight) {
  if (source >= labels_.size() || target >= labels_.size()) {
    throw std::out_of_range("edge endpoint refers to an unknown node");
  }
  if (!std::isfinite(weight) || weight < 0.0) {
    throw std::invalid_argument("edge weight must be finite and non-negative");
  }
  edges_.push_back({source, target, weight});
}

SparseGraph GraphBuilder::build() && {
  return SparseGraph::from_indexed_edges(std::move(labels_), std::move(edges_), options_);
}

SparseGraph build_graph(std::span<const EdgeRecord> edges, const GraphOptions& options) {
  GraphBuilder builder(options);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    builder.add_edge(edges[i].source, edges[i].target, edges[i].weight, i + 1);
  }
  return std::move(builder).build();
}

SparseGraph reverse(const SparseGraph& g) { return g.reversed(); }

DegreeVector indegree(const SparseGraph& g, SelfLoops loops) {
  DegreeVector deg(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto sources = g.in_neighbors(v);
    deg[v] = static_cast<std::uint32_t>(sources.size());
    if (loops == SelfLoops::Exclude && std::binary_search(sources.begin(), sources.end(), v)) {
      --deg[v];
    }
  }
  return deg;
}

DegreeVector outdegree(const SparseGraph& g, SelfLoops loops) {
  DegreeVector deg(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto targets = g.out_neighbors(v);
    deg[v] = static_cast<std::uint32_t>(targets.size());
    if (loops == SelfLoops::Exclude && std::binary_search(targets.begin(), targets.end(), v)) {
      --deg[v];
    }
  }
  return deg;
}

}  // namespace noderank
