#include "gtm/graph.hpp"

#include "gtm/errors.hpp"

namespace gtm {

InputGraph InputGraph::build(const SymbolSpace& space, std::size_t num_nodes,
                             std::vector<std::vector<std::string>> properties,
                             std::vector<EdgeSpec> edges, std::optional<std::size_t> label) {
  if (properties.size() != num_nodes) {
    throw InputError("expected properties for " + std::to_string(num_nodes) + " nodes, got " +
                     std::to_string(properties.size()));
  }
  InputGraph g;
  g.node_hv_.reserve(num_nodes);
  for (const auto& props : properties) g.node_hv_.push_back(space.encode(props));
  g.properties_ = std::move(properties);

  std::vector<EdgeType> codes;
  codes.reserve(edges.size());
  std::vector<std::size_t> out_degree(num_nodes, 0);
  for (const auto& e : edges) {
    if (e.src >= num_nodes || e.dst >= num_nodes) {
      throw BoundsError("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                        " outside graph with " + std::to_string(num_nodes) + " nodes");
    }
    codes.push_back(space.edge_type_code(e.type));
    ++out_degree[e.src];
  }

  // Counting sort into CSR keeps per-node insertion order.
  g.out_offsets_.assign(num_nodes + 1, 0);
  for (std::size_t n = 0; n < num_nodes; ++n) g.out_offsets_[n + 1] = g.out_offsets_[n] + out_degree[n];
  g.out_edges_.resize(edges.size());
  std::vector<std::size_t> cursor(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    g.out_edges_[cursor[edges[i].src]++] = OutEdge{edges[i].dst, codes[i]};
  }
  g.edges_ = std::move(edges);
  g.label_ = label;
  g.space_fingerprint_ = space.fingerprint();
  return g;
}

const std::vector<std::string>& InputGraph::properties(NodeIndex node) const {
  if (node >= num_nodes()) throw BoundsError("node " + std::to_string(node) + " out of range");
  return properties_[node];
}

const Hypervector& InputGraph::node_hypervector(NodeIndex node) const {
  if (node >= num_nodes()) throw BoundsError("node " + std::to_string(node) + " out of range");
  return node_hv_[node];
}

std::span<const OutEdge> InputGraph::neighbors_out(NodeIndex node) const {
  if (node >= num_nodes()) throw BoundsError("node " + std::to_string(node) + " out of range");
  return {out_edges_.data() + out_offsets_[node], out_offsets_[node + 1] - out_offsets_[node]};
}

LayerState::LayerState(std::size_t depth, std::size_t num_clauses, std::size_t num_nodes)
    : depth_(depth),
      num_clauses_(num_clauses),
      num_nodes_(num_nodes),
      match_(depth * num_clauses * num_nodes, 0) {}

}  // namespace gtm
