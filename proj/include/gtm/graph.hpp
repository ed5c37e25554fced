#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtm/hypervector.hpp"

namespace gtm {

using NodeIndex = std::uint32_t;
using EdgeType = std::uint32_t;

/// Edge as supplied by callers: endpoints plus the edge-type symbol.
struct EdgeSpec {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::string type;
};

struct OutEdge {
  NodeIndex dst = 0;
  EdgeType type = 0;
  friend bool operator==(const OutEdge&, const OutEdge&) = default;
};

/// Directed typed multigraph with per-node property hypervectors.
/// Immutable after build().
class InputGraph {
 public:
  InputGraph() = default;

  /// Validates symbols and endpoints against `space` and bundles each node's
  /// properties into its layer-0 hypervector.
  static InputGraph build(const SymbolSpace& space, std::size_t num_nodes,
                          std::vector<std::vector<std::string>> properties,
                          std::vector<EdgeSpec> edges,
                          std::optional<std::size_t> label = std::nullopt);

  std::size_t num_nodes() const { return properties_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<std::string>& properties(NodeIndex node) const;
  const Hypervector& node_hypervector(NodeIndex node) const;

  /// Outgoing edges of `node` in insertion order.
  std::span<const OutEdge> neighbors_out(NodeIndex node) const;

  const std::vector<EdgeSpec>& edges() const { return edges_; }
  std::optional<std::size_t> label() const { return label_; }

  /// Fingerprint of the SymbolSpace the graph was built against.
  std::uint64_t space_fingerprint() const { return space_fingerprint_; }

 private:
  std::vector<std::vector<std::string>> properties_;
  std::vector<Hypervector> node_hv_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<OutEdge> out_edges_;
  std::optional<std::size_t> label_;
  std::uint64_t space_fingerprint_ = 0;
};

/// Per-evaluation state: layer hypervectors and running match bits.
class LayerState {
 public:
  LayerState() = default;
  LayerState(std::size_t depth, std::size_t num_clauses, std::size_t num_nodes);

  std::size_t depth() const { return depth_; }
  std::size_t num_clauses() const { return num_clauses_; }
  std::size_t num_nodes() const { return num_nodes_; }

  /// H^0_n, the node hypervectors.
  std::vector<Hypervector> node_hv;
  /// msg_hv[i-1][n] holds H^i_n for message layers i = 1..depth-1.
  std::vector<std::vector<Hypervector>> msg_hv;

  /// Hypervector a layer-`layer` component is evaluated against at `node`.
  const Hypervector& layer_hv(std::size_t layer, NodeIndex node) const {
    return layer == 0 ? node_hv[node] : msg_hv[layer - 1][node];
  }

  /// M^i_{jn}: clause j matches node n conjunctively through layer i.
  bool match(std::size_t layer, std::size_t clause, NodeIndex node) const {
    return match_[(layer * num_clauses_ + clause) * num_nodes_ + node] != 0;
  }
  void set_match(std::size_t layer, std::size_t clause, NodeIndex node, bool value) {
    match_[(layer * num_clauses_ + clause) * num_nodes_ + node] = value ? 1 : 0;
  }

  /// Last-layer match bits of one clause, indexed by node.
  std::span<const std::uint8_t> final_matches(std::size_t clause) const {
    return {match_.data() + ((depth_ - 1) * num_clauses_ + clause) * num_nodes_, num_nodes_};
  }

 private:
  std::size_t depth_ = 0;
  std::size_t num_clauses_ = 0;
  std::size_t num_nodes_ = 0;
  std::vector<std::uint8_t> match_;
};

}  // namespace gtm
