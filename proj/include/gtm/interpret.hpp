#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtm/engine.hpp"

namespace gtm {

struct SymbolLiteral {
  std::string symbol;
  bool negated = false;
  friend bool operator==(const SymbolLiteral&, const SymbolLiteral&) = default;
};

/// Message from `clause`'s match through layer `layer - 1`, received over an
/// edge of type `edge_type`; appears in layer-`layer` components.
struct MessageLiteral {
  std::size_t layer = 1;
  std::size_t clause = 0;
  EdgeType edge_type = 0;
  bool negated = false;
  bool ambiguous = false;  // its bits overlap another (clause, edge type) binding
  friend bool operator==(const MessageLiteral&, const MessageLiteral&) = default;
};

/// An included literal that covers no complete symbol or message.
struct RawLiteral {
  std::size_t bit = 0;  // feature bit in [0, size)
  bool negated = false;
  friend bool operator==(const RawLiteral&, const RawLiteral&) = default;
};

struct ComponentLiterals {
  std::vector<SymbolLiteral> symbols;
  std::vector<MessageLiteral> messages;
  std::vector<RawLiteral> raw;

  bool empty() const { return symbols.empty() && messages.empty() && raw.empty(); }
  friend bool operator==(const ComponentLiterals&, const ComponentLiterals&) = default;
};

struct SymbolicClause {
  std::size_t clause = 0;
  std::vector<ComponentLiterals> layers;
  friend bool operator==(const SymbolicClause&, const SymbolicClause&) = default;
};

/// Two edge types read as a chain: messages over `right` come from the left
/// neighbour X_{n-1}, messages over `left` from the right neighbour X_{n+1}.
struct ChainConvention {
  EdgeType right = 0;
  EdgeType left = 1;
};

/// Chain convention when the space has exactly the edge types "right" and "left".
std::optional<ChainConvention> detect_chain(const SymbolSpace& space);

SymbolicClause decode_clause(const GraphTm& model, std::size_t clause);

/// "¬A ∧ r1:0 ∧ r1:1"; an empty clause renders as "φ".
std::string render_clause(const GraphTm& model, const SymbolicClause& clause);
std::string render_component(const GraphTm& model, const ComponentLiterals& component);

/// Included literal indices of one component (inverse of decoding).
std::vector<std::size_t> encode_component(const GraphTm& model, std::size_t layer,
                                          const ComponentLiterals& component);

/// Parses the rendered notation. Literals are separated by "∧" or "&" and
/// negated with "¬" or "~"; "φ" or "phi" alone is the empty clause. Message
/// literals are r<i>:<j> / l<i>:<j> under the chain convention, otherwise
/// e<t>@<i>:<j>; b<k> is a raw bit of the literal's layer (layer 0 unless
/// written b<k>@<i>).
SymbolicClause parse_clause(const GraphTm& model, std::size_t clause, std::string_view text);

/// Writes the decoded clause into the model's automata.
void apply_clause(GraphTm& model, const SymbolicClause& clause);

// ---------------------------------------------------------------------------
// Trace-back to node-layer patterns

/// Where a pattern is evaluated relative to the node X_n being classified.
struct NodePosition {
  std::optional<int> offset;    // chain convention (path unused)
  std::vector<EdgeType> path;   // otherwise: arrival edge types, outermost first
  bool is_root() const { return offset ? *offset == 0 : path.empty(); }
  friend bool operator==(const NodePosition&, const NodePosition&) = default;
};

/// M^{through_layer}_{clause} evaluated at `position`.
struct TraceNode {
  std::size_t clause = 0;
  std::size_t through_layer = 0;
  NodePosition position;
  bool negated = false;
  std::string via;                       // message literal that led here; empty at the root
  ComponentLiterals node_pattern;        // the clause's layer-0 component
  std::vector<TraceNode> children;       // one per message literal in layers 1..through_layer
  std::vector<std::string> opaque;       // undecodable message bits
};

struct Formula {
  enum class Kind { True, False, Match, Not, And, Opaque };
  Kind kind = Kind::True;
  ComponentLiterals pattern;  // Match
  NodePosition position;      // Match
  std::string text;           // Opaque
  std::vector<Formula> children;
};

struct TraceResult {
  TraceNode tree;
  Formula formula;
  std::string text;
};

/// Recursively replaces message literals by the referenced clause's match at
/// the neighbour the message came from, down to layer-0 patterns. Positive
/// terms on φ are elided where implied; a term on a node outside the graph
/// is False.
TraceResult trace_to_nodes(const GraphTm& model, std::size_t clause,
                           std::optional<ChainConvention> chain = std::nullopt);

std::string render_formula(const GraphTm& model, const Formula& formula);
std::string render_trace_tree(const GraphTm& model, const TraceNode& tree);

/// Truth value of `formula` at every node of a chain whose nodes carry the
/// given symbol sets. Patterns on nodes beyond either end are False.
/// Throws InputError for formulas that are not chain-relative or hold raw bits.
std::vector<bool> evaluate_symbolic(const Formula& formula,
                                    std::span<const std::vector<std::string>> nodes);
/// Same, one single-letter symbol per node.
std::vector<bool> evaluate_symbolic(const Formula& formula, std::string_view sequence);

}  // namespace gtm
