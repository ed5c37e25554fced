#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gtm/corpus.hpp"
#include "gtm/engine.hpp"
#include "gtm/interpret.hpp"

// Hand-set models for five-letter chains. Only A carries feature bits
// ([0,1] in an 8-bit space); B, C, D and E nodes have no properties.
namespace gtm::fixtures {

inline SymbolSpace letter_space() {
  SymbolSpace space(8, 2, 0);
  space.register_symbol("A", {0, 1});
  space.register_edge_type("right");
  space.register_edge_type("left");
  return space;
}

inline InputGraph chain(const SymbolSpace& space, std::string_view seq) {
  std::vector<std::vector<std::string>> props;
  for (char c : seq) {
    const std::string s(1, c);
    props.push_back(space.contains(s) ? std::vector<std::string>{s} : std::vector<std::string>{});
  }
  std::vector<EdgeSpec> edges;
  for (NodeIndex n = 0; n + 1 < seq.size(); ++n) {
    edges.push_back({n, n + 1, "right"});
    edges.push_back({n + 1, n, "left"});
  }
  return InputGraph::build(space, seq.size(), std::move(props), std::move(edges));
}

inline TrainConfig handset_config(std::size_t clauses, std::size_t depth, std::size_t msg_size) {
  TrainConfig c;
  c.num_clauses = clauses;
  c.depth = depth;
  c.hv_size = 8;
  c.msg_size = msg_size;
  c.bits_per_symbol = 2;
  c.bits_per_clause = 2;
  return c;
}

inline void set_clauses(GraphTm& model, const std::vector<std::string>& clauses,
                        const std::vector<std::vector<int>>& weights) {
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    apply_clause(model, parse_clause(model, j, clauses[j]));
    for (std::size_t k = 0; k < weights[j].size(); ++k) model.weights().at(j, k) = weights[j][k];
  }
}

// Two layers, one clause: C^0 = A, C^1 = l1:0 ∧ r1:0, message bits I_cl = [4,5].
inline GraphTm worked_example() {
  GraphTm model(handset_config(1, 2, 8), letter_space(), MessageSpace::with_layout(8, 2, {{4, 5}}), 2);
  set_clauses(model, {"A ∧ r1:0 ∧ l1:0"}, {{0, 1}});
  return model;
}

// Four clauses with disjoint bindings: clause j uses base bits [4j, 4j+2].
inline MessageSpace four_clause_layout() {
  return MessageSpace::with_layout(16, 2, {{0, 2}, {4, 6}, {8, 10}, {12, 14}});
}

inline const std::vector<std::string> kExperiment1 = {
    "¬A ∧ r1:0 ∧ r1:1",
    "l1:0 ∧ l1:1 ∧ l1:3 ∧ ¬r1:0",
    "A ∧ r1:2 ∧ r1:3 ∧ ¬r1:0 ∧ ¬l1:0",
    "A ∧ l1:2 ∧ l1:3 ∧ ¬r1:0 ∧ ¬l1:0 ∧ ¬r1:1 ∧ ¬r1:2",
};
inline const std::vector<std::vector<int>> kExperiment1Weights = {{3, -3}, {3, -2}, {-5, 6}, {-2, 2}};

inline GraphTm experiment1() {
  GraphTm model(handset_config(4, 2, 16), letter_space(), four_clause_layout(), 2);
  set_clauses(model, kExperiment1, kExperiment1Weights);
  return model;
}

inline const std::vector<std::string> kExperiment2 = {
    "A ∧ r1:1 ∧ r1:2 ∧ r2:1",
    "l1:0 ∧ l1:2 ∧ l2:0 ∧ l2:1",
    "A ∧ l2:0 ∧ l2:1",
    "¬A",
};
inline const std::vector<std::vector<int>> kExperiment2Weights = {{-6, 8, -2}, {0, -8, 6}, {-1, -3, 1}, {3, -3, -5}};

inline GraphTm experiment2() {
  GraphTm model(handset_config(4, 3, 16), letter_space(), four_clause_layout(), 3);
  set_clauses(model, kExperiment2, kExperiment2Weights);
  return model;
}

// Per-clause, per-node last-layer match bits.
inline std::vector<std::vector<bool>> match_table(const GraphTm& model, const InputGraph& g) {
  const ForwardResult r = model.forward(g);
  std::vector<std::vector<bool>> out;
  for (std::size_t j = 0; j < model.num_clauses(); ++j) {
    const auto bits = r.state.final_matches(j);
    out.emplace_back(bits.begin(), bits.end());
  }
  return out;
}

}  // namespace gtm::fixtures
