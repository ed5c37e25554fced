#include "gtm/interpret.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gtm/errors.hpp"

using namespace gtm;
using fixtures::chain;

namespace {

// Four one-bit symbols P0..P3 over a 4-bit space.
GraphTm flat_model(std::size_t clauses = 1) {
  SymbolSpace space(4, 1, 0);
  space.register_symbol("P0", {1});
  TrainConfig c;
  c.num_clauses = clauses;
  c.hv_size = 4;
  c.bits_per_symbol = 1;
  return GraphTm(c, space, 2);
}

std::vector<std::vector<bool>> oracle_table(const GraphTm& model, std::string_view seq) {
  std::vector<std::vector<bool>> out;
  for (std::size_t j = 0; j < model.num_clauses(); ++j) {
    out.push_back(evaluate_symbolic(trace_to_nodes(model, j).formula, seq));
  }
  return out;
}

}  // namespace

TEST(Decode, EmptyClauseIsPhi) {
  const GraphTm model = flat_model();
  const auto sc = decode_clause(model, 0);
  ASSERT_EQ(sc.layers.size(), 1u);
  EXPECT_TRUE(sc.layers[0].empty());
  EXPECT_EQ(render_clause(model, sc), "φ");
}

TEST(Decode, SymbolAndRawBits) {
  GraphTm model = flat_model();
  model.set_component(0, 0, std::vector<std::size_t>{1});
  EXPECT_EQ(render_clause(model, decode_clause(model, 0)), "P0");
  // Literals 1, 4, 6, 7: P0 with the other three bits required absent.
  model.set_component(0, 0, std::vector<std::size_t>{1, 4, 6, 7});
  EXPECT_EQ(render_clause(model, decode_clause(model, 0)), "P0 ∧ ¬b0 ∧ ¬b2 ∧ ¬b3");
}

TEST(Decode, PartialNegationIsRaw) {
  // A = [0,1]; literal 9 is the negation of bit 1 only.
  GraphTm model = fixtures::experiment1();
  model.set_component(0, 0, std::vector<std::size_t>{9});
  model.set_component(0, 1, std::vector<std::size_t>{});
  const auto sc = decode_clause(model, 0);
  ASSERT_EQ(sc.layers[0].raw.size(), 1u);
  EXPECT_EQ(sc.layers[0].raw[0], (RawLiteral{1, true}));
  EXPECT_TRUE(sc.layers[0].symbols.empty());
  EXPECT_EQ(render_clause(model, sc), "¬b1");
}

TEST(Decode, ExperimentClausesRenderAsWritten) {
  const GraphTm one = fixtures::experiment1();
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(render_clause(one, decode_clause(one, j)), fixtures::kExperiment1[j]);
  }
  const GraphTm two = fixtures::experiment2();
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(render_clause(two, decode_clause(two, j)), fixtures::kExperiment2[j]);
  }
}

TEST(Decode, EncodeRoundTrip) {
  const GraphTm model = fixtures::experiment2();
  for (std::size_t j = 0; j < 4; ++j) {
    const auto sc = decode_clause(model, j);
    for (std::size_t i = 0; i < model.depth(); ++i) {
      const auto lits = encode_component(model, i, sc.layers[i]);
      std::vector<std::size_t> included;
      for (std::size_t k = 0; k < model.layer_width(i); ++k) {
        if (model.team().action(j, i, k) == Action::Include) included.push_back(k);
      }
      EXPECT_EQ(lits, included) << "clause " << j << " layer " << i;
    }
  }
}

TEST(Decode, OverlappingBindingsAreFlagged) {
  SymbolSpace space = fixtures::letter_space();
  TrainConfig c = fixtures::handset_config(2, 2, 8);
  // Clause 0 over "left" is {1,3}; clause 1 over "right" is {3,5}: bit 3 shared.
  GraphTm model(c, space, MessageSpace::with_layout(8, 2, {{0, 2}, {3, 5}}), 2);
  apply_clause(model, parse_clause(model, 0, "l1:0"));
  const auto sc = decode_clause(model, 0);
  ASSERT_EQ(sc.layers[1].messages.size(), 1u);
  EXPECT_TRUE(sc.layers[1].messages[0].ambiguous);
}

TEST(Parse, AcceptsAsciiForms) {
  const GraphTm model = fixtures::experiment1();
  EXPECT_EQ(parse_clause(model, 2, "A & r1:2 & r1:3 & ~r1:0 & ~l1:0"),
            parse_clause(model, 2, "A ∧ r1:2 ∧ r1:3 ∧ ¬r1:0 ∧ ¬l1:0"));
  EXPECT_EQ(parse_clause(model, 0, "phi"), parse_clause(model, 0, "φ"));
  EXPECT_THROW(parse_clause(model, 0, "Q"), UnknownSymbolError);
  EXPECT_THROW(parse_clause(model, 0, "r2:0"), InputError);
  EXPECT_THROW(parse_clause(model, 0, "A ∧ "), InputError);
}

TEST(Parse, GeneralEdgeTypes) {
  SymbolSpace space(8, 2, 0);
  space.register_symbol("A", {0, 1});
  space.register_edge_type("plain");
  GraphTm model(fixtures::handset_config(2, 2, 8), space, MessageSpace::with_layout(8, 1, {{0}, {4}}), 2);
  apply_clause(model, parse_clause(model, 1, "A ∧ e0@1:0 ∧ ¬e0@1:1"));
  EXPECT_EQ(render_clause(model, decode_clause(model, 1)), "A ∧ e0@1:0 ∧ ¬e0@1:1");
  EXPECT_EQ(trace_to_nodes(model, 1).text, "𝓜(A,Xₙ) ∧ 𝓜(φ,Xₙ/e0) ∧ ¬𝓜(A,Xₙ/e0)");
}

TEST(Trace, ExperimentOneClauseZero) {
  const GraphTm model = fixtures::experiment1();
  EXPECT_EQ(trace_to_nodes(model, 0).text, "𝓜(¬A,Xₙ) ∧ 𝓜(¬A,Xₙ₋₁)");
}

TEST(Trace, ExperimentTwo) {
  const GraphTm model = fixtures::experiment2();
  EXPECT_EQ(trace_to_nodes(model, 1).text, "𝓜(A,Xₙ) ∧ 𝓜(A,Xₙ₊₁) ∧ 𝓜(A,Xₙ₊₂)");
  // r2:1 reaches clause 1 at X_{n-1}, whose l1:2 points back to C^0_2 at X_n.
  const auto r = trace_to_nodes(model, 0);
  EXPECT_EQ(r.text, "𝓜(A,Xₙ) ∧ 𝓜(A,Xₙ₋₁)");
  ASSERT_EQ(r.tree.children.size(), 3u);
  const TraceNode& via = r.tree.children[2];
  EXPECT_EQ(via.via, "r2:1");
  EXPECT_EQ(via.clause, 1u);
  EXPECT_EQ(via.position.offset, -1);
  bool reaches_c2_at_n = false;
  for (const auto& child : via.children) {
    reaches_c2_at_n |= child.clause == 2 && child.position.offset == 0 && child.through_layer == 0;
  }
  EXPECT_TRUE(reaches_c2_at_n);
  EXPECT_EQ(trace_to_nodes(model, 3).text, "𝓜(¬A,Xₙ)");
}

TEST(Trace, EmptyClauseIsTrueEverywhere) {
  const GraphTm model = fixtures::worked_example();
  GraphTm empty = model;
  empty.set_component(0, 0, std::vector<std::size_t>{});
  empty.set_component(0, 1, std::vector<std::size_t>{});
  const auto r = trace_to_nodes(empty, 0);
  EXPECT_EQ(r.text, "True everywhere");
  EXPECT_EQ(evaluate_symbolic(r.formula, "BAB"), (std::vector<bool>{true, true, true}));
}

TEST(Trace, TreeRendering) {
  const GraphTm model = fixtures::experiment2();
  const std::string tree = render_trace_tree(model, trace_to_nodes(model, 0).tree);
  EXPECT_NE(tree.find("C0 through layer 2 at Xₙ: C^0 = A"), std::string::npos);
  EXPECT_NE(tree.find("  r2:1 -> C1 through layer 1 at Xₙ₋₁"), std::string::npos);
}

TEST(Symbolic, ExperimentSequences) {
  const GraphTm one = fixtures::experiment1();
  const std::vector<std::vector<bool>> baaae{
      {false, false, false, false, false},
      {false, false, false, false, false},
      {false, false, true, false, false},
      {false, false, false, false, false},
  };
  EXPECT_EQ(oracle_table(one, "BAAAE"), baaae);
  const GraphTm two = fixtures::experiment2();
  EXPECT_EQ(oracle_table(two, "BBAEE")[3], (std::vector<bool>{true, true, false, true, true}));
  EXPECT_TRUE(evaluate_symbolic(trace_to_nodes(two, 0).formula, "").empty());
}

TEST(Symbolic, BoundaryIsFalseEvenForPhi) {
  // Experiment 1 C3 carries ¬𝓜(φ,Xₙ₋₁): it can only hold at the first node.
  const GraphTm model = fixtures::experiment1();
  const auto f = trace_to_nodes(model, 3).formula;
  EXPECT_EQ(evaluate_symbolic(f, "AAB"), (std::vector<bool>{true, false, false}));
  EXPECT_EQ(fixtures::match_table(model, chain(model.symbols(), "AAB"))[3], (std::vector<bool>{true, false, false}));
}

TEST(Symbolic, RejectsRawBits) {
  GraphTm model = fixtures::experiment1();
  model.set_component(0, 0, std::vector<std::size_t>{9});
  EXPECT_THROW(evaluate_symbolic(trace_to_nodes(model, 0).formula, "AB"), InputError);
}

TEST(Symbolic, OracleMatchesForwardOnShortSequences) {
  for (const GraphTm& model : {fixtures::experiment1(), fixtures::experiment2()}) {
    for (const std::string seq : {"A", "AB", "AAA", "BAAAE", "EAABA", "AAAAA", "ABABAB"}) {
      EXPECT_EQ(oracle_table(model, seq), fixtures::match_table(model, chain(model.symbols(), seq))) << seq;
    }
  }
}
