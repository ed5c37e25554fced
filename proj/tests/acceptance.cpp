// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gtm/datasets.hpp"
#include "gtm/model_io.hpp"

using namespace gtm;
using fixtures::chain;
using fixtures::match_table;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Table = std::vector<std::vector<bool>>;

std::string row_string(const std::vector<bool>& row) {
  std::string s;
  for (bool b : row) s += b ? '1' : '0';
  return s;
}

// Where in the table a clause holds, as "C<j>@X<n>" items.
std::string true_cells(const Table& t) {
  std::string s;
  for (std::size_t j = 0; j < t.size(); ++j) {
    for (std::size_t n = 0; n < t[j].size(); ++n) {
      if (t[j][n]) s += (s.empty() ? "" : ",") + ("C" + std::to_string(j) + "@X" + std::to_string(n));
    }
  }
  return s.empty() ? "none" : s;
}

Outcome worked_example() {
  const GraphTm model = fixtures::worked_example();
  const InputGraph g = chain(model.symbols(), "BAAAE");
  const ForwardResult r = model.forward(g);
  const std::vector<std::string> h0 = {"[00000000 11111111]", "[11000000 00111111]", "[11000000 00111111]",
                                       "[11000000 00111111]", "[00000000 11111111]"};
  const std::vector<std::string> h1 = {"[00000110 11111001]", "[00000110 11111001]", "[00001110 11110001]",
                                       "[00001100 11110011]", "[00001100 11110011]"};
  const std::vector<bool> m0 = {false, true, true, true, false};
  const std::vector<bool> m1 = {false, false, true, false, false};
  std::string bad;
  std::vector<bool> got0, got1;
  for (NodeIndex n = 0; n < 5; ++n) {
    if (r.state.node_hv[n].to_bit_string() != h0[n]) bad += " H0[" + std::to_string(n) + "]";
    if (r.state.msg_hv[0][n].to_bit_string() != h1[n]) bad += " H1[" + std::to_string(n) + "]";
    got0.push_back(r.state.match(0, 0, n));
    got1.push_back(r.state.match(1, 0, n));
  }
  if (got0 != m0) bad += " M0=" + row_string(got0);
  if (got1 != m1) bad += " M1=" + row_string(got1);
  return {bad.empty(), bad.empty() ? "H0, H1, M0, M1 exact" : "mismatch:" + bad};
}

Outcome experiment_one() {
  const GraphTm model = fixtures::experiment1();
  const InputGraph g = chain(model.symbols(), "BAAAE");
  const Table expected = {{false, false, false, false, false},
                          {false, false, false, false, false},
                          {false, false, false, true, false},
                          {false, false, false, false, false}};
  const Table got = match_table(model, g);
  const std::size_t pred = model.predict(g);
  const bool ok = got == expected && pred == 1;
  return {ok, "true cells " + true_cells(got) + " (expected " + true_cells(expected) + "), predict=" +
                  std::to_string(pred)};
}

Outcome experiment_two() {
  const GraphTm model = fixtures::experiment2();
  const InputGraph g = chain(model.symbols(), "BBAEE");
  const Table expected = {{false, false, false, false, false},
                          {false, false, false, false, false},
                          {false, false, false, false, false},
                          {true, true, false, true, true}};
  const Table got = match_table(model, g);
  const auto votes = model.forward(g).votes;
  const std::size_t pred = model.predict(g);
  const bool ok = got == expected && votes == std::vector<std::int64_t>{3, -3, -5} && pred == 0;
  return {ok, "true cells " + true_cells(got) + ", votes [" + std::to_string(votes[0]) + "," +
                  std::to_string(votes[1]) + "," + std::to_string(votes[2]) + "], predict=" + std::to_string(pred)};
}

Outcome experiment_one_training() {
  const SequenceTask task;
  std::size_t good = 0;
  std::string accs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Corpus train = gen_seq_consecutive(task, 40000, 0.01, mix_seed(seed, 0));
    const Corpus test = gen_seq_consecutive(task, 5000, 0.0, mix_seed(seed, 1));
    TrainConfig c;
    c.num_clauses = 4;
    c.depth = 2;
    c.threshold = 100;
    c.specificity = 2.0;
    c.seed = seed;
    SymbolSpace space(c.hv_size, c.bits_per_symbol, c.seed);
    register_vocabulary(space, train);
    GraphTm model(c, space, 2);
    const auto tr = build_graphs(model.symbols(), train);
    const auto te = build_graphs(model.symbols(), test);
    double best = 0.0;
    for (const auto& m : fit(model, tr, te, 10)) best = std::max(best, *m.test_accuracy);
    good += best >= 0.99;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.4f", best);
    accs += (accs.empty() ? "" : " ") + std::string(buf);
  }
  return {good >= 3, std::to_string(good) + "/5 seeds reach 99% (best test acc " + accs + ")"};
}

// Clause bodies that recognise parity by ruling out every value of the other
// parity, through a bit that no same-parity value uses.
std::string eliminate(const SymbolSpace& space, int parity) {
  std::set<BitIndex> own;
  for (const auto& [name, idx] : space.symbols()) {
    if (std::stoi(name) % 2 == parity) own.insert(idx.begin(), idx.end());
  }
  std::string out;
  for (const auto& [name, idx] : space.symbols()) {
    if (std::stoi(name) % 2 == parity) continue;
    for (BitIndex b : idx) {
      if (!own.contains(b)) {
        out += (out.empty() ? "¬b" : " ∧ ¬b") + std::to_string(b);
        break;
      }
    }
  }
  return out;
}

Outcome mv_xor() {
  TrainConfig c;
  c.num_clauses = 100;
  c.depth = 2;
  c.msg_size = 1024;
  c.threshold = 1000;
  c.specificity = 2.2;
  c.seed = 1;
  const Corpus train = gen_mv_xor(10, 0.01, 2000, mix_seed(c.seed, 0));
  const Corpus test = gen_mv_xor(10, 0.0, 1000, mix_seed(c.seed, 1));
  SymbolSpace space(c.hv_size, c.bits_per_symbol, c.seed);
  register_vocabulary(space, train);

  // The task must be exactly expressible before training is judged.
  GraphTm hand(c, space, 2);
  const std::string even = eliminate(space, 0), odd = eliminate(space, 1);
  fixtures::set_clauses(hand, {even + " ∧ e0@1:0", odd + " ∧ e0@1:1", even + " ∧ e0@1:1", odd + " ∧ e0@1:0"},
                        {{-1, 1}, {-1, 1}, {1, -1}, {1, -1}});
  for (std::size_t j = 4; j < c.num_clauses; ++j) hand.weights().at(j, 0) = hand.weights().at(j, 1) = 0;
  const double hand_acc = accuracy(hand, build_graphs(space, test));

  GraphTm model(c, space, 2);
  const auto tr = build_graphs(model.symbols(), train);
  const auto te = build_graphs(model.symbols(), test);
  double best = 0.0;
  std::size_t at = 0;
  for (const auto& m : fit(model, tr, te, 30)) {
    if (*m.test_accuracy > best) {
      best = *m.test_accuracy;
      at = m.epoch;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "hand-built elimination %.4f, trained best %.4f at epoch %zu", hand_acc, best, at);
  return {hand_acc == 1.0 && best >= 0.95, buf};
}

Outcome feedback_tables() {
  const std::size_t trials = 100000;
  const std::uint32_t n = 1000;
  // Literals of one 4-bit input with bits 0,1 set: k=0,1,6,7 are 1; k=2,3,4,5 are 0.
  const Hypervector values = bundle(Hypervector::empty(4), IndexList{0, 1});
  std::string bad;
  Rng rng(2024);
  for (double s : {1.0, 2.0, 10.0}) {
    for (bool clause : {true, false}) {
      // Literal 0: Include, value 1. Literal 1: Exclude, value 1.
      // Literal 2: Exclude, value 0. Literal 3: Include, value 0.
      std::size_t moved[4] = {};
      TaTeam team(1, {8}, n);
      for (std::size_t t = 0; t < trials; ++t) {
        team.set_state(0, 0, 0, n / 2);
        team.set_state(0, 0, 1, n + n / 2);
        team.set_state(0, 0, 2, n + n / 2);
        team.set_state(0, 0, 3, n / 2);
        team.type_i_feedback(0, 0, values, clause, s, rng);
        moved[0] += team.state(0, 0, 0) != n / 2;
        moved[1] += team.state(0, 0, 1) != n + n / 2;
        moved[2] += team.state(0, 0, 2) != n + n / 2;
        moved[3] += team.state(0, 0, 3) != n / 2;
      }
      // Include/value-0 cannot occur under a firing clause; it is left alone.
      const double hi = (s - 1) / s, lo = 1 / s;
      const double expect[4] = {clause ? hi : lo, clause ? hi : lo, lo, clause ? 0.0 : lo};
      for (int k = 0; k < 4; ++k) {
        const double p = expect[k];
        const double freq = static_cast<double>(moved[k]) / trials;
        const double sigma = std::sqrt(p * (1 - p) / trials);
        if (std::abs(freq - p) > 3 * sigma + 1e-12) {
          char buf[96];
          std::snprintf(buf, sizeof buf, " s=%g clause=%d lit%d freq=%.4f want=%.4f", s, clause, k, freq, p);
          bad += buf;
        }
      }
    }
  }
  // Type II: only an excluded 0-literal under a firing clause moves, by exactly one state.
  for (bool clause : {true, false}) {
    TaTeam team(1, {8}, n);
    const std::uint32_t start[4] = {n / 2, n + n / 2, n + n / 2, n / 2};
    for (int k = 0; k < 4; ++k) team.set_state(0, 0, k, start[k]);
    team.type_ii_feedback(0, 0, values, clause);
    for (int k = 0; k < 4; ++k) {
      const std::uint32_t want = clause && k == 2 ? start[k] - 1 : start[k];
      if (team.state(0, 0, k) != want) bad += " typeII clause=" + std::to_string(clause) + " lit" + std::to_string(k);
    }
  }
  return {bad.empty(), bad.empty() ? "all cells within 3 sigma over 1e5 draws, Type II exact" : "off:" + bad};
}

Outcome oracle_equivalence() {
  std::size_t checked = 0;
  std::string bad;
  const std::string letters = "ABE";
  for (const GraphTm& model : {fixtures::experiment1(), fixtures::experiment2()}) {
    std::vector<Formula> formulas;
    for (std::size_t j = 0; j < model.num_clauses(); ++j) formulas.push_back(trace_to_nodes(model, j).formula);
    for (std::size_t len = 1; len <= 6; ++len) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < len; ++i) total *= 3;
      for (std::size_t code = 0; code < total; ++code) {
        std::string seq;
        for (std::size_t i = 0, x = code; i < len; ++i, x /= 3) seq += letters[x % 3];
        const Table engine = match_table(model, chain(model.symbols(), seq));
        for (std::size_t j = 0; j < formulas.size(); ++j) {
          if (evaluate_symbolic(formulas[j], seq) != engine[j] && bad.size() < 200) {
            bad += " " + seq + "/C" + std::to_string(j);
          }
        }
        ++checked;
      }
    }
  }
  return {bad.empty(), std::to_string(checked) + " sequence/model pairs" + (bad.empty() ? "" : ", differ:" + bad)};
}

Outcome disconnected_reduction() {
  Rng rng(77);
  TrainConfig c;
  c.num_clauses = 12;
  c.depth = 2;
  c.hv_size = 32;
  c.msg_size = 64;
  SymbolSpace space(c.hv_size, 2, 5);
  for (int s = 0; s < 10; ++s) space.register_symbol("s" + std::to_string(s));
  GraphTm model(c, space, 3);
  std::vector<std::vector<std::size_t>> layer0(c.num_clauses);
  for (std::size_t j = 0; j < c.num_clauses; ++j) {
    for (std::size_t k = 0; k < model.layer_width(0); ++k) {
      if (rng.bernoulli(0.04)) layer0[j].push_back(k);
    }
    model.set_component(j, 0, layer0[j]);
    model.set_component(j, 1, std::vector<std::size_t>{});
    for (std::size_t cls = 0; cls < 3; ++cls) model.weights().at(j, cls) = static_cast<int>(rng.below(11)) - 5;
  }
  std::size_t mismatches = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t nodes = 1 + rng.below(8);
    std::vector<std::vector<std::string>> props(nodes);
    for (auto& p : props) {
      for (int s = 0; s < 10; ++s) {
        if (rng.bernoulli(0.3)) p.push_back("s" + std::to_string(s));
      }
    }
    const InputGraph g = InputGraph::build(space, nodes, props, {});
    // Flat oracle: a clause holds on a node when every included literal is 1.
    std::vector<std::int64_t> votes(3, 0);
    std::vector<std::uint8_t> out(c.num_clauses, 0);
    for (std::size_t j = 0; j < c.num_clauses; ++j) {
      for (NodeIndex n = 0; n < nodes; ++n) {
        const Hypervector hv = space.encode(props[n]);
        bool holds = true;
        for (std::size_t k : layer0[j]) holds = holds && hv.test(k);
        out[j] |= holds;
      }
      for (std::size_t cls = 0; cls < 3; ++cls) votes[cls] += out[j] * model.weights().at(j, cls);
    }
    const ForwardResult r = model.forward(g);
    mismatches += r.clause_output != out || r.votes != votes;
  }
  return {mismatches == 0, std::to_string(20 - mismatches) + "/20 graphs agree with the flat oracle"};
}

Outcome determinism() {
  // 100 clauses over 48-node chains crosses the parallel threshold.
  Rng rng(31);
  Corpus corpus;
  corpus.symbols = {"A", "B"};
  corpus.edge_types = {"right", "left"};
  for (int i = 0; i < 40; ++i) {
    std::string seq;
    for (int n = 0; n < 48; ++n) seq += rng.bernoulli(0.5) ? 'A' : 'B';
    corpus.graphs.push_back(encode_sequence(seq, longest_run(seq, 'A') >= 4));
  }
  auto train = [&](std::size_t workers) {
    TrainConfig c;
    c.num_clauses = 100;
    c.depth = 2;
    c.msg_size = 512;
    c.seed = 11;
    SymbolSpace space(c.hv_size, c.bits_per_symbol, c.seed);
    register_vocabulary(space, corpus);
    GraphTm model(c, space, 2);
    model.set_workers(workers);
    const auto graphs = build_graphs(model.symbols(), corpus);
    fit(model, graphs, {}, 3);
    std::ostringstream bytes;
    write_model(bytes, model);
    return bytes.str();
  };
  const std::string one = train(1), four = train(4);
  return {one == four, std::to_string(one.size()) + " model bytes, workers 1 vs 4 " +
                           (one == four ? "identical" : "differ")};
}

Outcome invariants() {
  Rng rng(12);
  std::string bad;
  // Negation mirror and bundle algebra.
  for (int t = 0; t < 200; ++t) {
    const std::size_t size = 8 + rng.below(120);
    IndexList a, b;
    for (std::size_t i = 0; i < 1 + rng.below(6); ++i) a.push_back(static_cast<BitIndex>(rng.below(size)));
    for (std::size_t i = 0; i < 1 + rng.below(6); ++i) b.push_back(static_cast<BitIndex>(rng.below(size)));
    const Hypervector ha = bundle(Hypervector::empty(size), a);
    for (std::size_t k = 0; k < size; ++k) {
      if (ha.test(k) == ha.test(k + size)) {
        bad += " mirror";
        break;
      }
    }
    if (bundle(ha, a) != ha) bad += " idempotence";
    if (bundle(ha, b) != bundle(bundle(Hypervector::empty(size), b), a)) bad += " commutativity";
  }
  // Layer monotonicity on random three-layer models.
  GraphTm model = fixtures::experiment2();
  for (std::size_t j = 0; j < model.num_clauses(); ++j) {
    for (std::size_t i = 0; i < model.depth(); ++i) {
      std::vector<std::size_t> lits;
      for (std::size_t k = 0; k < model.layer_width(i); ++k) {
        if (rng.bernoulli(0.08)) lits.push_back(k);
      }
      model.set_component(j, i, lits);
    }
  }
  for (int t = 0; t < 300; ++t) {
    std::string seq;
    for (std::size_t n = 1 + rng.below(7); n > 0; --n) seq += "ABE"[rng.below(3)];
    const ForwardResult r = model.forward(chain(model.symbols(), seq));
    for (std::size_t i = 1; i < model.depth(); ++i) {
      for (std::size_t j = 0; j < model.num_clauses(); ++j) {
        for (NodeIndex n = 0; n < seq.size(); ++n) {
          if (r.state.match(i, j, n) && !r.state.match(i - 1, j, n)) bad += " monotonicity";
        }
      }
    }
  }
  // TA state bounds under random feedback.
  const std::uint32_t n = 3;
  TaTeam team(4, {16, 32}, n);
  for (int t = 0; t < 20000; ++t) {
    const std::size_t layer = rng.below(2);
    IndexList on;
    for (std::size_t i = 0; i < 3; ++i) on.push_back(static_cast<BitIndex>(rng.below(layer == 0 ? 8 : 16)));
    const Hypervector v = bundle(Hypervector::empty(layer == 0 ? 8 : 16), on);
    const std::size_t j = rng.below(4);
    if (rng.bernoulli(0.5)) {
      team.type_i_feedback(j, layer, v, rng.bernoulli(0.5), 1.0 + 9.0 * rng.uniform(), rng);
    } else {
      team.type_ii_feedback(j, layer, v, rng.bernoulli(0.5));
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::uint16_t s : team.states(j, i)) {
        if (s >= 2 * n) bad += " bounds";
      }
    }
  }
  // Positive weight scaling keeps the argmax.
  GraphTm scaled = fixtures::experiment2();
  const GraphTm base = fixtures::experiment2();
  for (std::size_t j = 0; j < scaled.num_clauses(); ++j) {
    for (std::size_t cls = 0; cls < scaled.num_classes(); ++cls) scaled.weights().at(j, cls) *= 7;
  }
  for (const std::string seq : {"BBAEE", "AAABB", "ABABA", "EAAAB", "BBBBB"}) {
    if (scaled.predict(chain(scaled.symbols(), seq)) != base.predict(chain(base.symbols(), seq))) bad += " scaling";
  }
  return {bad.empty(), bad.empty() ? "mirror, monotonicity, bounds, bundle algebra, argmax scaling" : "broken:" + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked example golden values", worked_example},
      {"experiment 1 hand-set clauses on BAAAE", experiment_one},
      {"experiment 2 hand-set clauses on BBAEE", experiment_two},
      {"experiment 1 training reproduction", experiment_one_training},
      {"multivalue XOR n=10", mv_xor},
      {"feedback table Monte Carlo", feedback_tables},
      {"oracle equivalence up to length 6", oracle_equivalence},
      {"disconnected-node reduction", disconnected_reduction},
      {"determinism across worker counts", determinism},
      {"invariant suite", invariants},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s %s: %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
