#include "gtm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "gtm/errors.hpp"

namespace gtm {

namespace {

constexpr std::uint64_t kMessageStream = 0x6d7367;   // "msg"
constexpr std::uint64_t kWeightStream = 0x77676874;  // "wght"
constexpr std::uint64_t kClauseStream = 0x636c0000;  // + clause index
constexpr std::uint64_t kShuffleStream = 0x73687566; // "shuf"

// Below this many clause-node evaluations per layer, thread start-up costs
// more than it saves.
constexpr std::size_t kParallelThreshold = 4096;

}  // namespace

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(num_clauses > 0, "number of clauses must be positive");
  require(threshold > 0, "threshold T must be positive");
  require(std::isfinite(specificity) && specificity >= 1.0, "specificity s must be >= 1");
  require(depth > 0, "depth must be at least 1");
  require(hv_size > 0 && msg_size > 0, "hypervector sizes must be positive");
  require(bits_per_symbol > 0 && bits_per_symbol <= hv_size,
          "bits per symbol must be in [1, hv_size]");
  require(bits_per_clause > 0 && bits_per_clause <= msg_size,
          "bits per clause must be in [1, msg_size]");
  require(states_per_action > 0 && states_per_action <= 32768,
          "states per action must be in [1, 32768]");
  require(!max_included_literals || *max_included_literals > 0,
          "max included literals must be positive when set");
}

bool eval_component(std::span<const std::uint64_t> include_mask, std::size_t literal_count,
                    const Hypervector& hv) {
  if (literal_count != hv.length() || include_mask.size() != hv.words().size()) {
    throw ConfigError("component width " + std::to_string(literal_count) +
                      " does not match hypervector length " + std::to_string(hv.length()));
  }
  const auto words = hv.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    if ((include_mask[w] & ~words[w]) != 0) return false;
  }
  return true;
}

GraphTm::GraphTm(TrainConfig config, SymbolSpace symbols, std::size_t num_classes)
    : config_(std::move(config)), symbols_(std::move(symbols)), num_classes_(num_classes) {
  config_.validate();
  if (config_.depth > 1) {
    messages_ = MessageSpace::random(config_.msg_size, config_.bits_per_clause,
                                     config_.num_clauses,
                                     std::max<std::size_t>(1, symbols_.num_edge_types()),
                                     mix_seed(config_.seed, kMessageStream));
  }
  init();
}

GraphTm::GraphTm(TrainConfig config, SymbolSpace symbols, MessageSpace messages,
                 std::size_t num_classes)
    : config_(std::move(config)),
      symbols_(std::move(symbols)),
      messages_(std::move(messages)),
      num_classes_(num_classes) {
  config_.validate();
  if (config_.depth > 1) {
    if (messages_.num_clauses() != config_.num_clauses) {
      throw ConfigError("message layout covers " + std::to_string(messages_.num_clauses()) +
                        " clauses, model has " + std::to_string(config_.num_clauses));
    }
    if (messages_.msg_size() != config_.msg_size) {
      throw ConfigError("message layout size differs from configured msg_size");
    }
    if (messages_.num_edge_types() < symbols_.num_edge_types()) {
      throw ConfigError("message layout has fewer edge types than the symbol space");
    }
  }
  init();
}

void GraphTm::init() {
  if (num_classes_ == 0) throw ConfigError("number of classes must be positive");
  if (symbols_.hv_size() != config_.hv_size) {
    throw ConfigError("symbol space size differs from configured hv_size");
  }
  std::vector<std::size_t> widths;
  for (std::size_t i = 0; i < config_.depth; ++i) widths.push_back(layer_width(i));
  team_ = TaTeam(config_.num_clauses, widths, config_.states_per_action);

  weights_ = ClauseWeights(config_.num_clauses, num_classes_);
  Rng wrng(mix_seed(config_.seed, kWeightStream));
  for (std::size_t j = 0; j < config_.num_clauses; ++j) {
    for (std::size_t c = 0; c < num_classes_; ++c) weights_.at(j, c) = (wrng.next() >> 63) ? 1 : -1;
  }

  clause_rngs_.clear();
  clause_rngs_.reserve(config_.num_clauses);
  for (std::size_t j = 0; j < config_.num_clauses; ++j) {
    clause_rngs_.emplace_back(mix_seed(config_.seed, kClauseStream + j));
  }
  empty_layer_.clear();
  for (std::size_t i = 0; i < config_.depth; ++i) {
    empty_layer_.push_back(Hypervector::empty(i == 0 ? config_.hv_size : config_.msg_size));
  }
}

void GraphTm::set_component(std::size_t clause, std::size_t layer,
                            std::span<const std::size_t> literals) {
  const std::uint32_t n = config_.states_per_action;
  const std::size_t width = layer_width(layer);
  for (std::size_t k = 0; k < width; ++k) team_.set_state(clause, layer, k, 2 * n - 1);
  for (std::size_t k : literals) team_.set_state(clause, layer, k, 0);
}

ForwardResult GraphTm::forward(const InputGraph& graph) const {
  if (graph.space_fingerprint() != symbols_.fingerprint()) {
    throw ConfigError("graph was not built against this model's symbol space");
  }
  const std::size_t depth = config_.depth;
  const std::size_t m = config_.num_clauses;
  const std::size_t nodes = graph.num_nodes();
  const bool parallel = workers_ > 1 && m * nodes >= kParallelThreshold;
  const int threads = static_cast<int>(workers_);

  ForwardResult r;
  LayerState& st = r.state;
  st = LayerState(depth, m, nodes);
  st.node_hv.reserve(nodes);
  for (NodeIndex n = 0; n < nodes; ++n) st.node_hv.push_back(graph.node_hypervector(n));

  const std::size_t w0 = layer_width(0);
#pragma omp parallel for schedule(static) num_threads(threads) if (parallel)
  for (std::size_t j = 0; j < m; ++j) {
    const auto mask = team_.include_mask(j, 0);
    for (NodeIndex n = 0; n < nodes; ++n) st.set_match(0, j, n, eval_component(mask, w0, st.node_hv[n]));
  }

  for (std::size_t i = 1; i < depth; ++i) {
    auto& inbox = st.msg_hv.emplace_back(nodes, empty_layer_[i]);
    // Delivery reads matches finalized at layer i-1 only.
    for (NodeIndex src = 0; src < nodes; ++src) {
      const auto out = graph.neighbors_out(src);
      if (out.empty()) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (!st.match(i - 1, j, src)) continue;
        for (const OutEdge& e : out) inbox[e.dst].bundle(messages_.bound(j, e.type));
      }
    }
    const std::size_t wi = layer_width(i);
#pragma omp parallel for schedule(static) num_threads(threads) if (parallel)
    for (std::size_t j = 0; j < m; ++j) {
      const auto mask = team_.include_mask(j, i);
      for (NodeIndex n = 0; n < nodes; ++n) {
        st.set_match(i, j, n, st.match(i - 1, j, n) && eval_component(mask, wi, inbox[n]));
      }
    }
  }

  r.clause_output.assign(m, 0);
  r.votes.assign(num_classes_, 0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto fin = st.final_matches(j);
    r.clause_output[j] = std::any_of(fin.begin(), fin.end(), [](std::uint8_t b) { return b != 0; });
    if (!r.clause_output[j]) continue;
    for (std::size_t c = 0; c < num_classes_; ++c) r.votes[c] += weights_.row(j)[c];
  }
  return r;
}

std::size_t GraphTm::predict(const InputGraph& graph) const {
  const auto votes = forward(graph).votes;
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

void GraphTm::feedback(std::size_t clause, bool type_i, const ForwardResult& fr,
                       std::optional<NodeIndex> node, Rng& rng) {
  const bool fired = node.has_value();
  for (std::size_t i = 0; i < config_.depth; ++i) {
    const Hypervector& values = fired ? fr.state.layer_hv(i, *node) : empty_layer_[i];
    if (type_i) {
      team_.type_i_feedback(clause, i, values, fired, config_.specificity, rng,
                            config_.max_included_literals);
    } else {
      team_.type_ii_feedback(clause, i, values, fired);
    }
  }
}

void GraphTm::train_step(const InputGraph& graph, std::size_t label, Rng& rng) {
  if (label >= num_classes_) {
    throw BoundsError("label " + std::to_string(label) + " outside " +
                      std::to_string(num_classes_) + " classes");
  }
  const ForwardResult fr = forward(graph);
  const double t = config_.threshold;
  auto clipped = [t](std::int64_t v) { return std::clamp(static_cast<double>(v), -t, t); };

  const double p_target = (t - clipped(fr.votes[label])) / (2 * t);
  std::optional<std::size_t> other;
  double p_other = 0.0;
  if (num_classes_ > 1) {
    std::size_t o = rng.below(num_classes_ - 1);
    if (o >= label) ++o;
    other = o;
    p_other = (t + clipped(fr.votes[o])) / (2 * t);
  }

  const std::size_t m = config_.num_clauses;
  const std::size_t nodes = graph.num_nodes();
  const bool parallel = workers_ > 1 && m * nodes >= kParallelThreshold;
  const int threads = static_cast<int>(workers_);

#pragma omp parallel for schedule(static) num_threads(threads) if (parallel)
  for (std::size_t j = 0; j < m; ++j) {
    Rng& crng = clause_rngs_[j];
    const bool fired = fr.clause_output[j] != 0;
    std::optional<NodeIndex> node;
    auto pick_node = [&]() {
      if (!fired || node) return;
      const auto fin = fr.state.final_matches(j);
      const auto hits = static_cast<std::size_t>(std::count(fin.begin(), fin.end(), 1));
      std::size_t pick = crng.below(hits);
      for (NodeIndex n = 0; n < fin.size(); ++n) {
        if (fin[n] && pick-- == 0) {
          node = n;
          break;
        }
      }
    };

    // Clauses voting for the target class are reinforced (Type I), clauses
    // voting against it are made to stop firing (Type II).
    if (crng.bernoulli(p_target)) {
      pick_node();
      feedback(j, weights_.row(j)[label] >= 0, fr, node, crng);
      if (fired) weights_.row(j)[label] += 1;
    }
    if (other && crng.bernoulli(p_other)) {
      pick_node();
      feedback(j, weights_.row(j)[*other] < 0, fr, node, crng);
      if (fired) weights_.row(j)[*other] -= 1;
    }
  }
}

double accuracy(const GraphTm& model, std::span<const InputGraph> graphs) {
  if (graphs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& g : graphs) {
    if (!g.label()) throw InputError("graph without label in evaluation set");
    correct += model.predict(g) == *g.label();
  }
  return static_cast<double>(correct) / static_cast<double>(graphs.size());
}

std::vector<EpochMetrics> fit(GraphTm& model, std::span<const InputGraph> train,
                              std::span<const InputGraph> test, std::size_t epochs,
                              const std::function<void(const EpochMetrics&)>& on_epoch) {
  if (train.empty()) throw InputError("training corpus is empty");
  for (const auto& g : train) {
    if (!g.label()) throw InputError("graph without label in training set");
  }
  Rng rng(mix_seed(model.config().seed, kShuffleStream));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochMetrics> history;
  for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t idx : order) model.train_step(train[idx], *train[idx].label(), rng);

    EpochMetrics m;
    m.epoch = epoch;
    m.train_accuracy = accuracy(model, train);
    if (!test.empty()) m.test_accuracy = accuracy(model, test);
    m.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    history.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  return history;
}

}  // namespace gtm
