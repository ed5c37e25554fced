#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gtm/automata.hpp"
#include "gtm/graph.hpp"
#include "gtm/hypervector.hpp"
#include "gtm/random.hpp"

namespace gtm {

struct TrainConfig {
  std::size_t num_clauses = 10;
  std::int32_t threshold = 100;  // voting margin T
  double specificity = 10.0;     // s
  std::size_t depth = 1;         // number of layers D, layer 0 included
  std::size_t hv_size = 128;
  std::size_t msg_size = 256;
  std::size_t bits_per_symbol = 2;
  std::size_t bits_per_clause = 2;
  std::uint32_t states_per_action = 128;
  std::optional<std::size_t> max_included_literals;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;

  /// Throws ConfigError when a field is out of its domain.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// True iff every included literal is 1 in `hv`; an empty component is True.
/// Throws ConfigError if `literal_count` differs from hv.length().
bool eval_component(std::span<const std::uint64_t> include_mask, std::size_t literal_count,
                    const Hypervector& hv);

struct ForwardResult {
  std::vector<std::int64_t> votes;          // per class
  std::vector<std::uint8_t> clause_output;  // per clause, OR over nodes of the last layer
  LayerState state;
};

/// Graph Tsetlin Machine with one clause bank shared by all classes.
/// Layer 0 components read node hypervectors (2*hv_size literals); layers
/// 1..D-1 read message hypervectors (2*msg_size literals).
class GraphTm {
 public:
  /// Draws the message layout from config.seed.
  GraphTm(TrainConfig config, SymbolSpace symbols, std::size_t num_classes);
  GraphTm(TrainConfig config, SymbolSpace symbols, MessageSpace messages, std::size_t num_classes);

  const TrainConfig& config() const { return config_; }
  const SymbolSpace& symbols() const { return symbols_; }
  const MessageSpace& messages() const { return messages_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t num_clauses() const { return config_.num_clauses; }
  std::size_t depth() const { return config_.depth; }

  const TaTeam& team() const { return team_; }
  TaTeam& team() { return team_; }
  const ClauseWeights& weights() const { return weights_; }
  ClauseWeights& weights() { return weights_; }

  /// Literal width of the component bank at `layer`.
  std::size_t layer_width(std::size_t layer) const {
    return layer == 0 ? 2 * config_.hv_size : 2 * config_.msg_size;
  }

  /// Sets one component to include exactly `literals` (others excluded).
  void set_component(std::size_t clause, std::size_t layer, std::span<const std::size_t> literals);

  /// Clause-partitioned parallelism; results do not depend on this value.
  void set_workers(std::size_t workers) { workers_ = workers == 0 ? 1 : workers; }
  std::size_t workers() const { return workers_; }

  /// Layered evaluation: layer-0 matches, message delivery along out-edges
  /// bound to their edge types, conjunctive matches per message layer, OR over
  /// nodes, weighted vote. Throws ConfigError if `graph` was built against a
  /// different SymbolSpace.
  ForwardResult forward(const InputGraph& graph) const;

  /// argmax of the vote sums, ties to the lowest class index.
  std::size_t predict(const InputGraph& graph) const;

  /// One supervised update. `rng` drives the choice of the non-target class;
  /// automaton updates draw from per-clause streams owned by the model.
  void train_step(const InputGraph& graph, std::size_t label, Rng& rng);

 private:
  void init();
  void feedback(std::size_t clause, bool type_i, const ForwardResult& fr, std::optional<NodeIndex> node,
                Rng& rng);

  TrainConfig config_;
  SymbolSpace symbols_;
  MessageSpace messages_;
  std::size_t num_classes_;
  TaTeam team_;
  ClauseWeights weights_;
  std::vector<Rng> clause_rngs_;
  std::vector<Hypervector> empty_layer_;
  std::size_t workers_ = 1;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_accuracy = 0.0;
  std::optional<double> test_accuracy;
  double elapsed_ms = 0.0;
};

double accuracy(const GraphTm& model, std::span<const InputGraph> graphs);

/// Runs `epochs` passes over `train` (shuffled per epoch from config.seed),
/// calling train_step on every graph. Graphs must carry labels. Throws
/// InputError on an empty training set.
std::vector<EpochMetrics> fit(GraphTm& model, std::span<const InputGraph> train,
                              std::span<const InputGraph> test, std::size_t epochs,
                              const std::function<void(const EpochMetrics&)>& on_epoch = {});

}  // namespace gtm
