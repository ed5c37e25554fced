#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gtm/hypervector.hpp"
#include "gtm/random.hpp"

namespace gtm {

enum class Action : std::uint8_t { Include, Exclude };

/// Tsetlin automata for every (clause, layer, literal). Each automaton has
/// 2N states: 0..N-1 select Include, N..2N-1 select Exclude. Literal k of a
/// layer addresses bit k of that layer's full (original + negated) vector.
///
/// Reward deepens the current action, penalty pushes toward the other one.
/// In state terms, Include rewards and Exclude penalties decrement; Include
/// penalties and Exclude rewards increment. Both ends saturate.
class TaTeam {
 public:
  TaTeam() = default;

  /// Every automaton starts at state N, the weakest Exclude state.
  TaTeam(std::size_t num_clauses, std::vector<std::size_t> literals_per_layer,
         std::uint32_t states_per_action);

  std::size_t num_clauses() const { return num_clauses_; }
  std::size_t num_layers() const { return literals_.size(); }
  std::size_t num_literals(std::size_t layer) const { return literals_.at(layer); }
  std::uint32_t states_per_action() const { return n_; }

  Action action(std::size_t clause, std::size_t layer, std::size_t literal) const;
  std::uint32_t state(std::size_t clause, std::size_t layer, std::size_t literal) const;
  void set_state(std::size_t clause, std::size_t layer, std::size_t literal, std::uint32_t state);

  /// Packed include bits of one clause component, literal k in word k/64.
  std::span<const std::uint64_t> include_mask(std::size_t clause, std::size_t layer) const {
    return {masks_.data() + mask_offset(clause, layer), words_[layer]};
  }

  std::size_t included_count(std::size_t clause) const { return included_[clause]; }
  std::size_t included_count(std::size_t clause, std::size_t layer) const;

  /// Raw states of one clause component (for serialization).
  std::span<const std::uint16_t> states(std::size_t clause, std::size_t layer) const {
    return {states_.data() + state_offset(clause, layer), literals_[layer]};
  }
  void load_states(std::size_t clause, std::size_t layer, std::span<const std::uint16_t> states);

  /// Type I feedback (target-pattern reinforcement) on one clause component.
  /// `values` is the component's input vector. When `clause_value` is false
  /// the literal values are irrelevant. With `max_included` set, excluded
  /// literals are not pushed toward Include once the clause holds that many
  /// included literals.
  void type_i_feedback(std::size_t clause, std::size_t layer, const Hypervector& values,
                       bool clause_value, double s, Rng& rng,
                       std::optional<std::size_t> max_included = std::nullopt);

  /// Type II feedback (discrimination): excluded literals that are 0 in a
  /// firing clause are penalized, nothing else changes.
  void type_ii_feedback(std::size_t clause, std::size_t layer, const Hypervector& values,
                        bool clause_value);

  friend bool operator==(const TaTeam& a, const TaTeam& b) {
    return a.n_ == b.n_ && a.literals_ == b.literals_ && a.states_ == b.states_;
  }

 private:
  std::size_t state_offset(std::size_t clause, std::size_t layer) const {
    return clause * states_per_clause_ + layer_state_offset_[layer];
  }
  std::size_t mask_offset(std::size_t clause, std::size_t layer) const {
    return clause * words_per_clause_ + layer_word_offset_[layer];
  }
  void check(std::size_t clause, std::size_t layer, std::size_t literal) const;
  void check_width(std::size_t layer, const Hypervector& values) const;
  void increment(std::size_t clause, std::size_t layer, std::size_t literal);
  void decrement(std::size_t clause, std::size_t layer, std::size_t literal);
  void refresh_include(std::size_t clause, std::size_t layer, std::size_t literal, bool was_included);

  std::size_t num_clauses_ = 0;
  std::uint32_t n_ = 0;
  std::vector<std::size_t> literals_;
  std::vector<std::size_t> words_;
  std::vector<std::size_t> layer_state_offset_;
  std::vector<std::size_t> layer_word_offset_;
  std::size_t states_per_clause_ = 0;
  std::size_t words_per_clause_ = 0;
  std::vector<std::uint16_t> states_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::size_t> included_;
};

/// Signed per-class vote weight of every clause.
class ClauseWeights {
 public:
  ClauseWeights() = default;
  ClauseWeights(std::size_t num_clauses, std::size_t num_classes)
      : num_classes_(num_classes), weights_(num_clauses * num_classes, 0) {}

  std::size_t num_clauses() const { return num_classes_ == 0 ? 0 : weights_.size() / num_classes_; }
  std::size_t num_classes() const { return num_classes_; }

  std::int32_t at(std::size_t clause, std::size_t cls) const;
  std::int32_t& at(std::size_t clause, std::size_t cls);

  std::span<const std::int32_t> row(std::size_t clause) const {
    return {weights_.data() + clause * num_classes_, num_classes_};
  }
  std::span<std::int32_t> row(std::size_t clause) {
    return {weights_.data() + clause * num_classes_, num_classes_};
  }

  friend bool operator==(const ClauseWeights&, const ClauseWeights&) = default;

 private:
  std::size_t num_classes_ = 0;
  std::vector<std::int32_t> weights_;
};

}  // namespace gtm
