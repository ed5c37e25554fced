#include "gtm/automata.hpp"

#include <bit>
#include <limits>
#include <string>

#include "gtm/errors.hpp"

namespace gtm {

TaTeam::TaTeam(std::size_t num_clauses, std::vector<std::size_t> literals_per_layer,
               std::uint32_t states_per_action)
    : num_clauses_(num_clauses), n_(states_per_action), literals_(std::move(literals_per_layer)) {
  if (n_ == 0 || 2ull * n_ - 1 > std::numeric_limits<std::uint16_t>::max()) {
    throw ConfigError("states per action must be in [1, 32768]");
  }
  for (std::size_t lits : literals_) {
    layer_state_offset_.push_back(states_per_clause_);
    layer_word_offset_.push_back(words_per_clause_);
    words_.push_back((lits + 63) / 64);
    states_per_clause_ += lits;
    words_per_clause_ += words_.back();
  }
  states_.assign(num_clauses_ * states_per_clause_, static_cast<std::uint16_t>(n_));
  masks_.assign(num_clauses_ * words_per_clause_, 0);
  included_.assign(num_clauses_, 0);
}

void TaTeam::check(std::size_t clause, std::size_t layer, std::size_t literal) const {
  if (clause >= num_clauses_ || layer >= literals_.size() || literal >= literals_[layer]) {
    throw BoundsError("automaton (" + std::to_string(clause) + ", " + std::to_string(layer) +
                      ", " + std::to_string(literal) + ") out of range");
  }
}

void TaTeam::check_width(std::size_t layer, const Hypervector& values) const {
  if (values.length() != literals_.at(layer)) {
    throw ConfigError("layer " + std::to_string(layer) + " has " +
                      std::to_string(literals_[layer]) + " literals, input vector has " +
                      std::to_string(values.length()));
  }
}

Action TaTeam::action(std::size_t clause, std::size_t layer, std::size_t literal) const {
  check(clause, layer, literal);
  return states_[state_offset(clause, layer) + literal] < n_ ? Action::Include : Action::Exclude;
}

std::uint32_t TaTeam::state(std::size_t clause, std::size_t layer, std::size_t literal) const {
  check(clause, layer, literal);
  return states_[state_offset(clause, layer) + literal];
}

void TaTeam::set_state(std::size_t clause, std::size_t layer, std::size_t literal,
                       std::uint32_t state) {
  check(clause, layer, literal);
  if (state >= 2 * n_) throw BoundsError("state " + std::to_string(state) + " outside [0, 2N)");
  auto& slot = states_[state_offset(clause, layer) + literal];
  const bool was = slot < n_;
  slot = static_cast<std::uint16_t>(state);
  refresh_include(clause, layer, literal, was);
}

void TaTeam::load_states(std::size_t clause, std::size_t layer,
                         std::span<const std::uint16_t> states) {
  if (states.size() != literals_.at(layer)) throw ConfigError("state array width mismatch");
  for (std::size_t k = 0; k < states.size(); ++k) set_state(clause, layer, k, states[k]);
}

std::size_t TaTeam::included_count(std::size_t clause, std::size_t layer) const {
  std::size_t n = 0;
  for (std::uint64_t w : include_mask(clause, layer)) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void TaTeam::refresh_include(std::size_t clause, std::size_t layer, std::size_t literal,
                             bool was_included) {
  const bool now = states_[state_offset(clause, layer) + literal] < n_;
  if (now == was_included) return;
  auto& word = masks_[mask_offset(clause, layer) + (literal >> 6)];
  const std::uint64_t bit = 1ULL << (literal & 63);
  if (now) {
    word |= bit;
    ++included_[clause];
  } else {
    word &= ~bit;
    --included_[clause];
  }
}

void TaTeam::increment(std::size_t clause, std::size_t layer, std::size_t literal) {
  auto& slot = states_[state_offset(clause, layer) + literal];
  if (slot + 1u >= 2 * n_) return;
  const bool was = slot < n_;
  ++slot;
  refresh_include(clause, layer, literal, was);
}

void TaTeam::decrement(std::size_t clause, std::size_t layer, std::size_t literal) {
  auto& slot = states_[state_offset(clause, layer) + literal];
  if (slot == 0) return;
  const bool was = slot < n_;
  --slot;
  refresh_include(clause, layer, literal, was);
}

void TaTeam::type_i_feedback(std::size_t clause, std::size_t layer, const Hypervector& values,
                             bool clause_value, double s, Rng& rng,
                             std::optional<std::size_t> max_included) {
  if (clause >= num_clauses_) throw BoundsError("clause out of range");
  check_width(layer, values);
  if (s < 1.0) throw ConfigError("specificity s must be >= 1");
  const double p_low = 1.0 / s;          // 1/s cells
  const double p_high = (s - 1.0) / s;   // (s-1)/s cells
  const std::size_t lits = literals_[layer];
  const std::uint16_t* st = states_.data() + state_offset(clause, layer);

  LaneDraws draw(rng);
  const std::uint32_t t_low = LaneDraws::threshold(p_low);
  const std::uint32_t t_high = LaneDraws::threshold(p_high);

  if (!clause_value) {
    // Include: penalty 1/s; Exclude: reward 1/s. Both increment.
    for (std::size_t k = 0; k < lits; ++k) {
      if (draw.hit(t_low)) increment(clause, layer, k);
    }
    return;
  }
  for (std::size_t k = 0; k < lits; ++k) {
    if (values.test(k)) {
      // Literal 1. Include: reward (s-1)/s. Exclude: penalty (s-1)/s. Both decrement.
      if (!draw.hit(t_high)) continue;
      if (st[k] >= n_ && max_included && included_[clause] >= *max_included) continue;
      decrement(clause, layer, k);
    } else if (st[k] >= n_) {
      // Exclude with literal 0: reward 1/s. Include with literal 0 cannot
      // occur in a firing clause.
      if (draw.hit(t_low)) increment(clause, layer, k);
    }
  }
}

void TaTeam::type_ii_feedback(std::size_t clause, std::size_t layer, const Hypervector& values,
                              bool clause_value) {
  if (clause >= num_clauses_) throw BoundsError("clause out of range");
  check_width(layer, values);
  if (!clause_value) return;
  const auto mask = include_mask(clause, layer);
  const auto v = values.words();
  const std::size_t lits = literals_[layer];
  for (std::size_t w = 0; w < mask.size(); ++w) {
    std::uint64_t candidates = ~v[w] & ~mask[w];
    if (w == mask.size() - 1 && (lits & 63) != 0) candidates &= (1ULL << (lits & 63)) - 1;
    while (candidates != 0) {
      const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(candidates));
      candidates &= candidates - 1;
      decrement(clause, layer, k);
    }
  }
}

std::int32_t ClauseWeights::at(std::size_t clause, std::size_t cls) const {
  if (cls >= num_classes_ || clause >= num_clauses()) throw BoundsError("weight index out of range");
  return weights_[clause * num_classes_ + cls];
}

std::int32_t& ClauseWeights::at(std::size_t clause, std::size_t cls) {
  if (cls >= num_classes_ || clause >= num_clauses()) throw BoundsError("weight index out of range");
  return weights_[clause * num_classes_ + cls];
}

}  // namespace gtm
