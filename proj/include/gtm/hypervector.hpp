#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gtm/random.hpp"

namespace gtm {

using BitIndex = std::uint32_t;
using IndexList = std::vector<BitIndex>;

/// Boolean hypervector of length 2*size. Bit k < size is an original feature,
/// bit size+k is its negation; the two halves are kept mirrored.
class Hypervector {
 public:
  Hypervector() = default;

  /// The empty vector: first half all zero, second half all one.
  static Hypervector empty(std::size_t size);

  std::size_t size() const { return size_; }
  std::size_t length() const { return 2 * size_; }

  bool test(std::size_t bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1u; }

  /// Sets the feature bits at `indices` and clears their negation bits.
  /// Throws BoundsError if any index >= size().
  void bundle(std::span<const BitIndex> indices);

  /// Packed words of the full 2*size literal vector, bit k in word k/64.
  std::span<const std::uint64_t> words() const { return words_; }

  std::size_t count_features() const;

  /// "[11000000 00111111]" style rendering, index 0 first.
  std::string to_bit_string() const;

  /// Hex encoding of the full vector; the most significant bit of the first
  /// nibble is index 0. Padded with zero bits to a multiple of 4.
  std::string to_hex() const;
  static Hypervector from_hex(std::size_t size, std::string_view hex);

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  explicit Hypervector(std::size_t size);

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

Hypervector bundle(Hypervector hv, std::span<const BitIndex> indices);

/// Registry of property symbols and edge types with their feature-bit indices.
class SymbolSpace {
 public:
  /// Throws ConfigError if bits_per_symbol is zero or exceeds hv_size.
  SymbolSpace(std::size_t hv_size, std::size_t bits_per_symbol, std::uint64_t seed);

  std::size_t hv_size() const { return hv_size_; }
  std::size_t bits_per_symbol() const { return bits_per_symbol_; }
  std::uint64_t seed() const { return seed_; }

  /// Draws bits_per_symbol distinct indices from the seeded stream. Redraws
  /// when the full set already belongs to another symbol.
  const IndexList& register_symbol(const std::string& id);

  /// Registers with a caller-chosen index set (hand-built layouts).
  const IndexList& register_symbol(const std::string& id, IndexList indices);

  bool contains(const std::string& id) const { return lookup_.contains(id); }
  const IndexList& indices(const std::string& id) const;

  /// Symbols in registration order.
  const std::vector<std::pair<std::string, IndexList>>& symbols() const { return symbols_; }

  /// Edge types receive consecutive codes in registration order.
  std::uint32_t register_edge_type(const std::string& id);
  bool has_edge_type(const std::string& id) const { return edge_lookup_.contains(id); }
  std::uint32_t edge_type_code(const std::string& id) const;
  const std::vector<std::string>& edge_types() const { return edge_types_; }
  std::size_t num_edge_types() const { return edge_types_.size(); }

  /// Hash over sizes, symbol names, their indices and edge types.
  std::uint64_t fingerprint() const;

  /// Hypervector with the bits of every listed symbol bundled in.
  Hypervector encode(std::span<const std::string> symbol_ids) const;

 private:
  const IndexList& insert(const std::string& id, IndexList indices);

  std::size_t hv_size_;
  std::size_t bits_per_symbol_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<std::pair<std::string, IndexList>> symbols_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<std::string> edge_types_;
  std::unordered_map<std::string, std::uint32_t> edge_lookup_;
};

/// Element-wise base + edge_type_code. Throws BindingOverflowError if any
/// shifted index reaches msg_size.
IndexList bind_offset(std::span<const BitIndex> base, std::uint32_t edge_type_code,
                      std::size_t msg_size);

/// Per-clause message bit layout and its edge-type bindings.
class MessageSpace {
 public:
  MessageSpace() = default;

  /// Random layout: each clause draws bits_per_clause indices such that every
  /// shifted set stays in range and no two (clause, edge type) sets coincide.
  static MessageSpace random(std::size_t msg_size, std::size_t bits_per_clause,
                             std::size_t num_clauses, std::size_t num_edge_types,
                             std::uint64_t seed);

  /// Explicit layout, validated eagerly.
  static MessageSpace with_layout(std::size_t msg_size, std::size_t num_edge_types,
                                  std::vector<IndexList> clause_base_indices);

  std::size_t msg_size() const { return msg_size_; }
  std::size_t bits_per_clause() const { return bits_per_clause_; }
  std::size_t num_edge_types() const { return num_edge_types_; }
  std::size_t num_clauses() const { return base_.size(); }
  const std::vector<IndexList>& clause_base_indices() const { return base_; }

  /// Message bits for `clause` arriving over an edge of type `edge_type`.
  const IndexList& bound(std::size_t clause, std::uint32_t edge_type) const {
    return bound_[clause * num_edge_types_ + edge_type];
  }

  friend bool operator==(const MessageSpace& a, const MessageSpace& b) {
    return a.msg_size_ == b.msg_size_ && a.num_edge_types_ == b.num_edge_types_ &&
           a.base_ == b.base_;
  }

 private:
  void build_bindings();

  std::size_t msg_size_ = 0;
  std::size_t bits_per_clause_ = 0;
  std::size_t num_edge_types_ = 0;
  std::vector<IndexList> base_;
  std::vector<IndexList> bound_;
};

}  // namespace gtm
