#include "gtm/hypervector.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "gtm/errors.hpp"

namespace gtm {

namespace {

constexpr int kMaxRedraws = 1000;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Partial Fisher-Yates over [0, range): `count` distinct values, sorted.
IndexList draw_distinct(Rng& rng, std::size_t range, std::size_t count) {
  std::vector<BitIndex> pool(range);
  for (std::size_t i = 0; i < range; ++i) pool[i] = static_cast<BitIndex>(i);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(range - i);
    std::swap(pool[i], pool[j]);
  }
  IndexList out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hypervector

Hypervector::Hypervector(std::size_t size) : size_(size), words_((2 * size + 63) / 64, 0) {}

Hypervector Hypervector::empty(std::size_t size) {
  Hypervector hv(size);
  for (std::size_t k = size; k < 2 * size; ++k) hv.words_[k >> 6] |= 1ULL << (k & 63);
  return hv;
}

void Hypervector::bundle(std::span<const BitIndex> indices) {
  for (BitIndex k : indices) {
    if (k >= size_) {
      throw BoundsError("bit index " + std::to_string(k) + " outside hypervector of size " +
                        std::to_string(size_));
    }
  }
  for (BitIndex k : indices) {
    words_[k >> 6] |= 1ULL << (k & 63);
    const std::size_t neg = size_ + k;
    words_[neg >> 6] &= ~(1ULL << (neg & 63));
  }
}

std::size_t Hypervector::count_features() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < size_; ++k) n += test(k);
  return n;
}

std::string Hypervector::to_bit_string() const {
  std::string s = "[";
  for (std::size_t k = 0; k < length(); ++k) {
    if (k == size_) s += ' ';
    s += test(k) ? '1' : '0';
  }
  s += ']';
  return s;
}

std::string Hypervector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t k = 0; k < length(); k += 4) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      nibble <<= 1;
      if (k + b < length() && test(k + b)) nibble |= 1;
    }
    out += kDigits[nibble];
  }
  return out;
}

Hypervector Hypervector::from_hex(std::size_t size, std::string_view hex) {
  Hypervector hv(size);
  if (hex.size() != (2 * size + 3) / 4) throw InputError("hex length does not match size");
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    unsigned nibble;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw InputError("invalid hex digit");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t k = 4 * i + b;
      if ((nibble >> (3 - b)) & 1u) {
        if (k >= hv.length()) throw InputError("nonzero padding bits");
        hv.words_[k >> 6] |= 1ULL << (k & 63);
      }
    }
  }
  for (std::size_t k = 0; k < size; ++k) {
    if (hv.test(k) == hv.test(size + k)) throw InputError("negation half is not mirrored");
  }
  return hv;
}

Hypervector bundle(Hypervector hv, std::span<const BitIndex> indices) {
  hv.bundle(indices);
  return hv;
}

// ---------------------------------------------------------------------------
// SymbolSpace

SymbolSpace::SymbolSpace(std::size_t hv_size, std::size_t bits_per_symbol, std::uint64_t seed)
    : hv_size_(hv_size), bits_per_symbol_(bits_per_symbol), seed_(seed), rng_(seed) {
  if (hv_size == 0 || bits_per_symbol == 0) {
    throw ConfigError("hypervector size and bits per symbol must be positive");
  }
  if (bits_per_symbol > hv_size) {
    throw ConfigError("bits per symbol (" + std::to_string(bits_per_symbol) +
                      ") exceeds hypervector size (" + std::to_string(hv_size) + ")");
  }
}

const IndexList& SymbolSpace::insert(const std::string& id, IndexList indices) {
  lookup_.emplace(id, symbols_.size());
  symbols_.emplace_back(id, std::move(indices));
  return symbols_.back().second;
}

const IndexList& SymbolSpace::register_symbol(const std::string& id) {
  if (contains(id)) throw AlreadyRegisteredError("symbol '" + id + "' already registered");
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    IndexList drawn = draw_distinct(rng_, hv_size_, bits_per_symbol_);
    const bool taken = std::any_of(symbols_.begin(), symbols_.end(),
                                   [&](const auto& s) { return s.second == drawn; });
    if (!taken) return insert(id, std::move(drawn));
  }
  throw ConfigError("symbol space exhausted: no unused index set left for '" + id + "'");
}

const IndexList& SymbolSpace::register_symbol(const std::string& id, IndexList indices) {
  if (contains(id)) throw AlreadyRegisteredError("symbol '" + id + "' already registered");
  std::sort(indices.begin(), indices.end());
  if (indices.empty() || std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw ConfigError("forced indices for '" + id + "' must be non-empty and distinct");
  }
  if (indices.back() >= hv_size_) {
    throw BoundsError("forced index " + std::to_string(indices.back()) + " for '" + id +
                      "' outside hypervector of size " + std::to_string(hv_size_));
  }
  for (const auto& s : symbols_) {
    if (s.second == indices) {
      throw ConfigError("symbols '" + s.first + "' and '" + id + "' share an index set");
    }
  }
  return insert(id, std::move(indices));
}

const IndexList& SymbolSpace::indices(const std::string& id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) throw UnknownSymbolError("unknown symbol '" + id + "'");
  return symbols_[it->second].second;
}

std::uint32_t SymbolSpace::register_edge_type(const std::string& id) {
  if (edge_lookup_.contains(id)) {
    throw AlreadyRegisteredError("edge type '" + id + "' already registered");
  }
  const auto code = static_cast<std::uint32_t>(edge_types_.size());
  edge_types_.push_back(id);
  edge_lookup_.emplace(id, code);
  return code;
}

std::uint32_t SymbolSpace::edge_type_code(const std::string& id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) throw UnknownSymbolError("unknown edge type '" + id + "'");
  return it->second;
}

std::uint64_t SymbolSpace::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, hv_size_);
  h = fnv1a(h, bits_per_symbol_);
  for (const auto& [id, idx] : symbols_) {
    h = fnv1a(h, id);
    h = fnv1a(h, idx.size());
    for (BitIndex k : idx) h = fnv1a(h, k);
  }
  for (const auto& e : edge_types_) h = fnv1a(fnv1a(h, std::string_view("edge:")), e);
  return h;
}

Hypervector SymbolSpace::encode(std::span<const std::string> symbol_ids) const {
  Hypervector hv = Hypervector::empty(hv_size_);
  for (const auto& id : symbol_ids) hv.bundle(indices(id));
  return hv;
}

// ---------------------------------------------------------------------------
// MessageSpace

IndexList bind_offset(std::span<const BitIndex> base, std::uint32_t edge_type_code,
                      std::size_t msg_size) {
  IndexList out;
  out.reserve(base.size());
  for (BitIndex b : base) {
    const std::uint64_t shifted = std::uint64_t{b} + edge_type_code;
    if (shifted >= msg_size) {
      throw BindingOverflowError("message bit " + std::to_string(b) + " bound to edge type " +
                                 std::to_string(edge_type_code) + " overflows message size " +
                                 std::to_string(msg_size));
    }
    out.push_back(static_cast<BitIndex>(shifted));
  }
  return out;
}

void MessageSpace::build_bindings() {
  bound_.clear();
  bound_.reserve(base_.size() * num_edge_types_);
  std::set<IndexList> seen;
  for (std::size_t j = 0; j < base_.size(); ++j) {
    for (std::uint32_t e = 0; e < num_edge_types_; ++e) {
      IndexList shifted = bind_offset(base_[j], e, msg_size_);
      if (!seen.insert(shifted).second) {
        throw BindingOverflowError("clause " + std::to_string(j) + " bound to edge type " +
                                   std::to_string(e) +
                                   " collides with another clause's message bits");
      }
      bound_.push_back(std::move(shifted));
    }
  }
}

MessageSpace MessageSpace::random(std::size_t msg_size, std::size_t bits_per_clause,
                                  std::size_t num_clauses, std::size_t num_edge_types,
                                  std::uint64_t seed) {
  if (msg_size == 0 || bits_per_clause == 0 || num_edge_types == 0) {
    throw ConfigError("message size, bits per clause and edge type count must be positive");
  }
  if (num_edge_types - 1 + bits_per_clause > msg_size) {
    throw BindingOverflowError("message size " + std::to_string(msg_size) +
                               " too small for " + std::to_string(bits_per_clause) +
                               " bits per clause and " + std::to_string(num_edge_types) +
                               " edge types");
  }
  MessageSpace ms;
  ms.msg_size_ = msg_size;
  ms.bits_per_clause_ = bits_per_clause;
  ms.num_edge_types_ = num_edge_types;
  // Bases are drawn from [0, msg_size - num_edge_types] so every shift fits.
  const std::size_t range = msg_size - (num_edge_types - 1);
  Rng rng(seed);
  std::set<IndexList> seen;
  for (std::size_t j = 0; j < num_clauses; ++j) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRedraws && !placed; ++attempt) {
      IndexList base = draw_distinct(rng, range, bits_per_clause);
      std::vector<IndexList> shifted;
      bool clash = false;
      for (std::uint32_t e = 0; e < num_edge_types && !clash; ++e) {
        shifted.push_back(bind_offset(base, e, msg_size));
        clash = seen.contains(shifted.back());
      }
      if (clash) continue;
      for (auto& s : shifted) seen.insert(std::move(s));
      ms.base_.push_back(std::move(base));
      placed = true;
    }
    if (!placed) {
      throw BindingOverflowError("message size " + std::to_string(msg_size) +
                                 " cannot hold distinct bindings for " +
                                 std::to_string(num_clauses) + " clauses");
    }
  }
  ms.build_bindings();
  return ms;
}

MessageSpace MessageSpace::with_layout(std::size_t msg_size, std::size_t num_edge_types,
                                       std::vector<IndexList> clause_base_indices) {
  if (msg_size == 0 || num_edge_types == 0) {
    throw ConfigError("message size and edge type count must be positive");
  }
  MessageSpace ms;
  ms.msg_size_ = msg_size;
  ms.num_edge_types_ = num_edge_types;
  for (auto& base : clause_base_indices) {
    std::sort(base.begin(), base.end());
    if (base.empty() || std::adjacent_find(base.begin(), base.end()) != base.end()) {
      throw ConfigError("clause message indices must be non-empty and distinct");
    }
    ms.bits_per_clause_ = std::max(ms.bits_per_clause_, base.size());
  }
  ms.base_ = std::move(clause_base_indices);
  ms.build_bindings();
  return ms;
}

}  // namespace gtm
