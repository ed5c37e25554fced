#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gtm/engine.hpp"

namespace gtm {

/// Binary model file, all integers little-endian.
///
///     magic            4 bytes  "GTM1"
///     version          u32      kModelFormatVersion
///     config           u32 clauses, i32 T, f64 s, u32 depth, u32 hv_size,
///                      u32 msg_size, u32 bits_per_symbol, u32 bits_per_clause,
///                      u32 N, u32 max_included (0 = unlimited), u32 epochs,
///                      u64 seed, u32 num_classes
///     vocabulary hash  u64      same hash as the corpus "space" line
///     symbols          u64 seed, u32 count, then per symbol:
///                      u32 name length, name bytes, u32 n, n x u32 index
///     edge types       u32 count, then per type: u32 length, bytes
///     message space    u32 msg_size, u32 edge types, u32 clauses, then per
///                      clause: u32 n, n x u32 base index
///     automata         per clause, per layer: u32 literal count, that many u16
///     weights          per clause: num_classes x i32
///     end marker       4 bytes  "END!"
inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Vocabulary hash of the model's symbol space (symbol and edge-type names).
std::uint64_t model_vocabulary_hash(const GraphTm& model);

void write_model(std::ostream& out, const GraphTm& model);
void save_model(const std::string& path, const GraphTm& model);

/// Throws FormatError on a corrupt or truncated file, InputError when the
/// file cannot be opened.
GraphTm read_model(std::istream& in);
GraphTm load_model(const std::string& path);

}  // namespace gtm
