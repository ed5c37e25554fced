#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gtm/corpus.hpp"

namespace gtm {

/// Edge type carrying both directions of a multivalue-XOR pair.
inline constexpr std::string_view kPlainEdge = "plain";

/// Two-node graphs with one value symbol "0".."n-1" per node, connected both
/// ways. Label 1 iff the values sum to an even number, then flipped with
/// probability `noise`. Throws ConfigError for n < 2 or noise outside [0, 1].
Corpus gen_mv_xor(std::size_t n, double noise, std::size_t count, std::uint64_t seed);

struct SequenceTask {
  std::size_t length = 5;
  std::size_t num_classes = 2;     // 2: longest A-run >= 3; otherwise class = run - 1
  std::string alphabet = "ABCDE";  // first letter is the counted one
  /// Binary task only: share of positives. The default reproduces a
  /// 13,330 : 26,670 split.
  double positive_fraction = 13330.0 / 40000.0;
};

/// Longest run of `letter` in `seq`.
std::size_t longest_run(std::string_view seq, char letter);

/// Class of `seq` under `task` before noise, or SIZE_MAX if the sequence
/// belongs to no class (multiclass task, run 0 or too long).
std::size_t sequence_label(const SequenceTask& task, std::string_view seq);

/// Random sequences of `task.length` letters with class-balanced labels
/// (binary: `positive_fraction`). Noise moves a label to a uniformly chosen
/// other class. Throws ConfigError when a class cannot be produced.
std::vector<std::pair<std::string, std::size_t>> gen_sequences(const SequenceTask& task,
                                                               std::size_t count, double noise,
                                                               std::uint64_t seed);

/// Chain encoding: node n carries letter n; an edge of type "right" goes from
/// n to n+1 and one of type "left" from n+1 to n.
GraphRecord encode_sequence(std::string_view seq, std::size_t label);

/// Corpus vocabulary for sequences: one symbol per letter, edge types
/// "right" (code 0) then "left" (code 1).
Corpus sequence_corpus(const SequenceTask& task);

Corpus gen_seq_consecutive(const SequenceTask& task, std::size_t count, double noise,
                           std::uint64_t seed);

/// Boolean image, row-major.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;
  bool at(std::size_t r, std::size_t c) const { return pixels[r * cols + c] != 0; }
};

/// Non-overlapping `patch` x `patch` tiles, one edge-free node each. A node
/// carries "p<r>_<c>" for every set pixel (tile-relative) plus "row<i>" and
/// "col<j>" for the tile position. Throws InputError unless `patch` divides
/// both dimensions.
GraphRecord gen_grid_patches(const Grid& image, std::size_t patch, std::size_t label = 0);

/// Vocabulary of gen_grid_patches for a given image and patch size.
Corpus grid_corpus(std::size_t rows, std::size_t cols, std::size_t patch);

/// 8x8 two-class task: class 0 images hold one horizontal bar, class 1 one
/// vertical bar, with `flip` random background pixels set. Encoded with 4x4
/// patches.
Corpus gen_bars(std::size_t count, std::size_t flip, std::uint64_t seed);

}  // namespace gtm
