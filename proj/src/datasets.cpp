#include "gtm/datasets.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gtm/errors.hpp"
#include "gtm/random.hpp"

namespace gtm {

namespace {

constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kInputStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::size_t kNoClass = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxTriesPerSample = 100000;

void check_noise(double noise) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("noise rate must be in [0, 1]");
}

std::size_t flip_label(std::size_t label, std::size_t num_classes, Rng& rng) {
  const std::size_t other = rng.below(num_classes - 1);
  return other >= label ? other + 1 : other;
}

// Class labels for `count` samples, shuffled; per-class counts differ by at
// most one (or follow `weights` when given).
std::vector<std::size_t> balanced_labels(std::size_t count, std::size_t num_classes,
                                         const std::vector<double>& weights, Rng& rng) {
  std::vector<std::size_t> per_class(num_classes, 0);
  if (weights.empty()) {
    for (std::size_t k = 0; k < num_classes; ++k) per_class[k] = count / num_classes + (k < count % num_classes);
  } else {
    std::size_t assigned = 0;
    for (std::size_t k = 1; k < num_classes; ++k) {
      per_class[k] = static_cast<std::size_t>(static_cast<double>(count) * weights[k] + 0.5);
      assigned += per_class[k];
    }
    per_class[0] = count - std::min(assigned, count);
  }
  std::vector<std::size_t> labels;
  labels.reserve(count);
  for (std::size_t k = 0; k < num_classes; ++k) labels.insert(labels.end(), per_class[k], k);
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);
  return labels;
}

}  // namespace

Corpus gen_mv_xor(std::size_t n, double noise, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw ConfigError("multivalue XOR needs at least two values");
  check_noise(noise);
  Corpus corpus;
  for (std::size_t v = 0; v < n; ++v) corpus.symbols.push_back(std::to_string(v));
  corpus.edge_types = {std::string(kPlainEdge)};
  corpus.num_classes = 2;

  Rng inputs(mix_seed(seed, kInputStream));
  Rng flips(mix_seed(seed, kNoiseStream));
  corpus.graphs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t x1 = inputs.below(n);
    const std::size_t x2 = inputs.below(n);
    std::size_t label = (x1 + x2) % 2 == 0 ? 1 : 0;
    if (flips.bernoulli(noise)) label = 1 - label;
    GraphRecord g;
    g.properties = {{std::to_string(x1)}, {std::to_string(x2)}};
    g.edges = {{0, 1, std::string(kPlainEdge)}, {1, 0, std::string(kPlainEdge)}};
    g.label = label;
    corpus.graphs.push_back(std::move(g));
  }
  return corpus;
}

std::size_t longest_run(std::string_view seq, char letter) {
  std::size_t best = 0, run = 0;
  for (char c : seq) {
    run = c == letter ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::size_t sequence_label(const SequenceTask& task, std::string_view seq) {
  const std::size_t run = longest_run(seq, task.alphabet.front());
  if (task.num_classes == 2) return run >= 3 ? 1 : 0;
  if (run == 0 || run > task.num_classes) return kNoClass;
  return run - 1;
}

std::vector<std::pair<std::string, std::size_t>> gen_sequences(const SequenceTask& task,
                                                               std::size_t count, double noise,
                                                               std::uint64_t seed) {
  check_noise(noise);
  if (task.alphabet.empty()) throw ConfigError("empty alphabet");
  if (task.length == 0) throw ConfigError("sequence length must be positive");
  if (task.num_classes < 2) throw ConfigError("at least two classes are needed");
  if (task.num_classes == 2 && !(task.positive_fraction >= 0.0 && task.positive_fraction <= 1.0)) {
    throw ConfigError("positive fraction must be in [0, 1]");
  }

  // Every class must have at least one member sequence.
  const std::size_t max_run = task.num_classes == 2 ? 3 : task.num_classes;
  if (max_run > task.length) {
    throw ConfigError("a run of " + std::to_string(max_run) + " does not fit in length " +
                      std::to_string(task.length));
  }
  if (task.alphabet.size() == 1) throw ConfigError("a one-letter alphabet cannot produce every class");

  Rng label_rng(mix_seed(seed, kLabelStream));
  Rng input_rng(mix_seed(seed, kInputStream));
  Rng noise_rng(mix_seed(seed, kNoiseStream));
  std::vector<double> weights;
  if (task.num_classes == 2) weights = {1.0 - task.positive_fraction, task.positive_fraction};
  const auto labels = balanced_labels(count, task.num_classes, weights, label_rng);

  std::vector<std::pair<std::string, std::size_t>> out;
  out.reserve(count);
  std::string seq(task.length, ' ');
  for (std::size_t target : labels) {
    std::size_t tries = 0;
    do {
      if (++tries > kMaxTriesPerSample) throw ConfigError("cannot sample a sequence of class " + std::to_string(target));
      for (char& c : seq) c = task.alphabet[input_rng.below(task.alphabet.size())];
    } while (sequence_label(task, seq) != target);
    std::size_t label = target;
    if (noise_rng.bernoulli(noise)) label = flip_label(label, task.num_classes, noise_rng);
    out.emplace_back(seq, label);
  }
  return out;
}

GraphRecord encode_sequence(std::string_view seq, std::size_t label) {
  GraphRecord g;
  g.label = label;
  for (char c : seq) g.properties.push_back({std::string(1, c)});
  for (NodeIndex n = 0; n + 1 < seq.size(); ++n) {
    g.edges.push_back({n, n + 1, "right"});
    g.edges.push_back({n + 1, n, "left"});
  }
  return g;
}

Corpus sequence_corpus(const SequenceTask& task) {
  Corpus corpus;
  for (char c : task.alphabet) corpus.symbols.emplace_back(1, c);
  corpus.edge_types = {"right", "left"};
  corpus.num_classes = task.num_classes;
  return corpus;
}

Corpus gen_seq_consecutive(const SequenceTask& task, std::size_t count, double noise,
                           std::uint64_t seed) {
  Corpus corpus = sequence_corpus(task);
  for (const auto& [seq, label] : gen_sequences(task, count, noise, seed)) {
    corpus.graphs.push_back(encode_sequence(seq, label));
  }
  return corpus;
}

GraphRecord gen_grid_patches(const Grid& image, std::size_t patch, std::size_t label) {
  if (image.pixels.size() != image.rows * image.cols) throw InputError("pixel count does not match grid size");
  if (patch == 0 || image.rows % patch != 0 || image.cols % patch != 0) {
    throw InputError("patch size " + std::to_string(patch) + " does not divide a " +
                     std::to_string(image.rows) + "x" + std::to_string(image.cols) + " grid");
  }
  GraphRecord g;
  g.label = label;
  for (std::size_t i = 0; i < image.rows / patch; ++i) {
    for (std::size_t j = 0; j < image.cols / patch; ++j) {
      std::vector<std::string> props;
      for (std::size_t r = 0; r < patch; ++r) {
        for (std::size_t c = 0; c < patch; ++c) {
          if (image.at(i * patch + r, j * patch + c)) {
            props.push_back("p" + std::to_string(r) + "_" + std::to_string(c));
          }
        }
      }
      props.push_back("row" + std::to_string(i));
      props.push_back("col" + std::to_string(j));
      g.properties.push_back(std::move(props));
    }
  }
  return g;
}

Corpus grid_corpus(std::size_t rows, std::size_t cols, std::size_t patch) {
  if (patch == 0 || rows % patch != 0 || cols % patch != 0) throw InputError("patch size does not divide the grid");
  Corpus corpus;
  for (std::size_t r = 0; r < patch; ++r) {
    for (std::size_t c = 0; c < patch; ++c) corpus.symbols.push_back("p" + std::to_string(r) + "_" + std::to_string(c));
  }
  for (std::size_t i = 0; i < rows / patch; ++i) corpus.symbols.push_back("row" + std::to_string(i));
  for (std::size_t j = 0; j < cols / patch; ++j) corpus.symbols.push_back("col" + std::to_string(j));
  corpus.num_classes = 2;
  return corpus;
}

Corpus gen_bars(std::size_t count, std::size_t flip, std::uint64_t seed) {
  constexpr std::size_t kSide = 8;
  constexpr std::size_t kPatch = 4;
  Corpus corpus = grid_corpus(kSide, kSide, kPatch);
  Rng rng(mix_seed(seed, kInputStream));

  // A stray full line of the other orientation inside a tile would make the
  // image ambiguous.
  auto has_tile_line = [&](const Grid& g, bool horizontal) {
    for (std::size_t ti = 0; ti < kSide; ti += kPatch) {
      for (std::size_t tj = 0; tj < kSide; tj += kPatch) {
        for (std::size_t a = 0; a < kPatch; ++a) {
          bool full = true;
          for (std::size_t b = 0; b < kPatch && full; ++b) {
            full = horizontal ? g.at(ti + a, tj + b) : g.at(ti + b, tj + a);
          }
          if (full) return true;
        }
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t label = i % 2;
    Grid g{kSide, kSide, {}};
    do {
      g.pixels.assign(kSide * kSide, 0);
      const std::size_t line = rng.below(kSide);
      for (std::size_t k = 0; k < kSide; ++k) {
        g.pixels[label == 0 ? line * kSide + k : k * kSide + line] = 1;
      }
      for (std::size_t f = 0; f < flip; ++f) g.pixels[rng.below(kSide * kSide)] = 1;
    } while (has_tile_line(g, label == 1));
    corpus.graphs.push_back(gen_grid_patches(g, kPatch, label));
  }
  return corpus;
}

}  // namespace gtm
