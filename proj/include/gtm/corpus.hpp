#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gtm/graph.hpp"
#include "gtm/hypervector.hpp"

namespace gtm {

/// One graph of a corpus, in symbolic form.
struct GraphRecord {
  std::vector<std::vector<std::string>> properties;  // one symbol list per node
  std::vector<EdgeSpec> edges;
  std::size_t label = 0;

  std::size_t num_nodes() const { return properties.size(); }
};

/// A labelled set of graphs sharing one vocabulary.
///
/// Text layout (line oriented, '#' starts a comment line):
///
///     gtm-corpus 1
///     space <16 hex digits>          vocabulary hash, see vocabulary_hash()
///     symbols <k> <id_1> ... <id_k>
///     edge_types <t> <id_1> ... <id_t>
///     classes <c>
///     graph <num_nodes> <label>
///     node <symbol> <symbol> ...      exactly num_nodes lines, possibly empty
///     edge <src> <dst> <edge_type>    zero or more
///     end
///
/// Symbol and edge-type ids are whitespace-free tokens.
struct Corpus {
  std::vector<std::string> symbols;
  std::vector<std::string> edge_types;
  std::size_t num_classes = 2;
  std::vector<GraphRecord> graphs;

  std::size_t size() const { return graphs.size(); }
  bool empty() const { return graphs.empty(); }
};

/// Hash of the ordered symbol and edge-type names. Model files carry the same
/// hash so a model is only ever paired with corpora of its own vocabulary.
std::uint64_t vocabulary_hash(const std::vector<std::string>& symbols,
                              const std::vector<std::string>& edge_types);
inline std::uint64_t vocabulary_hash(const Corpus& c) {
  return vocabulary_hash(c.symbols, c.edge_types);
}

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::string& path, const Corpus& corpus);

/// Throws InputError on malformed text or an unreadable file.
Corpus read_corpus(std::istream& in);
Corpus load_corpus(const std::string& path);

/// Registers the corpus vocabulary (symbols first, then edge types, in order).
void register_vocabulary(SymbolSpace& space, const Corpus& corpus);

std::vector<InputGraph> build_graphs(const SymbolSpace& space, const Corpus& corpus);

}  // namespace gtm
