#include "gtm/corpus.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "gtm/errors.hpp"

namespace gtm {

namespace {

constexpr const char* kHeader = "gtm-corpus";
constexpr int kVersion = 1;

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  // Next non-blank, non-comment line, tokenized. Empty vector at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream ss(line);
      tokens.clear();
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens.front().starts_with('#')) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("corpus line " + std::to_string(line_no) + ": " + what);
  }

  std::size_t parse_count(const std::string& tok) const {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      fail("expected a non-negative integer, got '" + tok + "'");
    }
    if (pos != tok.size() || tok.starts_with('-')) {
      fail("expected a non-negative integer, got '" + tok + "'");
    }
    return static_cast<std::size_t>(v);
  }

  std::vector<std::string> expect(const std::string& keyword, std::size_t min_tokens) {
    std::vector<std::string> tokens;
    if (!next(tokens)) fail("unexpected end of input, expected '" + keyword + "'");
    if (tokens.front() != keyword) fail("expected '" + keyword + "', got '" + tokens.front() + "'");
    if (tokens.size() < min_tokens) fail("too few fields for '" + keyword + "'");
    return tokens;
  }

  std::vector<std::string> counted_list(const std::string& keyword) {
    auto tokens = expect(keyword, 2);
    const std::size_t n = parse_count(tokens[1]);
    if (tokens.size() != n + 2) fail("'" + keyword + "' declares " + tokens[1] + " entries");
    return {tokens.begin() + 2, tokens.end()};
  }
};

}  // namespace

std::uint64_t vocabulary_hash(const std::vector<std::string>& symbols,
                              const std::vector<std::string>& edge_types) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;  // separator outside the token alphabet
    h *= 0x100000001b3ULL;
  };
  for (const auto& s : symbols) mix(s);
  mix("|edge_types|");
  for (const auto& e : edge_types) mix(e);
  return h;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << kHeader << ' ' << kVersion << '\n';
  out << "space " << std::hex << std::setw(16) << std::setfill('0') << vocabulary_hash(corpus)
      << std::dec << std::setfill(' ') << '\n';
  out << "symbols " << corpus.symbols.size();
  for (const auto& s : corpus.symbols) out << ' ' << s;
  out << "\nedge_types " << corpus.edge_types.size();
  for (const auto& e : corpus.edge_types) out << ' ' << e;
  out << "\nclasses " << corpus.num_classes << '\n';
  for (const auto& g : corpus.graphs) {
    out << "graph " << g.num_nodes() << ' ' << g.label << '\n';
    for (const auto& props : g.properties) {
      out << "node";
      for (const auto& p : props) out << ' ' << p;
      out << '\n';
    }
    for (const auto& e : g.edges) out << "edge " << e.src << ' ' << e.dst << ' ' << e.type << '\n';
    out << "end\n";
  }
}

void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_corpus(out, corpus);
  if (!out) throw InputError("failed writing '" + path + "'");
}

Corpus read_corpus(std::istream& in) {
  LineReader r{in};
  Corpus c;
  auto header = r.expect(kHeader, 2);
  if (header[1] != std::to_string(kVersion)) r.fail("unsupported corpus version " + header[1]);
  auto space = r.expect("space", 2);
  c.symbols = r.counted_list("symbols");
  c.edge_types = r.counted_list("edge_types");
  c.num_classes = r.parse_count(r.expect("classes", 2)[1]);
  if (c.num_classes == 0) r.fail("class count must be positive");

  std::ostringstream expected;
  expected << std::hex << std::setw(16) << std::setfill('0') << vocabulary_hash(c);
  if (space[1] != expected.str()) r.fail("vocabulary hash mismatch");

  const std::unordered_set<std::string> symbols(c.symbols.begin(), c.symbols.end());
  const std::unordered_set<std::string> edge_types(c.edge_types.begin(), c.edge_types.end());

  std::vector<std::string> tokens;
  while (r.next(tokens)) {
    if (tokens.front() != "graph" || tokens.size() != 3) r.fail("expected 'graph <nodes> <label>'");
    GraphRecord g;
    const std::size_t n = r.parse_count(tokens[1]);
    g.label = r.parse_count(tokens[2]);
    if (g.label >= c.num_classes) r.fail("label " + tokens[2] + " out of range");
    for (std::size_t i = 0; i < n; ++i) {
      auto node = r.expect("node", 1);
      for (auto it = node.begin() + 1; it != node.end(); ++it) {
        if (!symbols.contains(*it)) r.fail("undeclared symbol '" + *it + "'");
      }
      g.properties.emplace_back(node.begin() + 1, node.end());
    }
    for (;;) {
      if (!r.next(tokens)) r.fail("unterminated graph record");
      if (tokens.front() == "end" && tokens.size() == 1) break;
      if (tokens.front() != "edge" || tokens.size() != 4) r.fail("expected 'edge <src> <dst> <type>' or 'end'");
      EdgeSpec e{static_cast<NodeIndex>(r.parse_count(tokens[1])),
                 static_cast<NodeIndex>(r.parse_count(tokens[2])), tokens[3]};
      if (e.src >= n || e.dst >= n) r.fail("edge endpoint out of range");
      if (!edge_types.contains(e.type)) r.fail("undeclared edge type '" + e.type + "'");
      g.edges.push_back(std::move(e));
    }
    c.graphs.push_back(std::move(g));
  }
  return c;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read corpus '" + path + "'");
  return read_corpus(in);
}

void register_vocabulary(SymbolSpace& space, const Corpus& corpus) {
  for (const auto& s : corpus.symbols) space.register_symbol(s);
  for (const auto& e : corpus.edge_types) space.register_edge_type(e);
}

std::vector<InputGraph> build_graphs(const SymbolSpace& space, const Corpus& corpus) {
  std::vector<InputGraph> out;
  out.reserve(corpus.size());
  for (const auto& g : corpus.graphs) {
    out.push_back(InputGraph::build(space, g.num_nodes(), g.properties, g.edges, g.label));
  }
  return out;
}

}  // namespace gtm
