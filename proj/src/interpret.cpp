#include "gtm/interpret.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "gtm/errors.hpp"

namespace gtm {

namespace {

constexpr std::string_view kNot = "\xC2\xAC";       // ¬
constexpr std::string_view kAnd = "\xE2\x88\xA7";   // ∧
constexpr std::string_view kPhi = "\xCF\x86";       // φ
constexpr std::string_view kMatch = "\xF0\x9D\x93\x9C";  // 𝓜

bool included(std::span<const std::uint64_t> mask, std::size_t literal) {
  return (mask[literal >> 6] >> (literal & 63)) & 1u;
}

bool all_included(std::span<const std::uint64_t> mask, std::span<const BitIndex> bits,
                  std::size_t shift) {
  return std::all_of(bits.begin(), bits.end(),
                     [&](BitIndex b) { return included(mask, b + shift); });
}

std::string message_name(const GraphTm& model, const MessageLiteral& m) {
  std::string out = m.negated ? std::string(kNot) : std::string();
  const auto chain = detect_chain(model.symbols());
  if (chain && (m.edge_type == chain->right || m.edge_type == chain->left)) {
    out += m.edge_type == chain->right ? "r" : "l";
  } else {
    out += "e" + std::to_string(m.edge_type) + "@";
  }
  out += std::to_string(m.layer) + ":" + std::to_string(m.clause);
  return out;
}

std::string raw_name(const RawLiteral& r, std::size_t layer) {
  std::string out = r.negated ? std::string(kNot) : std::string();
  out += "b" + std::to_string(r.bit);
  if (layer > 0) out += "@" + std::to_string(layer);
  return out;
}

// Bits shared by more than one binding make a message literal ambiguous.
std::vector<int> binding_owners(const MessageSpace& ms) {
  std::vector<int> owners(ms.msg_size(), 0);
  for (std::size_t j = 0; j < ms.num_clauses(); ++j) {
    for (EdgeType e = 0; e < ms.num_edge_types(); ++e) {
      for (BitIndex b : ms.bound(j, e)) ++owners[b];
    }
  }
  return owners;
}

bool is_ambiguous(const MessageSpace& ms, const std::vector<int>& owners, std::size_t clause, EdgeType e) {
  const auto& bits = ms.bound(clause, e);
  return std::any_of(bits.begin(), bits.end(), [&](BitIndex b) { return owners[b] > 1; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<std::size_t> parse_number(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// "<layer>:<clause>"
std::optional<std::pair<std::size_t, std::size_t>> parse_layer_clause(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto layer = parse_number(s.substr(0, colon));
  auto clause = parse_number(s.substr(colon + 1));
  if (!layer || !clause) return std::nullopt;
  return std::make_pair(*layer, *clause);
}

std::string subscript_offset(const NodePosition& p) {
  static constexpr std::string_view kDigits[] = {"\xE2\x82\x80", "\xE2\x82\x81", "\xE2\x82\x82",
                                                 "\xE2\x82\x83", "\xE2\x82\x84", "\xE2\x82\x85",
                                                 "\xE2\x82\x86", "\xE2\x82\x87", "\xE2\x82\x88",
                                                 "\xE2\x82\x89"};
  std::string out = "X\xE2\x82\x99";  // Xₙ
  if (p.offset) {
    if (*p.offset == 0) return out;
    out += *p.offset > 0 ? "\xE2\x82\x8A" : "\xE2\x82\x8B";  // ₊ / ₋
    for (char c : std::to_string(std::abs(*p.offset))) out += kDigits[c - '0'];
    return out;
  }
  for (EdgeType e : p.path) out += "/e" + std::to_string(e);
  return out;
}

}  // namespace

std::optional<ChainConvention> detect_chain(const SymbolSpace& space) {
  if (space.num_edge_types() != 2 || !space.has_edge_type("right") || !space.has_edge_type("left")) {
    return std::nullopt;
  }
  return ChainConvention{space.edge_type_code("right"), space.edge_type_code("left")};
}

// ---------------------------------------------------------------------------
// Decoding and rendering

SymbolicClause decode_clause(const GraphTm& model, std::size_t clause) {
  if (clause >= model.num_clauses()) throw BoundsError("clause " + std::to_string(clause) + " out of range");
  SymbolicClause out;
  out.clause = clause;
  const TaTeam& team = model.team();

  for (std::size_t layer = 0; layer < model.depth(); ++layer) {
    const auto mask = team.include_mask(clause, layer);
    const std::size_t width = model.layer_width(layer);
    const std::size_t half = width / 2;
    std::vector<bool> covered(width, false);
    auto cover = [&](std::span<const BitIndex> bits, std::size_t shift) {
      for (BitIndex b : bits) covered[b + shift] = true;
    };
    ComponentLiterals comp;

    if (layer == 0) {
      for (const auto& [id, bits] : model.symbols().symbols()) {
        if (all_included(mask, bits, 0)) {
          comp.symbols.push_back({id, false});
          cover(bits, 0);
        }
        if (all_included(mask, bits, half)) {
          comp.symbols.push_back({id, true});
          cover(bits, half);
        }
      }
      std::stable_partition(comp.symbols.begin(), comp.symbols.end(),
                            [](const SymbolLiteral& s) { return !s.negated; });
    } else {
      const MessageSpace& ms = model.messages();
      const auto owners = binding_owners(ms);
      for (bool negated : {false, true}) {
        for (std::size_t j = 0; j < ms.num_clauses(); ++j) {
          for (EdgeType e = 0; e < ms.num_edge_types(); ++e) {
            const auto& bits = ms.bound(j, e);
            const std::size_t shift = negated ? half : 0;
            if (!all_included(mask, bits, shift)) continue;
            comp.messages.push_back({layer, j, e, negated, is_ambiguous(ms, owners, j, e)});
            cover(bits, shift);
          }
        }
      }
    }
    for (std::size_t k = 0; k < width; ++k) {
      if (included(mask, k) && !covered[k]) comp.raw.push_back({k % half, k >= half});
    }
    std::stable_partition(comp.raw.begin(), comp.raw.end(), [](const RawLiteral& r) { return !r.negated; });
    out.layers.push_back(std::move(comp));
  }
  return out;
}

std::string render_component(const GraphTm& model, const ComponentLiterals& component) {
  std::vector<std::string> parts;
  for (const auto& s : component.symbols) parts.push_back((s.negated ? std::string(kNot) : "") + s.symbol);
  const std::size_t layer = component.messages.empty() ? 0 : component.messages.front().layer;
  for (const auto& r : component.raw) parts.push_back(raw_name(r, layer));
  for (const auto& m : component.messages) parts.push_back(message_name(model, m));
  if (parts.empty()) return std::string(kPhi);
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " " + std::string(kAnd) + " " + parts[i];
  return out;
}

std::string render_clause(const GraphTm& model, const SymbolicClause& clause) {
  std::vector<std::string> parts;
  for (std::size_t layer = 0; layer < clause.layers.size(); ++layer) {
    const auto& comp = clause.layers[layer];
    if (comp.empty()) continue;
    for (const auto& s : comp.symbols) parts.push_back((s.negated ? std::string(kNot) : "") + s.symbol);
    for (const auto& r : comp.raw) parts.push_back(raw_name(r, layer));
    for (const auto& m : comp.messages) parts.push_back(message_name(model, m));
  }
  if (parts.empty()) return std::string(kPhi);
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " " + std::string(kAnd) + " " + parts[i];
  return out;
}

std::vector<std::size_t> encode_component(const GraphTm& model, std::size_t layer,
                                          const ComponentLiterals& component) {
  const std::size_t half = model.layer_width(layer) / 2;
  std::set<std::size_t> lits;
  for (const auto& s : component.symbols) {
    if (layer != 0) throw ConfigError("symbol literal outside the node layer");
    for (BitIndex b : model.symbols().indices(s.symbol)) lits.insert(b + (s.negated ? half : 0));
  }
  for (const auto& m : component.messages) {
    if (layer == 0 || m.layer != layer) throw ConfigError("message literal on the wrong layer");
    if (m.clause >= model.messages().num_clauses() || m.edge_type >= model.messages().num_edge_types()) {
      throw BoundsError("message literal references an unknown clause or edge type");
    }
    for (BitIndex b : model.messages().bound(m.clause, m.edge_type)) lits.insert(b + (m.negated ? half : 0));
  }
  for (const auto& r : component.raw) {
    if (r.bit >= half) throw BoundsError("raw bit " + std::to_string(r.bit) + " out of range");
    lits.insert(r.bit + (r.negated ? half : 0));
  }
  return {lits.begin(), lits.end()};
}

void apply_clause(GraphTm& model, const SymbolicClause& clause) {
  if (clause.layers.size() > model.depth()) throw ConfigError("clause deeper than the model");
  for (std::size_t layer = 0; layer < model.depth(); ++layer) {
    const ComponentLiterals empty;
    const auto& comp = layer < clause.layers.size() ? clause.layers[layer] : empty;
    const auto lits = encode_component(model, layer, comp);
    model.set_component(clause.clause, layer, lits);
  }
}

SymbolicClause parse_clause(const GraphTm& model, std::size_t clause, std::string_view text) {
  SymbolicClause out;
  out.clause = clause;
  out.layers.resize(model.depth());
  const auto chain = detect_chain(model.symbols());

  std::string normalized(text);
  for (std::size_t pos; (pos = normalized.find(kAnd)) != std::string::npos;) {
    normalized.replace(pos, kAnd.size(), "&");
  }
  std::vector<std::string_view> tokens;
  std::string_view rest = normalized;
  for (;;) {
    const auto amp = rest.find('&');
    tokens.push_back(trim(rest.substr(0, amp)));
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }
  if (tokens.size() == 1 && (tokens[0] == kPhi || tokens[0] == "phi")) return out;

  for (std::string_view tok : tokens) {
    if (tok.empty()) throw InputError("empty literal in '" + std::string(text) + "'");
    bool negated = false;
    if (tok.starts_with(kNot)) {
      negated = true;
      tok.remove_prefix(kNot.size());
    } else if (tok.starts_with('~')) {
      negated = true;
      tok.remove_prefix(1);
    }
    tok = trim(tok);
    const std::string name(tok);

    if (model.symbols().contains(name)) {
      out.layers[0].symbols.push_back({name, negated});
      continue;
    }
    auto check_layer = [&](std::size_t layer) {
      if (layer >= model.depth()) {
        throw InputError("literal '" + name + "' refers to layer " + std::to_string(layer) +
                         " of a depth-" + std::to_string(model.depth()) + " model");
      }
    };
    if (chain && (tok.starts_with('r') || tok.starts_with('l'))) {
      if (auto lc = parse_layer_clause(tok.substr(1)); lc && lc->first >= 1) {
        check_layer(lc->first);
        const EdgeType e = tok.front() == 'r' ? chain->right : chain->left;
        out.layers[lc->first].messages.push_back({lc->first, lc->second, e, negated, false});
        continue;
      }
    }
    if (tok.starts_with('e')) {
      const auto at = tok.find('@');
      if (at != std::string_view::npos) {
        auto e = parse_number(tok.substr(1, at - 1));
        auto lc = parse_layer_clause(tok.substr(at + 1));
        if (e && lc && lc->first >= 1) {
          check_layer(lc->first);
          out.layers[lc->first].messages.push_back(
              {lc->first, lc->second, static_cast<EdgeType>(*e), negated, false});
          continue;
        }
      }
    }
    if (tok.starts_with('b')) {
      const auto at = tok.find('@');
      auto bit = parse_number(tok.substr(1, at == std::string_view::npos ? tok.npos : at - 1));
      std::optional<std::size_t> layer = std::size_t{0};
      if (at != std::string_view::npos) layer = parse_number(tok.substr(at + 1));
      if (bit && layer) {
        check_layer(*layer);
        out.layers[*layer].raw.push_back({*bit, negated});
        continue;
      }
    }
    throw UnknownSymbolError("cannot parse literal '" + name + "'");
  }
  // Canonical order: the one decode_clause produces.
  const auto& table = model.symbols().symbols();
  auto sym_rank = [&](const SymbolLiteral& s) {
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == s.symbol; });
    return std::make_pair(s.negated, it - table.begin());
  };
  const auto owners = binding_owners(model.messages());
  for (auto& comp : out.layers) {
    for (auto& m : comp.messages) {
      if (m.clause >= model.messages().num_clauses() || m.edge_type >= model.messages().num_edge_types()) {
        throw BoundsError("message literal references an unknown clause or edge type");
      }
      m.ambiguous = is_ambiguous(model.messages(), owners, m.clause, m.edge_type);
    }
    std::sort(comp.symbols.begin(), comp.symbols.end(),
              [&](const auto& a, const auto& b) { return sym_rank(a) < sym_rank(b); });
    std::sort(comp.messages.begin(), comp.messages.end(), [](const auto& a, const auto& b) {
      return std::tie(a.negated, a.clause, a.edge_type) < std::tie(b.negated, b.clause, b.edge_type);
    });
    std::sort(comp.raw.begin(), comp.raw.end(),
              [](const auto& a, const auto& b) { return std::tie(a.negated, a.bit) < std::tie(b.negated, b.bit); });
    comp.symbols.erase(std::unique(comp.symbols.begin(), comp.symbols.end()), comp.symbols.end());
    comp.messages.erase(std::unique(comp.messages.begin(), comp.messages.end()), comp.messages.end());
    comp.raw.erase(std::unique(comp.raw.begin(), comp.raw.end()), comp.raw.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trace-back

namespace {

struct Tracer {
  const GraphTm& model;
  std::optional<ChainConvention> chain;
  std::vector<SymbolicClause> decoded;

  NodePosition step(const NodePosition& from, EdgeType e) const {
    NodePosition to = from;
    if (chain) {
      const int delta = e == chain->right ? -1 : (e == chain->left ? 1 : 0);
      to.offset = from.offset.value_or(0) + delta;
    } else {
      to.path.push_back(e);
    }
    return to;
  }

  std::string via_name(const MessageLiteral& m) const { return message_name(model, m); }

  TraceNode expand(std::size_t clause, std::size_t through, const NodePosition& at, bool negated,
                   std::string via) const {
    TraceNode node;
    node.clause = clause;
    node.through_layer = through;
    node.position = at;
    node.negated = negated;
    node.via = std::move(via);
    const auto& sc = decoded[clause];
    node.node_pattern = sc.layers[0];
    for (std::size_t layer = 1; layer <= through; ++layer) {
      for (const auto& m : sc.layers[layer].messages) {
        MessageLiteral plain = m;
        plain.negated = false;
        node.children.push_back(
            expand(m.clause, layer - 1, step(at, m.edge_type), m.negated, via_name(plain)));
      }
      for (const auto& r : sc.layers[layer].raw) node.opaque.push_back(raw_name(r, layer));
    }
    return node;
  }
};

Formula match_term(const ComponentLiterals& pattern, const NodePosition& at) {
  Formula f;
  f.kind = Formula::Kind::Match;
  f.pattern = pattern;
  f.position = at;
  return f;
}

Formula to_formula(const TraceNode& node) {
  Formula conj;
  conj.kind = Formula::Kind::And;
  conj.children.push_back(match_term(node.node_pattern, node.position));
  for (const auto& child : node.children) {
    Formula sub = to_formula(child);
    if (child.negated) {
      Formula neg;
      neg.kind = Formula::Kind::Not;
      neg.children.push_back(std::move(sub));
      sub = std::move(neg);
    }
    conj.children.push_back(std::move(sub));
  }
  for (const auto& o : node.opaque) {
    Formula f;
    f.kind = Formula::Kind::Opaque;
    f.text = o;
    conj.children.push_back(std::move(f));
  }
  return conj;
}

bool same(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.text != b.text || a.children.size() != b.children.size()) return false;
  if (a.kind == Formula::Kind::Match && (!(a.pattern == b.pattern) || !(a.position == b.position))) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same(a.children[i], b.children[i])) return false;
  }
  return true;
}

int distance_key(const NodePosition& p) {
  return p.offset ? std::abs(*p.offset) : static_cast<int>(p.path.size());
}

Formula simplify(Formula f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
    case K::False:
    case K::Opaque:
      return f;
    case K::Match:
      // φ at the node itself always matches.
      if (f.pattern.empty() && f.position.is_root()) f.kind = K::True;
      return f;
    case K::Not: {
      Formula inner = simplify(std::move(f.children.front()));
      if (inner.kind == K::True) return Formula{K::False, {}, {}, {}, {}};
      if (inner.kind == K::False) return Formula{};
      f.children = {std::move(inner)};
      return f;
    }
    case K::And:
      break;
  }
  std::vector<Formula> terms;
  for (auto& c : f.children) {
    Formula s = simplify(std::move(c));
    if (s.kind == K::And) {
      for (auto& cc : s.children) terms.push_back(std::move(cc));
    } else {
      terms.push_back(std::move(s));
    }
  }
  std::vector<Formula> kept;
  for (auto& t : terms) {
    if (t.kind == K::True) continue;
    if (t.kind == K::False) return Formula{K::False, {}, {}, {}, {}};
    if (std::any_of(kept.begin(), kept.end(), [&](const Formula& k) { return same(k, t); })) continue;
    kept.push_back(std::move(t));
  }
  // A positive φ term only asserts that the node exists; drop it when another
  // positive term already refers to the same node.
  std::vector<Formula> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto& t = kept[i];
    if (t.kind == K::Match && t.pattern.empty()) {
      const bool implied = std::any_of(kept.begin(), kept.end(), [&](const Formula& o) {
        return &o != &t && o.kind == K::Match && !o.pattern.empty() && o.position == t.position;
      });
      if (implied) continue;
    }
    out.push_back(t);
  }
  std::stable_sort(out.begin(), out.end(), [](const Formula& a, const Formula& b) {
    const bool am = a.kind == K::Match, bm = b.kind == K::Match;
    if (am != bm) return am;
    if (!am) return false;
    const int da = distance_key(a.position), db = distance_key(b.position);
    if (da != db) return da < db;
    return a.position.offset.value_or(0) < b.position.offset.value_or(0);
  });
  if (out.empty()) return Formula{};
  if (out.size() == 1) return std::move(out.front());
  f.children = std::move(out);
  return f;
}

std::string render_pattern(const GraphTm& model, const ComponentLiterals& pattern) {
  return render_component(model, pattern);
}

std::string render(const GraphTm& model, const Formula& f, bool top) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return top ? "True everywhere" : "True";
    case K::False:
      return "False";
    case K::Opaque:
      return f.text;
    case K::Match:
      return std::string(kMatch) + "(" + render_pattern(model, f.pattern) + "," +
             subscript_offset(f.position) + ")";
    case K::Not: {
      const auto& inner = f.children.front();
      const std::string body = render(model, inner, false);
      return std::string(kNot) + (inner.kind == K::And ? "(" + body + ")" : body);
    }
    case K::And: {
      std::string out;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += " " + std::string(kAnd) + " ";
        out += render(model, f.children[i], false);
      }
      return out;
    }
  }
  return {};
}

bool pattern_holds(const ComponentLiterals& pattern, const std::vector<std::string>& props) {
  if (!pattern.raw.empty()) throw InputError("raw bit literals cannot be evaluated symbolically");
  for (const auto& s : pattern.symbols) {
    const bool present = std::find(props.begin(), props.end(), s.symbol) != props.end();
    if (present == s.negated) return false;
  }
  return true;
}

bool eval_at(const Formula& f, std::span<const std::vector<std::string>> nodes, long n) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Opaque:
      throw InputError("formula holds undecodable message bits");
    case K::Not:
      return !eval_at(f.children.front(), nodes, n);
    case K::And:
      return std::all_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_at(c, nodes, n); });
    case K::Match: {
      if (!f.position.offset) throw InputError("symbolic evaluation needs chain-relative positions");
      const long target = n + *f.position.offset;
      if (target < 0 || target >= static_cast<long>(nodes.size())) return false;
      return pattern_holds(f.pattern, nodes[static_cast<std::size_t>(target)]);
    }
  }
  return false;
}

void render_tree(const GraphTm& model, const TraceNode& node, int indent, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  if (!node.via.empty()) out << (node.negated ? std::string(kNot) : "") << node.via << " -> ";
  out << "C" << node.clause << " through layer " << node.through_layer << " at "
      << subscript_offset(node.position) << ": C^0 = " << render_component(model, node.node_pattern);
  for (const auto& o : node.opaque) out << " [opaque " << o << "]";
  out << '\n';
  for (const auto& c : node.children) render_tree(model, c, indent + 1, out);
}

}  // namespace

TraceResult trace_to_nodes(const GraphTm& model, std::size_t clause,
                           std::optional<ChainConvention> chain) {
  if (clause >= model.num_clauses()) throw BoundsError("clause " + std::to_string(clause) + " out of range");
  if (!chain) chain = detect_chain(model.symbols());
  Tracer tracer{model, chain, {}};
  for (std::size_t j = 0; j < model.num_clauses(); ++j) tracer.decoded.push_back(decode_clause(model, j));

  NodePosition root;
  if (chain) root.offset = 0;
  TraceResult result;
  result.tree = tracer.expand(clause, model.depth() - 1, root, false, "");
  result.formula = simplify(to_formula(result.tree));
  result.text = render(model, result.formula, true);
  return result;
}

std::string render_formula(const GraphTm& model, const Formula& formula) {
  return render(model, formula, true);
}

std::string render_trace_tree(const GraphTm& model, const TraceNode& tree) {
  std::ostringstream out;
  render_tree(model, tree, 0, out);
  return out.str();
}

std::vector<bool> evaluate_symbolic(const Formula& formula,
                                    std::span<const std::vector<std::string>> nodes) {
  std::vector<bool> out(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) out[n] = eval_at(formula, nodes, static_cast<long>(n));
  return out;
}

std::vector<bool> evaluate_symbolic(const Formula& formula, std::string_view sequence) {
  std::vector<std::vector<std::string>> nodes;
  for (char c : sequence) nodes.push_back({std::string(1, c)});
  return evaluate_symbolic(formula, nodes);
}

}  // namespace gtm
