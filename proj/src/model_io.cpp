#include "gtm/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gtm/corpus.hpp"
#include "gtm/errors.hpp"

namespace gtm {

namespace {

constexpr std::array<char, 4> kMagic{'G', 'T', 'M', '1'};
constexpr std::array<char, 4> kEnd{'E', 'N', 'D', '!'};
constexpr std::uint32_t kMaxCount = 1u << 28;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    out_.write(bytes, sizeof(T));
  }
  void put_f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void put_str(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void raw(const std::array<char, 4>& tag) { out_.write(tag.data(), 4); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T get() {
    using U = std::make_unsigned_t<T>;
    unsigned char bytes[sizeof(T)];
    if (!in_.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FormatError("truncated model file");
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(U{bytes[i]} << (8 * i));
    return static_cast<T>(u);
  }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::uint32_t count() {
    const auto n = get<std::uint32_t>();
    if (n > kMaxCount) throw FormatError("implausible element count in model file");
    return n;
  }
  std::string get_str() {
    std::string s(count(), '\0');
    if (!in_.read(s.data(), static_cast<std::streamsize>(s.size()))) throw FormatError("truncated model file");
    return s;
  }
  void expect(const std::array<char, 4>& tag, const char* what) {
    std::array<char, 4> got{};
    if (!in_.read(got.data(), 4) || got != tag) throw FormatError(what);
  }

 private:
  std::istream& in_;
};

std::vector<std::string> symbol_names(const SymbolSpace& space) {
  std::vector<std::string> out;
  for (const auto& s : space.symbols()) out.push_back(s.first);
  return out;
}

}  // namespace

std::uint64_t model_vocabulary_hash(const GraphTm& model) {
  return vocabulary_hash(symbol_names(model.symbols()), model.symbols().edge_types());
}

void write_model(std::ostream& out, const GraphTm& model) {
  Writer w(out);
  const TrainConfig& c = model.config();
  w.raw(kMagic);
  w.put(kModelFormatVersion);

  w.put(static_cast<std::uint32_t>(c.num_clauses));
  w.put(c.threshold);
  w.put_f64(c.specificity);
  w.put(static_cast<std::uint32_t>(c.depth));
  w.put(static_cast<std::uint32_t>(c.hv_size));
  w.put(static_cast<std::uint32_t>(c.msg_size));
  w.put(static_cast<std::uint32_t>(c.bits_per_symbol));
  w.put(static_cast<std::uint32_t>(c.bits_per_clause));
  w.put(c.states_per_action);
  w.put(static_cast<std::uint32_t>(c.max_included_literals.value_or(0)));
  w.put(static_cast<std::uint32_t>(c.epochs));
  w.put(c.seed);
  w.put(static_cast<std::uint32_t>(model.num_classes()));
  w.put(model_vocabulary_hash(model));

  const SymbolSpace& sym = model.symbols();
  w.put(sym.seed());
  w.put(static_cast<std::uint32_t>(sym.symbols().size()));
  for (const auto& [id, idx] : sym.symbols()) {
    w.put_str(id);
    w.put(static_cast<std::uint32_t>(idx.size()));
    for (BitIndex k : idx) w.put(k);
  }
  w.put(static_cast<std::uint32_t>(sym.edge_types().size()));
  for (const auto& e : sym.edge_types()) w.put_str(e);

  const MessageSpace& ms = model.messages();
  w.put(static_cast<std::uint32_t>(ms.msg_size()));
  w.put(static_cast<std::uint32_t>(ms.num_edge_types()));
  w.put(static_cast<std::uint32_t>(ms.num_clauses()));
  for (const auto& base : ms.clause_base_indices()) {
    w.put(static_cast<std::uint32_t>(base.size()));
    for (BitIndex k : base) w.put(k);
  }

  const TaTeam& team = model.team();
  for (std::size_t j = 0; j < team.num_clauses(); ++j) {
    for (std::size_t i = 0; i < team.num_layers(); ++i) {
      const auto states = team.states(j, i);
      w.put(static_cast<std::uint32_t>(states.size()));
      for (std::uint16_t s : states) w.put(s);
    }
  }
  for (std::size_t j = 0; j < model.num_clauses(); ++j) {
    for (std::int32_t v : model.weights().row(j)) w.put(v);
  }
  w.raw(kEnd);
}

void save_model(const std::string& path, const GraphTm& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_model(out, model);
  if (!out) throw InputError("failed writing '" + path + "'");
}

GraphTm read_model(std::istream& in) {
  Reader r(in);
  r.expect(kMagic, "not a model file (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model version " + std::to_string(version));
  }

  TrainConfig c;
  c.num_clauses = r.count();
  c.threshold = r.get<std::int32_t>();
  c.specificity = r.get_f64();
  c.depth = r.count();
  c.hv_size = r.count();
  c.msg_size = r.count();
  c.bits_per_symbol = r.count();
  c.bits_per_clause = r.count();
  c.states_per_action = r.get<std::uint32_t>();
  if (const auto cap = r.get<std::uint32_t>(); cap != 0) c.max_included_literals = cap;
  c.epochs = r.get<std::uint32_t>();
  c.seed = r.get<std::uint64_t>();
  const std::size_t num_classes = r.count();
  const auto vocab_hash = r.get<std::uint64_t>();

  try {
    c.validate();
    SymbolSpace sym(c.hv_size, c.bits_per_symbol, r.get<std::uint64_t>());
    const std::uint32_t nsym = r.count();
    for (std::uint32_t s = 0; s < nsym; ++s) {
      std::string id = r.get_str();
      IndexList idx(r.count());
      for (auto& k : idx) k = r.get<std::uint32_t>();
      sym.register_symbol(id, std::move(idx));
    }
    const std::uint32_t nedge = r.count();
    for (std::uint32_t e = 0; e < nedge; ++e) sym.register_edge_type(r.get_str());

    const std::uint32_t msg_size = r.count();
    const std::uint32_t msg_edges = r.count();
    const std::uint32_t msg_clauses = r.count();
    std::vector<IndexList> bases(msg_clauses);
    for (auto& base : bases) {
      base.resize(r.count());
      for (auto& k : base) k = r.get<std::uint32_t>();
    }
    MessageSpace ms;
    if (msg_clauses > 0) ms = MessageSpace::with_layout(msg_size, msg_edges, std::move(bases));

    GraphTm model(c, std::move(sym), std::move(ms), num_classes);
    if (model_vocabulary_hash(model) != vocab_hash) throw FormatError("vocabulary hash mismatch");

    TaTeam& team = model.team();
    std::vector<std::uint16_t> states;
    for (std::size_t j = 0; j < c.num_clauses; ++j) {
      for (std::size_t i = 0; i < c.depth; ++i) {
        states.resize(r.count());
        if (states.size() != model.layer_width(i)) throw FormatError("automaton array width mismatch");
        for (auto& s : states) {
          s = r.get<std::uint16_t>();
          if (s >= 2 * c.states_per_action) throw FormatError("automaton state out of range");
        }
        team.load_states(j, i, states);
      }
    }
    for (std::size_t j = 0; j < c.num_clauses; ++j) {
      for (std::size_t k = 0; k < num_classes; ++k) model.weights().at(j, k) = r.get<std::int32_t>();
    }
    r.expect(kEnd, "missing end marker");
    return model;
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("inconsistent model file: ") + e.what());
  }
}

GraphTm load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read model '" + path + "'");
  return read_model(in);
}

}  // namespace gtm
