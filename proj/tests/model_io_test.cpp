#include "gtm/model_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "gtm/datasets.hpp"
#include "gtm/errors.hpp"

using namespace gtm;

namespace {

std::string bytes_of(const GraphTm& model) {
  std::ostringstream out(std::ios::binary);
  write_model(out, model);
  return out.str();
}

GraphTm from_bytes(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_model(in);
}

GraphTm trained_model() {
  const Corpus corpus = gen_seq_consecutive(SequenceTask{}, 300, 0.01, 2);
  TrainConfig c;
  c.num_clauses = 6;
  c.depth = 3;
  c.hv_size = 32;
  c.msg_size = 64;
  c.max_included_literals = 12;
  c.seed = 11;
  SymbolSpace space(c.hv_size, c.bits_per_symbol, c.seed);
  register_vocabulary(space, corpus);
  GraphTm model(c, space, corpus.num_classes);
  fit(model, build_graphs(model.symbols(), corpus), {}, 2);
  return model;
}

}  // namespace

TEST(ModelIo, RoundTripIsExact) {
  const GraphTm model = trained_model();
  const std::string bytes = bytes_of(model);
  ASSERT_EQ(bytes.substr(0, 4), "GTM1");
  const GraphTm back = from_bytes(bytes);
  EXPECT_EQ(back.config(), model.config());
  EXPECT_EQ(back.symbols().symbols(), model.symbols().symbols());
  EXPECT_EQ(back.symbols().edge_types(), model.symbols().edge_types());
  EXPECT_EQ(back.symbols().fingerprint(), model.symbols().fingerprint());
  EXPECT_EQ(back.messages(), model.messages());
  EXPECT_EQ(back.team(), model.team());
  EXPECT_EQ(back.weights(), model.weights());
  EXPECT_EQ(bytes_of(back), bytes);
}

TEST(ModelIo, LoadedModelPredictsIdentically) {
  const GraphTm model = trained_model();
  const GraphTm back = from_bytes(bytes_of(model));
  const Corpus test = gen_seq_consecutive(SequenceTask{}, 200, 0.0, 99);
  const auto graphs = build_graphs(model.symbols(), test);
  for (const auto& g : graphs) {
    const auto a = model.forward(g), b = back.forward(g);
    ASSERT_EQ(a.votes, b.votes);
    ASSERT_EQ(a.clause_output, b.clause_output);
  }
}

TEST(ModelIo, HandSetModelRoundTrip) {
  const GraphTm model = fixtures::experiment2();
  const GraphTm back = from_bytes(bytes_of(model));
  EXPECT_EQ(back.team(), model.team());
  EXPECT_EQ(back.weights(), model.weights());
  EXPECT_EQ(back.forward(fixtures::chain(model.symbols(), "BBAEE")).votes,
            (std::vector<std::int64_t>{3, -3, -5}));
}

TEST(ModelIo, CorruptFilesAreRejected) {
  const std::string bytes = bytes_of(fixtures::experiment1());
  EXPECT_THROW(from_bytes("XXXX" + bytes.substr(4)), FormatError);
  EXPECT_THROW(from_bytes(bytes.substr(0, bytes.size() / 2)), FormatError);
  EXPECT_THROW(from_bytes(bytes.substr(0, bytes.size() - 1)), FormatError);
  EXPECT_THROW(from_bytes(""), FormatError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(from_bytes(bad_version), FormatError);
  // Flip every byte of the body in turn; each result must either load or be
  // reported as a FormatError, never crash or leak another error type.
  for (std::size_t i = 8; i < bytes.size(); i += 7) {
    std::string b = bytes;
    b[i] = static_cast<char>(b[i] ^ 0x5a);
    try {
      from_bytes(b);
    } catch (const FormatError&) {
    }
  }
}

TEST(ModelIo, MissingFile) {
  EXPECT_THROW(load_model("/nonexistent/model.gtm"), InputError);
}

TEST(ModelIo, FileRoundTrip) {
  const GraphTm model = fixtures::experiment1();
  const std::string path = ::testing::TempDir() + "exp1.gtm";
  save_model(path, model);
  const GraphTm back = load_model(path);
  EXPECT_EQ(back.team(), model.team());
  EXPECT_EQ(model_vocabulary_hash(back), model_vocabulary_hash(model));
}
