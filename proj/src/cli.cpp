#include "gtm/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <ostream>
#include <thread>

#include "gtm/corpus.hpp"
#include "gtm/datasets.hpp"
#include "gtm/engine.hpp"
#include "gtm/errors.hpp"
#include "gtm/interpret.hpp"
#include "gtm/model_io.hpp"

namespace gtm {

namespace {

// Thrown when a model and a corpus do not share a vocabulary.
struct VocabularyMismatch : Error {
  using Error::Error;
};

struct TaskOptions {
  std::string task;
  std::size_t count = 4000;
  std::size_t test_count = 1000;
  double noise = 0.01;
  std::size_t values = 10;  // mv_xor
  std::size_t length = 5;   // seq, seq3
  std::size_t flip = 2;     // bars
};

void add_task_options(CLI::App* cmd, TaskOptions& t) {
  cmd->add_option("--count", t.count, "training samples to generate");
  cmd->add_option("--noise", t.noise, "label noise rate");
  cmd->add_option("--n", t.values, "number of values (mv_xor)");
  cmd->add_option("--length", t.length, "sequence length (seq, seq3)");
  cmd->add_option("--flip", t.flip, "background pixels per image (bars)");
}

Corpus generate(const TaskOptions& t, std::size_t count, double noise, std::uint64_t seed) {
  if (t.task == "mv_xor") return gen_mv_xor(t.values, noise, count, seed);
  if (t.task == "seq" || t.task == "seq3") {
    SequenceTask task;
    task.length = t.length;
    task.num_classes = t.task == "seq" ? 2 : 3;
    return gen_seq_consecutive(task, count, noise, seed);
  }
  if (t.task == "bars") return gen_bars(count, t.flip, seed);
  throw ConfigError("unknown task '" + t.task + "'");
}

Corpus load_nonempty(const std::string& path) {
  Corpus c = load_corpus(path);
  if (c.empty()) throw InputError("corpus '" + path + "' holds no graphs");
  return c;
}

void check_vocabulary(const GraphTm& model, const Corpus& corpus) {
  if (model_vocabulary_hash(model) != vocabulary_hash(corpus)) {
    throw VocabularyMismatch("corpus vocabulary does not match the model");
  }
  if (corpus.num_classes != model.num_classes()) {
    throw VocabularyMismatch("corpus has " + std::to_string(corpus.num_classes) + " classes, model " +
                             std::to_string(model.num_classes()));
  }
}

std::size_t default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string weights_text(const GraphTm& model, std::size_t clause) {
  std::string s = "[";
  const auto row = model.weights().row(clause);
  for (std::size_t k = 0; k < row.size(); ++k) s += (k ? "," : "") + std::to_string(row[k]);
  return s + "]";
}

void print_config(std::ostream& out, const GraphTm& model) {
  const TrainConfig& c = model.config();
  out << "clauses=" << c.num_clauses << " T=" << c.threshold << " s=" << c.specificity
      << " depth=" << c.depth << " hv_size=" << c.hv_size << " msg_size=" << c.msg_size
      << " symbol_bits=" << c.bits_per_symbol << " clause_bits=" << c.bits_per_clause
      << " states=" << c.states_per_action << " classes=" << model.num_classes() << '\n';
}

int cmd_gen(const TaskOptions& t, std::uint64_t seed, const std::string& train_path,
            const std::string& test_path, std::ostream& out) {
  const Corpus train = generate(t, t.count, t.noise, mix_seed(seed, 0));
  save_corpus(train_path, train);
  out << "wrote=" << train_path << " graphs=" << train.size() << '\n';
  if (!test_path.empty()) {
    const Corpus test = generate(t, t.test_count, 0.0, mix_seed(seed, 1));
    save_corpus(test_path, test);
    out << "wrote=" << test_path << " graphs=" << test.size() << '\n';
  }
  return kExitOk;
}

int cmd_train(TrainConfig config, std::size_t max_literals, std::size_t workers, const TaskOptions& t,
              const std::string& train_path, const std::string& test_path, const std::string& model_path,
              std::ostream& out) {
  if (max_literals > 0) config.max_included_literals = max_literals;
  config.validate();

  Corpus train, test;
  if (!t.task.empty()) {
    train = generate(t, t.count, t.noise, mix_seed(config.seed, 0));
    test = generate(t, t.test_count, 0.0, mix_seed(config.seed, 1));
  } else {
    if (train_path.empty()) throw ConfigError("train needs --task or --train");
    train = load_nonempty(train_path);
    if (!test_path.empty()) {
      test = load_nonempty(test_path);
      if (vocabulary_hash(test) != vocabulary_hash(train)) {
        throw VocabularyMismatch("test corpus vocabulary differs from the training corpus");
      }
    }
  }
  if (train.empty()) throw InputError("empty training corpus");

  SymbolSpace space(config.hv_size, config.bits_per_symbol, config.seed);
  register_vocabulary(space, train);
  GraphTm model(config, space, train.num_classes);
  model.set_workers(workers);
  const auto train_graphs = build_graphs(model.symbols(), train);
  const auto test_graphs = build_graphs(model.symbols(), test);

  fit(model, train_graphs, test_graphs, config.epochs, [&](const EpochMetrics& m) {
    out << "epoch=" << m.epoch << std::fixed << std::setprecision(4) << " train_acc=" << m.train_accuracy;
    if (m.test_accuracy) out << " test_acc=" << *m.test_accuracy;
    out << std::setprecision(1) << " elapsed_ms=" << m.elapsed_ms << '\n';
    out.unsetf(std::ios::fixed);
  });
  if (!model_path.empty()) {
    save_model(model_path, model);
    out << "model=" << model_path << '\n';
  }
  return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& test_path, std::size_t workers,
             std::ostream& out) {
  GraphTm model = load_model(model_path);
  model.set_workers(workers);
  const Corpus test = load_nonempty(test_path);
  check_vocabulary(model, test);
  const auto graphs = build_graphs(model.symbols(), test);

  const std::size_t k = model.num_classes();
  std::vector<std::size_t> confusion(k * k, 0);
  std::size_t correct = 0;
  for (const auto& g : graphs) {
    const std::size_t truth = *g.label();
    const std::size_t pred = model.predict(g);
    ++confusion[truth * k + pred];
    correct += truth == pred;
  }
  out << std::fixed << std::setprecision(4);
  out << "graphs=" << graphs.size() << " accuracy=" << static_cast<double>(correct) / graphs.size() << '\n';
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t support = 0;
    for (std::size_t p = 0; p < k; ++p) support += confusion[c * k + p];
    out << "class=" << c << " support=" << support << " correct=" << confusion[c * k + c];
    if (support > 0) out << " accuracy=" << static_cast<double>(confusion[c * k + c]) / support;
    out << '\n';
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t p = 0; p < k; ++p) {
      out << "confusion true=" << c << " pred=" << p << " count=" << confusion[c * k + p] << '\n';
    }
  }
  return kExitOk;
}

int cmd_inspect(const std::string& model_path, std::ostream& out) {
  const GraphTm model = load_model(model_path);
  print_config(out, model);
  for (std::size_t j = 0; j < model.num_clauses(); ++j) {
    const SymbolicClause sc = decode_clause(model, j);
    std::string text = render_clause(model, sc);
    const bool empty = std::all_of(sc.layers.begin(), sc.layers.end(), [](const auto& c) { return c.empty(); });
    if (empty) text += " (matches everything)";
    out << "C" << j << " = " << text << "; " << weights_text(model, j) << '\n';
    for (std::size_t i = 0; i < sc.layers.size(); ++i) {
      out << "  layer" << i << " = " << render_component(model, sc.layers[i]) << '\n';
      for (const auto& m : sc.layers[i].messages) {
        if (m.ambiguous) out << "  ambiguous=" << render_component(model, {{}, {m}, {}}) << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_trace(const std::string& model_path, std::optional<std::size_t> clause, bool tree, std::ostream& out) {
  const GraphTm model = load_model(model_path);
  std::size_t first = 0, last = model.num_clauses();
  if (clause) {
    if (*clause >= model.num_clauses()) throw ConfigError("clause index out of range");
    first = *clause;
    last = *clause + 1;
  }
  for (std::size_t j = first; j < last; ++j) {
    const TraceResult r = trace_to_nodes(model, j);
    out << "C" << j << " = " << r.text << "; " << weights_text(model, j) << '\n';
    if (tree) out << render_trace_tree(model, r.tree);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph Tsetlin Machine: generate data, train, evaluate and interpret models", "gtm"};
  app.require_subcommand(1);

  TrainConfig config;
  std::size_t max_literals = 0;
  std::size_t workers = default_workers();
  TaskOptions task;
  std::string train_path, test_path, model_path, out_path;
  std::optional<std::size_t> clause;
  bool tree = false;
  std::uint64_t seed = 1;

  auto* gen = app.add_subcommand("gen", "write a synthetic corpus");
  gen->add_option("--task", task.task, "mv_xor | seq | seq3 | bars")->required();
  add_task_options(gen, task);
  gen->add_option("--test-count", task.test_count, "noiseless test samples (with --test-out)");
  gen->add_option("--out", out_path, "training corpus path")->required();
  gen->add_option("--test-out", test_path, "test corpus path");
  gen->add_option("--seed", seed);

  auto* train = app.add_subcommand("train", "train a model");
  train->add_option("--task", task.task, "generate data in-process: mv_xor | seq | seq3 | bars");
  add_task_options(train, task);
  train->add_option("--test-count", task.test_count, "noiseless test samples to generate");
  train->add_option("--train", train_path, "training corpus");
  train->add_option("--test", test_path, "test corpus");
  train->add_option("--clauses", config.num_clauses);
  train->add_option("--T", config.threshold, "voting margin");
  train->add_option("--s", config.specificity, "specificity");
  train->add_option("--depth", config.depth, "layers, node layer included");
  train->add_option("--hv-size", config.hv_size);
  train->add_option("--msg-size", config.msg_size);
  train->add_option("--symbol-bits", config.bits_per_symbol);
  train->add_option("--clause-bits", config.bits_per_clause);
  train->add_option("--states", config.states_per_action, "states per automaton action");
  train->add_option("--max-literals", max_literals, "included literals per clause, 0 = unlimited");
  train->add_option("--epochs", config.epochs);
  train->add_option("--seed", config.seed);
  train->add_option("--workers", workers);
  train->add_option("--model", model_path, "output model file");

  auto* eval = app.add_subcommand("eval", "evaluate a model on a corpus");
  eval->add_option("--model", model_path)->required();
  eval->add_option("--test", test_path)->required();
  eval->add_option("--workers", workers);

  auto* inspect = app.add_subcommand("inspect", "print the clauses of a model");
  inspect->add_option("--model", model_path)->required();

  auto* trace = app.add_subcommand("trace", "trace clauses back to node patterns");
  trace->add_option("--model", model_path)->required();
  trace->add_option("--clause", clause);
  trace->add_flag("--tree", tree, "also print the expansion tree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_gen(task, seed, out_path, test_path, out);
    if (train->parsed()) {
      return cmd_train(config, max_literals, workers, task, train_path, test_path, model_path, out);
    }
    if (eval->parsed()) return cmd_eval(model_path, test_path, workers, out);
    if (inspect->parsed()) return cmd_inspect(model_path, out);
    if (trace->parsed()) return cmd_trace(model_path, clause, tree, out);
  } catch (const VocabularyMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitVocabulary;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCorrupt;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace gtm
