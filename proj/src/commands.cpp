#include "ttalign/commands.hpp"

#include <signal.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "ttalign/align.hpp"
#include "ttalign/eval.hpp"
#include "ttalign/model.hpp"
#include "ttalign/server.hpp"
#include "ttalign/sexp.hpp"

namespace ttalign {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::vector<TtItem> read_library(const std::string& path, int library) {
  auto items = read_tt_file(path, library);
  if (items.empty()) throw DataError(path + " contains no tt items");
  return items;
}

EmbeddingModel load(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw DataError("cannot open model " + path);
  try {
    return load_model(path);
  } catch (const std::runtime_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string weights_string(const TraversalWeights& w) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%g,%g,%g", w.preorder, w.inorder, w.postorder);
  return buf;
}

}  // namespace

bool looks_like_sexp_corpus(std::istream& in) {
  const auto start = in.tellg();
  std::string line;
  bool result = false;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t i = 0;
    if (line[i++] == 'L') {
      std::size_t digits = 0;
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i, ++digits;
      result = digits > 0 && i + 1 < line.size() && line[i] == ' ' && line[i + 1] == '(';
    }
    break;
  }
  in.clear();
  in.seekg(start);
  return result;
}

std::vector<TtItem> read_sexp_corpus(std::istream& in, const std::string& source) {
  std::vector<TtItem> items;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto space = line.find(' ');
    int lib = 0;
    bool ok = line[0] == 'L' && space != std::string::npos && space > 1;
    for (std::size_t i = 1; ok && i < space; ++i) {
      ok = std::isdigit(static_cast<unsigned char>(line[i]));
      lib = lib * 10 + (line[i] - '0');
    }
    if (!ok) throw ParseError("expected 'L<library> <s-expression>'", lineno, 1, source);
    TtItem item;
    item.library = lib;
    item.name = source + ":" + std::to_string(lineno);
    try {
      item.term = parse_sexp(std::string_view(line).substr(space + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), lineno, e.column() + static_cast<int>(space) + 1, source);
    }
    items.push_back(std::move(item));
  }
  return items;
}

void run_corpus(const CorpusOptions& opt, std::ostream& log) {
  auto lib1 = read_library(opt.in1, 1);
  auto lib2 = read_library(opt.in2, 2);
  const std::size_t n1 = lib1.size();
  const std::size_t n2 = lib2.size();
  std::vector<TtItem> all = std::move(lib1);
  all.insert(all.end(), std::make_move_iterator(lib2.begin()), std::make_move_iterator(lib2.end()));
  Rng rng(opt.seed);
  std::shuffle(all.begin(), all.end(), rng);

  auto out = open_out(opt.out);
  std::string line;
  for (const auto& item : all) {
    line = "L" + std::to_string(item.library) + " ";
    append_sexp(line, *item.term);
    line += '\n';
    out << line;
  }
  out.close();
  if (!out) throw DataError("error writing " + opt.out);
  log << "library 1: " << n1 << " items\n"
      << "library 2: " << n2 << " items\n"
      << "wrote " << all.size() << " s-expressions to " << opt.out << '\n';
}

void run_train(const TrainOptions& opt, std::ostream& log) {
  try {
    opt.cfg.validate();
    opt.weights.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (opt.dump == DumpMode::Tree && opt.weights.all_zero()) {
    throw UsageError("--weights must have a nonzero entry with --dump tree");
  }

  auto in = open_in(opt.corpus);
  std::vector<CorpusLine> lines;
  if (looks_like_sexp_corpus(in)) {
    auto items = read_sexp_corpus(in, opt.corpus);
    CorpusConfig cc;
    cc.dump = opt.dump;
    cc.weights = opt.weights;
    cc.vars = opt.vars;
    lines = corpus_lines(items, cc);
    log << "read " << items.size() << " items from " << opt.corpus << '\n';
  } else {
    try {
      lines = read_token_corpus(in);
    } catch (const std::exception& e) {
      throw DataError(opt.corpus + ": " + e.what());
    }
    log << "read " << lines.size() << " token lines from " << opt.corpus << '\n';
  }
  if (lines.empty()) throw DataError(opt.corpus + " is empty");

  if (!opt.tokens_out.empty()) {
    auto tok = open_out(opt.tokens_out);
    write_token_corpus(tok, lines);
  }

  TrainReport report;
  EmbeddingModel model;
  try {
    model = train(lines, opt.cfg, &report);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  model.set_meta("dump", opt.dump == DumpMode::Tree ? "tree" : "leaf");
  model.set_meta("weights", weights_string(opt.weights));
  model.set_meta("var_policy", opt.vars == VarPolicy::Normalized ? "normalized" : "literal");
  save_model(opt.out, model);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "vocabulary %d, %lld tokens per epoch, %lld updates, mean loss %.4f, %.1fs\n",
                model.vocab_size(), static_cast<long long>(report.tokens),
                static_cast<long long>(report.updates), report.mean_loss, report.seconds);
  log << buf << "wrote " << opt.out << '\n';
}

void run_nn(const NnOptions& opt, std::ostream& out) {
  if (opt.k < 1) throw UsageError("--k must be at least 1");
  if (opt.library < 0) throw UsageError("--lib must be non-negative");
  const auto model = load(opt.model);
  const VectorIndex index(model);
  if (!model.dict.find(opt.query)) throw DataError("unknown token '" + opt.query + "'");
  char buf[48];
  for (const auto& n : index.nearest(opt.query, opt.k, opt.library)) {
    std::snprintf(buf, sizeof buf, "%.6f", n.score);
    out << escape_token(n.token) << '\t' << buf << '\n';
  }
}

void run_eval(const EvalOptions& opt, std::ostream& out, std::ostream& log) {
  if (opt.topn.empty()) throw UsageError("--topn needs at least one cutoff");
  for (int n : opt.topn) {
    if (n < 1) throw UsageError("--topn cutoffs must be at least 1");
  }
  const auto model = load(opt.model);
  GoldAlignment gold;
  try {
    gold = load_gold(opt.gold);
  } catch (const std::runtime_error& e) {
    throw DataError(opt.gold + ": " + e.what());
  }
  const VectorIndex index(model);
  const auto report = topn_hit(index, gold, opt.topn);
  write_hit_report(out, report);
  log << format_hit_table(report);
}

void run_align(const AlignOptions& opt, std::ostream& out, std::ostream& log) {
  if (!(opt.eps > 0)) throw UsageError("--eps must be positive");
  if (opt.max_iters < 1) throw UsageError("--max-iters must be at least 1");
  const auto lib1 = read_library(opt.in1, 1);
  const auto lib2 = read_library(opt.in2, 2);
  const auto ms = enumerate_matches(lib1, lib2, default_logical_names());
  const auto state = score_iterate(ms, opt.eps, opt.max_iters);
  const auto ranked = rank_alignments(state, ms);
  if (opt.out.empty() || opt.out == "-") {
    write_alignments(out, ranked);
  } else {
    auto file = open_out(opt.out);
    write_alignments(file, ranked);
  }
  log << ms.m() << " matching term pairs, " << ms.n() << " constant pairs, " << state.iterations
      << " iterations, " << (state.converged ? "converged" : "NOT converged") << " (last change "
      << state.last_delta << ")\n";
}

void run_serve(const ServeOptions& opt, std::ostream& log) {
  if (opt.port < 0 || opt.port > 65535) throw UsageError("--port must be in 0..65535");
  if (opt.workers < 1) throw UsageError("--workers must be at least 1");
  const auto model = load(opt.model);
  const QueryService service(model);
  LineServer server(service, opt.workers);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  int port = 0;
  try {
    port = server.listen(opt.port, opt.host);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  log << "serving " << model.vocab_size() << " tokens on " << opt.host << ':' << port << std::endl;
  std::thread loop([&] { server.serve(); });
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  loop.join();
  log << "stopped\n";
}

}  // namespace ttalign
