#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttalign/trainer.hpp"
#include "ttalign/traversal.hpp"
#include "ttalign/tt_parser.hpp"

namespace ttalign {

/// Bad flag value or flag combination (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data (exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusOptions {
  std::string in1;
  std::string in2;
  std::string out;
  std::uint64_t seed = 1;
};

struct TrainOptions {
  std::string corpus;
  std::string out;
  /// Optional: also write the generated token corpus here.
  std::string tokens_out;
  TrainConfig cfg;
  DumpMode dump = DumpMode::Tree;
  TraversalWeights weights;
  VarPolicy vars = VarPolicy::Normalized;
};

struct NnOptions {
  std::string model;
  std::string query;
  int k = 10;
  int library = 2;
};

struct EvalOptions {
  std::string model;
  std::string gold;
  std::vector<int> topn{1, 3, 10, 20};
};

struct AlignOptions {
  std::string in1;
  std::string in2;
  std::string out;
  double eps = 1e-6;
  int max_iters = 100;
};

struct ServeOptions {
  std::string model;
  int port = 7070;
  std::string host = "127.0.0.1";
  int workers = 8;
};

// Each command writes results to `out` and progress to `log`, and throws
// UsageError, DataError or ParseError.
void run_corpus(const CorpusOptions& opt, std::ostream& log);
void run_train(const TrainOptions& opt, std::ostream& log);
void run_nn(const NnOptions& opt, std::ostream& out);
void run_eval(const EvalOptions& opt, std::ostream& out, std::ostream& log);
void run_align(const AlignOptions& opt, std::ostream& out, std::ostream& log);
/// Blocks until SIGINT or SIGTERM.
void run_serve(const ServeOptions& opt, std::ostream& log);

/// Reads a corpus file written by run_corpus: lines `L<lib> <sexp>`.
std::vector<TtItem> read_sexp_corpus(std::istream& in, const std::string& source = {});
/// True when the first non-blank line looks like `L<digits> (`.
bool looks_like_sexp_corpus(std::istream& in);

}  // namespace ttalign
