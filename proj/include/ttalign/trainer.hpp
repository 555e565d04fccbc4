#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttalign/matrix.hpp"
#include "ttalign/model.hpp"
#include "ttalign/traversal.hpp"
#include "ttalign/vocab.hpp"

namespace ttalign {

enum class ModelKind { Cbow, SkipGram };
enum class LossKind { Softmax, HierSoftmax, NegSampling };

std::string_view to_string(ModelKind m);
std::string_view to_string(LossKind l);
/// Accepts "cbow" / "skipgram" and "softmax" / "hs" / "ns".
ModelKind parse_model_kind(std::string_view s);
LossKind parse_loss_kind(std::string_view s);

struct TrainConfig {
  int dim = 100;
  double lr = 0.05;
  int window = 10;
  int epochs = 5;
  int negatives = 5;
  LossKind loss = LossKind::NegSampling;
  ModelKind model = ModelKind::Cbow;
  int threads = 4;
  std::uint64_t seed = 1;
  std::int64_t min_count = 1;
  bool is_tt = true;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct ContextSample {
  int target = -1;
  std::vector<int> context;
};

/// Context of `line[pos]` with radius `radius`, clipped to the line.
ContextSample context_at(std::span<const int> line, int pos, int radius);
/// Same with the radius drawn uniformly from [1, window].
ContextSample context_window(std::span<const int> line, int pos, int window, Rng& rng);

/// Row-wise softmax of N h.
std::vector<real> softmax_probs(const Matrix& output, std::span<const real> hidden);

real sigmoid(real x) noexcept;
/// log(sigmoid(x)) without overflow.
real log_sigmoid(real x) noexcept;

/// Loss-side structures, read-only during training.
struct LossTables {
  LossKind kind = LossKind::NegSampling;
  int negatives = 5;
  HuffmanCoding huffman;
  NegativeTable negative_table;

  static LossTables build(const Dictionary& dict, LossKind kind, int negatives);
};

/// Per-worker scratch buffers and RNG.
struct Workspace {
  Workspace(int dim, std::uint64_t seed);
  Workspace(int dim, Rng rng);

  std::vector<real> hidden;
  std::vector<real> grad;
  std::vector<real> probs;
  Rng rng;
  /// Negatives drawn by the most recent update, in draw order.
  std::vector<int> drawn_negatives;
};

/// Updates the output rows touched by `target` given hidden vector h and
/// accumulates the input-side gradient into `grad`. Returns the negative
/// log-likelihood of the target before the update.
real output_step(Matrix& output, std::span<const real> hidden, int target, real lr,
                 const LossTables& tables, Workspace& ws);

/// Both return the summed negative log-likelihood seen by the update.
real cbow_update(EmbeddingModel& model, real lr, const ContextSample& sample,
                 const LossTables& tables, Workspace& ws);
real skipgram_update(EmbeddingModel& model, real lr, const ContextSample& sample,
                     const LossTables& tables, Workspace& ws);

/// Random M in [-1/D, 1/D], zero N.
EmbeddingModel init_model(Dictionary dict, int dim, std::uint64_t seed);

struct TrainReport {
  std::int64_t tokens = 0;     // corpus tokens per epoch after encoding
  std::int64_t updates = 0;
  double mean_loss = 0.0;
  double seconds = 0.0;
};

/// Builds the dictionary from `corpus` and trains.
EmbeddingModel train(std::span<const CorpusLine> corpus, const TrainConfig& cfg,
                     TrainReport* report = nullptr);
EmbeddingModel train(std::span<const CorpusLine> corpus, Dictionary dict, const TrainConfig& cfg,
                     TrainReport* report = nullptr);

}  // namespace ttalign
