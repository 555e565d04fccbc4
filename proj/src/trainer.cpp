#include "ttalign/trainer.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ttalign {

std::string_view to_string(ModelKind m) {
  return m == ModelKind::Cbow ? "cbow" : "skipgram";
}

std::string_view to_string(LossKind l) {
  switch (l) {
    case LossKind::Softmax: return "softmax";
    case LossKind::HierSoftmax: return "hs";
    case LossKind::NegSampling: return "ns";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "cbow") return ModelKind::Cbow;
  if (s == "skipgram" || s == "sg") return ModelKind::SkipGram;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected cbow or skipgram)");
}

LossKind parse_loss_kind(std::string_view s) {
  if (s == "softmax") return LossKind::Softmax;
  if (s == "hs") return LossKind::HierSoftmax;
  if (s == "ns") return LossKind::NegSampling;
  throw std::invalid_argument("unknown loss '" + std::string(s) + "' (expected softmax, hs or ns)");
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(dim >= 1, "dim must be at least 1");
  require(lr > 0 && std::isfinite(lr), "lr must be positive");
  require(window >= 1, "window must be at least 1");
  require(epochs >= 1, "epochs must be at least 1");
  require(negatives >= 1, "negatives must be at least 1");
  require(threads >= 1, "threads must be at least 1");
  require(min_count >= 1, "min-count must be at least 1");
}

ContextSample context_at(std::span<const int> line, int pos, int radius) {
  ContextSample s;
  s.target = line[pos];
  const int n = static_cast<int>(line.size());
  const int lo = std::max(0, pos - radius);
  const int hi = std::min(n - 1, pos + radius);
  s.context.reserve(hi - lo);
  for (int i = lo; i <= hi; ++i) {
    if (i != pos) s.context.push_back(line[i]);
  }
  return s;
}

ContextSample context_window(std::span<const int> line, int pos, int window, Rng& rng) {
  std::uniform_int_distribution<int> radius(1, window);
  return context_at(line, pos, radius(rng));
}

real sigmoid(real x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const real e = std::exp(x);
  return e / (1.0 + e);
}

real log_sigmoid(real x) noexcept {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

namespace {

void fill_softmax(const Matrix& output, std::span<const real> hidden, std::vector<real>& probs) {
  const std::size_t v = output.rows();
  probs.resize(v);
  real top = -INFINITY;
  for (std::size_t u = 0; u < v; ++u) {
    probs[u] = dot(output.row(u), hidden);
    top = std::max(top, probs[u]);
  }
  real sum = 0;
  for (auto& p : probs) {
    p = std::exp(p - top);
    sum += p;
  }
  for (auto& p : probs) p /= sum;
}

// One binary logistic unit on output row `row`; returns its negative log-likelihood.
real logistic_step(Matrix& output, std::span<const real> hidden, int row, bool label, real lr,
                   std::span<real> grad) {
  auto n = output.row(row);
  const real x = dot(n, hidden);
  const real alpha = lr * ((label ? 1.0 : 0.0) - sigmoid(x));
  axpy(alpha, n, grad);
  axpy(alpha, hidden, n);
  return -log_sigmoid(label ? x : -x);
}

}  // namespace

std::vector<real> softmax_probs(const Matrix& output, std::span<const real> hidden) {
  std::vector<real> probs;
  fill_softmax(output, hidden, probs);
  return probs;
}

LossTables LossTables::build(const Dictionary& dict, LossKind kind, int negatives) {
  LossTables t;
  t.kind = kind;
  t.negatives = negatives;
  if (kind == LossKind::HierSoftmax) t.huffman = build_huffman(dict.counts());
  if (kind == LossKind::NegSampling) {
    t.negative_table =
        build_negative_table(dict.counts(), default_negative_table_size(dict.size()));
  }
  return t;
}

Workspace::Workspace(int dim, std::uint64_t seed) : Workspace(dim, Rng(seed)) {}

Workspace::Workspace(int dim, Rng r) : hidden(dim), grad(dim), rng(std::move(r)) {}

real output_step(Matrix& output, std::span<const real> hidden, int target, real lr,
                 const LossTables& tables, Workspace& ws) {
  std::span<real> grad(ws.grad);
  switch (tables.kind) {
    case LossKind::Softmax: {
      fill_softmax(output, hidden, ws.probs);
      const real loss = -std::log(ws.probs[target]);
      // g uses N before its update, so accumulate each row before moving it.
      for (std::size_t u = 0; u < output.rows(); ++u) {
        const real alpha = lr * ((static_cast<int>(u) == target ? 1.0 : 0.0) - ws.probs[u]);
        auto n = output.row(u);
        axpy(alpha, n, grad);
        axpy(alpha, hidden, n);
      }
      return loss;
    }
    case LossKind::HierSoftmax: {
      real loss = 0;
      const auto& path = tables.huffman.paths[target];
      const auto& code = tables.huffman.codes[target];
      // Bit 1 (right turn) is scored as sigmoid(-x); the unit label is the
      // complement of the bit.
      for (std::size_t i = 0; i < path.size(); ++i) {
        loss += logistic_step(output, hidden, path[i], !code[i], lr, grad);
      }
      return loss;
    }
    case LossKind::NegSampling: {
      real loss = logistic_step(output, hidden, target, true, lr, grad);
      for (int k = 0; k < tables.negatives; ++k) {
        auto neg = tables.negative_table.draw_excluding(target, ws.rng);
        if (!neg) continue;
        ws.drawn_negatives.push_back(*neg);
        loss += logistic_step(output, hidden, *neg, false, lr, grad);
      }
      return loss;
    }
  }
  return 0;
}

real cbow_update(EmbeddingModel& model, real lr, const ContextSample& sample,
                 const LossTables& tables, Workspace& ws) {
  if (sample.context.empty()) return 0;
  ws.drawn_negatives.clear();
  std::fill(ws.hidden.begin(), ws.hidden.end(), 0.0);
  std::fill(ws.grad.begin(), ws.grad.end(), 0.0);
  const real inv = 1.0 / static_cast<real>(sample.context.size());
  for (int u : sample.context) axpy(inv, model.input.row(u), ws.hidden);
  const real loss = output_step(model.output, ws.hidden, sample.target, lr, tables, ws);
  for (int u : sample.context) axpy(inv, ws.grad, model.input.row(u));
  return loss;
}

real skipgram_update(EmbeddingModel& model, real lr, const ContextSample& sample,
                     const LossTables& tables, Workspace& ws) {
  ws.drawn_negatives.clear();
  real loss = 0;
  auto mw = model.input.row(sample.target);
  for (int u : sample.context) {
    std::copy(mw.begin(), mw.end(), ws.hidden.begin());
    std::fill(ws.grad.begin(), ws.grad.end(), 0.0);
    loss += output_step(model.output, ws.hidden, u, lr, tables, ws);
    axpy(1.0, ws.grad, mw);
  }
  return loss;
}

EmbeddingModel init_model(Dictionary dict, int dim, std::uint64_t seed) {
  EmbeddingModel m;
  const auto v = static_cast<std::size_t>(dict.size());
  m.dict = std::move(dict);
  m.input = Matrix(v, dim);
  m.output = Matrix(v, dim);
  Rng rng(seed);
  std::uniform_real_distribution<real> init(-1.0 / dim, 1.0 / dim);
  for (auto& x : m.input.data()) x = init(rng);
  return m;
}

namespace {

struct EncodedLine {
  std::vector<int> ids;
  real scale;
};

struct Shard {
  std::int64_t updates = 0;
  double loss = 0;
};

}  // namespace

EmbeddingModel train(std::span<const CorpusLine> corpus, const TrainConfig& cfg,
                     TrainReport* report) {
  cfg.validate();
  return train(corpus, Dictionary::build(corpus, cfg.min_count), cfg, report);
}

EmbeddingModel train(std::span<const CorpusLine> corpus, Dictionary dict, const TrainConfig& cfg,
                     TrainReport* report) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  if (corpus.empty()) throw std::invalid_argument("cannot train on an empty corpus");

  std::vector<EncodedLine> lines;
  lines.reserve(corpus.size());
  std::int64_t total = 0;
  bool any_scale = false;
  for (const auto& line : corpus) {
    if (line.lr_scale > 0) any_scale = true;
    if (!(line.lr_scale > 0)) continue;
    auto ids = dict.encode(line.tokens);
    if (ids.empty()) continue;
    total += static_cast<std::int64_t>(ids.size());
    lines.push_back({std::move(ids), line.lr_scale});
  }
  if (!any_scale) throw std::invalid_argument("every corpus line has learning-rate scale 0");
  if (lines.empty()) throw std::invalid_argument("no corpus token is in the dictionary");

  const LossTables tables = LossTables::build(dict, cfg.loss, cfg.negatives);
  EmbeddingModel model = init_model(std::move(dict), cfg.dim, cfg.seed);

  const double budget = static_cast<double>(cfg.epochs) * static_cast<double>(total);
  const real floor_lr = 1e-5 * cfg.lr;
  std::atomic<std::int64_t> seen{0};

  auto run_shard = [&](int worker, int workers) {
    Shard stats;
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(worker) + 1};
    Workspace ws(cfg.dim, Rng(seq));
    const std::size_t n = lines.size();
    const std::size_t begin = n * worker / workers;
    const std::size_t end = n * (worker + 1) / workers;
    ContextSample sample;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (std::size_t li = begin; li < end; ++li) {
        const auto& line = lines[li];
        const double progress = seen.load(std::memory_order_relaxed) / budget;
        const real lr = std::max<real>(cfg.lr * (1.0 - progress), floor_lr) * line.scale;
        for (int pos = 0; pos < static_cast<int>(line.ids.size()); ++pos) {
          sample = context_window(line.ids, pos, cfg.window, ws.rng);
          if (sample.context.empty()) continue;
          stats.loss += cfg.model == ModelKind::Cbow
                            ? cbow_update(model, lr, sample, tables, ws)
                            : skipgram_update(model, lr, sample, tables, ws);
          ++stats.updates;
        }
        seen.fetch_add(static_cast<std::int64_t>(line.ids.size()), std::memory_order_relaxed);
      }
    }
    return stats;
  };

  std::vector<Shard> shards;
  if (cfg.threads == 1) {
    shards.push_back(run_shard(0, 1));
  } else {
    shards.resize(cfg.threads);
#pragma omp parallel num_threads(cfg.threads)
    {
      const int workers = omp_get_num_threads();
      const int id = omp_get_thread_num();
      shards[id] = run_shard(id, workers);
    }
  }

  model.set_meta("model", std::string(to_string(cfg.model)));
  model.set_meta("loss", std::string(to_string(cfg.loss)));
  model.set_meta("dim", std::to_string(cfg.dim));
  char lr[32];
  std::snprintf(lr, sizeof lr, "%g", cfg.lr);
  model.set_meta("lr", lr);
  model.set_meta("window", std::to_string(cfg.window));
  model.set_meta("epochs", std::to_string(cfg.epochs));
  model.set_meta("negatives", std::to_string(cfg.negatives));
  model.set_meta("threads", std::to_string(cfg.threads));
  model.set_meta("seed", std::to_string(cfg.seed));
  model.set_meta("min_count", std::to_string(cfg.min_count));

  if (report) {
    report->tokens = total;
    report->updates = 0;
    double loss = 0;
    for (const auto& s : shards) {
      report->updates += s.updates;
      loss += s.loss;
    }
    report->mean_loss = report->updates ? loss / report->updates : 0.0;
    report->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return model;
}

}  // namespace ttalign
