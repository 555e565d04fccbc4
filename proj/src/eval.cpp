#include "ttalign/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ttalign/traversal.hpp"

namespace ttalign {

namespace {

double norm(std::span<const real> v) { return std::sqrt(dot(v, v)); }

// Library id of an "L<id>:" token, or -1.
int library_of(std::string_view token) {
  if (token.size() < 3 || token[0] != 'L') return -1;
  int lib = 0;
  std::size_t i = 1;
  for (; i < token.size() && std::isdigit(static_cast<unsigned char>(token[i])); ++i) {
    if (lib > 1'000'000) return -1;
    lib = lib * 10 + (token[i] - '0');
  }
  if (i == 1 || i >= token.size() || token[i] != ':') return -1;
  return lib;
}

}  // namespace

double cosine(std::span<const real> u, std::span<const real> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine of vectors of different size");
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0 || nv == 0) throw std::domain_error("cosine of a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

VectorIndex::VectorIndex(const EmbeddingModel& model) : model_(&model) {
  const int v = model.vocab_size();
  norms_.resize(v);
  for (int i = 0; i < v; ++i) {
    norms_[i] = norm(model.input.row(i));
    const int lib = library_of(model.dict.token(i));
    if (lib < 0) continue;
    if (static_cast<int>(candidates_.size()) <= lib) candidates_.resize(lib + 1);
    candidates_[lib].push_back(i);
  }
}

std::span<const int> VectorIndex::candidates(int library) const {
  if (library < 0 || library >= static_cast<int>(candidates_.size())) return {};
  return candidates_[library];
}

int VectorIndex::require(std::string_view token) const {
  auto id = model_->dict.find(token);
  if (!id) throw std::out_of_range("unknown token");
  return *id;
}

double VectorIndex::score(int a, int b) const {
  const double d = norms_[a] * norms_[b];
  if (d == 0) return -INFINITY;
  return std::clamp(dot(model_->input.row(a), model_->input.row(b)) / d, -1.0, 1.0);
}

bool VectorIndex::before(int a, double sa, int b, double sb) const {
  if (sa != sb) return sa > sb;
  return model_->dict.token(a) < model_->dict.token(b);
}

std::vector<Neighbor> VectorIndex::finish(std::vector<std::pair<double, int>>& scored,
                                          int k) const {
  const auto take = std::min<std::size_t>(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    [&](const auto& x, const auto& y) {
                      return before(x.second, x.first, y.second, y.first);
                    });
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({model_->dict.token(scored[i].second), scored[i].first});
  }
  return out;
}

std::vector<Neighbor> VectorIndex::nearest(std::string_view token, int k, int library) const {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const int q = require(token);
  if (norms_[q] == 0) throw std::domain_error("query vector is zero");
  auto cands = candidates(library);
  std::vector<std::pair<double, int>> scored(cands.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < cands.size(); ++i) scored[i] = {score(q, cands[i]), cands[i]};
  std::erase_if(scored, [&](const auto& s) { return s.second == q || s.first == -INFINITY; });
  return finish(scored, k);
}

std::vector<Neighbor> VectorIndex::nearest_serial(std::string_view token, int k,
                                                  int library) const {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const int q = require(token);
  if (norms_[q] == 0) throw std::domain_error("query vector is zero");
  std::vector<std::pair<double, int>> scored;
  for (int c : candidates(library)) {
    if (c == q || norms_[c] == 0) continue;
    scored.emplace_back(score(q, c), c);
  }
  return finish(scored, k);
}

std::int64_t VectorIndex::rank_of(int query, int target, int library) const {
  auto cands = candidates(library);
  if (target == query || norms_[query] == 0 || norms_[target] == 0) return 0;
  if (std::find(cands.begin(), cands.end(), target) == cands.end()) return 0;
  const double st = score(query, target);
  std::int64_t rank = 1;
  for (int c : cands) {
    if (c == query || c == target || norms_[c] == 0) continue;
    if (before(c, score(query, c), target, st)) ++rank;
  }
  return rank;
}

double VectorIndex::similarity(std::string_view a, std::string_view b) const {
  return cosine(model_->input.row(require(a)), model_->input.row(require(b)));
}

GoldAlignment read_gold(std::istream& in) {
  GoldAlignment gold;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw std::runtime_error("gold line " + std::to_string(lineno) +
                               ": expected name1<TAB>name2");
    }
    std::pair<std::string, std::string> pair{line.substr(0, tab), line.substr(tab + 1)};
    if (seen.insert(pair).second) gold.push_back(std::move(pair));
  }
  return gold;
}

GoldAlignment load_gold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_gold(in);
}

namespace {

void check_cutoffs(std::span<const int> cutoffs) {
  for (int n : cutoffs) {
    if (n < 1) throw std::invalid_argument("cutoffs must be at least 1");
  }
}

// Dictionary ids of a gold pair; -1 when out of vocabulary.
struct GoldQuery {
  int query = -1;
  int target = -1;
};

std::vector<GoldQuery> resolve(const VectorIndex& index, const GoldAlignment& gold,
                               const NameSet& shared) {
  std::vector<GoldQuery> out;
  out.reserve(gold.size());
  const auto& dict = index.model().dict;
  for (const auto& [a, b] : gold) {
    GoldQuery g;
    if (auto id = dict.find(constant_token(a, 1, shared))) g.query = *id;
    if (auto id = dict.find(constant_token(b, 2, shared))) g.target = *id;
    out.push_back(g);
  }
  return out;
}

HitReport tally(std::span<const int> cutoffs, std::span<const std::int64_t> ranks,
                std::int64_t oov) {
  HitReport r;
  r.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  r.hits.assign(cutoffs.size(), 0);
  r.universe = static_cast<std::int64_t>(ranks.size());
  r.oov = oov;
  for (auto rank : ranks) {
    if (rank <= 0) continue;
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      if (rank <= cutoffs[c]) ++r.hits[c];
    }
  }
  return r;
}

}  // namespace

HitReport topn_hit(const VectorIndex& index, const GoldAlignment& gold,
                   std::span<const int> cutoffs, const NameSet& shared) {
  check_cutoffs(cutoffs);
  const auto queries = resolve(index, gold, shared);
  std::vector<std::int64_t> ranks(queries.size(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& g = queries[i];
    if (g.query >= 0 && g.target >= 0) ranks[i] = index.rank_of(g.query, g.target, 2);
  }
  std::int64_t oov = 0;
  for (const auto& g : queries) oov += g.query < 0 ? 1 : 0;
  return tally(cutoffs, ranks, oov);
}

HitReport topn_hit_serial(const VectorIndex& index, const GoldAlignment& gold,
                          std::span<const int> cutoffs, const NameSet& shared) {
  check_cutoffs(cutoffs);
  const auto queries = resolve(index, gold, shared);
  std::vector<std::int64_t> ranks;
  std::int64_t oov = 0;
  for (const auto& g : queries) {
    oov += g.query < 0 ? 1 : 0;
    ranks.push_back(g.query >= 0 && g.target >= 0 ? index.rank_of(g.query, g.target, 2) : 0);
  }
  return tally(cutoffs, ranks, oov);
}

HitReport topn_hit_alignment(std::span<const Alignment> ranked, const GoldAlignment& gold,
                             std::span<const int> cutoffs) {
  check_cutoffs(cutoffs);
  std::unordered_map<std::string, std::vector<const std::string*>> partners;
  for (const auto& a : ranked) partners[a.first].push_back(&a.second);
  std::vector<std::int64_t> ranks;
  for (const auto& [a, b] : gold) {
    std::int64_t rank = 0;
    if (auto it = partners.find(a); it != partners.end()) {
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (*it->second[i] == b) {
          rank = static_cast<std::int64_t>(i) + 1;
          break;
        }
      }
    }
    ranks.push_back(rank);
  }
  return tally(cutoffs, ranks, 0);
}

void write_hit_report(std::ostream& out, const HitReport& report) {
  for (std::size_t c = 0; c < report.cutoffs.size(); ++c) {
    out << report.cutoffs[c] << '\t' << report.hits[c] << '\t' << report.universe << '\n';
  }
}

std::string format_hit_table(const HitReport& report) {
  std::string head, row;
  char buf[64];
  for (std::size_t c = 0; c < report.cutoffs.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%-12s", ("Top-" + std::to_string(report.cutoffs[c]) + " Hit").c_str());
    head += buf;
    std::snprintf(buf, sizeof buf, "%-12lld", static_cast<long long>(report.hits[c]));
    row += buf;
  }
  std::ostringstream out;
  out << head << '\n' << row << '\n';
  out << "universe " << report.universe << ", out of vocabulary " << report.oov << '\n';
  return out.str();
}

std::vector<real> mean_vector(const EmbeddingModel& model, std::span<const std::string> tokens) {
  std::vector<real> mean;
  int n = 0;
  for (const auto& t : tokens) {
    auto v = model.vector(t);
    if (!v) continue;
    if (mean.empty()) mean.assign(v->size(), 0.0);
    axpy(1.0, *v, mean);
    ++n;
  }
  for (auto& x : mean) x /= n;
  return mean;
}

}  // namespace ttalign
