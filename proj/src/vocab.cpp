#include "ttalign/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace ttalign {

Dictionary Dictionary::build(std::span<const CorpusLine> corpus, std::int64_t min_count) {
  std::unordered_map<std::string, int> first_seen;
  std::vector<std::string> order;
  std::vector<std::int64_t> counts;
  for (const auto& line : corpus) {
    for (const auto& tok : line.tokens) {
      auto [it, inserted] = first_seen.try_emplace(tok, static_cast<int>(order.size()));
      if (inserted) {
        order.push_back(tok);
        counts.push_back(0);
      }
      ++counts[it->second];
    }
  }
  if (order.empty()) throw std::invalid_argument("cannot build a dictionary from an empty corpus");

  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    if (counts[i] >= min_count) ids.push_back(i);
  }
  if (ids.empty()) throw std::invalid_argument("no token reaches the minimum count");
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });

  std::vector<std::string> tokens;
  std::vector<std::int64_t> kept;
  tokens.reserve(ids.size());
  for (int i : ids) {
    tokens.push_back(std::move(order[i]));
    kept.push_back(counts[i]);
  }
  return from_entries(std::move(tokens), std::move(kept));
}

Dictionary Dictionary::from_entries(std::vector<std::string> tokens,
                                    std::vector<std::int64_t> counts) {
  if (tokens.size() != counts.size()) {
    throw std::invalid_argument("token and count lists differ in length");
  }
  Dictionary d;
  d.tokens_ = std::move(tokens);
  d.counts_ = std::move(counts);
  d.index_.reserve(d.tokens_.size());
  for (int i = 0; i < d.size(); ++i) {
    if (!d.index_.emplace(d.tokens_[i], i).second) {
      throw std::invalid_argument("duplicate token '" + d.tokens_[i] + "'");
    }
  }
  return d;
}

std::optional<int> Dictionary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Dictionary::encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto it = index_.find(tok);
    if (it != index_.end()) ids.push_back(it->second);
  }
  return ids;
}

int HuffmanCoding::decode(const std::vector<bool>& code) const {
  const int v = leaves();
  if (v == 0) return -1;
  if (v == 1) return code.empty() ? 0 : -1;
  int node = v - 2;  // root
  for (std::size_t i = 0; i < code.size(); ++i) {
    int child = children[2 * node + (code[i] ? 1 : 0)];
    if (child < v) return i + 1 == code.size() ? child : -1;
    node = child - v;
  }
  return -1;
}

HuffmanCoding build_huffman(std::span<const std::int64_t> counts) {
  const int v = static_cast<int>(counts.size());
  HuffmanCoding h;
  h.paths.resize(v);
  h.codes.resize(v);
  if (v <= 1) return h;

  // Node ids: leaves 0..v-1, internal nodes v..2v-2 in creation order.
  using Entry = std::pair<std::int64_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (int i = 0; i < v; ++i) queue.emplace(counts[i], i);

  std::vector<int> parent(2 * v - 1, -1);
  std::vector<bool> right(2 * v - 1, false);
  h.children.assign(2 * (v - 1), -1);
  for (int next = v; next < 2 * v - 1; ++next) {
    auto [wl, left] = queue.top();
    queue.pop();
    auto [wr, rgt] = queue.top();
    queue.pop();
    parent[left] = next;
    parent[rgt] = next;
    right[rgt] = true;
    h.children[2 * (next - v)] = left;
    h.children[2 * (next - v) + 1] = rgt;
    queue.emplace(wl + wr, next);
  }

  for (int w = 0; w < v; ++w) {
    std::vector<int> path;
    std::vector<bool> code;
    for (int node = w; parent[node] >= 0; node = parent[node]) {
      path.push_back(parent[node] - v);
      code.push_back(right[node]);
    }
    std::reverse(path.begin(), path.end());
    std::reverse(code.begin(), code.end());
    h.paths[w] = std::move(path);
    h.codes[w] = std::move(code);
  }
  return h;
}

int NegativeTable::draw(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> slot(0, table.size() - 1);
  return table[slot(rng)];
}

std::optional<int> NegativeTable::draw_excluding(int target, Rng& rng,
                                                 int max_attempts) const {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    int neg = draw(rng);
    if (neg != target) return neg;
  }
  return std::nullopt;
}

std::size_t default_negative_table_size(int vocab_size) {
  constexpr std::size_t kFull = 10'000'000;
  constexpr int kFullVocab = 10'000;
  if (vocab_size >= kFullVocab) return kFull;
  return std::max<std::size_t>(1, kFull / kFullVocab * static_cast<std::size_t>(vocab_size));
}

NegativeTable build_negative_table(std::span<const std::int64_t> counts, std::size_t size) {
  if (counts.size() < 2) {
    throw std::invalid_argument("negative sampling needs at least two tokens");
  }
  if (size == 0) throw std::invalid_argument("negative table size must be positive");
  std::vector<double> weights(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(counts[i]), kNegativePower);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  // Slot boundaries from rounded cumulative mass, so every token lands within
  // one slot of its exact share and the table is exactly `size` long.
  NegativeTable t;
  t.table.reserve(size);
  double cumulative = 0.0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    cumulative += weights[i];
    std::size_t end = i + 1 == counts.size()
                          ? size
                          : static_cast<std::size_t>(std::llround(cumulative / total * size));
    end = std::clamp(end, begin, size);
    t.table.insert(t.table.end(), end - begin, static_cast<int>(i));
    begin = end;
  }
  return t;
}

}  // namespace ttalign
