#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ttalign/traversal.hpp"

namespace ttalign {

using Rng = std::mt19937_64;

/// Token dictionary. Ids run 0..size()-1 in descending count order, ties
/// broken by first appearance in the corpus. No frequency subsampling.
class Dictionary {
 public:
  Dictionary() = default;

  /// Throws std::invalid_argument on an empty corpus or if nothing survives
  /// the min-count cut.
  static Dictionary build(std::span<const CorpusLine> corpus, std::int64_t min_count = 1);
  /// Rebuilds from stored (token, count) entries, keeping their order.
  static Dictionary from_entries(std::vector<std::string> tokens,
                                 std::vector<std::int64_t> counts);

  int size() const noexcept { return static_cast<int>(tokens_.size()); }
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const { return tokens_.at(id); }
  std::int64_t count(int id) const { return counts_.at(id); }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  std::span<const std::string> tokens() const noexcept { return tokens_; }

  /// Maps tokens to ids, dropping tokens outside the dictionary.
  std::vector<int> encode(std::span<const std::string> tokens) const;

  bool operator==(const Dictionary& other) const {
    return tokens_ == other.tokens_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

/// Huffman code for hierarchical softmax. Internal nodes are numbered
/// 0..V-2 (root is V-2) and double as rows of the output matrix. `paths[w]`
/// lists the internal nodes from the root down to leaf w; `codes[w][i]` is
/// true when the path turns right below `paths[w][i]`.
struct HuffmanCoding {
  std::vector<std::vector<int>> paths;
  std::vector<std::vector<bool>> codes;
  // Children of internal node k: left = children[2k], right = children[2k+1];
  // values < V are leaves, values >= V are internal node (value - V).
  std::vector<int> children;

  int leaves() const noexcept { return static_cast<int>(paths.size()); }
  /// Follows `code` from the root; returns the leaf reached or -1.
  int decode(const std::vector<bool>& code) const;
};

/// Bottom-up Huffman over counts. The two lowest-weight nodes are merged
/// each step; ties go to the lower node id, which becomes the left child.
HuffmanCoding build_huffman(std::span<const std::int64_t> counts);

/// Unigram^0.75 sampling table.
struct NegativeTable {
  std::vector<int> table;

  int draw(Rng& rng) const;
  /// Redraws while the sample equals `target`; gives up after
  /// `max_attempts` collisions.
  std::optional<int> draw_excluding(int target, Rng& rng, int max_attempts = 100) const;
};

inline constexpr double kNegativePower = 0.75;

/// 10^7 slots, scaled down proportionally for vocabularies below 10^4.
std::size_t default_negative_table_size(int vocab_size);

/// Token i occupies round(S * c_i^0.75 / sum_j c_j^0.75) slots, +/- 1.
/// Throws std::invalid_argument when fewer than two tokens exist.
NegativeTable build_negative_table(std::span<const std::int64_t> counts, std::size_t size);

}  // namespace ttalign
