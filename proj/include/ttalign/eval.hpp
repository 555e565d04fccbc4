#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttalign/align.hpp"
#include "ttalign/model.hpp"
#include "ttalign/term.hpp"

namespace ttalign {

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws std::domain_error on a zero
/// vector and std::invalid_argument on a dimension mismatch.
double cosine(std::span<const real> u, std::span<const real> v);

struct Neighbor {
  std::string token;
  double score = 0;
  bool operator==(const Neighbor&) const = default;
};

/// Read-only cosine index over a model's input vectors. Candidates for
/// library L are the tokens carrying the "L<L>:" prefix; structural, shared
/// and variable tokens never qualify.
class VectorIndex {
 public:
  explicit VectorIndex(const EmbeddingModel& model);

  const EmbeddingModel& model() const noexcept { return *model_; }
  std::span<const int> candidates(int library) const;

  /// Top-k candidates of `library` by cosine to `token`, the query itself
  /// excluded; descending, ties by token. Throws std::out_of_range for an
  /// unknown token and std::invalid_argument for k < 1.
  std::vector<Neighbor> nearest(std::string_view token, int k, int library) const;
  std::vector<Neighbor> nearest_serial(std::string_view token, int k, int library) const;

  /// 1-based position `target` would take in the nearest() list of `query`,
  /// or 0 when it is not a candidate.
  std::int64_t rank_of(int query, int target, int library) const;

  double similarity(std::string_view a, std::string_view b) const;

 private:
  int require(std::string_view token) const;
  double score(int a, int b) const;
  bool before(int a, double sa, int b, double sb) const;
  std::vector<Neighbor> finish(std::vector<std::pair<double, int>>& scored, int k) const;

  const EmbeddingModel* model_;
  std::vector<double> norms_;
  std::vector<std::vector<int>> candidates_;  // index = library id
};

using GoldAlignment = std::vector<std::pair<std::string, std::string>>;

/// TSV `name1<TAB>name2`; blank lines and '#' comments skipped, duplicates
/// dropped keeping the first.
GoldAlignment read_gold(std::istream& in);
GoldAlignment load_gold(const std::string& path);

struct HitReport {
  std::vector<int> cutoffs;
  std::vector<std::int64_t> hits;  // parallel to cutoffs
  std::int64_t universe = 0;
  std::int64_t oov = 0;  // gold pairs whose query constant is not in the model
};

inline const std::vector<int>& default_cutoffs() {
  static const std::vector<int> c{1, 3, 10, 20};
  return c;
}

/// Queries "L1:<a>" against library-2 candidates and scores a hit at N when
/// "L2:<b>" is among the N nearest. Out-of-vocabulary pairs are misses.
HitReport topn_hit(const VectorIndex& index, const GoldAlignment& gold,
                   std::span<const int> cutoffs, const NameSet& shared = default_logical_names());
HitReport topn_hit_serial(const VectorIndex& index, const GoldAlignment& gold,
                          std::span<const int> cutoffs,
                          const NameSet& shared = default_logical_names());

/// Top-N over a ranked alignment list: for gold (a, b), b must be among the
/// first N partners listed for a.
HitReport topn_hit_alignment(std::span<const Alignment> ranked, const GoldAlignment& gold,
                             std::span<const int> cutoffs);

/// TSV `N<TAB>hits<TAB>universe`.
void write_hit_report(std::ostream& out, const HitReport& report);
/// One header row and one value row, e.g. "Top-1 Hit  Top-3 Hit ...".
std::string format_hit_table(const HitReport& report);

/// Mean of the vectors of `tokens` (unknown tokens skipped); empty when none
/// is known.
std::vector<real> mean_vector(const EmbeddingModel& model, std::span<const std::string> tokens);

}  // namespace ttalign
