#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ttalign/term.hpp"
#include "ttalign/tt_parser.hpp"

namespace ttalign {

/// A term with its non-logical constants abstracted into holes.
struct Pattern {
  /// Holes are Id("?k"), k = 1..K; bound variables are renamed "x<depth>".
  TermPtr skeleton;
  /// Canonical serialization: equal keys iff equal patterns.
  std::string key;
  /// constants[k-1] fills hole k.
  std::vector<std::string> constants;
};

Pattern patternify(const Term& t, const NameSet& logical);

struct TermPair {
  int first;   // index into library 1
  int second;  // index into library 2
};

struct ConstantPair {
  std::string first;
  std::string second;
  bool operator==(const ConstantPair&) const = default;
};

/// Matching term pairs, the constant pairs they induce, and the statistics
/// used by the score weights. delta(j, i) holds iff j is in induced[i].
struct MatchSet {
  std::vector<TermPair> term_pairs;
  std::vector<ConstantPair> constant_pairs;
  std::vector<std::vector<int>> induced;   // per term pair, distinct, slot order
  std::vector<std::vector<int>> inducing;  // per constant pair, ascending
  std::vector<std::int64_t> p;             // per term pair
  std::vector<std::int64_t> q;             // per term pair
  std::vector<std::int64_t> r1;            // per constant pair
  std::vector<std::int64_t> r2;            // per constant pair

  std::size_t m() const noexcept { return term_pairs.size(); }
  std::size_t n() const noexcept { return constant_pairs.size(); }
  bool delta(int j, int i) const;
};

MatchSet enumerate_matches(std::span<const TermPtr> l1, std::span<const TermPtr> l2,
                           const NameSet& logical);
MatchSet enumerate_matches(std::span<const TtItem> l1, std::span<const TtItem> l2,
                           const NameSet& logical);

/// x / (x + 1); throws std::domain_error for negative x.
double g(double x);
double term_weight(std::int64_t p, std::int64_t q);
double constant_weight(std::int64_t r1, std::int64_t r2);

struct ScoreState {
  std::vector<double> term_scores;
  std::vector<double> const_scores;
  int iterations = 0;
  bool converged = false;
  double last_delta = 0;
};

/// Alternates term and constant scores starting from constant scores of 1
/// until the largest constant-score change drops below eps or max_iters
/// rounds have run. An empty match set yields an empty converged state.
ScoreState score_iterate(const MatchSet& ms, double eps = 1e-6, int max_iters = 100);

struct Alignment {
  std::string first;
  std::string second;
  double score = 0;
};

/// Descending score, ties by (first, second).
std::vector<Alignment> rank_alignments(const ScoreState& state, const MatchSet& ms);
/// TSV `c1<TAB>c2<TAB>score` with six decimals.
void write_alignments(std::ostream& out, std::span<const Alignment> ranked);

}  // namespace ttalign
