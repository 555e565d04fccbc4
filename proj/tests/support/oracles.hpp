#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttalign/matrix.hpp"
#include "ttalign/term.hpp"
#include "ttalign/trainer.hpp"
#include "ttalign/vocab.hpp"

// Reference implementations written independently of the library code.
namespace ttalign::testing {

/// -log P(target | h) for one output unit set. `negatives` lists the
/// negative rows used for this target (NS only).
double output_nll(const Matrix& n, std::span<const double> h, int target, LossKind loss,
                  const HuffmanCoding& huffman, std::span<const int> negatives);

/// CBOW objective of one sample.
double cbow_objective(const Matrix& m, const Matrix& n, const ContextSample& s, LossKind loss,
                      const HuffmanCoding& huffman, std::span<const int> negatives);

/// Skip-gram objective: sum over context tokens u of -log P(u | M_w). For NS
/// the negatives are consumed `k` per context token in order.
double skipgram_objective(const Matrix& m, const Matrix& n, const ContextSample& s,
                          LossKind loss, const HuffmanCoding& huffman,
                          std::span<const int> negatives, int k);

/// Product of path probabilities of each leaf of a Huffman tree.
std::vector<double> huffman_leaf_probabilities(const Matrix& n, std::span<const double> h,
                                               const HuffmanCoding& huffman);

/// Minimum of sum counts[i] * len[i] over all complete prefix codes
/// (brute force, small alphabets only).
std::int64_t optimal_code_cost(std::span<const std::int64_t> counts);

/// Pattern key and hole constants, computed directly from the definition.
std::pair<std::string, std::vector<std::string>> oracle_pattern(const Term& t,
                                                                const NameSet& logical);

using PairScores = std::map<std::pair<std::string, std::string>, double>;

/// Dense, loop-for-loop evaluation of the scoring recurrence for exactly
/// `iterations` rounds.
PairScores straight_line_scores(std::span<const TermPtr> l1, std::span<const TermPtr> l2,
                                const NameSet& logical, int iterations);

}  // namespace ttalign::testing
