#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttalign/term.hpp"
#include "ttalign/tt_parser.hpp"

namespace ttalign {

inline constexpr std::string_view kCombToken = "Comb";
inline constexpr std::string_view kAbsToken = "Abs";

enum class VarPolicy {
  Literal,     // variables keep their source name
  Normalized,  // "bvarK", K = binding order within the item
};

enum class DumpMode { Tree, Leaf };

/// Per-traversal learning-rate multipliers. A zero weight skips the
/// traversal entirely.
struct TraversalWeights {
  double preorder = 0.33;
  double inorder = 0.33;
  double postorder = 0.33;

  /// Throws std::invalid_argument unless every weight lies in [0, 1].
  void validate() const;
  bool all_zero() const { return preorder == 0 && inorder == 0 && postorder == 0; }
};

/// Parses "a,b,c".
TraversalWeights parse_weights(std::string_view text);

struct TokenPolicy {
  VarPolicy vars = VarPolicy::Normalized;
  /// Constants that stay unprefixed in every library.
  NameSet shared = default_logical_names();
  /// 0 disables library prefixes altogether.
  int library = 0;
};

/// "L<library>:<name>" for non-shared constants, `name` otherwise.
std::string constant_token(std::string_view name, int library, const NameSet& shared);

/// Token for a single node. Variables under the Normalized policy need the
/// binder index, which only the enclosing item knows.
std::string tokenize_node(const Term& node, const TokenPolicy& policy,
                          std::optional<int> binding_index = std::nullopt);

// Traversal orders. Comb children are (fun, arg); Abs children are
// (varType, body). Inorder emits a node between its two children.
std::vector<std::string> preorder(const Term& t, const TokenPolicy& policy = {});
std::vector<std::string> inorder(const Term& t, const TokenPolicy& policy = {});
std::vector<std::string> postorder(const Term& t, const TokenPolicy& policy = {});
/// Leaf tokens left to right; equals preorder filtered to Id leaves.
std::vector<std::string> leaf_dump(const Term& t, const TokenPolicy& policy = {});

struct CorpusLine {
  std::vector<std::string> tokens;
  double lr_scale = 1.0;
  bool operator==(const CorpusLine&) const = default;
};

struct CorpusConfig {
  DumpMode dump = DumpMode::Tree;
  TraversalWeights weights;
  VarPolicy vars = VarPolicy::Normalized;
  NameSet shared = default_logical_names();
};

/// Tree mode: up to three lines per item (pre, in, post order) with the
/// matching weight as lr scale. Leaf mode: one line per item, scale 1.
/// Items are processed in parallel; output order follows input order.
std::vector<CorpusLine> corpus_lines(const std::vector<TtItem>& items,
                                     const CorpusConfig& cfg);
std::vector<CorpusLine> corpus_lines_serial(const std::vector<TtItem>& items,
                                            const CorpusConfig& cfg);

// Token corpus file: one line per CorpusLine, `<lrScale> <tok1> <tok2> ...`.
// Lines whose first field is not a number are plain text with scale 1.
void write_token_corpus(std::ostream& out, const std::vector<CorpusLine>& lines);
std::vector<CorpusLine> read_token_corpus(std::istream& in);

// Whitespace inside tokens is escaped in every text format that stores
// tokens separated by spaces.
std::string escape_token(std::string_view token);
std::string unescape_token(std::string_view token);

}  // namespace ttalign
