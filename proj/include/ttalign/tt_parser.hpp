#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ttalign/term.hpp"

namespace ttalign {

/// Thrown for malformed `tt` or s-expression input. Line and column are
/// 1-based positions of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column,
             const std::string& source = {});

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::string message_;
  std::string source_;
  int line_;
  int column_;
};

enum class ItemKind { Ty, Ax };

std::string_view to_string(ItemKind kind);

/// One `tt(Name, Kind, Term).` clause. For `ty` items the term wraps the
/// declared constant: Comb(Id(":"), Comb(Id(name), type)).
struct TtItem {
  std::string name;
  ItemKind kind = ItemKind::Ax;
  TermPtr term;
  int library = 1;
};

enum class BinderKind {
  Quantifier,  // `![x : T]: B`  ->  Comb(Id("!"), Abs(x, T, B))
  Lambda,      // `^[x : T]: B`  ->  Abs(x, T, B)
};

/// Operators understood by the `tt` reader. Every infix `l op r` encodes as
/// Comb(Id(op), Comb(l, r)). Higher precedence binds tighter; binders bind
/// weaker than any infix operator and application binds tightest.
struct OperatorTable {
  std::map<std::string, int, std::less<>> infix;
  std::map<std::string, BinderKind, std::less<>> binders;
  /// Bare identifiers listed here are read as constants instead of variables.
  NameSet known_constants;

  static OperatorTable defaults();

  /// Infix operators, quantifier binders and the typing operator ":".
  NameSet logical_names() const;
};

/// Default set of shared/logical names: the default operator table's infix
/// operators and quantifiers plus ":".
const NameSet& default_logical_names();

std::vector<TtItem> parse_tt_file(std::string_view text, int library,
                                  const OperatorTable& ops = OperatorTable::defaults());

/// Parses a single term expression (no clause wrapper).
TermPtr parse_tt_term(std::string_view text,
                      const OperatorTable& ops = OperatorTable::defaults());

/// Reads and parses a file; ParseError messages are prefixed with the path.
std::vector<TtItem> read_tt_file(const std::string& path, int library,
                                 const OperatorTable& ops = OperatorTable::defaults());

}  // namespace ttalign
