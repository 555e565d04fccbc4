#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ttalign {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Ordered set of names with heterogeneous lookup (used for logical and
/// shared constant sets).
using NameSet = std::set<std::string, std::less<>>;

enum class TermKind { Id, Comb, Abs };

/// Immutable node of a `tt` term tree.
///
/// A term is one of three constructors:
///   Id(name)                 identifier leaf, either a constant or a variable
///   Comb(fun, arg)           binary application
///   Abs(var, varType, body)  typed abstraction
///
/// Nodes are shared and never mutated after construction, so subtrees may be
/// reused freely between terms and threads.
class Term {
 public:
  static TermPtr id(std::string name, bool constant = true);
  static TermPtr var(std::string name) { return id(std::move(name), false); }
  static TermPtr comb(TermPtr fun, TermPtr arg);
  static TermPtr abs(std::string var, TermPtr var_type, TermPtr body);

  TermKind kind() const noexcept { return kind_; }
  bool is_id() const noexcept { return kind_ == TermKind::Id; }
  bool is_comb() const noexcept { return kind_ == TermKind::Comb; }
  bool is_abs() const noexcept { return kind_ == TermKind::Abs; }

  /// Identifier name for Id, bound variable name for Abs, empty for Comb.
  const std::string& name() const noexcept { return name_; }
  /// Only meaningful for Id leaves.
  bool is_constant() const noexcept { return constant_; }
  bool is_variable() const noexcept { return is_id() && !constant_; }

  // Comb accessors.
  const Term& fun() const { return *first_; }
  const Term& arg() const { return *second_; }
  // Abs accessors.
  const Term& var_type() const { return *first_; }
  const Term& body() const { return *second_; }

  const TermPtr& first_ptr() const noexcept { return first_; }
  const TermPtr& second_ptr() const noexcept { return second_; }

  Term(TermKind kind, std::string name, bool constant, TermPtr first,
       TermPtr second);

 private:
  TermKind kind_;
  std::string name_;
  bool constant_ = false;
  TermPtr first_;
  TermPtr second_;
};

/// Structural equality: same constructors, names and constant flags.
bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

std::size_t node_count(const Term& t);
std::size_t leaf_count(const Term& t);
std::size_t depth(const Term& t);

/// Non-logical constants of `t` in order of first preorder occurrence,
/// duplicates collapsed. Variables never count, bound or free.
std::vector<std::string> constants_of(const Term& t, const NameSet& logical);

/// Renames every occurrence of the given constants (leaves the rest alone).
TermPtr rename_constants(
    const TermPtr& t,
    const std::function<std::string(const std::string&)>& rename);

/// Renames bound variables; free occurrences are untouched.
TermPtr rename_bound(const TermPtr& t,
                     const std::function<std::string(const std::string&)>& rename);

}  // namespace ttalign
