#include "ttalign/term.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace ttalign {

Term::Term(TermKind kind, std::string name, bool constant, TermPtr first,
           TermPtr second)
    : kind_(kind),
      name_(std::move(name)),
      constant_(constant),
      first_(std::move(first)),
      second_(std::move(second)) {}

TermPtr Term::id(std::string name, bool constant) {
  if (name.empty()) throw std::invalid_argument("Id name must be nonempty");
  return std::make_shared<const Term>(TermKind::Id, std::move(name), constant,
                                      nullptr, nullptr);
}

TermPtr Term::comb(TermPtr fun, TermPtr arg) {
  if (!fun || !arg) throw std::invalid_argument("Comb needs two sub-terms");
  return std::make_shared<const Term>(TermKind::Comb, std::string{}, false,
                                      std::move(fun), std::move(arg));
}

TermPtr Term::abs(std::string var, TermPtr var_type, TermPtr body) {
  if (var.empty()) throw std::invalid_argument("Abs variable must be nonempty");
  if (!var_type || !body) throw std::invalid_argument("Abs needs type and body");
  return std::make_shared<const Term>(TermKind::Abs, std::move(var), false,
                                      std::move(var_type), std::move(body));
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Id:
      return a.name() == b.name() && a.is_constant() == b.is_constant();
    case TermKind::Comb:
      return a.fun() == b.fun() && a.arg() == b.arg();
    case TermKind::Abs:
      return a.name() == b.name() && a.var_type() == b.var_type() &&
             a.body() == b.body();
  }
  return false;
}

std::size_t node_count(const Term& t) {
  if (t.is_id()) return 1;
  return 1 + node_count(*t.first_ptr()) + node_count(*t.second_ptr());
}

std::size_t leaf_count(const Term& t) {
  if (t.is_id()) return 1;
  return leaf_count(*t.first_ptr()) + leaf_count(*t.second_ptr());
}

std::size_t depth(const Term& t) {
  if (t.is_id()) return 1;
  return 1 + std::max(depth(*t.first_ptr()), depth(*t.second_ptr()));
}

namespace {

void collect_constants(const Term& t, const NameSet& logical,
                       std::unordered_set<std::string>& seen,
                       std::vector<std::string>& out) {
  if (t.is_id()) {
    if (t.is_constant() && !logical.contains(t.name()) &&
        seen.insert(t.name()).second) {
      out.push_back(t.name());
    }
    return;
  }
  collect_constants(*t.first_ptr(), logical, seen, out);
  collect_constants(*t.second_ptr(), logical, seen, out);
}

TermPtr rename_bound_impl(
    const TermPtr& t, const std::function<std::string(const std::string&)>& rename,
    std::vector<std::pair<std::string, std::string>>& scope) {
  switch (t->kind()) {
    case TermKind::Id: {
      if (t->is_constant()) return t;
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->first == t->name()) return Term::var(it->second);
      }
      return t;
    }
    case TermKind::Comb:
      return Term::comb(rename_bound_impl(t->first_ptr(), rename, scope),
                        rename_bound_impl(t->second_ptr(), rename, scope));
    case TermKind::Abs: {
      auto type = rename_bound_impl(t->first_ptr(), rename, scope);
      std::string fresh = rename(t->name());
      scope.emplace_back(t->name(), fresh);
      auto body = rename_bound_impl(t->second_ptr(), rename, scope);
      scope.pop_back();
      return Term::abs(std::move(fresh), std::move(type), std::move(body));
    }
  }
  return t;
}

}  // namespace

std::vector<std::string> constants_of(const Term& t, const NameSet& logical) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  collect_constants(t, logical, seen, out);
  return out;
}

TermPtr rename_constants(
    const TermPtr& t,
    const std::function<std::string(const std::string&)>& rename) {
  switch (t->kind()) {
    case TermKind::Id:
      return t->is_constant() ? Term::id(rename(t->name()), true) : t;
    case TermKind::Comb:
      return Term::comb(rename_constants(t->first_ptr(), rename),
                        rename_constants(t->second_ptr(), rename));
    case TermKind::Abs:
      return Term::abs(t->name(), rename_constants(t->first_ptr(), rename),
                       rename_constants(t->second_ptr(), rename));
  }
  return t;
}

TermPtr rename_bound(const TermPtr& t,
                     const std::function<std::string(const std::string&)>& rename) {
  std::vector<std::pair<std::string, std::string>> scope;
  return rename_bound_impl(t, rename, scope);
}

}  // namespace ttalign
