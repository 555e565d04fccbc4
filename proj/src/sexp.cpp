#include "ttalign/sexp.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "ttalign/tt_parser.hpp"

namespace ttalign {

namespace {

void append_quoted(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

class SexpReader {
 public:
  explicit SexpReader(std::string_view text) : text_(text) {}

  TermPtr read() {
    TermPtr t = term();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::string head() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected constructor name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string string_literal() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected string");
    ++pos_;
    std::string s;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '"') {
        if (s.empty()) fail("empty name");
        return s;
      }
      if (c == '\\') {
        if (pos_ >= text_.size()) break;
        c = text_[pos_++];
        if (c != '"' && c != '\\') fail("invalid escape");
      }
      s += c;
    }
    fail("unterminated string");
  }

  void close(const char* ctor, const char* arity) {
    if (!at(')')) fail(std::string(ctor) + " expects " + arity);
    ++pos_;
  }

  TermPtr term() {
    expect('(');
    std::string ctor = head();
    if (ctor == "Id") {
      std::string name = string_literal();
      close("Id", "exactly one name");
      bool bound = std::find(bound_.begin(), bound_.end(), name) != bound_.end();
      return Term::id(std::move(name), !bound);
    }
    if (ctor == "Comb") {
      if (at(')')) fail("Comb expects 2 sub-terms");
      TermPtr f = term();
      if (at(')')) fail("Comb expects 2 sub-terms");
      TermPtr a = term();
      close("Comb", "2 sub-terms");
      return Term::comb(std::move(f), std::move(a));
    }
    if (ctor == "Abs") {
      if (!at('"')) fail("Abs expects a variable name and 2 sub-terms");
      std::string var = string_literal();
      if (at(')')) fail("Abs expects a variable name and 2 sub-terms");
      TermPtr type = term();
      if (at(')')) fail("Abs expects a variable name and 2 sub-terms");
      bound_.push_back(var);
      TermPtr body = term();
      bound_.pop_back();
      close("Abs", "a variable name and 2 sub-terms");
      return Term::abs(std::move(var), std::move(type), std::move(body));
    }
    fail("unknown constructor '" + ctor + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

void append_sexp(std::string& out, const Term& term) {
  switch (term.kind()) {
    case TermKind::Id:
      out += "(Id ";
      append_quoted(out, term.name());
      out += ')';
      return;
    case TermKind::Comb:
      out += "(Comb ";
      append_sexp(out, term.fun());
      out += ' ';
      append_sexp(out, term.arg());
      out += ')';
      return;
    case TermKind::Abs:
      out += "(Abs ";
      append_quoted(out, term.name());
      out += ' ';
      append_sexp(out, term.var_type());
      out += ' ';
      append_sexp(out, term.body());
      out += ')';
      return;
  }
}

std::string to_sexp(const Term& term) {
  std::string out;
  append_sexp(out, term);
  return out;
}

TermPtr parse_sexp(std::string_view line) { return SexpReader(line).read(); }

}  // namespace ttalign
