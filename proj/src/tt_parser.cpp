#include "ttalign/tt_parser.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace ttalign {

namespace {
std::string format_position(const std::string& source, int line, int column) {
  if (source.empty()) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
  }
  return source + ":" + std::to_string(line) + ":" + std::to_string(column);
}
}  // namespace

ParseError::ParseError(const std::string& message, int line, int column,
                       const std::string& source)
    : std::runtime_error(format_position(source, line, column) + ": " + message),
      message_(message),
      source_(source),
      line_(line),
      column_(column) {}

std::string_view to_string(ItemKind kind) {
  return kind == ItemKind::Ty ? "ty" : "ax";
}

OperatorTable OperatorTable::defaults() {
  OperatorTable t;
  t.infix = {{"<=>", 1}, {"==>", 2}, {"\\/", 3}, {"/\\", 4},
             {"=", 5},   {">", 6},   {":", 7}};
  t.binders = {{"!", BinderKind::Quantifier},
               {"?", BinderKind::Quantifier},
               {"^", BinderKind::Lambda}};
  return t;
}

NameSet OperatorTable::logical_names() const {
  NameSet names;
  for (const auto& [op, prec] : infix) names.insert(op);
  for (const auto& [op, kind] : binders) {
    if (kind == BinderKind::Quantifier) names.insert(op);
  }
  names.insert(":");
  return names;
}

const NameSet& default_logical_names() {
  static const NameSet names = OperatorTable::defaults().logical_names();
  return names;
}

namespace {

enum class Tok { Quoted, Ident, Symbol, LParen, RParen, LBrack, RBrack, Comma, Dot, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_symbol_char(char c) {
  switch (c) {
    case '!': case '?': case '^': case '=': case '<': case '>': case '/':
    case '\\': case '~': case '&': case '|': case '*': case '+': case '-':
    case ':': case '#': case '@': case '$': case ';':
      return true;
    default:
      return false;
  }
}

class Lexer {
 public:
  Lexer(std::string_view text, const OperatorTable& ops) : text_(text) {
    for (const auto& [op, prec] : ops.infix) symbols_.push_back(op);
    for (const auto& [op, kind] : ops.binders) symbols_.push_back(op);
    symbols_.push_back(":");
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      int line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = text_[pos_];
      switch (c) {
        case '(': advance(); out.push_back({Tok::LParen, "(", line, col}); continue;
        case ')': advance(); out.push_back({Tok::RParen, ")", line, col}); continue;
        case '[': advance(); out.push_back({Tok::LBrack, "[", line, col}); continue;
        case ']': advance(); out.push_back({Tok::RBrack, "]", line, col}); continue;
        case ',': advance(); out.push_back({Tok::Comma, ",", line, col}); continue;
        case '.': advance(); out.push_back({Tok::Dot, ".", line, col}); continue;
        case '\'': out.push_back({Tok::Quoted, quoted(line, col), line, col}); continue;
        default: break;
      }
      if (is_ident_char(c)) {
        std::string s;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
          s += text_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, std::move(s), line, col});
        continue;
      }
      if (is_symbol_char(c)) {
        out.push_back({Tok::Symbol, symbol(line, col), line, col});
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          advance();
        }
        if (pos_ + 1 >= text_.size()) throw ParseError("unterminated comment", line, col);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string quoted(int line, int col) {
    advance();  // opening quote
    std::string s;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\'') {
        advance();
        if (s.empty()) throw ParseError("empty quoted atom", line, col);
        return s;
      }
      if (c == '\\' && pos_ + 1 < text_.size()) {
        advance();
        c = text_[pos_];
      } else if (c == '\n') {
        break;
      }
      s += c;
      advance();
    }
    throw ParseError("unterminated quoted atom", line, col);
  }

  // Longest known operator at the cursor; an unknown run is an error.
  std::string symbol(int line, int col) {
    std::string_view rest = text_.substr(pos_);
    std::size_t best = 0;
    for (const auto& s : symbols_) {
      if (s.size() > best && rest.starts_with(s)) best = s.size();
    }
    if (best == 0) {
      std::size_t n = 0;
      while (n < rest.size() && is_symbol_char(rest[n])) ++n;
      throw ParseError("unknown infix operator '" + std::string(rest.substr(0, n)) + "'",
                       line, col);
    }
    std::string s(rest.substr(0, best));
    for (std::size_t i = 0; i < best; ++i) advance();
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<std::string> symbols_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const OperatorTable& ops)
      : toks_(std::move(toks)), ops_(ops) {}

  bool at_end() const { return peek().kind == Tok::End; }

  TtItem clause(int library) {
    const Token& head = peek();
    if (head.kind != Tok::Ident || head.text != "tt") fail("expected 'tt(' clause", head);
    next();
    expect(Tok::LParen, "'('");
    const Token& name_tok = peek();
    if (name_tok.kind != Tok::Quoted) fail("expected quoted item name", name_tok);
    std::string name = next().text;
    expect(Tok::Comma, "','");
    const Token& kind_tok = peek();
    ItemKind kind;
    if (kind_tok.kind == Tok::Ident && kind_tok.text == "ty") {
      kind = ItemKind::Ty;
    } else if (kind_tok.kind == Tok::Ident && kind_tok.text == "ax") {
      kind = ItemKind::Ax;
    } else {
      fail("expected item kind 'ty' or 'ax'", kind_tok);
    }
    next();
    expect(Tok::Comma, "','");
    TermPtr term = expr(0);
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    if (kind == ItemKind::Ty) {
      term = Term::comb(Term::id(":"), Term::comb(Term::id(name), std::move(term)));
    }
    return TtItem{std::move(name), kind, std::move(term), library};
  }

  TermPtr whole_term() {
    TermPtr t = expr(0);
    if (!at_end()) fail("unexpected trailing input", peek());
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    if (at.kind == Tok::End) throw ParseError(msg + " (end of input)", at.line, at.column);
    throw ParseError(msg + ", found '" + at.text + "'", at.line, at.column);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what, peek());
    next();
  }

  bool is_binder(const Token& t) const {
    return t.kind == Tok::Symbol && ops_.binders.contains(t.text);
  }

  bool starts_primary(const Token& t) const {
    return t.kind == Tok::Quoted || t.kind == Tok::Ident || t.kind == Tok::LParen;
  }

  TermPtr expr(int min_prec) {
    if (is_binder(peek())) return binder();
    TermPtr lhs = application();
    while (peek().kind == Tok::Symbol) {
      const Token& op = peek();
      auto it = ops_.infix.find(op.text);
      if (it == ops_.infix.end()) fail("unknown infix operator", op);
      int prec = it->second;
      if (prec < min_prec) break;
      std::string name = next().text;
      TermPtr rhs = is_binder(peek()) ? binder() : expr(prec);
      lhs = Term::comb(Term::id(std::move(name)), Term::comb(std::move(lhs), std::move(rhs)));
    }
    return lhs;
  }

  TermPtr application() {
    TermPtr t = primary();
    while (starts_primary(peek())) t = Term::comb(std::move(t), primary());
    return t;
  }

  TermPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Quoted:
        return Term::id(next().text, true);
      case Tok::Ident: {
        bool constant = ops_.known_constants.contains(t.text);
        return Term::id(next().text, constant);
      }
      case Tok::LParen: {
        next();
        TermPtr inner = expr(0);
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("expected a term", t);
    }
  }

  TermPtr binder() {
    std::string op = next().text;
    BinderKind kind = ops_.binders.find(op)->second;
    expect(Tok::LBrack, "'[' after binder");
    std::vector<std::pair<std::string, TermPtr>> vars;
    for (;;) {
      const Token& v = peek();
      if (v.kind != Tok::Ident) fail("expected bound variable name", v);
      std::string name = next().text;
      const Token& colon = peek();
      if (colon.kind != Tok::Symbol || colon.text != ":") {
        fail("expected ':' after bound variable", colon);
      }
      next();
      vars.emplace_back(std::move(name), expr(0));
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::RBrack, "']'");
      break;
    }
    const Token& colon = peek();
    if (colon.kind != Tok::Symbol || colon.text != ":") fail("expected ':' after ']'", colon);
    next();
    TermPtr body = expr(0);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = Term::abs(it->first, it->second, std::move(body));
      if (kind == BinderKind::Quantifier) body = Term::comb(Term::id(op), std::move(body));
    }
    return body;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const OperatorTable& ops_;
};

}  // namespace

std::vector<TtItem> parse_tt_file(std::string_view text, int library,
                                  const OperatorTable& ops) {
  Parser parser(Lexer(text, ops).run(), ops);
  std::vector<TtItem> items;
  while (!parser.at_end()) items.push_back(parser.clause(library));
  return items;
}

TermPtr parse_tt_term(std::string_view text, const OperatorTable& ops) {
  Parser parser(Lexer(text, ops).run(), ops);
  return parser.whole_term();
}

std::vector<TtItem> read_tt_file(const std::string& path, int library,
                                 const OperatorTable& ops) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_tt_file(buf.str(), library, ops);
  } catch (const ParseError& e) {
    throw ParseError(e.message(), e.line(), e.column(), path);
  }
}

}  // namespace ttalign
