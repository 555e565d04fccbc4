#include "ttalign/traversal.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ttalign {

void TraversalWeights::validate() const {
  for (double w : {preorder, inorder, postorder}) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("traversal weights must lie in [0, 1]");
    }
  }
}

TraversalWeights parse_weights(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string field(text.substr(start, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - start));
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
      throw std::invalid_argument("bad weight '" + field + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != 3) throw std::invalid_argument("expected three weights a,b,c");
  TraversalWeights w{values[0], values[1], values[2]};
  w.validate();
  return w;
}

std::string constant_token(std::string_view name, int library, const NameSet& shared) {
  if (library <= 0 || shared.contains(name)) return std::string(name);
  std::string out = "L" + std::to_string(library) + ":";
  out += name;
  return out;
}

std::string tokenize_node(const Term& node, const TokenPolicy& policy,
                          std::optional<int> binding_index) {
  switch (node.kind()) {
    case TermKind::Comb:
      return std::string(kCombToken);
    case TermKind::Abs:
      return std::string(kAbsToken);
    case TermKind::Id:
      break;
  }
  if (node.is_constant()) return constant_token(node.name(), policy.library, policy.shared);
  if (policy.vars == VarPolicy::Normalized && binding_index) {
    return "bvar" + std::to_string(*binding_index);
  }
  return node.name();
}

namespace {

struct FlatNode {
  std::string token;
  int first = -1;
  int second = -1;
  bool leaf() const { return first < 0; }
};

class Flattener {
 public:
  explicit Flattener(const TokenPolicy& policy) : policy_(policy) {}

  std::vector<FlatNode> run(const Term& t) {
    visit(t);
    return std::move(nodes_);
  }

 private:
  int visit(const Term& t) {
    int self = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (t.is_id()) {
      std::optional<int> index;
      if (t.is_variable()) index = variable_index(t.name());
      nodes_[self].token = tokenize_node(t, policy_, index);
      return self;
    }
    nodes_[self].token = tokenize_node(t, policy_);
    int first = visit(*t.first_ptr());
    int second;
    if (t.is_abs()) {
      scope_.emplace_back(t.name(), next_binding_++);
      second = visit(*t.second_ptr());
      scope_.pop_back();
    } else {
      second = visit(*t.second_ptr());
    }
    nodes_[self].first = first;
    nodes_[self].second = second;
    return self;
  }

  // Free variables are numbered at first occurrence, from the same counter.
  int variable_index(const std::string& name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    for (const auto& [free, index] : free_) {
      if (free == name) return index;
    }
    free_.emplace_back(name, next_binding_);
    return next_binding_++;
  }

  const TokenPolicy& policy_;
  std::vector<FlatNode> nodes_;
  std::vector<std::pair<std::string, int>> scope_;
  std::vector<std::pair<std::string, int>> free_;
  int next_binding_ = 0;
};

void inorder_walk(const std::vector<FlatNode>& nodes, int i, std::vector<std::string>& out) {
  const FlatNode& n = nodes[i];
  if (n.leaf()) {
    out.push_back(n.token);
    return;
  }
  inorder_walk(nodes, n.first, out);
  out.push_back(n.token);
  inorder_walk(nodes, n.second, out);
}

void postorder_walk(const std::vector<FlatNode>& nodes, int i,
                    std::vector<std::string>& out) {
  const FlatNode& n = nodes[i];
  if (!n.leaf()) {
    postorder_walk(nodes, n.first, out);
    postorder_walk(nodes, n.second, out);
  }
  out.push_back(n.token);
}

std::vector<std::string> preorder_of(const std::vector<FlatNode>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.token);
  return out;
}

std::vector<std::string> inorder_of(const std::vector<FlatNode>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  inorder_walk(nodes, 0, out);
  return out;
}

std::vector<std::string> postorder_of(const std::vector<FlatNode>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  postorder_walk(nodes, 0, out);
  return out;
}

std::vector<std::string> leaves_of(const std::vector<FlatNode>& nodes) {
  std::vector<std::string> out;
  for (const auto& n : nodes) {
    if (n.leaf()) out.push_back(n.token);
  }
  return out;
}

}  // namespace

std::vector<std::string> preorder(const Term& t, const TokenPolicy& policy) {
  return preorder_of(Flattener(policy).run(t));
}

std::vector<std::string> inorder(const Term& t, const TokenPolicy& policy) {
  return inorder_of(Flattener(policy).run(t));
}

std::vector<std::string> postorder(const Term& t, const TokenPolicy& policy) {
  return postorder_of(Flattener(policy).run(t));
}

std::vector<std::string> leaf_dump(const Term& t, const TokenPolicy& policy) {
  return leaves_of(Flattener(policy).run(t));
}

namespace {

void check_corpus_config(const CorpusConfig& cfg) {
  cfg.weights.validate();
  if (cfg.dump == DumpMode::Tree && cfg.weights.all_zero()) {
    throw std::invalid_argument("tree dump needs at least one nonzero traversal weight");
  }
}

void item_lines(const TtItem& item, const CorpusConfig& cfg, std::vector<CorpusLine>& out) {
  TokenPolicy policy{cfg.vars, cfg.shared, item.library};
  auto nodes = Flattener(policy).run(*item.term);
  if (cfg.dump == DumpMode::Leaf) {
    out.push_back({leaves_of(nodes), 1.0});
    return;
  }
  if (cfg.weights.preorder > 0) out.push_back({preorder_of(nodes), cfg.weights.preorder});
  if (cfg.weights.inorder > 0) out.push_back({inorder_of(nodes), cfg.weights.inorder});
  if (cfg.weights.postorder > 0) out.push_back({postorder_of(nodes), cfg.weights.postorder});
}

}  // namespace

std::vector<CorpusLine> corpus_lines(const std::vector<TtItem>& items,
                                     const CorpusConfig& cfg) {
  check_corpus_config(cfg);
  const long n = static_cast<long>(items.size());
  std::vector<std::vector<CorpusLine>> per_item(items.size());

#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < n; ++i) item_lines(items[i], cfg, per_item[i]);

  std::vector<CorpusLine> lines;
  for (auto& group : per_item) {
    for (auto& line : group) lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<CorpusLine> corpus_lines_serial(const std::vector<TtItem>& items,
                                            const CorpusConfig& cfg) {
  check_corpus_config(cfg);
  std::vector<CorpusLine> lines;
  for (const auto& item : items) item_lines(item, cfg, lines);
  return lines;
}

std::string escape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' ||
        c == '%' || (c == '#' && i == 0)) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] == '%' && i + 2 < token.size()) {
      unsigned value = 0;
      auto [p, ec] = std::from_chars(token.data() + i + 1, token.data() + i + 3, value, 16);
      if (ec == std::errc() && p == token.data() + i + 3) {
        out += static_cast<char>(value);
        i += 2;
        continue;
      }
    }
    out += token[i];
  }
  return out;
}

void write_token_corpus(std::ostream& out, const std::vector<CorpusLine>& lines) {
  for (const auto& line : lines) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", line.lr_scale);
    out << buf;
    for (const auto& tok : line.tokens) out << ' ' << escape_token(tok);
    out << '\n';
  }
}

std::vector<CorpusLine> read_token_corpus(std::istream& in) {
  std::vector<CorpusLine> lines;
  std::string text;
  while (std::getline(in, text)) {
    std::istringstream fields(text);
    std::string field;
    CorpusLine line;
    bool first = true;
    while (fields >> field) {
      if (first) {
        first = false;
        char* end = nullptr;
        double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str() + field.size()) {
          if (!(v > 0.0 && v <= 1.0)) {
            throw std::invalid_argument("corpus lr scale must lie in (0, 1]: " + field);
          }
          line.lr_scale = v;
          continue;
        }
      }
      line.tokens.push_back(unescape_token(field));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace ttalign
