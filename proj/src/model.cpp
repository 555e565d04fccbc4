#include "ttalign/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ttalign/traversal.hpp"

namespace ttalign {

std::optional<std::span<const real>> EmbeddingModel::vector(std::string_view token) const {
  auto id = dict.find(token);
  if (!id) return std::nullopt;
  return input.row(*id);
}

std::optional<std::string> EmbeddingModel::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void EmbeddingModel::set_meta(std::string key, std::string value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  metadata.emplace_back(std::move(key), std::move(value));
}

bool EmbeddingModel::all_finite() const {
  for (real x : input.data()) {
    if (!std::isfinite(x)) return false;
  }
  for (real x : output.data()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

namespace {

constexpr std::string_view kOutputSentinel = "#OUTPUT";
constexpr std::string_view kCountsKey = "counts";

void write_rows(std::ostream& out, const Dictionary& dict, const Matrix& m) {
  char buf[40];
  std::string line;
  for (int i = 0; i < dict.size(); ++i) {
    line = escape_token(dict.token(i));
    for (real x : m.row(i)) {
      std::snprintf(buf, sizeof buf, " %.9g", x);
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

[[noreturn]] void bad_model(const std::string& what) {
  throw std::runtime_error("malformed model file: " + what);
}

// Fills `tokens` on the first pass; later passes must repeat the same tokens.
void read_rows(std::istream& in, Matrix& m, std::vector<std::string>& tokens, bool fill) {
  std::string line;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!std::getline(in, line)) bad_model("expected " + std::to_string(m.rows()) + " rows");
    const char* p = line.c_str();
    const char* space = std::strchr(p, ' ');
    if (!space && m.cols() > 0) bad_model("row without values");
    std::string tok = unescape_token(std::string_view(p, space ? space - p : line.size()));
    if (fill) {
      tokens.push_back(std::move(tok));
    } else if (tok != tokens[r]) {
      bad_model("output row " + std::to_string(r) + " is not '" + tokens[r] + "'");
    }
    const char* cur = space;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      char* end = nullptr;
      m(r, c) = std::strtod(cur, &end);
      if (end == cur) bad_model("row " + std::to_string(r) + " has too few values");
      cur = end;
    }
    while (cur && (*cur == ' ' || *cur == '\r')) ++cur;
    if (cur && *cur) bad_model("row " + std::to_string(r) + " has trailing text");
  }
}

}  // namespace

void write_model(std::ostream& out, const EmbeddingModel& model) {
  out << model.vocab_size() << ' ' << model.dim() << '\n';
  for (const auto& [k, v] : model.metadata) out << '#' << k << ' ' << v << '\n';
  out << '#' << kCountsKey;
  for (auto c : model.dict.counts()) out << ' ' << c;
  out << '\n';
  write_rows(out, model.dict, model.input);
  out << kOutputSentinel << '\n';
  write_rows(out, model.dict, model.output);
}

EmbeddingModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) bad_model("empty file");
  std::size_t v = 0, d = 0;
  {
    std::istringstream header(line);
    if (!(header >> v >> d) || v == 0 || d == 0) bad_model("first line must be 'V D'");
  }

  EmbeddingModel model;
  std::vector<std::int64_t> counts;
  // Metadata lines run until the first row; rows never start with '#'
  // because escape_token encodes a leading '#'.
  while (in.peek() == '#') {
    std::getline(in, line);
    std::string_view body = std::string_view(line).substr(1);
    auto space = body.find(' ');
    std::string key(body.substr(0, space));
    std::string value(space == std::string_view::npos ? "" : body.substr(space + 1));
    if (key == kCountsKey) {
      std::istringstream values(value);
      std::int64_t c;
      while (values >> c) counts.push_back(c);
    } else {
      model.metadata.emplace_back(std::move(key), std::move(value));
    }
  }

  model.input = Matrix(v, d);
  model.output = Matrix(v, d);
  std::vector<std::string> tokens;
  read_rows(in, model.input, tokens, true);
  if (!std::getline(in, line) || line != kOutputSentinel) bad_model("missing #OUTPUT sentinel");
  read_rows(in, model.output, tokens, false);
  if (counts.empty()) counts.assign(v, 1);
  if (counts.size() != v) bad_model("count list does not match vocabulary size");
  model.dict = Dictionary::from_entries(std::move(tokens), std::move(counts));
  return model;
}

void save_model(const std::string& path, const EmbeddingModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_model(out, model);
  if (!out) throw std::runtime_error("error writing " + path);
}

EmbeddingModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_model(in);
}

}  // namespace ttalign
