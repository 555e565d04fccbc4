#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttalign/matrix.hpp"
#include "ttalign/vocab.hpp"

namespace ttalign {

/// Dictionary plus the input matrix (word vectors, one row per token) and
/// the output matrix (softmax rows, Huffman internal nodes or negative
/// sampling rows depending on the loss).
struct EmbeddingModel {
  Dictionary dict;
  Matrix input;
  Matrix output;
  /// Free-form key/value pairs recorded in the model file header.
  std::vector<std::pair<std::string, std::string>> metadata;

  int dim() const noexcept { return static_cast<int>(input.cols()); }
  int vocab_size() const noexcept { return dict.size(); }

  /// Input-matrix row of a token, if present.
  std::optional<std::span<const real>> vector(std::string_view token) const;
  std::optional<std::string> meta(std::string_view key) const;
  void set_meta(std::string key, std::string value);

  bool all_finite() const;
};

// Text model file:
//   V D
//   #<key> <value>          metadata, including "#counts c0 c1 ..."
//   token f1 ... fD         V rows of the input matrix, %.9g
//   #OUTPUT
//   token f1 ... fD         V rows of the output matrix
void write_model(std::ostream& out, const EmbeddingModel& model);
EmbeddingModel read_model(std::istream& in);
void save_model(const std::string& path, const EmbeddingModel& model);
EmbeddingModel load_model(const std::string& path);

}  // namespace ttalign
