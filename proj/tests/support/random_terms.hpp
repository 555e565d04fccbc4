#pragma once

#include <random>

#include "ttalign/term.hpp"

namespace ttalign::testing {

struct RandomTermOptions {
  int max_depth = 6;
  /// Draw names containing quotes, backslashes, spaces and UTF-8.
  bool awkward_names = true;
  /// Allow unbound variables (these do not survive an s-expression trip).
  bool free_variables = false;
};

/// Random term whose constant flags agree with s-expression inference:
/// variables are always bound unless free_variables is set, and constant
/// names never collide with binder names.
TermPtr random_term(std::mt19937_64& rng, const RandomTermOptions& opt = {});

}  // namespace ttalign::testing
