#pragma once

#include <vector>

#include "ttalign/term.hpp"

namespace ttalign::testing {

struct AlignInstance {
  std::vector<TermPtr> l1, l2;
};

/// Hand-written library pairs, starting with fixtures/fig4_l1.tt against
/// fig4_l2.tt, then seeded mixtures of a few shared templates.
std::vector<AlignInstance> align_instances();

}  // namespace ttalign::testing
