#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <ostream>
#include <random>

#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace ttalign;

namespace {

struct Variant {
  ModelKind model;
  LossKind loss;
};

void PrintTo(const Variant& v, std::ostream* os) { *os << to_string(v.model) << '/' << to_string(v.loss); }

class GradientSuite : public ::testing::TestWithParam<Variant> {};

std::string variant_name(const ::testing::TestParamInfo<Variant>& info) {
  return std::string(to_string(info.param.model)) + "_" + std::string(to_string(info.param.loss));
}

}  // namespace

TEST_P(GradientSuite, MatchesCentralDifferences) {
  const auto [model, loss] = GetParam();
  auto r = ttalign::testing::check_gradients(model, loss, 100, 17 + static_cast<int>(loss));
  EXPECT_EQ(r.instances, 100);
  EXPECT_LT(r.max_rel_error, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(AllVariants, GradientSuite,
                         ::testing::Values(Variant{ModelKind::Cbow, LossKind::Softmax},
                                           Variant{ModelKind::Cbow, LossKind::HierSoftmax},
                                           Variant{ModelKind::Cbow, LossKind::NegSampling},
                                           Variant{ModelKind::SkipGram, LossKind::Softmax},
                                           Variant{ModelKind::SkipGram, LossKind::HierSoftmax},
                                           Variant{ModelKind::SkipGram, LossKind::NegSampling}),
                         variant_name);

TEST(Normalization, SoftmaxSumsToOne) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(-8, 8);
  for (int trial = 0; trial < 500; ++trial) {
    const int v = std::uniform_int_distribution<int>(1, 40)(rng);
    const int d = std::uniform_int_distribution<int>(1, 8)(rng);
    Matrix n(v, d);
    for (auto& x : n.data()) x = w(rng);
    std::vector<real> h(d);
    for (auto& x : h) x = w(rng);
    double sum = 0;
    for (double p : softmax_probs(n, h)) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(Normalization, HuffmanLeafProbabilitiesSumToOne) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> w(-3, 3);
  for (int v = 2; v <= 32; ++v) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::int64_t> counts(v);
      for (auto& c : counts) c = std::uniform_int_distribution<int>(1, 100)(rng);
      std::sort(counts.rbegin(), counts.rend());
      auto huffman = build_huffman(counts);
      const int d = std::uniform_int_distribution<int>(1, 8)(rng);
      Matrix n(v, d);
      for (auto& x : n.data()) x = w(rng);
      std::vector<double> h(d);
      for (auto& x : h) x = w(rng);
      double sum = 0;
      for (double p : ttalign::testing::huffman_leaf_probabilities(n, h, huffman)) sum += p;
      EXPECT_NEAR(sum, 1.0, 1e-6) << "V=" << v;
    }
  }
}
