#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace ttalign::testing {

namespace {

double row_dot(const Matrix& a, int row, std::span<const double> h) {
  double s = 0;
  for (std::size_t c = 0; c < h.size(); ++c) s += a(row, c) * h[c];
  return s;
}

double log_sig(double x) { return -std::log1p(std::exp(-x)); }

}  // namespace

double output_nll(const Matrix& n, std::span<const double> h, int target, LossKind loss,
                  const HuffmanCoding& huffman, std::span<const int> negatives) {
  switch (loss) {
    case LossKind::Softmax: {
      std::vector<double> z(n.rows());
      for (std::size_t u = 0; u < n.rows(); ++u) z[u] = row_dot(n, static_cast<int>(u), h);
      const double top = *std::max_element(z.begin(), z.end());
      double sum = 0;
      for (double v : z) sum += std::exp(v - top);
      return -(z[target] - top - std::log(sum));
    }
    case LossKind::HierSoftmax: {
      double nll = 0;
      for (std::size_t i = 0; i < huffman.paths[target].size(); ++i) {
        const double x = row_dot(n, huffman.paths[target][i], h);
        nll -= huffman.codes[target][i] ? log_sig(-x) : log_sig(x);
      }
      return nll;
    }
    case LossKind::NegSampling: {
      double nll = -log_sig(row_dot(n, target, h));
      for (int neg : negatives) nll -= log_sig(-row_dot(n, neg, h));
      return nll;
    }
  }
  return 0;
}

double cbow_objective(const Matrix& m, const Matrix& n, const ContextSample& s, LossKind loss,
                      const HuffmanCoding& huffman, std::span<const int> negatives) {
  std::vector<double> h(m.cols(), 0.0);
  for (int u : s.context) {
    for (std::size_t c = 0; c < m.cols(); ++c) h[c] += m(u, c);
  }
  for (double& x : h) x /= static_cast<double>(s.context.size());
  return output_nll(n, h, s.target, loss, huffman, negatives);
}

double skipgram_objective(const Matrix& m, const Matrix& n, const ContextSample& s,
                          LossKind loss, const HuffmanCoding& huffman,
                          std::span<const int> negatives, int k) {
  std::vector<double> h(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) h[c] = m(s.target, c);
  double total = 0;
  std::size_t used = 0;
  for (int u : s.context) {
    std::span<const int> negs;
    if (loss == LossKind::NegSampling) {
      negs = negatives.subspan(used, static_cast<std::size_t>(k));
      used += static_cast<std::size_t>(k);
    }
    total += output_nll(n, h, u, loss, huffman, negs);
  }
  return total;
}

std::vector<double> huffman_leaf_probabilities(const Matrix& n, std::span<const double> h,
                                               const HuffmanCoding& huffman) {
  std::vector<double> out;
  for (int w = 0; w < huffman.leaves(); ++w) {
    double p = 1;
    for (std::size_t i = 0; i < huffman.paths[w].size(); ++i) {
      const double x = row_dot(n, huffman.paths[w][i], h);
      const double s = 1.0 / (1.0 + std::exp(-x));
      p *= huffman.codes[w][i] ? 1.0 - s : s;
    }
    out.push_back(p);
  }
  return out;
}

std::int64_t optimal_code_cost(std::span<const std::int64_t> counts) {
  const int v = static_cast<int>(counts.size());
  if (v <= 1) return 0;
  // Lengths 1..v-1 with Kraft sum exactly 1, checked in units of 2^-(v-1).
  std::vector<int> len(v, 1);
  const std::int64_t unit = std::int64_t{1} << (v - 1);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::function<void(int)> rec = [&](int i) {
    if (i == v) {
      std::int64_t kraft = 0, cost = 0;
      for (int j = 0; j < v; ++j) {
        kraft += unit >> len[j];
        cost += counts[j] * len[j];
      }
      if (kraft == unit) best = std::min(best, cost);
      return;
    }
    for (int l = 1; l <= v - 1; ++l) {
      len[i] = l;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

std::pair<std::string, std::vector<std::string>> oracle_pattern(const Term& t,
                                                                const NameSet& logical) {
  std::vector<std::string> holes;
  std::vector<std::string> frees;
  std::vector<std::string> scope;
  std::function<std::string(const Term&)> show = [&](const Term& u) -> std::string {
    if (u.is_comb()) {
      std::string f = show(u.fun());
      std::string a = show(u.arg());
      return "{" + f + "," + a + "}";
    }
    if (u.is_abs()) {
      std::string ty = show(u.var_type());
      scope.push_back(u.name());
      std::string body = show(u.body());
      scope.pop_back();
      return "<" + ty + "|" + body + ">";
    }
    if (u.is_variable()) {
      for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
        if (scope[i] == u.name()) return "db" + std::to_string(scope.size() - 1 - i);
      }
      auto it = std::find(frees.begin(), frees.end(), u.name());
      if (it == frees.end()) {
        frees.push_back(u.name());
        it = frees.end() - 1;
      }
      return "fv" + std::to_string(it - frees.begin());
    }
    if (logical.count(u.name())) return "'" + u.name() + "'";
    auto it = std::find(holes.begin(), holes.end(), u.name());
    if (it == holes.end()) {
      holes.push_back(u.name());
      it = holes.end() - 1;
    }
    return "?" + std::to_string(it - holes.begin());
  };
  std::string key = show(t);
  return {key, holes};
}

PairScores straight_line_scores(std::span<const TermPtr> l1, std::span<const TermPtr> l2,
                                const NameSet& logical, int iterations) {
  std::vector<std::pair<std::string, std::vector<std::string>>> p1, p2;
  for (const auto& t : l1) p1.push_back(oracle_pattern(*t, logical));
  for (const auto& t : l2) p2.push_back(oracle_pattern(*t, logical));

  // Term pairs, constant pairs and the dense delta matrix.
  std::vector<std::pair<int, int>> tp;
  for (int a = 0; a < static_cast<int>(p1.size()); ++a) {
    for (int b = 0; b < static_cast<int>(p2.size()); ++b) {
      if (p1[a].first == p2[b].first) tp.emplace_back(a, b);
    }
  }
  std::vector<std::pair<std::string, std::string>> cp;
  for (auto [a, b] : tp) {
    for (std::size_t k = 0; k < p1[a].second.size(); ++k) {
      std::pair<std::string, std::string> pr{p1[a].second[k], p2[b].second[k]};
      if (std::find(cp.begin(), cp.end(), pr) == cp.end()) cp.push_back(pr);
    }
  }
  const std::size_t m = tp.size(), n = cp.size();
  std::vector<std::vector<int>> delta(n, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    auto [a, b] = tp[i];
    for (std::size_t k = 0; k < p1[a].second.size(); ++k) {
      std::pair<std::string, std::string> pr{p1[a].second[k], p2[b].second[k]};
      auto j = std::find(cp.begin(), cp.end(), pr) - cp.begin();
      delta[j][i] = 1;
    }
  }

  std::vector<double> wt(m), wc(n);
  for (std::size_t i = 0; i < m; ++i) {
    double p = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (p1[tp[k].first].first == p1[tp[i].first].first) p += 1;
    }
    double q = 0;
    for (std::size_t j = 0; j < n; ++j) q += delta[j][i];
    wt[i] = 1.0 / std::log(2.0 + p) * (1.0 / std::log(2.0 + q));
  }
  auto containing = [](const auto& pats, const std::string& c) {
    double r = 0;
    for (const auto& p : pats) {
      if (std::find(p.second.begin(), p.second.end(), c) != p.second.end()) r += 1;
    }
    return r;
  };
  for (std::size_t j = 0; j < n; ++j) {
    wc[j] = 1.0 / std::log(2.0 + containing(p1, cp[j].first) * containing(p2, cp[j].second));
  }

  std::vector<double> sc(n, 1.0), st(m, 0.0);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0;
      for (std::size_t l = 0; l < n; ++l) s += delta[l][i] * sc[l];
      st[i] = wt[i] * s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < m; ++k) s += delta[j][k] * st[k];
      const double x = wc[j] * s;
      sc[j] = x / (x + 1.0);
    }
  }
  PairScores out;
  for (std::size_t j = 0; j < n; ++j) out[cp[j]] = sc[j];
  return out;
}

}  // namespace ttalign::testing
