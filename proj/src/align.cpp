#include "ttalign/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace ttalign {

namespace {

class Patternizer {
 public:
  explicit Patternizer(const NameSet& logical) : logical_(logical) {}

  Pattern run(const Term& t) {
    Pattern p;
    p.skeleton = walk(t);
    p.key = std::move(key_);
    p.constants = std::move(holes_);
    return p;
  }

 private:
  void put_name(char tag, std::string_view name) {
    key_ += tag;
    key_ += std::to_string(name.size());
    key_ += ':';
    key_ += name;
  }

  TermPtr walk(const Term& t) {
    switch (t.kind()) {
      case TermKind::Id: {
        if (t.is_variable()) {
          for (std::size_t i = bound_.size(); i-- > 0;) {
            if (bound_[i] == t.name()) {
              key_ += 'B' + std::to_string(bound_.size() - 1 - i) + ';';
              return Term::var("x" + std::to_string(i));
            }
          }
          auto [it, _] = free_.try_emplace(t.name(), static_cast<int>(free_.size()));
          key_ += 'F' + std::to_string(it->second) + ';';
          return Term::var("f" + std::to_string(it->second));
        }
        if (logical_.contains(t.name())) {
          put_name('C', t.name());
          return Term::id(t.name());
        }
        auto it = std::find(holes_.begin(), holes_.end(), t.name());
        const auto k = static_cast<std::size_t>(it - holes_.begin()) + 1;
        if (it == holes_.end()) holes_.push_back(t.name());
        key_ += 'H' + std::to_string(k) + ';';
        return Term::id("?" + std::to_string(k));
      }
      case TermKind::Comb: {
        key_ += '(';
        auto f = walk(t.fun());
        auto a = walk(t.arg());
        key_ += ')';
        return Term::comb(std::move(f), std::move(a));
      }
      case TermKind::Abs: {
        key_ += '[';
        auto ty = walk(t.var_type());
        const std::string name = "x" + std::to_string(bound_.size());
        bound_.push_back(t.name());
        auto body = walk(t.body());
        bound_.pop_back();
        key_ += ']';
        return Term::abs(name, std::move(ty), std::move(body));
      }
    }
    return nullptr;
  }

  const NameSet& logical_;
  std::string key_;
  std::vector<std::string> holes_;
  std::vector<std::string> bound_;
  std::unordered_map<std::string, int> free_;
};

struct Library {
  std::vector<Pattern> patterns;
  std::unordered_map<std::string, std::int64_t> occurrences;  // terms containing each constant
};

Library analyse(std::span<const TermPtr> terms, const NameSet& logical) {
  Library lib;
  lib.patterns.resize(terms.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < terms.size(); ++i) {
    lib.patterns[i] = Patternizer(logical).run(*terms[i]);
  }
  for (const auto& p : lib.patterns) {
    for (const auto& c : p.constants) ++lib.occurrences[c];
  }
  return lib;
}

}  // namespace

Pattern patternify(const Term& t, const NameSet& logical) {
  return Patternizer(logical).run(t);
}

bool MatchSet::delta(int j, int i) const {
  const auto& row = induced.at(i);
  return std::find(row.begin(), row.end(), j) != row.end();
}

MatchSet enumerate_matches(std::span<const TermPtr> l1, std::span<const TermPtr> l2,
                           const NameSet& logical) {
  const Library a = analyse(l1, logical);
  const Library b = analyse(l2, logical);

  std::map<std::string_view, std::pair<std::vector<int>, std::vector<int>>> groups;
  for (int i = 0; i < static_cast<int>(a.patterns.size()); ++i) {
    groups[a.patterns[i].key].first.push_back(i);
  }
  for (int i = 0; i < static_cast<int>(b.patterns.size()); ++i) {
    auto it = groups.find(b.patterns[i].key);
    if (it != groups.end()) it->second.second.push_back(i);
  }

  MatchSet ms;
  std::unordered_map<std::string, int> pair_ids;
  std::string pair_key;
  for (const auto& [key, members] : groups) {
    const auto& [g1, g2] = members;
    const auto p = static_cast<std::int64_t>(g1.size() * g2.size());
    for (int i1 : g1) {
      for (int i2 : g2) {
        const auto& c1 = a.patterns[i1].constants;
        const auto& c2 = b.patterns[i2].constants;
        const int ti = static_cast<int>(ms.term_pairs.size());
        ms.term_pairs.push_back({i1, i2});
        std::vector<int> induced;
        for (std::size_t k = 0; k < c1.size(); ++k) {
          pair_key.assign(c1[k]);
          pair_key += '\0';
          pair_key += c2[k];
          auto [it, inserted] = pair_ids.try_emplace(pair_key, static_cast<int>(ms.n()));
          if (inserted) {
            ms.constant_pairs.push_back({c1[k], c2[k]});
            ms.inducing.emplace_back();
          }
          const int j = it->second;
          if (std::find(induced.begin(), induced.end(), j) == induced.end()) {
            induced.push_back(j);
            ms.inducing[j].push_back(ti);
          }
        }
        ms.q.push_back(static_cast<std::int64_t>(induced.size()));
        ms.p.push_back(p);
        ms.induced.push_back(std::move(induced));
      }
    }
  }
  for (const auto& cp : ms.constant_pairs) {
    ms.r1.push_back(a.occurrences.at(cp.first));
    ms.r2.push_back(b.occurrences.at(cp.second));
  }
  return ms;
}

MatchSet enumerate_matches(std::span<const TtItem> l1, std::span<const TtItem> l2,
                           const NameSet& logical) {
  std::vector<TermPtr> t1, t2;
  t1.reserve(l1.size());
  t2.reserve(l2.size());
  for (const auto& item : l1) t1.push_back(item.term);
  for (const auto& item : l2) t2.push_back(item.term);
  return enumerate_matches(t1, t2, logical);
}

double g(double x) {
  if (!(x >= 0)) throw std::domain_error("g is defined for x >= 0");
  return x / (x + 1.0);
}

double term_weight(std::int64_t p, std::int64_t q) {
  return 1.0 / (std::log(2.0 + static_cast<double>(p)) * std::log(2.0 + static_cast<double>(q)));
}

double constant_weight(std::int64_t r1, std::int64_t r2) {
  return 1.0 / std::log(2.0 + static_cast<double>(r1) * static_cast<double>(r2));
}

ScoreState score_iterate(const MatchSet& ms, double eps, int max_iters) {
  if (max_iters < 1) throw std::invalid_argument("max-iters must be at least 1");
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  const std::size_t m = ms.m();
  const std::size_t n = ms.n();
  ScoreState s;
  s.term_scores.assign(m, 0.0);
  s.const_scores.assign(n, 1.0);
  if (m == 0 || n == 0) {
    s.const_scores.assign(n, 0.0);
    s.converged = true;
    return s;
  }

  std::vector<double> wt(m), wc(n);
  for (std::size_t i = 0; i < m; ++i) wt[i] = term_weight(ms.p[i], ms.q[i]);
  for (std::size_t j = 0; j < n; ++j) wc[j] = constant_weight(ms.r1[j], ms.r2[j]);

  std::vector<double> terms_of_pair;
  for (int it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      double sum = 0;
      for (int j : ms.induced[i]) sum += s.const_scores[j];
      s.term_scores[i] = wt[i] * sum;
    }
    double delta = 0;
    for (std::size_t j = 0; j < n; ++j) {
      // Summing in sorted order makes the result independent of term-pair
      // enumeration order, so swapping the libraries gives identical scores.
      terms_of_pair.clear();
      for (int i : ms.inducing[j]) terms_of_pair.push_back(s.term_scores[i]);
      std::sort(terms_of_pair.begin(), terms_of_pair.end());
      double sum = 0;
      for (double t : terms_of_pair) sum += t;
      const double next = g(wc[j] * sum);
      delta = std::max(delta, std::abs(next - s.const_scores[j]));
      s.const_scores[j] = next;
    }
    s.iterations = it;
    s.last_delta = delta;
    if (delta < eps) {
      s.converged = true;
      break;
    }
  }
  return s;
}

std::vector<Alignment> rank_alignments(const ScoreState& state, const MatchSet& ms) {
  std::vector<Alignment> out;
  out.reserve(ms.n());
  for (std::size_t j = 0; j < ms.n(); ++j) {
    out.push_back({ms.constant_pairs[j].first, ms.constant_pairs[j].second,
                   state.const_scores.at(j)});
  }
  std::sort(out.begin(), out.end(), [](const Alignment& x, const Alignment& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.first != y.first) return x.first < y.first;
    return x.second < y.second;
  });
  return out;
}

void write_alignments(std::ostream& out, std::span<const Alignment> ranked) {
  char buf[64];
  for (const auto& a : ranked) {
    std::snprintf(buf, sizeof buf, "%.6f", a.score);
    out << a.first << '\t' << a.second << '\t' << buf << '\n';
  }
}

}  // namespace ttalign
