// Test-only reference implementations. Nothing here calls the code under test
// for the quantity it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planrec/corpus.hpp"
#include "planrec/embedding.hpp"
#include "planrec/generators.hpp"
#include "planrec/huffman.hpp"
#include "planrec/recognizer.hpp"
#include "planrec/rng.hpp"

namespace planrec::testing {

// The four-plan blocks library used throughout the docs.
inline const std::vector<std::vector<std::string>>& example_plans() {
  static const std::vector<std::vector<std::string>> plans{
      {"pick-up-B", "stack-B-A", "pick-up-D", "stack-D-C"},
      {"unstack-B-A", "put-down-B", "unstack-D-C", "put-down-D"},
      {"pick-up-B", "stack-B-A", "pick-up-C", "stack-C-B", "pick-up-D", "stack-D-C"},
      {"unstack-D-C", "put-down-D", "unstack-C-B", "put-down-C", "unstack-B-A", "put-down-B"},
  };
  return plans;
}

inline std::string example_corpus_text() {
  std::string text = "# example library\n";
  for (const auto& plan : example_plans()) {
    for (std::size_t i = 0; i < plan.size(); ++i) text += (i ? " " : "") + plan[i];
    text += "\n";
  }
  return text;
}

inline Vocabulary make_vocab(const std::vector<std::uint64_t>& counts) {
  Vocabulary v;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const ActionId id = v.intern("a" + std::to_string(i));
    v.set_count(id, counts[i]);
  }
  return v;
}

// Model with random vectors in [-scale, scale] over a random-count vocabulary.
inline EmbeddingModel random_model(Rng& rng, std::size_t vocab_size, std::size_t dim, std::size_t window,
                                   double scale = 1.0) {
  std::vector<std::uint64_t> counts(vocab_size);
  for (auto& c : counts) c = 1 + uniform_below(rng, 20);
  Vocabulary vocab = make_vocab(counts);
  HuffmanTree tree = build_huffman(vocab);
  Matrix in(vocab_size, dim), inner(vocab_size - 1, dim);
  for (double& x : in.data()) x = scale * (2.0 * uniform01(rng) - 1.0);
  for (double& x : inner.data()) x = scale * (2.0 * uniform01(rng) - 1.0);
  return EmbeddingModel(std::move(vocab), std::move(tree), dim, window, std::move(in), std::move(inner));
}

// Equal counts over four leaves give a balanced two-level tree; inner vectors zero.
inline EmbeddingModel zero_inner_model(std::size_t vocab_size = 4, std::size_t dim = 3, std::size_t window = 2) {
  Vocabulary vocab = make_vocab(std::vector<std::uint64_t>(vocab_size, 5));
  HuffmanTree tree = build_huffman(vocab);
  Matrix in(vocab_size, dim, 0.3), inner(vocab_size - 1, dim, 0.0);
  return EmbeddingModel(std::move(vocab), std::move(tree), dim, window, std::move(in), std::move(inner));
}

inline std::vector<ActionId> random_plan(Rng& rng, std::size_t vocab_size, std::size_t length) {
  std::vector<ActionId> p(length);
  for (auto& a : p) a = static_cast<ActionId>(uniform_below(rng, vocab_size));
  return p;
}

// ---- scoring oracles --------------------------------------------------------

inline double naive_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double naive_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// log prod_i sigma(code_i * scale * v'_node . v_center), via plain log().
inline double oracle_pair(const EmbeddingModel& m, ActionId out, ActionId center, double scale = 1.0) {
  double s = 0.0;
  const auto path = m.tree().path(out);
  const auto code = m.tree().code(out);
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += std::log(naive_sigmoid(code[i] * scale * naive_dot(m.inner(path[i]), m.input(center))));
  }
  return s;
}

// Double loop over every ordered (k, t) with 0 < |t - k| <= c.
inline double oracle_score(const EmbeddingModel& m, const std::vector<ActionId>& plan) {
  const long c = static_cast<long>(m.window());
  const long n = static_cast<long>(plan.size());
  double s = 0.0;
  for (long k = 0; k < n; ++k)
    for (long t = 0; t < n; ++t)
      if (t != k && std::labs(t - k) <= c) s += oracle_pair(m, plan[t], plan[k]);
  return s;
}

// Weighted objective from an explicit weight lookup w(position).
inline double oracle_objective(const EmbeddingModel& m, const std::vector<ActionId>& plan,
                               const std::function<double(std::size_t)>& weight) {
  const long c = static_cast<long>(m.window());
  const long n = static_cast<long>(plan.size());
  double s = 0.0;
  for (long k = 0; k < n; ++k)
    for (long t = 0; t < n; ++t)
      if (t != k && std::labs(t - k) <= c) s += oracle_pair(m, plan[t], plan[k], weight(t) * weight(k));
  return s;
}

struct OracleBest {
  std::vector<ActionId> plan;
  double score = -std::numeric_limits<double>::infinity();
  std::uint64_t visited = 0;
};

// Recursive enumeration over hole fillings.
inline OracleBest oracle_exhaustive(const EmbeddingModel& m, const Observation& obs) {
  OracleBest best;
  std::vector<ActionId> cur(obs.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == obs.size()) {
      ++best.visited;
      const double s = oracle_score(m, cur);
      if (s > best.score) {
        best.score = s;
        best.plan = cur;
      }
      return;
    }
    if (obs.slots()[pos]) {
      cur[pos] = *obs.slots()[pos];
      rec(pos + 1);
      return;
    }
    for (ActionId a = 0; a < m.vocab_size(); ++a) {
      cur[pos] = a;
      rec(pos + 1);
    }
  };
  rec(0);
  return best;
}

// ---- Huffman oracle ---------------------------------------------------------

// Minimum weighted code length over every full binary tree: try every merge
// order (each internal node adds the weight of its subtree).
inline std::uint64_t oracle_min_weighted_length(std::vector<std::uint64_t> w) {
  if (w.size() <= 1) return 0;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      std::vector<std::uint64_t> next;
      for (std::size_t k = 0; k < w.size(); ++k)
        if (k != i && k != j) next.push_back(w[k]);
      next.push_back(w[i] + w[j]);
      best = std::min(best, w[i] + w[j] + oracle_min_weighted_length(next));
    }
  return best;
}

// ---- domain simulators ------------------------------------------------------

// Replays blocks actions with STRIPS preconditions. Returns the final state, or
// nullopt at the first inapplicable action.
inline std::optional<BlocksState> simulate_blocks(BlocksState s, const std::vector<std::string>& plan) {
  const int n = static_cast<int>(s.below.size());
  std::optional<int> held;
  auto parse = [&](const std::string& name) -> int {
    for (int b = 0; b < n; ++b)
      if (block_name(b) == name) return b;
    return -2;
  };
  auto clear = [&](int b) {
    for (int x = 0; x < n; ++x)
      if (s.below[x] == b && !(held && *held == x)) return false;
    return !(held && *held == b);
  };
  auto split = [](const std::string& a) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : a) {
      if (ch == '-') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  for (const auto& a : plan) {
    auto p = split(a);
    if (p.size() == 3 && p[0] == "pick" && p[1] == "up") {
      p = {"pick-up", p[2]};
    } else if (p.size() == 3 && p[0] == "put" && p[1] == "down") {
      p = {"put-down", p[2]};
    }
    if (p[0] == "pick-up" && p.size() == 2) {
      const int x = parse(p[1]);
      if (x < 0 || held || s.below[x] != kTable || !clear(x)) return std::nullopt;
      held = x;
    } else if (p[0] == "put-down" && p.size() == 2) {
      const int x = parse(p[1]);
      if (x < 0 || !held || *held != x) return std::nullopt;
      s.below[x] = kTable;
      held.reset();
    } else if (p[0] == "unstack" && p.size() == 3) {
      const int x = parse(p[1]), y = parse(p[2]);
      if (x < 0 || y < 0 || held || s.below[x] != y || !clear(x)) return std::nullopt;
      held = x;
    } else if (p[0] == "stack" && p.size() == 3) {
      const int x = parse(p[1]), y = parse(p[2]);
      if (x < 0 || y < 0 || x == y || !held || *held != x || !clear(y)) return std::nullopt;
      s.below[x] = y;
      held.reset();
    } else {
      return std::nullopt;
    }
  }
  if (held) return std::nullopt;
  return s;
}

struct RouteState {
  int truck = 0;
  std::vector<int> at;  // package location, -1 while loaded
};

// Replays route actions; drives must move between ring neighbours.
inline std::optional<RouteState> simulate_route(const RouteProblem& problem, const std::vector<std::string>& plan) {
  RouteState s{problem.truck, problem.origin};
  const int n = problem.n_locations;
  auto loc = [&](const std::string& name) {
    for (int l = 0; l < n; ++l)
      if (location_name(l) == name) return l;
    return -1;
  };
  auto pkg = [&](const std::string& name) {
    for (int p = 0; p < static_cast<int>(s.at.size()); ++p)
      if (package_name(p) == name) return p;
    return -1;
  };
  for (const auto& a : plan) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : a) {
      if (ch == '-') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) return std::nullopt;
    if (parts[0] == "drive") {
      const int from = loc(parts[1]), to = loc(parts[2]);
      if (from != s.truck || to < 0) return std::nullopt;
      if (to != (from + 1) % n && from != (to + 1) % n) return std::nullopt;
      s.truck = to;
    } else if (parts[0] == "load") {
      const int p = pkg(parts[1]), l = loc(parts[2]);
      if (p < 0 || l != s.truck || s.at[p] != l) return std::nullopt;
      s.at[p] = -1;
    } else if (parts[0] == "unload") {
      const int p = pkg(parts[1]), l = loc(parts[2]);
      if (p < 0 || l != s.truck || s.at[p] != -1) return std::nullopt;
      s.at[p] = l;
    } else {
      return std::nullopt;
    }
  }
  return s;
}

}  // namespace planrec::testing
