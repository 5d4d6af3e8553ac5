#include "planrec/recognizer.hpp"

#include <algorithm>
#include <limits>

#include "planrec/error.hpp"

namespace planrec {
namespace {

void check_actions(const EmbeddingModel& model, std::span<const ActionId> actions) {
  for (ActionId a : actions) {
    if (a >= model.vocab_size()) fail(ErrorCode::kIndex, "action id " + std::to_string(a) + " out of range");
  }
}

void check_shape(const EmbeddingModel& model, const GammaMatrix& gamma,
                 std::span<const ActionId> actions) {
  if (gamma.length() != actions.size()) {
    fail(ErrorCode::kShapeMismatch, "gamma has " + std::to_string(gamma.length()) +
                                        " columns but the plan has " + std::to_string(actions.size()));
  }
  if (gamma.vocab_size() != model.vocab_size()) {
    fail(ErrorCode::kShapeMismatch, "gamma rows differ from the model vocabulary");
  }
  check_actions(model, actions);
}

// Pair term with explicit scale a * b on every path score.
double scaled_pair(const EmbeddingModel& model, ActionId output, ActionId center, double scale) {
  const auto path = model.tree().path(output);
  const auto code = model.tree().code(output);
  const auto v = model.input(center);
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    total += log_sigmoid(scale * code[i] * dot(model.inner(path[i]), v));
  }
  return total;
}

// Calls fn(k, q) for every ordered in-window pair (center k, output q).
template <typename Fn>
void for_each_pair(std::size_t length, std::size_t window, Fn&& fn) {
  for (std::size_t k = 0; k < length; ++k) {
    const std::size_t lo = k >= window ? k - window : 0;
    const std::size_t hi = std::min(length - 1, k + window);
    for (std::size_t q = lo; q <= hi; ++q) {
      if (q != k) fn(k, q);
    }
  }
}

}  // namespace

GammaMatrix::GammaMatrix(const Observation& observation, std::size_t vocab_size, GammaInit init)
    : weights_(vocab_size, observation.size(), 0.0),
      observed_(observation.slots()),
      holes_(observation.hole_indices()) {
  if (vocab_size == 0) fail(ErrorCode::kDegenerateVocabulary, "gamma needs a non-empty vocabulary");
  const double hole_value = init == GammaInit::kUniform
                                ? 1.0 / static_cast<double>(vocab_size)
                                : 1.0 / static_cast<double>(std::max<std::size_t>(1, observation.size()));
  for (std::size_t y = 0; y < observed_.size(); ++y) {
    if (const auto& o = observed_[y]) {
      if (*o >= vocab_size) {
        fail(ErrorCode::kUnknownAction, "observed action id " + std::to_string(*o) + " not in vocabulary");
      }
      weights_(*o, y) = 1.0;
    } else {
      auto col = weights_.column(y);
      std::fill(col.begin(), col.end(), hole_value);
    }
  }
}

std::span<double> GammaMatrix::hole_column(std::size_t y) {
  if (!is_hole(y)) fail(ErrorCode::kIndex, "column " + std::to_string(y) + " is observed");
  return weights_.column(y);
}

std::vector<double> GammaMatrix::sampling_view(std::size_t y) const {
  const auto col = column(y);
  std::vector<double> out(col.begin(), col.end());
  double sum = 0.0;
  for (double x : out) sum += x;
  if (sum > 0.0) {
    for (double& x : out) x /= sum;
  } else {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
  }
  return out;
}

void DupConfig::validate(const EmbeddingModel& model) const {
  if (iterations < 1) fail(ErrorCode::kInvalidConfig, "iterations must be at least 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::kInvalidConfig, "delta must be positive");
  if (m < 1 || m > model.vocab_size()) {
    fail(ErrorCode::kInvalidConfig, "m must lie in [1, " + std::to_string(model.vocab_size()) + "]");
  }
  if (window != 0 && window != model.window()) {
    fail(ErrorCode::kInvalidConfig, "recognition window " + std::to_string(window) +
                                        " differs from the model window " + std::to_string(model.window()));
  }
}

double score_plan(const EmbeddingModel& model, std::span<const ActionId> actions) {
  check_actions(model, actions);
  double total = 0.0;
  for_each_pair(actions.size(), model.window(),
                [&](std::size_t k, std::size_t q) { total += log_prob(model, actions[q], actions[k]); });
  return total;
}

double weighted_log_prob(const EmbeddingModel& model, const GammaMatrix& gamma, std::size_t k,
                         std::ptrdiff_t j, std::span<const ActionId> actions) {
  check_shape(model, gamma, actions);
  const auto q = static_cast<std::ptrdiff_t>(k) + j;
  if (j == 0 || k >= actions.size() || q < 0 || q >= static_cast<std::ptrdiff_t>(actions.size())) {
    fail(ErrorCode::kIndex, "pair position out of range");
  }
  const auto uq = static_cast<std::size_t>(q);
  const double a = gamma(actions[uq], uq);
  const double b = gamma(actions[k], k);
  return scaled_pair(model, actions[uq], actions[k], a * b);
}

double objective(const EmbeddingModel& model, const GammaMatrix& gamma,
                 std::span<const ActionId> actions) {
  check_shape(model, gamma, actions);
  double total = 0.0;
  for_each_pair(actions.size(), model.window(), [&](std::size_t k, std::size_t q) {
    const double a = gamma(actions[q], q);
    const double b = gamma(actions[k], k);
    total += scaled_pair(model, actions[q], actions[k], a * b);
  });
  return total;
}

WeightGrid grad_gamma(const EmbeddingModel& model, const GammaMatrix& gamma,
                      std::span<const ActionId> actions) {
  check_shape(model, gamma, actions);
  WeightGrid grad(gamma.vocab_size(), gamma.length(), 0.0);
  for_each_pair(actions.size(), model.window(), [&](std::size_t k, std::size_t q) {
    const bool q_hole = gamma.is_hole(q);
    const bool k_hole = gamma.is_hole(k);
    if (!q_hole && !k_hole) return;  // constant term
    const ActionId out = actions[q];
    const ActionId center = actions[k];
    const double a = gamma(out, q);
    const double b = gamma(center, k);
    const auto path = model.tree().path(out);
    const auto code = model.tree().code(out);
    const auto v = model.input(center);
    double da = 0.0;
    double db = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const double s = code[i] * dot(model.inner(path[i]), v);
      // d/dt log sigmoid(t) = sigmoid(-t), t = a * b * s
      const double w = sigmoid(-a * b * s) * s;
      da += w * b;
      db += w * a;
    }
    if (q_hole) grad(out, q) += da;
    if (k_hole) grad(center, k) += db;
  });
  return grad;
}

void project_gamma_in_place(GammaMatrix& gamma, Projection mode) {
  for (std::size_t y : gamma.hole_columns()) {
    auto col = gamma.hole_column(y);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : col) {
      if (!std::isfinite(x)) fail(ErrorCode::kNumeric, "non-finite gamma entry in column " + std::to_string(y));
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi == lo) {
      std::fill(col.begin(), col.end(), 0.5);
      continue;
    }
    if (mode == Projection::kUnitHull) {
      lo = std::min(lo, 0.0);
      hi = std::max(hi, 1.0);
    }
    const double span = hi - lo;
    for (double& x : col) x = (x - lo) / span;
  }
}

GammaMatrix project_gamma(GammaMatrix gamma, Projection mode) {
  project_gamma_in_place(gamma, mode);
  return gamma;
}

std::vector<ActionId> sample_holes(const GammaMatrix& gamma, Rng& rng) {
  std::vector<ActionId> actions(gamma.length(), 0);
  for (std::size_t y = 0; y < gamma.length(); ++y) {
    if (auto o = gamma.observed(y)) {
      actions[y] = *o;
      continue;
    }
    const auto col = gamma.column(y);
    double sum = 0.0;
    for (double x : col) sum += std::max(0.0, x);
    if (!(sum > 0.0)) {
      actions[y] = static_cast<ActionId>(uniform_below(rng, col.size()));
      continue;
    }
    const double target = uniform01(rng) * sum;
    double acc = 0.0;
    ActionId pick = 0;
    for (ActionId o = 0; o < col.size(); ++o) {
      const double w = std::max(0.0, col[o]);
      if (w <= 0.0) continue;
      pick = o;  // last positive entry absorbs rounding at the top end
      acc += w;
      if (target < acc) break;
    }
    actions[y] = pick;
  }
  return actions;
}

std::vector<ActionId> sample_holes(const GammaMatrix& gamma, std::uint64_t seed) {
  Rng rng(seed);
  return sample_holes(gamma, rng);
}

std::vector<Suggestion> top_suggestions(const GammaMatrix& gamma, std::size_t y, std::size_t m) {
  const auto col = gamma.column(y);
  std::vector<ActionId> ids(col.size());
  for (ActionId o = 0; o < ids.size(); ++o) ids[o] = o;
  m = std::min(m, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m), ids.end(),
                    [&](ActionId a, ActionId b) {
                      if (col[a] != col[b]) return col[a] > col[b];
                      return a < b;
                    });
  std::vector<Suggestion> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back({ids[i], col[ids[i]]});
  return out;
}

RecognitionResult dup_recognize(const EmbeddingModel& model, const Observation& observation,
                                const DupConfig& config) {
  config.validate(model);
  if (observation.size() == 0) fail(ErrorCode::kInvalidInput, "observation is empty");

  RecognitionResult result;
  result.gamma = GammaMatrix(observation, model.vocab_size(), config.init);
  GammaMatrix& gamma = result.gamma;

  if (observation.hole_count() > 0) {
    Rng rng(config.seed);
    for (std::size_t r = 0; r < config.iterations; ++r) {
      const auto sampled = sample_holes(gamma, rng);
      const WeightGrid grad = grad_gamma(model, gamma, sampled);
      for (std::size_t y : gamma.hole_columns()) {
        auto col = gamma.hole_column(y);
        const auto g = grad.column(y);
        for (std::size_t o = 0; o < col.size(); ++o) col[o] += config.delta * g[o];
      }
      project_gamma_in_place(gamma, config.projection);
    }
  }

  result.completed.actions.resize(observation.size());
  for (std::size_t y = 0; y < observation.size(); ++y) {
    if (auto o = gamma.observed(y)) result.completed.actions[y] = *o;
  }
  for (std::size_t y : gamma.hole_columns()) {
    auto ranked = top_suggestions(gamma, y, config.m);
    result.completed.actions[y] = ranked.front().action;
    result.suggestions.push_back({y, std::move(ranked)});
  }
  result.objective = objective(model, gamma, result.completed.actions);
  return result;
}

ExhaustiveResult exhaustive_recognize(const EmbeddingModel& model, const Observation& observation,
                                      std::uint64_t guard) {
  if (observation.size() == 0) fail(ErrorCode::kInvalidInput, "observation is empty");
  const std::uint64_t v = model.vocab_size();
  const auto& holes = observation.hole_indices();
  std::uint64_t candidates = 1;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    if (candidates > guard / v) {
      fail(ErrorCode::kTooLarge, "search space |vocab|^X exceeds the guard of " + std::to_string(guard));
    }
    candidates *= v;
  }
  if (candidates > guard) {
    fail(ErrorCode::kTooLarge, "search space |vocab|^X exceeds the guard of " + std::to_string(guard));
  }

  std::vector<ActionId> actions(observation.size(), 0);
  for (std::size_t y = 0; y < observation.size(); ++y) {
    if (const auto& o = observation.slots()[y]) actions[y] = *o;
  }
  check_actions(model, actions);

  ExhaustiveResult best;
  best.score = -std::numeric_limits<double>::infinity();
  best.candidates = candidates;
  // odometer over hole assignments; the last hole varies fastest
  std::vector<ActionId> digits(holes.size(), 0);
  for (std::uint64_t n = 0; n < candidates; ++n) {
    for (std::size_t i = 0; i < holes.size(); ++i) actions[holes[i]] = digits[i];
    const double s = score_plan(model, actions);
    if (s > best.score) {
      best.score = s;
      best.plan.actions = actions;
    }
    for (std::size_t i = holes.size(); i-- > 0;) {
      if (++digits[i] < v) break;
      digits[i] = 0;
    }
  }
  return best;
}

}  // namespace planrec
