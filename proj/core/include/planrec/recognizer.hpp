#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "planrec/corpus.hpp"
#include "planrec/embedding.hpp"
#include "planrec/rng.hpp"

namespace planrec {

// |vocab| x M grid stored column by column (one column per plan position).
class WeightGrid {
 public:
  WeightGrid() = default;
  WeightGrid(std::size_t vocab_size, std::size_t length, double fill = 0.0)
      : vocab_(vocab_size), length_(length), values_(vocab_size * length, fill) {}

  std::size_t vocab_size() const noexcept { return vocab_; }
  std::size_t length() const noexcept { return length_; }

  double operator()(ActionId o, std::size_t y) const { return values_[y * vocab_ + o]; }
  double& operator()(ActionId o, std::size_t y) { return values_[y * vocab_ + o]; }

  std::span<const double> column(std::size_t y) const { return {values_.data() + y * vocab_, vocab_}; }
  std::span<double> column(std::size_t y) { return {values_.data() + y * vocab_, vocab_}; }

  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const WeightGrid&) const = default;

 private:
  std::size_t vocab_ = 0;
  std::size_t length_ = 0;
  std::vector<double> values_;
};

enum class GammaInit {
  kUniform,         // 1/|vocab| per hole entry, so every hole column sums to 1
  kInverseLength,   // 1/M per hole entry
};

// Per-position action weights. Observed columns are one-hot and immutable;
// hole columns carry the EM state.
class GammaMatrix {
 public:
  GammaMatrix() = default;
  GammaMatrix(const Observation& observation, std::size_t vocab_size,
              GammaInit init = GammaInit::kUniform);

  std::size_t vocab_size() const noexcept { return weights_.vocab_size(); }
  std::size_t length() const noexcept { return weights_.length(); }
  const std::vector<std::size_t>& hole_columns() const noexcept { return holes_; }
  bool is_hole(std::size_t y) const { return !observed_.at(y).has_value(); }
  std::optional<ActionId> observed(std::size_t y) const { return observed_.at(y); }

  double operator()(ActionId o, std::size_t y) const { return weights_(o, y); }
  std::span<const double> column(std::size_t y) const { return weights_.column(y); }
  // Mutable access to a hole column; throws kIndex for observed columns.
  std::span<double> hole_column(std::size_t y);

  const WeightGrid& weights() const noexcept { return weights_; }

  // Column normalized to sum 1 (uniform when the column sums to 0).
  std::vector<double> sampling_view(std::size_t y) const;

  bool operator==(const GammaMatrix&) const = default;

 private:
  WeightGrid weights_;
  std::vector<std::optional<ActionId>> observed_;
  std::vector<std::size_t> holes_;
};

enum class Projection {
  // Affine map of [min(lo, 0), max(hi, 1)] onto [0, 1]: identity on columns
  // already inside the unit interval.
  kUnitHull,
  // Affine map of [lo, hi] onto [0, 1].
  kMinMax,
};

struct DupConfig {
  std::size_t iterations = 1000;
  double delta = 0.01;
  std::size_t m = 10;
  std::size_t window = 0;  // 0 = use the model's window; otherwise must match it
  std::uint64_t seed = 1;
  GammaInit init = GammaInit::kUniform;
  Projection projection = Projection::kUnitHull;

  void validate(const EmbeddingModel& model) const;
};

struct Suggestion {
  ActionId action = 0;
  double weight = 0.0;

  bool operator==(const Suggestion&) const = default;
};

struct HoleSuggestions {
  std::size_t position = 0;
  std::vector<Suggestion> ranked;

  bool operator==(const HoleSuggestions&) const = default;
};

struct RecognitionResult {
  Plan completed;
  std::vector<HoleSuggestions> suggestions;  // one entry per hole, in position order
  double objective = 0.0;
  GammaMatrix gamma;

  bool operator==(const RecognitionResult&) const = default;
};

// Unweighted plan log-likelihood: sum over positions k and in-window offsets
// j != 0 of log p(w_{k+j} | w_k). Positions are 0-based throughout.
double score_plan(const EmbeddingModel& model, std::span<const ActionId> actions);
inline double score_plan(const EmbeddingModel& model, const Plan& plan) {
  return score_plan(model, plan.actions);
}

// Weighted pair term: sum_i log sigmoid(code_i * a * b * (v'_{n_i} . v_{w_k}))
// with a = gamma(w_{k+j}, k+j) and b = gamma(w_k, k).
double weighted_log_prob(const EmbeddingModel& model, const GammaMatrix& gamma, std::size_t k,
                         std::ptrdiff_t j, std::span<const ActionId> actions);

// Sum of weighted_log_prob over all positions and in-window offsets.
double objective(const EmbeddingModel& model, const GammaMatrix& gamma,
                 std::span<const ActionId> actions);

// d objective / d gamma. Only the entry (actions[x], x) of each hole column x
// can be non-zero; observed columns are identically zero.
WeightGrid grad_gamma(const EmbeddingModel& model, const GammaMatrix& gamma,
                      std::span<const ActionId> actions);

// Maps every hole column affinely onto [0, 1] (see Projection); constant
// columns become 0.5. Throws kNumeric on non-finite entries.
void project_gamma_in_place(GammaMatrix& gamma, Projection mode = Projection::kUnitHull);
GammaMatrix project_gamma(GammaMatrix gamma, Projection mode = Projection::kUnitHull);

// Observed positions copy their action; holes are drawn from sampling_view.
std::vector<ActionId> sample_holes(const GammaMatrix& gamma, Rng& rng);
std::vector<ActionId> sample_holes(const GammaMatrix& gamma, std::uint64_t seed);

// Top-m actions of column y by weight descending, ties by action id.
std::vector<Suggestion> top_suggestions(const GammaMatrix& gamma, std::size_t y, std::size_t m);

RecognitionResult dup_recognize(const EmbeddingModel& model, const Observation& observation,
                                const DupConfig& config);

struct ExhaustiveResult {
  Plan plan;
  double score = 0.0;
  std::uint64_t candidates = 0;
};

inline constexpr std::uint64_t kExhaustiveGuard = 1'000'000;

// Enumerates every hole assignment (lexicographic by position, then action
// id) and keeps the first maximum of score_plan. Throws kTooLarge when
// |vocab|^X exceeds `guard`.
ExhaustiveResult exhaustive_recognize(const EmbeddingModel& model, const Observation& observation,
                                      std::uint64_t guard = kExhaustiveGuard);

}  // namespace planrec
