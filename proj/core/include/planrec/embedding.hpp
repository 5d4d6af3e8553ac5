#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "planrec/corpus.hpp"
#include "planrec/huffman.hpp"

namespace planrec {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct TrainConfig {
  std::size_t dim = 64;
  std::size_t window = 3;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;

  void validate() const;
};

// Skip-gram model with hierarchical softmax output.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocabulary, HuffmanTree tree, std::size_t dim, std::size_t window,
                 Matrix input_vectors, Matrix inner_vectors);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t window() const noexcept { return window_; }
  std::size_t vocab_size() const noexcept { return vocabulary_.size(); }
  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  const HuffmanTree& tree() const noexcept { return tree_; }
  const Matrix& input_vectors() const noexcept { return input_; }
  const Matrix& inner_vectors() const noexcept { return inner_; }

  std::span<const double> input(ActionId id) const { return input_.row(id); }
  std::span<const double> inner(std::size_t node) const { return inner_.row(node); }

  bool operator==(const EmbeddingModel&) const = default;

 private:
  friend class SkipGramTrainer;

  Vocabulary vocabulary_;
  HuffmanTree tree_;
  std::size_t dim_ = 0;
  std::size_t window_ = 0;
  Matrix input_;   // |vocab| x dim
  Matrix inner_;   // (|vocab|-1) x dim
};

// log p(output | center) under the hierarchical softmax.
double log_prob(const EmbeddingModel& model, ActionId output, ActionId center);

// p(. | center) over the whole vocabulary.
std::vector<double> predict_distribution(const EmbeddingModel& model, ActionId center);

// Number of ordered (center, context) pairs a plan of `length` contributes
// when windows are truncated at the plan boundaries.
std::size_t count_window_pairs(std::size_t length, std::size_t window);

// Average per-word log-likelihood of `library` (mean over all words of the
// summed in-window log probabilities).
double average_log_likelihood(const EmbeddingModel& model, const PlanLibrary& library);

// Fresh model: uniform input vectors in [-0.5/dim, 0.5/dim], zero inner vectors.
EmbeddingModel initialize_model(const Vocabulary& vocabulary, const TrainConfig& config);

struct TrainStats {
  std::uint64_t pairs = 0;  // pairs visited per epoch
  std::uint64_t steps = 0;  // center positions visited in total
};

using EpochObserver = std::function<void(std::size_t epoch, const EmbeddingModel& model)>;

// SGD ascent on the skip-gram objective. Windows never cross plan
// boundaries. The learning rate decays linearly over all (epoch, position)
// steps down to 1e-4 of its initial value. Deterministic for a fixed seed.
EmbeddingModel train_skipgram(const PlanLibrary& library, const TrainConfig& config,
                              const EpochObserver& on_epoch = {}, TrainStats* stats = nullptr);

}  // namespace planrec
