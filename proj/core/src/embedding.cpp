#include "planrec/embedding.hpp"

#include <algorithm>
#include <numeric>

#include "planrec/error.hpp"
#include "planrec/rng.hpp"

namespace planrec {
namespace {

void check_id(const EmbeddingModel& model, ActionId id) {
  if (id >= model.vocab_size()) {
    fail(ErrorCode::kIndex, "action id " + std::to_string(id) + " out of range for vocabulary of " +
                                std::to_string(model.vocab_size()));
  }
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 1) fail(ErrorCode::kInvalidConfig, "dim must be at least 1");
  if (window < 1) fail(ErrorCode::kInvalidConfig, "window must be at least 1");
  if (epochs < 1) fail(ErrorCode::kInvalidConfig, "epochs must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorCode::kInvalidConfig, "learning rate must be positive");
  }
}

EmbeddingModel::EmbeddingModel(Vocabulary vocabulary, HuffmanTree tree, std::size_t dim,
                               std::size_t window, Matrix input_vectors, Matrix inner_vectors)
    : vocabulary_(std::move(vocabulary)),
      tree_(std::move(tree)),
      dim_(dim),
      window_(window),
      input_(std::move(input_vectors)),
      inner_(std::move(inner_vectors)) {
  if (dim_ < 1) fail(ErrorCode::kInvalidConfig, "dim must be at least 1");
  if (window_ < 1) fail(ErrorCode::kInvalidConfig, "window must be at least 1");
  const std::size_t v = vocabulary_.size();
  if (tree_.leaf_count() != v) fail(ErrorCode::kShapeMismatch, "tree leaves differ from vocabulary size");
  if (input_.rows() != v || input_.cols() != dim_) {
    fail(ErrorCode::kShapeMismatch, "input vectors must be |vocab| x dim");
  }
  if (inner_.rows() != tree_.inner_count() || inner_.cols() != dim_) {
    fail(ErrorCode::kShapeMismatch, "inner vectors must be (|vocab|-1) x dim");
  }
  if (!all_finite(input_) || !all_finite(inner_)) fail(ErrorCode::kNumeric, "non-finite model weights");
}

double log_prob(const EmbeddingModel& model, ActionId output, ActionId center) {
  check_id(model, output);
  check_id(model, center);
  const auto path = model.tree().path(output);
  const auto code = model.tree().code(output);
  const auto v = model.input(center);
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    total += log_sigmoid(code[i] * dot(model.inner(path[i]), v));
  }
  return total;
}

std::vector<double> predict_distribution(const EmbeddingModel& model, ActionId center) {
  check_id(model, center);
  // Each inner node is evaluated once and shared by all leaves below it.
  const auto v = model.input(center);
  std::vector<double> node_score(model.tree().inner_count());
  for (std::size_t n = 0; n < node_score.size(); ++n) node_score[n] = dot(model.inner(n), v);

  std::vector<double> out(model.vocab_size());
  for (ActionId w = 0; w < out.size(); ++w) {
    const auto path = model.tree().path(w);
    const auto code = model.tree().code(w);
    double lp = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) lp += log_sigmoid(code[i] * node_score[path[i]]);
    out[w] = std::exp(lp);
  }
  return out;
}

std::size_t count_window_pairs(std::size_t length, std::size_t window) {
  std::size_t pairs = 0;
  for (std::size_t t = 0; t < length; ++t) {
    const std::size_t left = std::min(t, window);
    const std::size_t right = std::min(length - 1 - t, window);
    pairs += left + right;
  }
  return pairs;
}

double average_log_likelihood(const EmbeddingModel& model, const PlanLibrary& library) {
  const std::size_t c = model.window();
  double total = 0.0;
  std::uint64_t words = 0;
  for (const auto& plan : library.plans()) {
    const auto& a = plan.actions;
    words += a.size();
    for (std::size_t t = 0; t < a.size(); ++t) {
      const std::size_t lo = t >= c ? t - c : 0;
      const std::size_t hi = std::min(a.size() - 1, t + c);
      for (std::size_t q = lo; q <= hi; ++q) {
        if (q != t) total += log_prob(model, a[q], a[t]);
      }
    }
  }
  return words == 0 ? 0.0 : total / static_cast<double>(words);
}

EmbeddingModel initialize_model(const Vocabulary& vocabulary, const TrainConfig& config) {
  config.validate();
  HuffmanTree tree = build_huffman(vocabulary);
  const std::size_t v = vocabulary.size();
  Matrix input(v, config.dim);
  Rng rng(config.seed);
  const double scale = 1.0 / static_cast<double>(config.dim);
  for (double& x : input.data()) x = (uniform01(rng) - 0.5) * scale;
  Matrix inner(tree.inner_count(), config.dim, 0.0);
  return EmbeddingModel(vocabulary, std::move(tree), config.dim, config.window, std::move(input),
                        std::move(inner));
}

class SkipGramTrainer {
 public:
  SkipGramTrainer(EmbeddingModel& model, double learning_rate)
      : model_(model), lr0_(learning_rate), grad_(model.dim()) {}

  // One SGD step on log p(context | center).
  void update_pair(ActionId center, ActionId context, double lr) {
    auto v = model_.input_.row(center);
    std::fill(grad_.begin(), grad_.end(), 0.0);
    const auto path = model_.tree_.path(context);
    const auto code = model_.tree_.code(context);
    for (std::size_t i = 0; i < path.size(); ++i) {
      auto node = model_.inner_.row(path[i]);
      const double s = code[i] * dot(node, v);
      // d/dx log sigmoid(code * x) = code * sigmoid(-code * x)
      const double g = lr * code[i] * sigmoid(-s);
      for (std::size_t d = 0; d < v.size(); ++d) {
        grad_[d] += g * node[d];
        node[d] += g * v[d];
      }
    }
    for (std::size_t d = 0; d < v.size(); ++d) v[d] += grad_[d];
  }

  double rate(std::uint64_t step, std::uint64_t total_steps) const {
    const double progress = static_cast<double>(step) / static_cast<double>(total_steps);
    return lr0_ * std::max(1e-4, 1.0 - progress);
  }

 private:
  EmbeddingModel& model_;
  double lr0_;
  std::vector<double> grad_;
};

EmbeddingModel train_skipgram(const PlanLibrary& library, const TrainConfig& config,
                              const EpochObserver& on_epoch, TrainStats* stats) {
  config.validate();
  if (library.empty()) fail(ErrorCode::kEmptyLibrary, "cannot train on an empty library");
  EmbeddingModel model = initialize_model(library.vocabulary(), config);

  const std::uint64_t words = library.total_words();
  const std::uint64_t total_steps = std::max<std::uint64_t>(1, words * config.epochs);
  const std::size_t c = config.window;

  SkipGramTrainer trainer(model, config.learning_rate);
  Rng rng(splitmix64(config.seed));
  std::vector<std::size_t> order(library.size());
  std::iota(order.begin(), order.end(), 0);

  TrainStats local;
  std::uint64_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_range(order.begin(), order.end(), rng);
    std::uint64_t pairs = 0;
    for (std::size_t idx : order) {
      const auto& a = library.plans()[idx].actions;
      for (std::size_t t = 0; t < a.size(); ++t, ++step) {
        const double lr = trainer.rate(step, total_steps);
        const std::size_t lo = t >= c ? t - c : 0;
        const std::size_t hi = std::min(a.size() - 1, t + c);
        for (std::size_t q = lo; q <= hi; ++q) {
          if (q == t) continue;
          trainer.update_pair(a[t], a[q], lr);
          ++pairs;
        }
      }
    }
    local.pairs = pairs;
    if (on_epoch) on_epoch(epoch, model);
  }
  local.steps = step;
  if (stats) *stats = local;
  return model;
}

}  // namespace planrec
