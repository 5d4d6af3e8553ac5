#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planrec/baseline.hpp"
#include "planrec/corpus.hpp"
#include "planrec/embedding.hpp"
#include "planrec/recognizer.hpp"

namespace planrec {

enum class Domain { kBlocks, kRoute };

std::string_view to_string(Domain domain);
Domain parse_domain(std::string_view name);

struct CorpusSpec {
  Domain domain = Domain::kBlocks;
  int n_blocks = 4;
  int n_locations = 4;
  int n_packages = 2;
  int n_plans = 500;
  std::uint64_t seed = 1;
};

PlanLibrary generate_corpus(const CorpusSpec& spec);

enum class Recognizer { kDup, kMatchPlan, kRandom };

std::string_view to_string(Recognizer recognizer);
Recognizer parse_recognizer(std::string_view name);

struct CorpusFeatures {
  std::uint64_t n_plans = 0;
  std::uint64_t n_words = 0;
  std::uint64_t n_vocab = 0;

  bool operator==(const CorpusFeatures&) const = default;
};

CorpusFeatures corpus_features(const PlanLibrary& library);
std::string features_to_json(const CorpusFeatures& features);
CorpusFeatures features_from_json(std::string_view text);

struct PlanCoverage {
  std::size_t correct = 0;
  std::size_t holes = 0;
};

// Mean over test plans of correct / holes. Throws kInvalidInput on an empty
// list or a plan with zero holes.
double accuracy(const std::vector<PlanCoverage>& per_plan);

// Holes whose truth action is among the first m suggestions.
std::size_t covered_holes(const std::vector<HoleSuggestions>& suggestions,
                          const MaskedPlan& masked, std::size_t m);

// Uniform chance floor: a seeded random ranking of the vocabulary per hole.
std::vector<HoleSuggestions> random_recognize(std::size_t vocab_size, const Observation& observation,
                                              std::size_t m, std::uint64_t seed);

struct ExperimentSpec {
  CorpusSpec corpus;
  // When set, used instead of generating from `corpus` (domain label kept).
  std::optional<PlanLibrary> library;
  std::size_t folds = 10;
  std::size_t max_folds = 0;  // evaluate only the first n folds; 0 = all
  std::vector<double> xi_grid{0.05, 0.10, 0.15, 0.20, 0.25};
  std::vector<std::size_t> m_grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Recognizer> recognizers{Recognizer::kDup, Recognizer::kMatchPlan, Recognizer::kRandom};
  std::uint64_t seed = 1;
  TrainConfig train;
  DupConfig dup;
  MatchConfig match;
  std::size_t threads = 1;
  bool record_timing = true;  // false writes wall_ms = 0 for byte-stable CSVs
};

struct ResultRow {
  std::string domain;
  Recognizer recognizer = Recognizer::kDup;
  std::size_t fold = 0;
  double xi = 0.0;
  std::size_t m = 0;
  double accuracy = 0.0;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  CorpusFeatures features;
  std::size_t test_plans = 0;  // summed over evaluated folds
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

inline constexpr std::string_view kResultsCsvHeader = "domain,recognizer,fold,xi,m,accuracy,wall_ms";

std::string results_to_csv(const ExperimentResult& result);
std::vector<ResultRow> results_from_csv(std::string_view text);

// Corpus features plus an echo of the experiment configuration.
std::string experiment_summary_json(const ExperimentSpec& spec, const ExperimentResult& result);

}  // namespace planrec
