#include "planrec/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "planrec/error.hpp"
#include "planrec/generators.hpp"
#include "planrec/rng.hpp"

namespace planrec {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Seed streams for the independent random choices of an experiment.
enum SeedStream : std::uint64_t { kSplit = 1, kTrain, kMask, kDupRun, kRandomRun };

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_double(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

void validate(const ExperimentSpec& spec, std::size_t vocab_size) {
  if (spec.xi_grid.empty() || spec.m_grid.empty() || spec.recognizers.empty()) {
    fail(ErrorCode::kInvalidConfig, "xi grid, m grid and recognizer list must be non-empty");
  }
  for (double xi : spec.xi_grid) {
    if (!(xi > 0.0 && xi <= 1.0)) fail(ErrorCode::kInvalidConfig, "xi values must lie in (0, 1]");
  }
  for (std::size_t m : spec.m_grid) {
    if (m < 1 || m > vocab_size) {
      fail(ErrorCode::kInvalidConfig, "m values must lie in [1, " + std::to_string(vocab_size) + "]");
    }
  }
  if (spec.threads < 1) fail(ErrorCode::kInvalidConfig, "threads must be at least 1");
}

struct FoldOutput {
  std::vector<ResultRow> rows;
  std::size_t test_plans = 0;
};

FoldOutput run_fold(const ExperimentSpec& spec, const std::string& domain, const Fold& fold,
                    std::size_t f) {
  const std::size_t v = fold.train.vocabulary().size();
  const std::size_t m_max = *std::max_element(spec.m_grid.begin(), spec.m_grid.end());

  TrainConfig train = spec.train;
  train.seed = derive_seed(spec.seed, {kTrain, f});
  const bool needs_model =
      std::find(spec.recognizers.begin(), spec.recognizers.end(), Recognizer::kDup) != spec.recognizers.end();
  std::optional<EmbeddingModel> model;
  if (needs_model) model = train_skipgram(fold.train, train);

  FoldOutput out;
  out.test_plans = fold.test.size();
  for (Recognizer rec : spec.recognizers) {
    for (std::size_t xi_index = 0; xi_index < spec.xi_grid.size(); ++xi_index) {
      const double xi = spec.xi_grid[xi_index];
      std::vector<std::vector<PlanCoverage>> coverage(spec.m_grid.size());
      double elapsed_ms = 0.0;
      for (std::size_t i = 0; i < fold.test.size(); ++i) {
        try {
          const MaskedPlan masked =
              mask_plan(fold.test[i], {xi, derive_seed(spec.seed, {kMask, f, i, xi_index})});
          const auto t0 = Clock::now();
          std::vector<HoleSuggestions> suggestions;
          switch (rec) {
            case Recognizer::kDup: {
              DupConfig dup = spec.dup;
              dup.m = m_max;
              dup.seed = derive_seed(spec.seed, {kDupRun, f, i, xi_index});
              suggestions = dup_recognize(*model, masked.observation, dup).suggestions;
              break;
            }
            case Recognizer::kMatchPlan: {
              MatchConfig match = spec.match;
              match.m = m_max;
              suggestions = matchplan_recognize(fold.train, masked.observation, match);
              break;
            }
            case Recognizer::kRandom:
              suggestions = random_recognize(v, masked.observation, m_max,
                                             derive_seed(spec.seed, {kRandomRun, f, i, xi_index}));
              break;
          }
          elapsed_ms += std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
          for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
            coverage[mi].push_back(
                {covered_holes(suggestions, masked, spec.m_grid[mi]), masked.observation.hole_count()});
          }
        } catch (const Error& e) {
          throw Error(e.code(), "fold " + std::to_string(f) + ", plan " + std::to_string(i) + ": " + e.what());
        }
      }
      for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
        out.rows.push_back({domain, rec, f, xi, spec.m_grid[mi], accuracy(coverage[mi]),
                            spec.record_timing ? elapsed_ms : 0.0});
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::kBlocks: return "blocks";
    case Domain::kRoute: return "route";
  }
  return "unknown";
}

Domain parse_domain(std::string_view name) {
  if (name == "blocks") return Domain::kBlocks;
  if (name == "route") return Domain::kRoute;
  fail(ErrorCode::kInvalidConfig, "unknown domain '" + std::string(name) + "'");
}

PlanLibrary generate_corpus(const CorpusSpec& spec) {
  switch (spec.domain) {
    case Domain::kBlocks: return generate_blocks_corpus(spec.n_blocks, spec.n_plans, spec.seed);
    case Domain::kRoute:
      return generate_route_corpus(spec.n_locations, spec.n_packages, spec.n_plans, spec.seed);
  }
  fail(ErrorCode::kInvalidConfig, "unknown domain");
}

std::string_view to_string(Recognizer recognizer) {
  switch (recognizer) {
    case Recognizer::kDup: return "dup";
    case Recognizer::kMatchPlan: return "matchplan";
    case Recognizer::kRandom: return "random";
  }
  return "unknown";
}

Recognizer parse_recognizer(std::string_view name) {
  if (name == "dup") return Recognizer::kDup;
  if (name == "matchplan") return Recognizer::kMatchPlan;
  if (name == "random") return Recognizer::kRandom;
  fail(ErrorCode::kInvalidConfig, "unknown recognizer '" + std::string(name) + "'");
}

CorpusFeatures corpus_features(const PlanLibrary& library) {
  return {library.size(), library.total_words(), library.vocabulary().size()};
}

std::string features_to_json(const CorpusFeatures& features) {
  return json{{"n_plans", features.n_plans}, {"n_words", features.n_words}, {"n_vocab", features.n_vocab}}
      .dump();
}

CorpusFeatures features_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    return {doc.at("n_plans").get<std::uint64_t>(), doc.at("n_words").get<std::uint64_t>(),
            doc.at("n_vocab").get<std::uint64_t>()};
  } catch (const json::exception& e) {
    fail(ErrorCode::kFormat, std::string("corpus features JSON: ") + e.what());
  }
}

double accuracy(const std::vector<PlanCoverage>& per_plan) {
  if (per_plan.empty()) fail(ErrorCode::kInvalidInput, "accuracy needs at least one test plan");
  double sum = 0.0;
  for (const auto& p : per_plan) {
    if (p.holes == 0) fail(ErrorCode::kInvalidInput, "test plan with zero unobserved actions");
    if (p.correct > p.holes) fail(ErrorCode::kInvalidInput, "more correct suggestions than holes");
    sum += static_cast<double>(p.correct) / static_cast<double>(p.holes);
  }
  return sum / static_cast<double>(per_plan.size());
}

std::size_t covered_holes(const std::vector<HoleSuggestions>& suggestions,
                          const MaskedPlan& masked, std::size_t m) {
  std::size_t correct = 0;
  for (const auto& hole : suggestions) {
    const ActionId truth = masked.truth.at(hole.position);
    const std::size_t n = std::min(m, hole.ranked.size());
    for (std::size_t r = 0; r < n; ++r) {
      if (hole.ranked[r].action == truth) {
        ++correct;
        break;
      }
    }
  }
  return correct;
}

std::vector<HoleSuggestions> random_recognize(std::size_t vocab_size, const Observation& observation,
                                              std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<HoleSuggestions> out;
  std::vector<ActionId> ids(vocab_size);
  const double weight = 1.0 / static_cast<double>(vocab_size);
  for (std::size_t hole : observation.hole_indices()) {
    std::iota(ids.begin(), ids.end(), 0);
    shuffle_range(ids.begin(), ids.end(), rng);
    HoleSuggestions hs{hole, {}};
    for (std::size_t i = 0; i < std::min(m, vocab_size); ++i) hs.ranked.push_back({ids[i], weight});
    out.push_back(std::move(hs));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const PlanLibrary library = spec.library ? *spec.library : generate_corpus(spec.corpus);
  validate(spec, library.vocabulary().size());
  const std::string domain(to_string(spec.corpus.domain));

  const auto folds = split_folds(library, spec.folds, derive_seed(spec.seed, {kSplit}));
  const std::size_t n_run = spec.max_folds == 0 ? folds.size() : std::min(spec.max_folds, folds.size());

  std::vector<FoldOutput> outputs(n_run);
  std::vector<std::exception_ptr> errors(n_run);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t f = next++; f < n_run; f = next++) {
      try {
        outputs[f] = run_fold(spec, domain, folds[f], f);
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(spec.threads, n_run);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  result.features = corpus_features(library);
  for (auto& out : outputs) {
    result.test_plans += out.test_plans;
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
  }
  return result;
}

std::string results_to_csv(const ExperimentResult& result) {
  std::string out(kResultsCsvHeader);
  out += '\n';
  for (const auto& r : result.rows) {
    out += r.domain;
    out += ',';
    out += to_string(r.recognizer);
    out += ',' + std::to_string(r.fold);
    out += ',' + format_double("%g", r.xi);
    out += ',' + std::to_string(r.m);
    out += ',' + format_double("%.6f", r.accuracy);
    out += ',' + format_double("%.3f", r.wall_ms);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> results_from_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kResultsCsvHeader) fail(ErrorCode::kFormat, "unexpected results CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) fail(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": expected 7 columns");
    try {
      ResultRow r;
      r.domain = cells[0];
      r.recognizer = parse_recognizer(cells[1]);
      r.fold = std::stoul(cells[2]);
      r.xi = std::stod(cells[3]);
      r.m = std::stoul(cells[4]);
      r.accuracy = std::stod(cells[5]);
      r.wall_ms = std::stod(cells[6]);
      if (!(r.accuracy >= 0.0 && r.accuracy <= 1.0)) {
        fail(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": accuracy outside [0, 1]");
      }
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      fail(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (line_no == 0) fail(ErrorCode::kFormat, "results CSV is empty");
  return rows;
}

std::string experiment_summary_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  json recognizers = json::array();
  for (auto r : spec.recognizers) recognizers.push_back(std::string(to_string(r)));
  json doc{
      {"domain", std::string(to_string(spec.corpus.domain))},
      {"features", json::parse(features_to_json(result.features))},
      {"test_plans", result.test_plans},
      {"config",
       {{"corpus",
         {{"n_blocks", spec.corpus.n_blocks},
          {"n_locations", spec.corpus.n_locations},
          {"n_packages", spec.corpus.n_packages},
          {"n_plans", spec.corpus.n_plans},
          {"seed", spec.corpus.seed}}},
        {"folds", spec.folds},
        {"max_folds", spec.max_folds},
        {"xi_grid", spec.xi_grid},
        {"m_grid", spec.m_grid},
        {"recognizers", recognizers},
        {"seed", spec.seed},
        {"train",
         {{"dim", spec.train.dim},
          {"window", spec.train.window},
          {"epochs", spec.train.epochs},
          {"learning_rate", spec.train.learning_rate}}},
        {"dup",
         {{"iterations", spec.dup.iterations},
          {"delta", spec.dup.delta},
          {"init", spec.dup.init == GammaInit::kUniform ? "uniform" : "inverse_length"}}},
        {"match",
         {{"window", spec.match.window},
          {"aggregation", spec.match.aggregation == MatchAggregation::kMax ? "max" : "sum"}}}}}};
  return doc.dump(2);
}

}  // namespace planrec
