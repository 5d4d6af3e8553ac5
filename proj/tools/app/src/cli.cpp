#include "planrec/app/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "planrec/app/service.hpp"
#include "planrec/app/suggest.hpp"
#include "planrec/corpus.hpp"
#include "planrec/error.hpp"
#include "planrec/eval.hpp"
#include "planrec/model_io.hpp"
#include "planrec/recognizer.hpp"

namespace planrec::app {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

const std::map<std::string, GammaInit> kInitNames{{"uniform", GammaInit::kUniform},
                                                  {"inverse-length", GammaInit::kInverseLength}};
const std::map<std::string, Projection> kProjectionNames{{"unit-hull", Projection::kUnitHull},
                                                         {"minmax", Projection::kMinMax}};
const std::map<std::string, MatchAggregation> kAggregationNames{{"max", MatchAggregation::kMax},
                                                                {"sum", MatchAggregation::kSum}};

struct DupFlags {
  std::size_t m = 10;
  std::size_t iterations = DupConfig{}.iterations;
  double delta = DupConfig{}.delta;
  std::uint64_t seed = DupConfig{}.seed;
  std::string init = "uniform";
  std::string projection = "unit-hull";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--m", m, "suggestions per hole")->capture_default_str();
    cmd.add_option("--iterations", iterations, "DUP iterations")->capture_default_str();
    cmd.add_option("--delta", delta, "DUP step size")->capture_default_str();
    cmd.add_option("--seed", seed, "sampling seed")->capture_default_str();
    cmd.add_option("--init", init, "weight initialisation")
        ->check(CLI::IsMember(kInitNames))
        ->capture_default_str();
    cmd.add_option("--projection", projection, "per-column projection")
        ->check(CLI::IsMember(kProjectionNames))
        ->capture_default_str();
  }

  DupConfig config() const {
    DupConfig c;
    c.m = m;
    c.iterations = iterations;
    c.delta = delta;
    c.seed = seed;
    c.init = kInitNames.at(init);
    c.projection = kProjectionNames.at(projection);
    return c;
  }
};

struct TrainFlags {
  TrainConfig cfg;
  void add_to(CLI::App& cmd, const std::string& prefix = "") {
    cmd.add_option("--" + prefix + "dim", cfg.dim, "embedding dimension")->capture_default_str();
    cmd.add_option("--" + prefix + "window", cfg.window, "context window")->capture_default_str();
    cmd.add_option("--" + prefix + "epochs", cfg.epochs, "training epochs")->capture_default_str();
    cmd.add_option("--" + prefix + "lr", cfg.learning_rate, "initial learning rate")->capture_default_str();
  }
};

struct CorpusFlags {
  CorpusSpec spec;
  std::string domain = "blocks";
  CorpusSpec resolved() const {
    CorpusSpec out = spec;
    out.domain = parse_domain(domain);
    return out;
  }
  void add_to(CLI::App& cmd) {
    cmd.add_option("--domain", domain, "blocks or route")
        ->check(CLI::IsMember({"blocks", "route"}))
        ->capture_default_str();
    cmd.add_option("--blocks", spec.n_blocks, "blocks-world size")->capture_default_str();
    cmd.add_option("--locations", spec.n_locations, "route locations")->capture_default_str();
    cmd.add_option("--packages", spec.n_packages, "route packages")->capture_default_str();
    cmd.add_option("--plans", spec.n_plans, "number of plans")->capture_default_str();
  }
};

template <class T>
std::vector<T> parse_list(const std::string& text, T (*conv)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(conv(item));
  }
  if (out.empty()) fail(ErrorCode::kInvalidConfig, "empty list '" + text + "'");
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) fail(ErrorCode::kInvalidConfig, "not a number: '" + s + "'");
  return v;
}

std::size_t to_size(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.front() == '-') fail(ErrorCode::kInvalidConfig, "not a count: '" + s + "'");
  return static_cast<std::size_t>(v);
}

Recognizer to_recognizer(const std::string& s) {
  try {
    return parse_recognizer(s);
  } catch (const Error& e) {
    fail(ErrorCode::kInvalidConfig, e.what());
  }
}

// m ranges like "1-10" are accepted alongside comma lists.
std::vector<std::size_t> parse_m_grid(const std::string& text) {
  if (const auto dash = text.find('-'); dash != std::string::npos && text.find(',') == std::string::npos) {
    const std::size_t lo = to_size(text.substr(0, dash));
    const std::size_t hi = to_size(text.substr(dash + 1));
    if (lo < 1 || hi < lo) fail(ErrorCode::kInvalidConfig, "bad m range '" + text + "'");
    std::vector<std::size_t> out;
    for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  }
  return parse_list<std::size_t>(text, &to_size);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plan recognition toolkit: embeddings, DUP recognition and evaluation", "planrec"};
  app.require_subcommand(1);

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic plan corpus");
  CorpusFlags gen_corpus;
  gen_corpus.add_to(*gen);
  gen->add_option("--seed", gen_corpus.spec.seed, "generator seed")->capture_default_str();
  std::string gen_out;
  gen->add_option("--out", gen_out, "output corpus file")->required();

  // train
  auto* train = app.add_subcommand("train", "train action embeddings on a corpus");
  std::string train_corpus, train_out;
  TrainFlags train_flags;
  train->add_option("--corpus", train_corpus, "corpus file")->required();
  train->add_option("--out", train_out, "output model file")->required();
  train_flags.add_to(*train);
  train->add_option("--seed", train_flags.cfg.seed, "training seed")->capture_default_str();

  // recognize
  auto* rec = app.add_subcommand("recognize", "fill the holes of an observation file");
  std::string rec_model, rec_obs;
  rec->add_option("--model", rec_model, "model file")->required();
  rec->add_option("--obs", rec_obs, "observation file")->required();
  DupFlags rec_dup;
  rec_dup.add_to(*rec);
  bool rec_timing = false;
  rec->add_flag("--timing", rec_timing, "include elapsed_ms in the output");

  // eval
  auto* ev = app.add_subcommand("eval", "k-fold evaluation, writes a results CSV");
  CorpusFlags ev_corpus;
  ev_corpus.add_to(*ev);
  std::string ev_corpus_file, ev_out, ev_summary;
  std::string ev_xi = "0.05,0.1,0.15,0.2,0.25", ev_m = "1-10", ev_recs = "dup,matchplan,random";
  ExperimentSpec ev_spec;
  TrainFlags ev_train;
  DupFlags ev_dup;
  ev->add_option("--corpus", ev_corpus_file, "use this corpus instead of generating one");
  ev->add_option("--folds", ev_spec.folds, "number of folds")->capture_default_str();
  ev->add_option("--max-folds", ev_spec.max_folds, "evaluate only the first n folds (0 = all)")
      ->capture_default_str();
  ev->add_option("--xi", ev_xi, "comma-separated hole fractions")->capture_default_str();
  ev->add_option("--m-grid", ev_m, "comma list or range of m values")->capture_default_str();
  ev->add_option("--recognizers", ev_recs, "comma list of dup, matchplan, random")->capture_default_str();
  ev->add_option("--seed", ev_spec.seed, "experiment seed")->capture_default_str();
  ev_train.add_to(*ev);
  ev->add_option("--iterations", ev_dup.iterations, "DUP iterations")->capture_default_str();
  ev->add_option("--delta", ev_dup.delta, "DUP step size")->capture_default_str();
  ev->add_option("--projection", ev_dup.projection, "per-column projection")
      ->check(CLI::IsMember(kProjectionNames))
      ->capture_default_str();
  ev->add_option("--init", ev_dup.init, "weight initialisation")
      ->check(CLI::IsMember(kInitNames))
      ->capture_default_str();
  ev->add_option("--match-window", ev_spec.match.window, "MatchPlan window")->capture_default_str();
  std::string ev_aggregation = "max";
  ev->add_option("--aggregation", ev_aggregation, "MatchPlan per-action aggregation")
      ->check(CLI::IsMember(kAggregationNames))
      ->capture_default_str();
  ev->add_option("--threads", ev_spec.threads, "worker threads over folds")->capture_default_str();
  bool ev_no_timing = false;
  ev->add_flag("--no-timing", ev_no_timing, "write wall_ms = 0 for reproducible CSVs");
  ev->add_option("--out", ev_out, "results CSV")->required();
  ev->add_option("--summary", ev_summary, "optional JSON summary");

  // serve
  auto* serve = app.add_subcommand("serve", "run the HTTP suggestion service");
  std::string serve_model, serve_bind, serve_static;
  ServiceConfig serve_cfg;
  DupFlags serve_dup;
  serve->add_option("--model", serve_model, "model file")->required();
  serve->add_option("--bind", serve_bind, "host:port (default $PLANREC_BIND or 127.0.0.1:8080)");
  serve->add_option("--max-length", serve_cfg.max_observation, "largest accepted observation")
      ->capture_default_str();
  serve->add_option("--static", serve_static, "directory with the web client bundle");
  serve_dup.add_to(*serve);

  // oracle
  auto* orc = app.add_subcommand("oracle", "exhaustive search over all hole fillings");
  std::string orc_model, orc_obs;
  std::uint64_t orc_guard = kExhaustiveGuard;
  orc->add_option("--model", orc_model, "model file")->required();
  orc->add_option("--obs", orc_obs, "observation file")->required();
  orc->add_option("--guard", orc_guard, "maximum number of candidates")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      save_corpus(generate_corpus(gen_corpus.resolved()), gen_out);
      const PlanLibrary lib = load_corpus(gen_out);
      err << "wrote " << lib.size() << " plans (" << lib.vocabulary().size() << " actions) to " << gen_out << "\n";
    } else if (*train) {
      const PlanLibrary lib = load_corpus(train_corpus);
      const EmbeddingModel model = train_skipgram(lib, train_flags.cfg);
      save_model(model, train_out);
      err << "trained " << model.vocab_size() << " actions, dim " << model.dim() << ", model "
          << model_id(model) << "\n";
    } else if (*rec) {
      const EmbeddingModel model = load_model(rec_model);
      const Observation obs = parse_observation(read_file(rec_obs), model.vocabulary());
      DupConfig cfg = rec_dup.config();
      if (cfg.m < 1) fail(ErrorCode::kInvalidConfig, "--m must be at least 1");
      cfg.m = std::min(cfg.m, model.vocab_size());
      const auto t0 = std::chrono::steady_clock::now();
      const RecognitionResult result = dup_recognize(model, obs, cfg);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      out << response_to_json(make_response(model, result, model_id(model), ms), rec_timing) << "\n";
    } else if (*ev) {
      ev_spec.corpus = ev_corpus.resolved();
      ev_spec.corpus.seed = ev_spec.seed;
      if (!ev_corpus_file.empty()) ev_spec.library = load_corpus(ev_corpus_file);
      ev_spec.xi_grid = parse_list<double>(ev_xi, &to_double);
      ev_spec.m_grid = parse_m_grid(ev_m);
      ev_spec.recognizers = parse_list<Recognizer>(ev_recs, &to_recognizer);
      ev_spec.train = ev_train.cfg;
      ev_spec.train.seed = ev_spec.seed;
      ev_spec.dup = ev_dup.config();
      ev_spec.match.aggregation = kAggregationNames.at(ev_aggregation);
      ev_spec.record_timing = !ev_no_timing;
      const ExperimentResult result = run_experiment(ev_spec);
      write_file(ev_out, results_to_csv(result));
      if (!ev_summary.empty()) write_file(ev_summary, experiment_summary_json(ev_spec, result) + "\n");
      err << "wrote " << result.rows.size() << " rows over " << result.test_plans << " test plans to " << ev_out
          << "\n";
    } else if (*serve) {
      const BindAddress bind = parse_bind(default_bind(serve_bind));
      serve_cfg.defaults.dup = serve_dup.config();
      serve_cfg.static_dir = serve_static;
      SuggestService service(load_model(serve_model), serve_cfg);
      if (!run_server(service, bind)) {
        err << "planrec: cannot listen on " << bind.host << ":" << bind.port << "\n";
        return kExitData;
      }
    } else if (*orc) {
      const EmbeddingModel model = load_model(orc_model);
      const Observation obs = parse_observation(read_file(orc_obs), model.vocabulary());
      const ExhaustiveResult best = exhaustive_recognize(model, obs, orc_guard);
      nlohmann::ordered_json doc;
      std::vector<std::string> plan;
      for (ActionId a : best.plan.actions) plan.push_back(model.vocabulary().token(a));
      doc["completed"] = plan;
      doc["score"] = best.score;
      doc["candidates"] = best.candidates;
      out << doc.dump() << "\n";
    }
  } catch (const Error& e) {
    err << "planrec: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidConfig ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "planrec: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace planrec::app
