#include "planrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "planrec/error.hpp"
#include "planrec/rng.hpp"

namespace planrec {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Calls fn(line_number, tokens) for every non-blank, non-comment line.
template <typename Fn>
void for_each_content_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    const auto tokens = split_tokens(line);
    if (!tokens.empty() && tokens.front().front() != '#') {
      if (!fn(line_no, tokens)) return;
    }
    if (end == text.size()) break;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool is_valid_action_token(std::string_view text) {
  if (text.empty() || text == kHoleToken) return false;
  return std::none_of(text.begin(), text.end(), is_space);
}

ActionId Vocabulary::intern(std::string_view token) {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  if (!is_valid_action_token(token)) {
    fail(ErrorCode::kFormat, "invalid action token '" + std::string(token) + "'");
  }
  const auto id = static_cast<ActionId>(tokens_.size());
  tokens_.emplace_back(token);
  counts_.push_back(0);
  ids_.emplace(tokens_.back(), id);
  return id;
}

ActionId Vocabulary::add_occurrence(std::string_view token) {
  const ActionId id = intern(token);
  ++counts_[id];
  return id;
}

std::optional<ActionId> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

ActionId Vocabulary::id(std::string_view token) const {
  if (auto found = find(token)) return *found;
  fail(ErrorCode::kUnknownAction, "'" + std::string(token) + "' is not in the vocabulary");
}

const std::string& Vocabulary::token(ActionId id) const {
  if (!contains(id)) fail(ErrorCode::kIndex, "action id " + std::to_string(id) + " out of range");
  return tokens_[id];
}

std::uint64_t Vocabulary::count(ActionId id) const {
  if (!contains(id)) fail(ErrorCode::kIndex, "action id " + std::to_string(id) + " out of range");
  return counts_[id];
}

void Vocabulary::set_count(ActionId id, std::uint64_t count) {
  if (!contains(id)) fail(ErrorCode::kIndex, "action id " + std::to_string(id) + " out of range");
  counts_[id] = count;
}

PlanLibrary PlanLibrary::from_tokens(const std::vector<std::vector<std::string>>& plans) {
  PlanLibrary lib;
  lib.plans_.reserve(plans.size());
  for (const auto& tokens : plans) {
    if (tokens.empty()) fail(ErrorCode::kInvalidInput, "plans must contain at least one action");
    Plan plan;
    plan.actions.reserve(tokens.size());
    for (const auto& t : tokens) plan.actions.push_back(lib.vocabulary_.add_occurrence(t));
    lib.plans_.push_back(std::move(plan));
  }
  return lib;
}

PlanLibrary PlanLibrary::with_vocabulary(Vocabulary vocabulary, std::vector<Plan> plans) {
  std::vector<std::uint64_t> counts(vocabulary.size(), 0);
  for (const auto& plan : plans) {
    if (plan.actions.empty()) fail(ErrorCode::kInvalidInput, "plans must contain at least one action");
    for (ActionId a : plan.actions) {
      if (!vocabulary.contains(a)) fail(ErrorCode::kIndex, "plan references unknown action id");
      ++counts[a];
    }
  }
  for (ActionId a = 0; a < counts.size(); ++a) vocabulary.set_count(a, counts[a]);
  PlanLibrary lib;
  lib.vocabulary_ = std::move(vocabulary);
  lib.plans_ = std::move(plans);
  return lib;
}

std::uint64_t PlanLibrary::total_words() const noexcept {
  std::uint64_t n = 0;
  for (const auto& p : plans_) n += p.size();
  return n;
}

std::vector<std::string> PlanLibrary::plan_tokens(const Plan& plan) const {
  std::vector<std::string> out;
  out.reserve(plan.size());
  for (ActionId a : plan.actions) out.push_back(vocabulary_.token(a));
  return out;
}

PlanLibrary parse_corpus(std::string_view text) {
  std::vector<std::vector<std::string>> plans;
  for_each_content_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
    std::vector<std::string> plan;
    plan.reserve(tokens.size());
    for (auto t : tokens) {
      if (t == kHoleToken) {
        fail(ErrorCode::kFormat,
             "line " + std::to_string(line_no) + ": reserved token '" + std::string(kHoleToken) + "' in corpus");
      }
      plan.emplace_back(t);
    }
    plans.push_back(std::move(plan));
    return true;
  });
  if (plans.empty()) fail(ErrorCode::kEmptyCorpus, "corpus contains no plans");
  return PlanLibrary::from_tokens(plans);
}

std::string serialize_corpus(const PlanLibrary& library) {
  std::string out;
  for (const auto& plan : library.plans()) {
    for (std::size_t i = 0; i < plan.size(); ++i) {
      if (i) out += ' ';
      out += library.vocabulary().token(plan.actions[i]);
    }
    out += '\n';
  }
  return out;
}

PlanLibrary load_corpus(const std::string& path) { return parse_corpus(read_file(path)); }

void save_corpus(const PlanLibrary& library, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << serialize_corpus(library);
  if (!out) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

Observation::Observation(std::vector<std::optional<ActionId>> slots) : slots_(std::move(slots)) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!slots_[i]) holes_.push_back(i);
  }
}

std::vector<std::string> unknown_tokens(std::span<const std::string> tokens,
                                        const Vocabulary& vocabulary) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (t == kHoleToken || vocabulary.find(t)) continue;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

Observation make_observation(std::span<const std::string> tokens, const Vocabulary& vocabulary) {
  if (auto unknown = unknown_tokens(tokens, vocabulary); !unknown.empty()) {
    std::string list;
    for (const auto& t : unknown) list += (list.empty() ? "" : ", ") + ("'" + t + "'");
    fail(ErrorCode::kUnknownAction, "observation contains actions not in the vocabulary: " + list);
  }
  std::vector<std::optional<ActionId>> slots;
  slots.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t == kHoleToken) {
      slots.emplace_back(std::nullopt);
    } else {
      slots.emplace_back(*vocabulary.find(t));
    }
  }
  return Observation(std::move(slots));
}

Observation parse_observation(std::string_view text, const Vocabulary& vocabulary) {
  std::vector<std::vector<std::string>> lines;
  for_each_content_line(text, [&](std::size_t, const std::vector<std::string_view>& tokens) {
    lines.emplace_back(tokens.begin(), tokens.end());
    return true;
  });
  if (lines.size() != 1) {
    fail(ErrorCode::kFormat, "observation file must contain exactly one observation, found " +
                                 std::to_string(lines.size()));
  }
  return make_observation(lines.front(), vocabulary);
}

std::vector<std::string> observation_tokens(const Observation& observation,
                                            const Vocabulary& vocabulary) {
  std::vector<std::string> out;
  out.reserve(observation.size());
  for (const auto& slot : observation.slots()) {
    out.push_back(slot ? vocabulary.token(*slot) : std::string(kHoleToken));
  }
  return out;
}

std::size_t mask_hole_count(std::size_t length, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) fail(ErrorCode::kInvalidConfig, "xi must lie in [0, 1]");
  if (length == 0) fail(ErrorCode::kInvalidInput, "cannot mask an empty plan");
  const auto rounded = static_cast<std::size_t>(std::llround(xi * static_cast<double>(length)));
  return std::clamp<std::size_t>(rounded, 1, length);
}

MaskedPlan mask_plan(const Plan& plan, const MaskSpec& spec) {
  const std::size_t holes = mask_hole_count(plan.size(), spec.xi);
  std::vector<std::size_t> positions(plan.size());
  std::iota(positions.begin(), positions.end(), 0);
  Rng rng(spec.seed);
  shuffle_range(positions.begin(), positions.end(), rng);
  positions.resize(holes);

  std::vector<std::optional<ActionId>> slots(plan.actions.begin(), plan.actions.end());
  MaskedPlan out;
  for (std::size_t p : positions) {
    slots[p].reset();
    out.truth.emplace(p, plan.actions[p]);
  }
  out.observation = Observation(std::move(slots));
  return out;
}

std::vector<Fold> split_folds(const PlanLibrary& library, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(ErrorCode::kInvalidConfig, "fold count must be at least 2");
  if (k > library.size()) {
    fail(ErrorCode::kInvalidConfig, "fold count " + std::to_string(k) + " exceeds plan count " +
                                        std::to_string(library.size()));
  }
  std::vector<std::size_t> order(library.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle_range(order.begin(), order.end(), rng);

  // fold f holds order[bounds[f], bounds[f+1]); sizes differ by at most one
  std::vector<std::size_t> bounds(k + 1);
  const std::size_t base = library.size() / k;
  const std::size_t extra = library.size() % k;
  for (std::size_t f = 0; f < k; ++f) bounds[f + 1] = bounds[f] + base + (f < extra ? 1 : 0);

  std::vector<Fold> folds;
  folds.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Plan> train;
    std::vector<Plan> test;
    train.reserve(library.size() - (bounds[f + 1] - bounds[f]));
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Plan& plan = library.plans()[order[i]];
      if (i >= bounds[f] && i < bounds[f + 1]) {
        test.push_back(plan);
      } else {
        train.push_back(plan);
      }
    }
    folds.push_back({PlanLibrary::with_vocabulary(library.vocabulary(), std::move(train)),
                     std::move(test)});
  }
  return folds;
}

}  // namespace planrec
