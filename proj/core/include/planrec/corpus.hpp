#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace planrec {

using ActionId = std::uint32_t;

// Reserved surface form of an unobserved slot in observation files.
inline constexpr std::string_view kHoleToken = "??";

// True when `text` is usable as an action name: non-empty, no whitespace and
// not the hole marker.
bool is_valid_action_token(std::string_view text);

// Dense bidirectional token <-> id map with corpus frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Returns the id of `token`, inserting it with count 0 when new.
  ActionId intern(std::string_view token);
  // intern() plus one occurrence.
  ActionId add_occurrence(std::string_view token);

  std::optional<ActionId> find(std::string_view token) const;
  ActionId id(std::string_view token) const;  // throws kUnknownAction
  const std::string& token(ActionId id) const;
  std::uint64_t count(ActionId id) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  bool contains(ActionId id) const noexcept { return id < tokens_.size(); }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  void set_count(ActionId id, std::uint64_t count);

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, ActionId> ids_;
};

struct Plan {
  std::vector<ActionId> actions;

  std::size_t size() const noexcept { return actions.size(); }
  bool operator==(const Plan&) const = default;
};

class PlanLibrary {
 public:
  PlanLibrary() = default;

  // Builds the vocabulary from the token sequences in first-appearance order.
  static PlanLibrary from_tokens(const std::vector<std::vector<std::string>>& plans);

  // Re-counts frequencies of `plans` against an existing vocabulary. Tokens
  // that never occur in `plans` keep their id with count 0.
  static PlanLibrary with_vocabulary(Vocabulary vocabulary, std::vector<Plan> plans);

  const std::vector<Plan>& plans() const noexcept { return plans_; }
  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  std::size_t size() const noexcept { return plans_.size(); }
  bool empty() const noexcept { return plans_.empty(); }
  std::uint64_t total_words() const noexcept;

  std::vector<std::string> plan_tokens(const Plan& plan) const;

  bool operator==(const PlanLibrary&) const = default;

 private:
  std::vector<Plan> plans_;
  Vocabulary vocabulary_;
};

// One plan per non-empty, non-'#' line; tokens separated by whitespace.
PlanLibrary parse_corpus(std::string_view text);
// Inverse of parse_corpus: single-space separated, LF terminated lines.
std::string serialize_corpus(const PlanLibrary& library);

PlanLibrary load_corpus(const std::string& path);
void save_corpus(const PlanLibrary& library, const std::string& path);

// A length-M slot sequence; std::nullopt marks a hole.
class Observation {
 public:
  Observation() = default;
  explicit Observation(std::vector<std::optional<ActionId>> slots);

  std::size_t size() const noexcept { return slots_.size(); }
  const std::vector<std::optional<ActionId>>& slots() const noexcept { return slots_; }
  const std::vector<std::size_t>& hole_indices() const noexcept { return holes_; }
  std::size_t hole_count() const noexcept { return holes_.size(); }
  bool is_hole(std::size_t position) const { return !slots_.at(position).has_value(); }

  bool operator==(const Observation& other) const { return slots_ == other.slots_; }

 private:
  std::vector<std::optional<ActionId>> slots_;
  std::vector<std::size_t> holes_;
};

// Tokens of `tokens` (holes excluded) that are not in `vocabulary`, in order of
// first appearance without duplicates.
std::vector<std::string> unknown_tokens(std::span<const std::string> tokens,
                                        const Vocabulary& vocabulary);

// Resolves tokens against the vocabulary; "??" becomes a hole. Throws
// kUnknownAction listing every offending token.
Observation make_observation(std::span<const std::string> tokens, const Vocabulary& vocabulary);

// Parses the single-observation file format (first non-comment line).
Observation parse_observation(std::string_view text, const Vocabulary& vocabulary);
std::vector<std::string> observation_tokens(const Observation& observation,
                                            const Vocabulary& vocabulary);

struct MaskSpec {
  double xi = 0.25;
  std::uint64_t seed = 0;
};

struct MaskedPlan {
  Observation observation;
  std::map<std::size_t, ActionId> truth;  // hole position -> hidden action
};

// Number of slots mask_plan hides for a plan of length `length`.
std::size_t mask_hole_count(std::size_t length, double xi);

MaskedPlan mask_plan(const Plan& plan, const MaskSpec& spec);

struct Fold {
  PlanLibrary train;
  std::vector<Plan> test;
};

// k near-equal folds after a seeded shuffle. Training libraries keep the full
// vocabulary of `library` (ids stay valid for the test plans); their counts
// are the training-split frequencies.
std::vector<Fold> split_folds(const PlanLibrary& library, std::size_t k, std::uint64_t seed);

}  // namespace planrec
