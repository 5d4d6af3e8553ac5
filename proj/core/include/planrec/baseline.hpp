#pragma once

#include <cstddef>
#include <vector>

#include "planrec/corpus.hpp"
#include "planrec/recognizer.hpp"

namespace planrec {

enum class MatchAggregation {
  kMax,  // best single alignment per candidate action
  kSum,  // total over all alignments
};

struct MatchConfig {
  std::size_t window = 3;
  std::size_t m = 10;
  MatchAggregation aggregation = MatchAggregation::kMax;

  void validate() const;
};

// Alignment score of the observation window centred at `hole` against the
// library plan window centred at `center`: one point per offset where both
// positions exist and the observation slot is a hole or equals the library
// action.
std::size_t alignment_score(const Observation& observation, std::size_t hole, const Plan& plan,
                            std::size_t center, std::size_t window);

// Per-hole ranking of every vocabulary action by aggregated alignment score
// (actions never seen as a centre score 0), ties by library frequency then
// action id; truncated to m.
std::vector<HoleSuggestions> matchplan_recognize(const PlanLibrary& library,
                                                 const Observation& observation,
                                                 const MatchConfig& config);

}  // namespace planrec
