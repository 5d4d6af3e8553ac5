#include "planrec/baseline.hpp"

#include <algorithm>

#include "planrec/error.hpp"

namespace planrec {

void MatchConfig::validate() const {
  if (window < 1) fail(ErrorCode::kInvalidConfig, "match window must be at least 1");
  if (m < 1) fail(ErrorCode::kInvalidConfig, "m must be at least 1");
}

std::size_t alignment_score(const Observation& observation, std::size_t hole, const Plan& plan,
                            std::size_t center, std::size_t window) {
  const auto w = static_cast<std::ptrdiff_t>(window);
  const auto obs_len = static_cast<std::ptrdiff_t>(observation.size());
  const auto plan_len = static_cast<std::ptrdiff_t>(plan.size());
  std::size_t score = 0;
  for (std::ptrdiff_t d = -w; d <= w; ++d) {
    const std::ptrdiff_t oi = static_cast<std::ptrdiff_t>(hole) + d;
    const std::ptrdiff_t pi = static_cast<std::ptrdiff_t>(center) + d;
    if (oi < 0 || oi >= obs_len || pi < 0 || pi >= plan_len) continue;
    const auto& slot = observation.slots()[static_cast<std::size_t>(oi)];
    if (!slot || *slot == plan.actions[static_cast<std::size_t>(pi)]) ++score;
  }
  return score;
}

std::vector<HoleSuggestions> matchplan_recognize(const PlanLibrary& library,
                                                 const Observation& observation,
                                                 const MatchConfig& config) {
  config.validate();
  if (library.empty()) fail(ErrorCode::kEmptyLibrary, "MatchPlan needs a non-empty library");
  const auto& vocab = library.vocabulary();
  const std::size_t v = vocab.size();
  for (const auto& slot : observation.slots()) {
    if (slot && *slot >= v) fail(ErrorCode::kUnknownAction, "observed action id not in library vocabulary");
  }

  std::vector<HoleSuggestions> out;
  out.reserve(observation.hole_count());
  std::vector<double> score(v);
  std::vector<ActionId> ids(v);
  for (std::size_t hole : observation.hole_indices()) {
    std::fill(score.begin(), score.end(), 0.0);
    for (const auto& plan : library.plans()) {
      for (std::size_t c = 0; c < plan.size(); ++c) {
        const auto s = static_cast<double>(alignment_score(observation, hole, plan, c, config.window));
        double& slot = score[plan.actions[c]];
        slot = config.aggregation == MatchAggregation::kMax ? std::max(slot, s) : slot + s;
      }
    }
    for (ActionId o = 0; o < v; ++o) ids[o] = o;
    const std::size_t m = std::min(config.m, v);
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m), ids.end(),
                      [&](ActionId a, ActionId b) {
                        if (score[a] != score[b]) return score[a] > score[b];
                        if (vocab.count(a) != vocab.count(b)) return vocab.count(a) > vocab.count(b);
                        return a < b;
                      });
    HoleSuggestions hs{hole, {}};
    hs.ranked.reserve(m);
    for (std::size_t i = 0; i < m; ++i) hs.ranked.push_back({ids[i], score[ids[i]]});
    out.push_back(std::move(hs));
  }
  return out;
}

}  // namespace planrec
