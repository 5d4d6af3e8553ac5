#include "planrec/generators.hpp"

#include <algorithm>

#include "planrec/error.hpp"

namespace planrec {
namespace {

void check_state(const BlocksState& state) {
  const int n = static_cast<int>(state.below.size());
  std::vector<int> supports(n, 0);
  for (int b = 0; b < n; ++b) {
    const int under = state.below[b];
    if (under == kTable) continue;
    if (under < 0 || under >= n || under == b) fail(ErrorCode::kInvalidInput, "malformed blocks state");
    if (++supports[under] > 1) fail(ErrorCode::kInvalidInput, "two blocks on the same block");
  }
  for (int b = 0; b < n; ++b) {
    int cur = b;
    for (int steps = 0; cur != kTable; ++steps) {
      if (steps > n) fail(ErrorCode::kInvalidInput, "cyclic blocks state");
      cur = state.below[cur];
    }
  }
}

// Towers bottom-to-top, ordered by bottom block.
std::vector<std::vector<int>> towers_of(const BlocksState& state) {
  const int n = static_cast<int>(state.below.size());
  std::vector<int> above(n, kTable);
  for (int b = 0; b < n; ++b) {
    if (state.below[b] != kTable) above[state.below[b]] = b;
  }
  std::vector<std::vector<int>> towers;
  for (int b = 0; b < n; ++b) {
    if (state.below[b] != kTable) continue;
    std::vector<int> tower;
    for (int cur = b; cur != kTable; cur = above[cur]) tower.push_back(cur);
    towers.push_back(std::move(tower));
  }
  return towers;
}

void check_counts(int n_plans) {
  if (n_plans < 1) fail(ErrorCode::kInvalidConfig, "n_plans must be at least 1");
}

}  // namespace

std::string block_name(int block) {
  if (block < 0 || block >= kMaxBlocks) fail(ErrorCode::kIndex, "block index out of range");
  return std::string(1, static_cast<char>('A' + block));
}

BlocksState blocks_from_towers(int n_blocks, const std::vector<std::vector<int>>& towers) {
  BlocksState state{std::vector<int>(static_cast<std::size_t>(n_blocks), kTable)};
  for (const auto& tower : towers) {
    for (std::size_t i = 1; i < tower.size(); ++i) state.below.at(tower[i]) = tower[i - 1];
  }
  check_state(state);
  return state;
}

BlocksState random_blocks_state(int n_blocks, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(n_blocks));
  for (int b = 0; b < n_blocks; ++b) order[b] = b;
  shuffle_range(order.begin(), order.end(), rng);

  BlocksState state{std::vector<int>(order.size(), kTable)};
  std::vector<int> tops;
  for (int b : order) {
    // choice 0 is the table, choice i > 0 is the top of tower i - 1
    const auto choice = uniform_below(rng, tops.size() + 1);
    if (choice == 0) {
      tops.push_back(b);
    } else {
      state.below[b] = tops[choice - 1];
      tops[choice - 1] = b;
    }
  }
  return state;
}

std::vector<std::string> solve_blocks(const BlocksProblem& problem) {
  if (problem.initial.below.size() != problem.goal.below.size()) {
    fail(ErrorCode::kInvalidInput, "initial and goal states differ in block count");
  }
  check_state(problem.initial);
  check_state(problem.goal);

  std::vector<std::string> plan;
  for (const auto& tower : towers_of(problem.initial)) {
    for (std::size_t i = tower.size(); i-- > 1;) {
      const std::string x = block_name(tower[i]);
      plan.push_back("unstack-" + x + "-" + block_name(tower[i - 1]));
      plan.push_back("put-down-" + x);
    }
  }
  for (const auto& tower : towers_of(problem.goal)) {
    for (std::size_t i = 1; i < tower.size(); ++i) {
      const std::string x = block_name(tower[i]);
      plan.push_back("pick-up-" + x);
      plan.push_back("stack-" + x + "-" + block_name(tower[i - 1]));
    }
  }
  return plan;
}

PlanLibrary generate_blocks_corpus(int n_blocks, int n_plans, std::uint64_t seed) {
  if (n_blocks < 2 || n_blocks > kMaxBlocks) {
    fail(ErrorCode::kInvalidConfig, "n_blocks must lie in [2, " + std::to_string(kMaxBlocks) + "]");
  }
  check_counts(n_plans);
  Rng rng(seed);
  std::vector<std::vector<std::string>> plans;
  plans.reserve(static_cast<std::size_t>(n_plans));
  while (plans.size() < static_cast<std::size_t>(n_plans)) {
    auto draw = [&] {
      if (uniform01(rng) < kTableStateShare) return blocks_from_towers(n_blocks, {});
      return random_blocks_state(n_blocks, rng);
    };
    BlocksState initial = draw();
    BlocksProblem problem{std::move(initial), draw()};
    auto plan = solve_blocks(problem);
    if (!plan.empty()) plans.push_back(std::move(plan));
  }
  return PlanLibrary::from_tokens(plans);
}

std::string location_name(int location) { return "L" + std::to_string(location + 1); }
std::string package_name(int package) { return "P" + std::to_string(package + 1); }

std::vector<int> ring_path(int n_locations, int from, int to) {
  const int forward = ((to - from) % n_locations + n_locations) % n_locations;
  const int backward = n_locations - forward;
  const int step = forward <= backward ? 1 : n_locations - 1;
  std::vector<int> path;
  for (int cur = from; cur != to;) {
    cur = (cur + step) % n_locations;
    path.push_back(cur);
  }
  return path;
}

std::vector<std::string> solve_route(const RouteProblem& problem) {
  const int n = problem.n_locations;
  if (n < 2) fail(ErrorCode::kInvalidInput, "route problems need at least 2 locations");
  if (problem.origin.size() != problem.destination.size()) {
    fail(ErrorCode::kInvalidInput, "origin/destination size mismatch");
  }
  auto in_range = [n](int l) { return l >= 0 && l < n; };
  if (!in_range(problem.truck)) fail(ErrorCode::kInvalidInput, "truck location out of range");

  std::vector<std::string> plan;
  int truck = problem.truck;
  auto drive_to = [&](int target) {
    for (int next : ring_path(n, truck, target)) {
      plan.push_back("drive-" + location_name(truck) + "-" + location_name(next));
      truck = next;
    }
  };
  for (std::size_t p = 0; p < problem.origin.size(); ++p) {
    const int from = problem.origin[p];
    const int to = problem.destination[p];
    if (!in_range(from) || !in_range(to)) fail(ErrorCode::kInvalidInput, "package location out of range");
    if (from == to) continue;
    const std::string name = package_name(static_cast<int>(p));
    drive_to(from);
    plan.push_back("load-" + name + "-" + location_name(from));
    drive_to(to);
    plan.push_back("unload-" + name + "-" + location_name(to));
  }
  return plan;
}

PlanLibrary generate_route_corpus(int n_locations, int n_packages, int n_plans,
                                  std::uint64_t seed) {
  if (n_locations < 2) fail(ErrorCode::kInvalidConfig, "n_locations must be at least 2");
  if (n_packages < 1) fail(ErrorCode::kInvalidConfig, "n_packages must be at least 1");
  check_counts(n_plans);
  Rng rng(seed);
  const auto n = static_cast<std::uint64_t>(n_locations);
  std::vector<std::vector<std::string>> plans;
  plans.reserve(static_cast<std::size_t>(n_plans));
  while (plans.size() < static_cast<std::size_t>(n_plans)) {
    RouteProblem problem;
    problem.n_locations = n_locations;
    problem.truck = static_cast<int>(uniform_below(rng, n));
    for (int p = 0; p < n_packages; ++p) {
      const auto from = static_cast<int>(uniform_below(rng, n));
      // destination drawn from the other n - 1 locations
      auto to = static_cast<int>(uniform_below(rng, n - 1));
      if (to >= from) ++to;
      problem.origin.push_back(from);
      problem.destination.push_back(to);
    }
    auto plan = solve_route(problem);
    if (!plan.empty()) plans.push_back(std::move(plan));
  }
  return PlanLibrary::from_tokens(plans);
}

}  // namespace planrec
