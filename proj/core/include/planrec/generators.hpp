#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planrec/corpus.hpp"
#include "planrec/rng.hpp"

namespace planrec {

// ---- blocks world ---------------------------------------------------------

inline constexpr int kTable = -1;
inline constexpr int kMaxBlocks = 26;

// below[b] is the block directly under b, or kTable.
struct BlocksState {
  std::vector<int> below;

  bool operator==(const BlocksState&) const = default;
};

struct BlocksProblem {
  BlocksState initial;
  BlocksState goal;
};

// "A", "B", ... for block indices 0..25.
std::string block_name(int block);

// Builds a state from towers listed bottom-to-top, e.g. {{0, 1}} puts B on A.
// Blocks not mentioned stand alone on the table.
BlocksState blocks_from_towers(int n_blocks, const std::vector<std::vector<int>>& towers);

BlocksState random_blocks_state(int n_blocks, Rng& rng);

// Two-phase plan: every block resting on another is unstacked to the table,
// then goal towers are built bottom-up. Towers are visited in order of their
// bottom block.
std::vector<std::string> solve_blocks(const BlocksProblem& problem);

// Share of initial and goal states (drawn independently) that are the
// all-on-table state, so pure build and pure dismantle plans stay common.
inline constexpr double kTableStateShare = 0.03;

PlanLibrary generate_blocks_corpus(int n_blocks, int n_plans, std::uint64_t seed);

// ---- route delivery -------------------------------------------------------

// One truck on a ring road L1-L2-...-Ln-L1. Packages travel from origin to
// destination one at a time in package-index order.
struct RouteProblem {
  int n_locations = 2;
  int truck = 0;
  std::vector<int> origin;
  std::vector<int> destination;
};

std::string location_name(int location);  // "L1", ...
std::string package_name(int package);    // "P1", ...

// Locations visited after `from` on the shortest ring path to `to`.
std::vector<int> ring_path(int n_locations, int from, int to);

std::vector<std::string> solve_route(const RouteProblem& problem);

PlanLibrary generate_route_corpus(int n_locations, int n_packages, int n_plans,
                                  std::uint64_t seed);

}  // namespace planrec
