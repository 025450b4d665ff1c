#pragma once

#include <vector>

#include "model.hpp"

namespace smmdist {

// Disjoint nonempty blocks covering all states. Blocks are ordered by their
// lowest state index and members are sorted, so block numbering is stable
// across runs.
struct StatePartition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;

  int block_count() const { return static_cast<int>(blocks.size()); }
  bool same_block(int s, int t) const { return block_of[s] == block_of[t]; }
};

StatePartition partition_from_keys(const std::vector<int>& key_of_state);

// Classes of: equal labels, equal absorbing status, and (for non-absorbing
// pairs) equal residence-time distribution.
StatePartition initial_partition(const SmmModel& model);

// Coarsest refinement of initial_partition that is stable under the
// transition probabilities: states in a common block give every block the
// same mass (exact rational comparison).
StatePartition bisimilarity_partition(const SmmModel& model);

// One refinement pass by block-mass signatures; a fixed point of this map is
// a bisimulation.
StatePartition refine_once(const SmmModel& model, const StatePartition& p);

}  // namespace smmdist
