#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "model.hpp"

namespace smmdist {

// Exact distribution over absorption-terminated label words: the word of a
// run is the sequence of label classes it visits up to (and including) the
// absorbing state. `residual` is the mass still unabsorbed at the truncation
// depth; probabilities plus residual always sum to 1.
struct WordDistribution {
  std::map<std::vector<int>, Rational> words;  // label-class id sequences
  Rational residual{0};
  std::vector<std::set<std::string>> class_labels;  // class id -> label set
};

// Breadth-first unfolding with exact rationals, merging equal words that
// arise from different state sequences. Requires every non-absorbing state
// to carry the same residence-time distribution (the subclass on which the
// absorbed-word family determines the trace distance); throws otherwise.
WordDistribution absorbed_word_distribution(const SmmModel& model, int start, int depth_cap);

struct DeltaBounds {
  Rational lower{0};
  Rational upper{0};
};

// Trace distance between two states via the L1 characterization: half the
// absolute word-probability differences over all enumerated words, plus a
// truncation allowance of max(residual) on the upper side. The bounds
// coincide (exact distance) when both residuals vanish.
DeltaBounds trace_distance_bounds(const SmmModel& model, int s1, int s2, int depth_cap);

}  // namespace smmdist
