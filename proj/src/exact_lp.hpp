#pragma once

#include <vector>

#include "metric.hpp"
#include "model.hpp"

namespace smmdist {

// The bisimilarity distance as the solution of a linear program: maximize the
// entry sum subject to d = 0 on bisimilar pairs, d = 1 on pairs differing in
// label or absorbing status, and, for every remaining pair and every vertex w
// of its transportation polytope,
//   d(s,t) <= alpha + (1 - alpha) * sum d(u,v) * w(u,v).
//
// The vertex constraint family is exponential, so the program is solved by
// delayed constraint generation: an exact rational transportation solve acts
// as the separation oracle, and the returned solution is certified against
// every pair before being accepted. Exact rational arithmetic throughout;
// residence total variations that only exist as doubles enter as their exact
// dyadic values.
//
// Throws std::invalid_argument when the model has more than `state_cap`
// states.
std::vector<std::vector<Rational>> bisimilarity_distance_lp(const SmmModel& model,
                                                            int state_cap = 8);

PseudometricMatrix to_pseudometric(const std::vector<std::vector<Rational>>& m);

}  // namespace smmdist
