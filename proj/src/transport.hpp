#pragma once

#include <cstddef>
#include <vector>

#include "rational.hpp"

namespace smmdist {

// Coupling of two discrete distributions together with its transport cost.
// Row sums reproduce the left marginal, column sums the right one.
struct TransportPlan {
  std::vector<std::vector<double>> mass;
  double cost = 0.0;
};

struct TransportPlanExact {
  std::vector<std::vector<Rational>> mass;
  Rational cost{0};
};

// Minimal expected cost over all couplings of mu and nu (the finite
// Kantorovich problem), solved by the transportation simplex with Bland's
// rule. The returned plan is a basic solution, i.e. a vertex of the
// transportation polytope. Marginals must each sum to 1 (within 1e-9 for the
// double version, exactly for the rational one).
TransportPlan kantorovich(const std::vector<double>& mu, const std::vector<double>& nu,
                          const std::vector<std::vector<double>>& cost);

TransportPlanExact kantorovich_exact(const std::vector<Rational>& mu,
                                     const std::vector<Rational>& nu,
                                     const std::vector<std::vector<Rational>>& cost);

// Kantorovich under the discrete 0/1 cost; the optimal value is the total
// variation (1/2)*sum |mu - nu|.
TransportPlan min_discrepancy_coupling(const std::vector<double>& mu,
                                       const std::vector<double>& nu);

// All vertices of the transportation polytope of (mu, nu): basic feasible
// solutions enumerated over the spanning trees of the complete bipartite
// support graph. Throws when the tree count bound m^(n-1) * n^(m-1) exceeds
// `tree_limit`.
std::vector<std::vector<std::vector<Rational>>> transport_polytope_vertices(
    const std::vector<Rational>& mu, const std::vector<Rational>& nu,
    std::size_t tree_limit = 2000000);

}  // namespace smmdist
