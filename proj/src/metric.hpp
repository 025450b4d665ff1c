#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"
#include "partition.hpp"
#include "transport.hpp"
#include "tv.hpp"

namespace smmdist {

// Symmetric |S| x |S| matrix of values in [0,1] with zero diagonal.
struct PseudometricMatrix {
  int n = 0;
  std::vector<double> v;

  PseudometricMatrix() = default;
  explicit PseudometricMatrix(int size) : n(size), v(static_cast<std::size_t>(size) * size, 0.0) {}

  double get(int i, int j) const { return v[static_cast<std::size_t>(i) * n + j]; }
  void set(int i, int j, double x) {
    v[static_cast<std::size_t>(i) * n + j] = x;
    v[static_cast<std::size_t>(j) * n + i] = x;
  }

  // Largest absolute entry difference.
  double sup_diff(const PseudometricMatrix& o) const;

  // Empty when symmetric with zero diagonal, entries in [0,1] and the
  // triangle inequality within `tol`.
  std::optional<std::string> pseudometric_violation(double tol) const;
};

// One application of the distance operator: pairs with different labels or
// absorbing status map to 1, equivalent absorbing pairs to 0, and the rest to
// alpha + (1 - alpha) * K_d(tau(s), tau(t)) with alpha the residence-time
// total variation.
PseudometricMatrix step_distance(const SmmModel& model,
                                 const std::vector<std::vector<TvResult>>& tv,
                                 const PseudometricMatrix& d, int threads = 0);

// Same, but bisimilar pairs are pinned to 0. This variant has a unique fixed
// point, which the iteration below converges to from the zero matrix.
PseudometricMatrix step_distance_pinned(const SmmModel& model,
                                        const std::vector<std::vector<TvResult>>& tv,
                                        const StatePartition& bisim,
                                        const PseudometricMatrix& d, int threads = 0);

// A synchronous pairing of two copies of the model: per pair a coupling of
// the two transition rows plus the probability mass the paired residence
// times put on unequal delays. Only that discrepancy mass enters the
// computation, so it stands in for the full residence coupling.
struct CouplingSpec {
  std::map<std::pair<int, int>, std::vector<std::vector<double>>> plans;
  std::map<std::pair<int, int>, double> alphas;
};

// One application of the reachability-style operator for a fixed coupling:
// alpha + (1 - alpha) * sum d(u,v) * plan(u,v) on non-trivial pairs. Any
// fixed point of it bounds the bisimilarity distance from above.
PseudometricMatrix coupling_discrepancy_step(const SmmModel& model, const CouplingSpec& coupling,
                                             const PseudometricMatrix& d);

struct DistanceOptions {
  double tolerance = 1e-9;
  int max_iter = 100000;
  int threads = 0;
  bool collect_witnesses = true;
};

struct PairWitness {
  int s = 0, t = 0;
  double alpha = 0.0;
  TransportPlan plan;
};

struct FixpointReport {
  PseudometricMatrix distance;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  // optimal transport plans at the final iterate, one per non-trivial pair
  std::vector<PairWitness> witnesses;
};

// Least fixed point of the pinned distance operator, computed by monotone
// value iteration from the zero matrix with one transportation solve per
// non-trivial state pair and sweep. The kernel of the result is exactly the
// bisimilarity relation.
FixpointReport bisimilarity_distance(const SmmModel& model, const DistanceOptions& opts = {});

}  // namespace smmdist
