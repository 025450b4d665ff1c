#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "model.hpp"
#include "speclang.hpp"

namespace smmdist {

// A linear real-time specification in either formalism.
using Spec = std::variant<MtlPtr, Dta>;

Verdict eval_spec(const SmmModel& model, const TimedPath& path, const Spec& spec);

struct Estimate {
  double point = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  long samples = 0;
  double unknown_fraction = 0.0;
  double confidence = 0.0;
};

struct EstimateOptions {
  long samples = 100000;
  int horizon = 1000;
  std::uint64_t seed = 0;
  double confidence = 0.99;
  int threads = 0;
};

// Monte-Carlo estimate of the probability that a run from `start` satisfies
// the specification. `point` is the true fraction among decided samples;
// lower/upper are distribution-free Hoeffding bounds at the requested
// confidence, widened pessimistically by the undecided fraction.
Estimate estimate_sat(const SmmModel& model, int start, const Spec& spec,
                      const EstimateOptions& opts);

// Statistically sound lower bound on the trace distance between two states:
// the largest one-sided gap between confidence intervals across the supplied
// specification family, floored at zero.
double delta_lower_bound(const SmmModel& model, int s1, int s2, const std::vector<Spec>& specs,
                         const EstimateOptions& opts);

}  // namespace smmdist
