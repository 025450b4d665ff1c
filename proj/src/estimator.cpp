#include "estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "rng.hpp"

namespace smmdist {

Verdict eval_spec(const SmmModel& model, const TimedPath& path, const Spec& spec) {
  if (std::holds_alternative<MtlPtr>(spec)) {
    return mtl_eval(model, path, *std::get<MtlPtr>(spec));
  }
  return dta_accepts(model, path, std::get<Dta>(spec));
}

Estimate estimate_sat(const SmmModel& model, int start, const Spec& spec,
                      const EstimateOptions& opts) {
  require_valid(model);
  if (opts.samples < 1) throw std::invalid_argument("need at least one sample");
  if (opts.confidence <= 0.0 || opts.confidence >= 1.0) {
    throw std::invalid_argument("confidence must lie in (0,1)");
  }
  std::atomic<long> n_true{0}, n_false{0}, n_unknown{0};
  parallel_for(static_cast<std::size_t>(opts.samples), opts.threads, [&](std::size_t k) {
    const TimedPath path = sample_path(model, start, opts.horizon, derive_seed(opts.seed, k));
    switch (eval_spec(model, path, spec)) {
      case Verdict::True:
        n_true.fetch_add(1, std::memory_order_relaxed);
        break;
      case Verdict::False:
        n_false.fetch_add(1, std::memory_order_relaxed);
        break;
      case Verdict::Unknown:
        n_unknown.fetch_add(1, std::memory_order_relaxed);
        break;
    }
  });
  const double n = static_cast<double>(opts.samples);
  const long decided = n_true + n_false;
  // two-sided Hoeffding half-width at the requested confidence
  const double width = std::sqrt(std::log(2.0 / (1.0 - opts.confidence)) / (2.0 * n));
  Estimate e;
  e.samples = opts.samples;
  e.confidence = opts.confidence;
  e.unknown_fraction = static_cast<double>(n_unknown) / n;
  e.point = decided > 0 ? static_cast<double>(n_true) / static_cast<double>(decided) : 0.5;
  // undecided runs may fall on either side, so they widen both bounds
  e.lower = std::max(0.0, static_cast<double>(n_true) / n - width);
  e.upper = std::min(1.0, (static_cast<double>(n_true) + static_cast<double>(n_unknown)) / n + width);
  return e;
}

double delta_lower_bound(const SmmModel& model, int s1, int s2, const std::vector<Spec>& specs,
                         const EstimateOptions& opts) {
  double best = 0.0;
  EstimateOptions per = opts;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    per.seed = derive_seed(opts.seed, 2 * i);
    const Estimate a = estimate_sat(model, s1, specs[i], per);
    per.seed = derive_seed(opts.seed, 2 * i + 1);
    const Estimate b = estimate_sat(model, s2, specs[i], per);
    best = std::max(best, a.lower - b.upper);
    best = std::max(best, b.lower - a.upper);
  }
  return std::max(0.0, best);
}

}  // namespace smmdist
