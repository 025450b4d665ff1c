#include "metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace smmdist {

double PseudometricMatrix::sup_diff(const PseudometricMatrix& o) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(v[k] - o.v[k]));
  return worst;
}

std::optional<std::string> PseudometricMatrix::pseudometric_violation(double tol) const {
  for (int i = 0; i < n; ++i) {
    if (get(i, i) != 0.0) return "nonzero diagonal";
    for (int j = 0; j < n; ++j) {
      if (get(i, j) < -tol || get(i, j) > 1.0 + tol) return "entry outside [0,1]";
      if (std::abs(get(i, j) - get(j, i)) > tol) return "asymmetric";
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (get(i, k) > get(i, j) + get(j, k) + tol) return "triangle inequality violated";
      }
    }
  }
  return std::nullopt;
}

namespace {

std::vector<std::vector<double>> transition_rows_double(const SmmModel& model) {
  const int n = model.state_count();
  std::vector<std::vector<double>> rows(n);
  for (int s = 0; s < n; ++s) {
    if (!model.transitions[s]) continue;
    rows[s].resize(n);
    for (int t = 0; t < n; ++t) rows[s][t] = to_double((*model.transitions[s])[t]);
  }
  return rows;
}

std::vector<std::vector<double>> cost_from(const PseudometricMatrix& d) {
  std::vector<std::vector<double>> c(d.n, std::vector<double>(d.n));
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) c[i][j] = d.get(i, j);
  }
  return c;
}

struct PairList {
  std::vector<std::pair<int, int>> items;
};

PairList upper_pairs(int n) {
  PairList p;
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) p.items.emplace_back(s, t);
  }
  return p;
}

PseudometricMatrix step_impl(const SmmModel& model, const std::vector<std::vector<TvResult>>& tv,
                             const StatePartition* bisim, const PseudometricMatrix& d,
                             int threads) {
  const int n = model.state_count();
  if (d.n != n) throw std::invalid_argument("matrix size does not match the model");
  const auto rows = transition_rows_double(model);
  const auto cost = cost_from(d);
  PseudometricMatrix out(n);
  const auto pairs = upper_pairs(n);
  parallel_for(pairs.items.size(), threads, [&](std::size_t k) {
    const auto [s, t] = pairs.items[k];
    double value;
    if (bisim && bisim->same_block(s, t)) {
      value = 0.0;
    } else if (!model.equivalent(s, t)) {
      value = 1.0;
    } else if (model.absorbing[s]) {
      value = 0.0;  // equivalent absorbing pair
    } else {
      const double alpha = tv[s][t].value;
      if (alpha >= 1.0) {
        value = 1.0;
      } else {
        const auto plan = kantorovich(rows[s], rows[t], cost);
        value = alpha + (1.0 - alpha) * plan.cost;
      }
    }
    out.set(s, t, std::min(1.0, value));
  });
  return out;
}

}  // namespace

PseudometricMatrix step_distance(const SmmModel& model,
                                 const std::vector<std::vector<TvResult>>& tv,
                                 const PseudometricMatrix& d, int threads) {
  return step_impl(model, tv, nullptr, d, threads);
}

PseudometricMatrix step_distance_pinned(const SmmModel& model,
                                        const std::vector<std::vector<TvResult>>& tv,
                                        const StatePartition& bisim,
                                        const PseudometricMatrix& d, int threads) {
  return step_impl(model, tv, &bisim, d, threads);
}

PseudometricMatrix coupling_discrepancy_step(const SmmModel& model, const CouplingSpec& coupling,
                                             const PseudometricMatrix& d) {
  const int n = model.state_count();
  if (d.n != n) throw std::invalid_argument("matrix size does not match the model");
  const auto tvmat = residence_tv_matrix(model);
  const auto rows = transition_rows_double(model);
  PseudometricMatrix out(n);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (!model.equivalent(s, t)) {
        out.set(s, t, 1.0);
        continue;
      }
      if (model.absorbing[s]) continue;  // stays 0
      const auto key = std::make_pair(s, t);
      auto plan_it = coupling.plans.find(key);
      auto alpha_it = coupling.alphas.find(key);
      if (plan_it == coupling.plans.end() || alpha_it == coupling.alphas.end()) {
        throw std::invalid_argument("coupling must cover every non-trivial pair");
      }
      const auto& plan = plan_it->second;
      // marginals of the supplied coupling must reproduce the two rows
      for (int u = 0; u < n; ++u) {
        double row_sum = 0.0, col_sum = 0.0;
        for (int x = 0; x < n; ++x) {
          row_sum += plan[u][x];
          col_sum += plan[x][u];
          if (plan[u][x] < -1e-12) throw std::invalid_argument("coupling entries must be nonnegative");
        }
        if (std::abs(row_sum - rows[s][u]) > 1e-9 || std::abs(col_sum - rows[t][u]) > 1e-9) {
          throw std::invalid_argument("coupling marginals do not match the transition rows");
        }
      }
      const double alpha = alpha_it->second;
      if (alpha < tvmat[s][t].value - 1e-9 || alpha > 1.0 + 1e-12) {
        throw std::invalid_argument("residence discrepancy below the total-variation floor");
      }
      double expect = 0.0;
      for (int u = 0; u < n; ++u) {
        for (int x = 0; x < n; ++x) {
          if (plan[u][x] != 0.0) expect += plan[u][x] * d.get(u, x);
        }
      }
      out.set(s, t, std::min(1.0, alpha + (1.0 - alpha) * expect));
    }
  }
  return out;
}

FixpointReport bisimilarity_distance(const SmmModel& model, const DistanceOptions& opts) {
  require_valid(model);
  if (opts.tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
  const int n = model.state_count();
  const auto tvmat = residence_tv_matrix(model);
  const auto bisim = bisimilarity_partition(model);

  FixpointReport report;
  PseudometricMatrix d(n);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    PseudometricMatrix next = step_distance_pinned(model, tvmat, bisim, d, opts.threads);
    // iterates from the bottom must be pointwise nondecreasing; anything
    // beyond rounding noise means a broken operator
    for (std::size_t k = 0; k < next.v.size(); ++k) {
      if (next.v[k] < d.v[k] - 1e-12) {
        throw std::runtime_error("distance iteration lost monotonicity");
      }
      next.v[k] = std::max(next.v[k], d.v[k]);
    }
    report.residual = next.sup_diff(d);
    report.iterations = iter;
    d = std::move(next);
    if (report.residual <= opts.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.distance = d;

  if (opts.collect_witnesses) {
    const auto rows = transition_rows_double(model);
    const auto cost = cost_from(d);
    for (int s = 0; s < n; ++s) {
      for (int t = s + 1; t < n; ++t) {
        if (!model.equivalent(s, t) || model.absorbing[s]) continue;
        PairWitness w;
        w.s = s;
        w.t = t;
        w.alpha = tvmat[s][t].value;
        w.plan = kantorovich(rows[s], rows[t], cost);
        report.witnesses.push_back(std::move(w));
      }
    }
  }
  return report;
}

}  // namespace smmdist
