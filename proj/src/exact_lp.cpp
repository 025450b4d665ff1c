#include "exact_lp.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "partition.hpp"
#include "transport.hpp"
#include "tv.hpp"

namespace smmdist {

namespace {

// Dense tableau simplex, maximize c.x subject to A.x <= b, x >= 0 with
// b >= 0 (the slack basis is feasible). Bland's rule on both the entering
// and the leaving choice, so the method terminates despite degeneracy.
class RationalSimplex {
 public:
  RationalSimplex(int nvars, const std::vector<std::vector<Rational>>& rows,
                  const std::vector<Rational>& rhs, const std::vector<Rational>& objective)
      : nvars_(nvars), nrows_(static_cast<int>(rows.size())) {
    tab_.assign(nrows_, std::vector<Rational>(nvars_ + nrows_ + 1, Rational(0)));
    for (int i = 0; i < nrows_; ++i) {
      if (rhs[i] < 0) throw std::logic_error("simplex expects nonnegative right-hand sides");
      for (int j = 0; j < nvars_; ++j) tab_[i][j] = rows[i][j];
      tab_[i][nvars_ + i] = 1;
      tab_[i].back() = rhs[i];
    }
    obj_.assign(nvars_ + nrows_ + 1, Rational(0));
    for (int j = 0; j < nvars_; ++j) obj_[j] = -objective[j];
    basis_.resize(nrows_);
    for (int i = 0; i < nrows_; ++i) basis_[i] = nvars_ + i;
  }

  std::vector<Rational> solve() {
    const int ncols = nvars_ + nrows_;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (obj_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) break;
      int leave = -1;
      Rational best_ratio(0);
      for (int i = 0; i < nrows_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rational ratio = tab_[i].back() / tab_[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("linear program is unbounded");
      pivot(leave, enter);
    }
    std::vector<Rational> x(nvars_, Rational(0));
    for (int i = 0; i < nrows_; ++i) {
      if (basis_[i] < nvars_) x[basis_[i]] = tab_[i].back();
    }
    return x;
  }

 private:
  void pivot(int row, int col) {
    const Rational p = tab_[row][col];
    for (auto& x : tab_[row]) x /= p;
    for (int i = 0; i < nrows_; ++i) {
      if (i == row || tab_[i][col] == 0) continue;
      const Rational f = tab_[i][col];
      for (std::size_t j = 0; j < tab_[i].size(); ++j) tab_[i][j] -= f * tab_[row][j];
    }
    if (obj_[col] != 0) {
      const Rational f = obj_[col];
      for (std::size_t j = 0; j < obj_.size(); ++j) obj_[j] -= f * tab_[row][j];
    }
    basis_[row] = col;
  }

  int nvars_, nrows_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> obj_;
  std::vector<int> basis_;
};

}  // namespace

std::vector<std::vector<Rational>> bisimilarity_distance_lp(const SmmModel& model, int state_cap) {
  require_valid(model);
  const int n = model.state_count();
  if (n > state_cap) {
    throw std::invalid_argument("model exceeds the state cap for the exact linear program");
  }
  const auto bisim = bisimilarity_partition(model);
  const auto tvmat = residence_tv_matrix(model);

  // free variables: equivalent, non-bisimilar pairs (necessarily non-absorbing)
  std::map<std::pair<int, int>, int> var_of;
  std::vector<std::pair<int, int>> pairs;
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (bisim.same_block(s, t) || !model.equivalent(s, t)) continue;
      var_of[{s, t}] = static_cast<int>(pairs.size());
      pairs.emplace_back(s, t);
    }
  }
  const int k = static_cast<int>(pairs.size());

  std::vector<Rational> alpha(k);
  for (int p = 0; p < k; ++p) {
    const auto& [s, t] = pairs[p];
    const auto& tv = tvmat[s][t];
    alpha[p] = tv.exact ? tv.value_rational : rational_from_double(tv.value);
  }

  std::vector<std::vector<Rational>> tau(n);
  for (int s = 0; s < n; ++s) {
    if (model.transitions[s]) tau[s] = *model.transitions[s];
  }

  // entry of the full matrix: 0 / 1 pinned, or the current variable value
  const auto entry = [&](int u, int v, const std::vector<Rational>& x) -> Rational {
    if (u == v || bisim.same_block(u, v)) return Rational(0);
    if (!model.equivalent(u, v)) return Rational(1);
    auto it = var_of.find({std::min(u, v), std::max(u, v)});
    return x[it->second];
  };

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> objective(k, Rational(1));
  for (int p = 0; p < k; ++p) {
    std::vector<Rational> row(k, Rational(0));
    row[p] = 1;
    rows.push_back(std::move(row));
    rhs.emplace_back(1);
  }

  std::vector<Rational> x(k, Rational(0));
  for (int round = 0;; ++round) {
    if (round > 10000) throw std::runtime_error("constraint generation failed to converge");
    RationalSimplex lp(k, rows, rhs, objective);
    x = lp.solve();

    std::vector<std::vector<Rational>> cost(n, std::vector<Rational>(n, Rational(0)));
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) cost[u][v] = entry(u, v, x);
    }

    bool violated = false;
    for (int p = 0; p < k; ++p) {
      const auto& [s, t] = pairs[p];
      const auto plan = kantorovich_exact(tau[s], tau[t], cost);
      const Rational bound = alpha[p] + (1 - alpha[p]) * plan.cost;
      if (x[p] <= bound) continue;
      violated = true;
      // constraint induced by the optimal vertex of this pair's polytope
      std::vector<Rational> row(k, Rational(0));
      Rational constant(0);
      row[p] += 1;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          const Rational& w = plan.mass[u][v];
          if (w == 0 || u == v || bisim.same_block(u, v)) continue;
          if (!model.equivalent(u, v)) {
            constant += w;
          } else {
            row[var_of[{std::min(u, v), std::max(u, v)}]] -= (1 - alpha[p]) * w;
          }
        }
      }
      rows.push_back(std::move(row));
      rhs.push_back(alpha[p] + (1 - alpha[p]) * constant);
    }
    if (!violated) break;
  }

  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n, Rational(0)));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) out[u][v] = entry(u, v, x);
  }
  return out;
}

PseudometricMatrix to_pseudometric(const std::vector<std::vector<Rational>>& m) {
  PseudometricMatrix d(static_cast<int>(m.size()));
  for (int i = 0; i < d.n; ++i) {
    for (int j = 0; j < d.n; ++j) {
      d.v[static_cast<std::size_t>(i) * d.n + j] = to_double(m[i][j]);
    }
  }
  return d;
}

}  // namespace smmdist
