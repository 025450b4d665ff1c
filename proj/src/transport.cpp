#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace smmdist {

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  // tolerant pricing so rounding noise cannot stall the pivot loop
  static bool improves(double reduced) { return reduced < -1e-13; }
  static double zero() { return 0.0; }
};

template <>
struct Arith<Rational> {
  static bool improves(const Rational& reduced) { return reduced < 0; }
  static Rational zero() { return Rational(0); }
};

// Transportation simplex on the dense m x n tableau. The basis is kept as a
// spanning tree of the bipartite row/column graph; entering variables are
// picked by Bland's rule (lowest row-major index with an improving reduced
// cost) and ties for the leaving variable break toward the lowest index,
// which rules out cycling.
template <class T>
class TransportSimplex {
 public:
  TransportSimplex(std::vector<T> supply, std::vector<T> demand,
                   const std::vector<std::vector<T>>& cost)
      : m_(supply.size()), n_(demand.size()), cost_(cost),
        basic_(m_ * n_, false), value_(m_ * n_, Arith<T>::zero()) {
    northwest_corner(std::move(supply), std::move(demand));
  }

  void run() {
    const std::size_t guard = 2000 + 64 * m_ * n_ * (m_ + n_);
    for (std::size_t iter = 0; iter < guard; ++iter) {
      compute_duals();
      int ei = -1, ej = -1;
      for (std::size_t i = 0; i < m_ && ei < 0; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (basic_[i * n_ + j]) continue;
          T reduced = cost_[i][j] - u_[i] - v_[j];
          if (Arith<T>::improves(reduced)) {
            ei = static_cast<int>(i);
            ej = static_cast<int>(j);
            break;
          }
        }
      }
      if (ei < 0) return;
      pivot(static_cast<std::size_t>(ei), static_cast<std::size_t>(ej));
    }
    throw std::runtime_error("transportation simplex failed to terminate");
  }

  std::vector<std::vector<T>> plan() const {
    std::vector<std::vector<T>> p(m_, std::vector<T>(n_, Arith<T>::zero()));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic_[i * n_ + j]) p[i][j] = value_[i * n_ + j];
      }
    }
    return p;
  }

 private:
  void northwest_corner(std::vector<T> a, std::vector<T> b) {
    std::size_t i = 0, j = 0;
    for (;;) {
      const T x = std::min(a[i], b[j]);
      basic_[i * n_ + j] = true;
      value_[i * n_ + j] = x;
      a[i] -= x;
      b[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i < m_ - 1 && (a[i] == Arith<T>::zero() || j == n_ - 1)) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Duals from the basis tree: u_i + v_j = c_ij on basic cells, u_0 = 0.
  void compute_duals() {
    u_.assign(m_, Arith<T>::zero());
    v_.assign(n_, Arith<T>::zero());
    std::vector<bool> done(m_ + n_, false);
    std::queue<std::size_t> bfs;
    done[0] = true;
    bfs.push(0);
    while (!bfs.empty()) {
      const std::size_t node = bfs.front();
      bfs.pop();
      if (node < m_) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (basic_[node * n_ + j] && !done[m_ + j]) {
            v_[j] = cost_[node][j] - u_[node];
            done[m_ + j] = true;
            bfs.push(m_ + j);
          }
        }
      } else {
        const std::size_t j = node - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (basic_[i * n_ + j] && !done[i]) {
            u_[i] = cost_[i][j] - v_[j];
            done[i] = true;
            bfs.push(i);
          }
        }
      }
    }
  }

  // Unique tree path from row ei to column ej; closing it with the entering
  // cell forms the pivot cycle.
  std::vector<std::size_t> tree_path(std::size_t ei, std::size_t ej) const {
    std::vector<int> parent(m_ + n_, -1);
    std::vector<bool> seen(m_ + n_, false);
    std::queue<std::size_t> bfs;
    seen[ei] = true;
    bfs.push(ei);
    while (!bfs.empty()) {
      const std::size_t node = bfs.front();
      bfs.pop();
      if (node == m_ + ej) break;
      if (node < m_) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (basic_[node * n_ + j] && !seen[m_ + j]) {
            seen[m_ + j] = true;
            parent[m_ + j] = static_cast<int>(node);
            bfs.push(m_ + j);
          }
        }
      } else {
        const std::size_t j = node - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (basic_[i * n_ + j] && !seen[i]) {
            seen[i] = true;
            parent[i] = static_cast<int>(node);
            bfs.push(i);
          }
        }
      }
    }
    std::vector<std::size_t> path;
    for (int node = static_cast<int>(m_ + ej); node != -1; node = parent[node]) {
      path.push_back(static_cast<std::size_t>(node));
    }
    std::reverse(path.begin(), path.end());  // ei ... m_+ej
    return path;
  }

  void pivot(std::size_t ei, std::size_t ej) {
    const auto path = tree_path(ei, ej);
    // cells along the path alternate -,+,-,...; the entering cell takes +
    std::vector<std::pair<std::size_t, std::size_t>> minus, plus;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const std::size_t a = path[k], b = path[k + 1];
      const std::size_t i = a < m_ ? a : b;
      const std::size_t j = a < m_ ? b - m_ : a - m_;
      if (k % 2 == 0) {
        minus.emplace_back(i, j);
      } else {
        plus.emplace_back(i, j);
      }
    }
    // leaving cell: smallest value among the minus cells, lowest index on ties
    std::size_t li = minus[0].first, lj = minus[0].second;
    T theta = value_[li * n_ + lj];
    for (const auto& [i, j] : minus) {
      const T& val = value_[i * n_ + j];
      if (val < theta || (val == theta && (i < li || (i == li && j < lj)))) {
        theta = val;
        li = i;
        lj = j;
      }
    }
    for (const auto& [i, j] : plus) value_[i * n_ + j] += theta;
    for (const auto& [i, j] : minus) value_[i * n_ + j] -= theta;
    basic_[li * n_ + lj] = false;
    value_[li * n_ + lj] = Arith<T>::zero();
    basic_[ei * n_ + ej] = true;
    value_[ei * n_ + ej] = theta;
  }

  std::size_t m_, n_;
  const std::vector<std::vector<T>>& cost_;
  std::vector<bool> basic_;
  std::vector<T> value_;
  std::vector<T> u_, v_;
};

// Zero-mass marginal entries are removed before solving and restored as zero
// rows/columns of the plan.
template <class T>
struct Reduced {
  std::vector<std::size_t> rows, cols;
  std::vector<T> mu, nu;
  std::vector<std::vector<T>> cost;
};

template <class T>
Reduced<T> reduce(const std::vector<T>& mu, const std::vector<T>& nu,
                  const std::vector<std::vector<T>>* cost) {
  Reduced<T> r;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] == Arith<T>::zero())) {
      r.rows.push_back(i);
      r.mu.push_back(mu[i]);
    }
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (!(nu[j] == Arith<T>::zero())) {
      r.cols.push_back(j);
      r.nu.push_back(nu[j]);
    }
  }
  if (r.rows.empty() || r.cols.empty()) {
    throw std::invalid_argument("marginal with no mass");
  }
  if (cost) {
    r.cost.assign(r.rows.size(), std::vector<T>(r.cols.size(), Arith<T>::zero()));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      for (std::size_t j = 0; j < r.cols.size(); ++j) {
        r.cost[i][j] = (*cost)[r.rows[i]][r.cols[j]];
      }
    }
  }
  return r;
}

template <class T>
void check_distribution(const std::vector<T>& w, double slack) {
  T sum = Arith<T>::zero();
  bool nonneg = true;
  for (const auto& x : w) {
    sum += x;
    if (x < Arith<T>::zero()) nonneg = false;
  }
  bool ok;
  if constexpr (std::is_same_v<T, double>) {
    ok = std::abs(sum - 1.0) <= slack;
  } else {
    (void)slack;
    ok = sum == 1;
  }
  if (!ok || !nonneg) throw std::invalid_argument("marginals must be distributions summing to 1");
}

template <class T, class Plan>
Plan solve(const std::vector<T>& mu, const std::vector<T>& nu,
           const std::vector<std::vector<T>>& cost) {
  check_distribution(mu, 1e-9);
  check_distribution(nu, 1e-9);
  if (cost.size() != mu.size()) throw std::invalid_argument("cost row count mismatch");
  for (const auto& row : cost) {
    if (row.size() != nu.size()) throw std::invalid_argument("cost column count mismatch");
  }
  auto red = reduce<T>(mu, nu, &cost);
  TransportSimplex<T> simplex(red.mu, red.nu, red.cost);
  simplex.run();
  const auto small = simplex.plan();
  Plan out;
  out.mass.assign(mu.size(), std::vector<T>(nu.size(), Arith<T>::zero()));
  out.cost = Arith<T>::zero();
  for (std::size_t i = 0; i < red.rows.size(); ++i) {
    for (std::size_t j = 0; j < red.cols.size(); ++j) {
      out.mass[red.rows[i]][red.cols[j]] = small[i][j];
      out.cost += small[i][j] * red.cost[i][j];
    }
  }
  return out;
}

}  // namespace

TransportPlan kantorovich(const std::vector<double>& mu, const std::vector<double>& nu,
                          const std::vector<std::vector<double>>& cost) {
  return solve<double, TransportPlan>(mu, nu, cost);
}

TransportPlanExact kantorovich_exact(const std::vector<Rational>& mu,
                                     const std::vector<Rational>& nu,
                                     const std::vector<std::vector<Rational>>& cost) {
  return solve<Rational, TransportPlanExact>(mu, nu, cost);
}

TransportPlan min_discrepancy_coupling(const std::vector<double>& mu,
                                       const std::vector<double>& nu) {
  if (mu.size() != nu.size()) throw std::invalid_argument("marginal size mismatch");
  std::vector<std::vector<double>> cost(mu.size(), std::vector<double>(nu.size(), 1.0));
  for (std::size_t i = 0; i < mu.size(); ++i) cost[i][i] = 0.0;
  return kantorovich(mu, nu, cost);
}

namespace {

// Flows on a spanning tree are forced: peel leaves, each leaf's remaining
// supply rides its only incident edge.
bool tree_flows(const std::vector<std::pair<int, int>>& edges, std::size_t m, std::size_t n,
                std::vector<Rational> a, std::vector<Rational> b,
                std::vector<Rational>& flow_out) {
  const std::size_t nodes = m + n;
  std::vector<std::vector<std::size_t>> incident(nodes);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[edges[e].first].push_back(e);
    incident[m + edges[e].second].push_back(e);
  }
  std::vector<int> degree(nodes);
  std::vector<bool> edge_done(edges.size(), false);
  std::queue<std::size_t> leaves;
  for (std::size_t v = 0; v < nodes; ++v) {
    degree[v] = static_cast<int>(incident[v].size());
    if (degree[v] == 1) leaves.push(v);
  }
  flow_out.assign(edges.size(), Rational(0));
  std::size_t processed = 0;
  while (!leaves.empty()) {
    const std::size_t v = leaves.front();
    leaves.pop();
    if (degree[v] != 1) continue;
    std::size_t e = 0;
    bool found = false;
    for (std::size_t cand : incident[v]) {
      if (!edge_done[cand]) {
        e = cand;
        found = true;
        break;
      }
    }
    if (!found) continue;
    const auto [i, j] = edges[e];
    const Rational f = v < m ? a[i] : b[j];
    if (f < 0) return false;
    flow_out[e] = f;
    a[i] -= f;
    b[j] -= f;
    edge_done[e] = true;
    ++processed;
    for (std::size_t w : {static_cast<std::size_t>(i), m + j}) {
      if (--degree[w] == 1) leaves.push(w);
    }
    degree[v] = 0;
  }
  if (processed != edges.size()) return false;
  for (const auto& f : flow_out) {
    if (f < 0) return false;
  }
  return true;
}

struct TreeEnumerator {
  std::size_t m, n;
  std::vector<std::pair<int, int>> all_edges;
  std::vector<std::pair<int, int>> chosen;
  std::vector<Rational> a, b;
  std::set<std::vector<Rational>>* seen;
  std::vector<std::vector<std::vector<Rational>>>* out;
  std::vector<std::size_t> rows, cols;
  std::size_t full_m, full_n;

  int find(std::vector<int>& parent, int x) const {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void recurse(std::size_t idx, std::vector<int> parent, std::size_t components) {
    const std::size_t need = m + n - 1;
    if (chosen.size() == need) {
      if (components != 1) return;
      std::vector<Rational> flow;
      if (!tree_flows(chosen, m, n, a, b, flow)) return;
      std::vector<Rational> key(m * n, Rational(0));
      for (std::size_t e = 0; e < chosen.size(); ++e) {
        key[chosen[e].first * n + chosen[e].second] = flow[e];
      }
      if (!seen->insert(key).second) return;
      std::vector<std::vector<Rational>> vertex(full_m, std::vector<Rational>(full_n, Rational(0)));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          vertex[rows[i]][cols[j]] = key[i * n + j];
        }
      }
      out->push_back(std::move(vertex));
      return;
    }
    if (all_edges.size() - idx < need - chosen.size()) return;
    const auto [i, j] = all_edges[idx];
    const int ri = find(parent, i);
    const int rj = find(parent, static_cast<int>(m) + j);
    if (ri != rj) {
      auto next = parent;
      next[ri] = rj;
      chosen.push_back(all_edges[idx]);
      recurse(idx + 1, std::move(next), components - 1);
      chosen.pop_back();
    }
    recurse(idx + 1, std::move(parent), components);
  }
};

}  // namespace

std::vector<std::vector<std::vector<Rational>>> transport_polytope_vertices(
    const std::vector<Rational>& mu, const std::vector<Rational>& nu, std::size_t tree_limit) {
  check_distribution(mu, 0);
  check_distribution(nu, 0);
  auto red = reduce<Rational>(mu, nu, nullptr);
  const std::size_t m = red.mu.size(), n = red.nu.size();
  // Cayley-style bound on spanning trees of K_{m,n}
  double bound = 1.0;
  for (std::size_t k = 1; k < n; ++k) bound *= static_cast<double>(m);
  for (std::size_t k = 1; k < m; ++k) bound *= static_cast<double>(n);
  if (bound > static_cast<double>(tree_limit)) {
    throw std::invalid_argument("transportation polytope too large for vertex enumeration");
  }
  TreeEnumerator en;
  en.m = m;
  en.n = n;
  en.a = red.mu;
  en.b = red.nu;
  en.rows = red.rows;
  en.cols = red.cols;
  en.full_m = mu.size();
  en.full_n = nu.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) en.all_edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  std::set<std::vector<Rational>> seen;
  std::vector<std::vector<std::vector<Rational>>> out;
  en.seen = &seen;
  en.out = &out;
  std::vector<int> parent(m + n);
  std::iota(parent.begin(), parent.end(), 0);
  en.recurse(0, std::move(parent), m + n);
  return out;
}

}  // namespace smmdist
