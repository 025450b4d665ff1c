#pragma once

// Shared helpers for the test suites: a small model builder, seeded random
// generators for models/distributions/cylinders, and brute-force oracles that
// the implementation is checked against.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "model.hpp"
#include "partition.hpp"
#include "rng.hpp"
#include "tv.hpp"

namespace smmdist::testing {

class ModelBuilder {
 public:
  ModelBuilder& state(const std::string& name, std::vector<std::string> props = {}) {
    names_.push_back(name);
    labels_.push_back({props.begin(), props.end()});
    absorbing_.push_back(false);
    return *this;
  }

  ModelBuilder& absorbing_state(const std::string& name, std::vector<std::string> props = {}) {
    state(name, std::move(props));
    absorbing_.back() = true;
    return *this;
  }

  ModelBuilder& arrow(const std::string& from, const std::string& to, const std::string& prob) {
    arrows_.push_back({from, to, parse_rational(prob)});
    return *this;
  }

  ModelBuilder& res(const std::string& name, ResidenceDist dist) {
    residence_[name] = std::move(dist);
    return *this;
  }

  SmmModel build() const {
    SmmModel m;
    m.states = names_;
    m.rebuild_index();
    const int n = m.state_count();
    m.absorbing = absorbing_;
    m.labels = labels_;
    for (const auto& ls : m.labels) m.atomic_props.insert(ls.begin(), ls.end());
    m.transitions.assign(n, std::nullopt);
    m.residence.assign(n, std::nullopt);
    for (const auto& [from, to, p] : arrows_) {
      const int s = m.state_index(from);
      if (!m.transitions[s]) m.transitions[s] = std::vector<Rational>(n, Rational(0));
      (*m.transitions[s])[m.state_index(to)] += p;
    }
    for (const auto& [name, dist] : residence_) {
      m.residence[m.state_index(name)] = dist;
    }
    return m;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::set<std::string>> labels_;
  std::vector<bool> absorbing_;
  struct Arrow {
    std::string from, to;
    Rational p;
  };
  std::vector<Arrow> arrows_;
  std::map<std::string, ResidenceDist> residence_;
};

// ---------------------------------------------------------------------------
// Random generation

inline ResidenceDist random_residence(SplitMix64& rng) {
  // dirac points and uniform bounds stay dyadic so sampled delays are exact
  static const std::vector<Rational> points = {Rational(0), Rational(1, 2), Rational(1),
                                               Rational(2)};
  static const std::vector<Rational> rates = {Rational(1, 2), Rational(1), Rational(2),
                                              Rational(3)};
  switch (rng.next() % 3) {
    case 0:
      return ResidenceDist::dirac(points[rng.next() % points.size()]);
    case 1:
      return ResidenceDist::exponential(rates[rng.next() % rates.size()]);
    default: {
      const Rational lo = points[rng.next() % points.size()];
      return ResidenceDist::uniform(lo, lo + 1 + Rational(rng.next() % 2));
    }
  }
}

struct RandomModelOptions {
  int min_states = 2;
  int max_states = 10;
  bool allow_absorbing = true;
  bool shared_residence = false;       // one distribution for all states
  bool acyclic_to_absorbing = false;   // forward edges only, forced sink
  int label_pool = 2;                  // propositions "a", "b", ...
};

// Valid by construction: rows are integer-weight distributions normalized to
// exact rationals.
inline SmmModel random_model(SplitMix64& rng, const RandomModelOptions& opts = {}) {
  const int span = opts.max_states - opts.min_states + 1;
  const int n = opts.min_states + static_cast<int>(rng.next() % span);
  SmmModel m;
  for (int s = 0; s < n; ++s) m.states.push_back("s" + std::to_string(s));
  m.rebuild_index();
  m.absorbing.assign(n, false);
  if (opts.acyclic_to_absorbing) {
    m.absorbing[n - 1] = true;
    for (int s = 0; s < n - 1; ++s) m.absorbing[s] = rng.next() % 8 == 0 && s > 0;
  } else if (opts.allow_absorbing) {
    for (int s = 0; s < n; ++s) m.absorbing[s] = rng.next() % 5 == 0;
  }
  m.labels.assign(n, {});
  for (int s = 0; s < n; ++s) {
    for (int p = 0; p < opts.label_pool; ++p) {
      if (rng.next() % 2) m.labels[s].insert(std::string(1, static_cast<char>('a' + p)));
    }
  }
  for (int p = 0; p < opts.label_pool; ++p) m.atomic_props.insert(std::string(1, static_cast<char>('a' + p)));
  m.transitions.assign(n, std::nullopt);
  m.residence.assign(n, std::nullopt);
  const ResidenceDist shared = random_residence(rng);
  for (int s = 0; s < n; ++s) {
    if (m.absorbing[s]) continue;
    std::vector<int> weight(n, 0);
    const int lo = opts.acyclic_to_absorbing ? s + 1 : 0;
    const int targets = 1 + static_cast<int>(rng.next() % 3);
    for (int k = 0; k < targets; ++k) {
      const int t = lo + static_cast<int>(rng.next() % (n - lo));
      weight[t] += 1 + static_cast<int>(rng.next() % 4);
    }
    int total = 0;
    for (int w : weight) total += w;
    std::vector<Rational> row(n, Rational(0));
    for (int t = 0; t < n; ++t) row[t] = Rational(weight[t], total);
    m.transitions[s] = std::move(row);
    m.residence[s] = opts.shared_residence ? shared : random_residence(rng);
  }
  return m;
}

inline std::vector<Rational> random_distribution(SplitMix64& rng, int support) {
  std::vector<int> weight(support, 0);
  const int picks = 1 + static_cast<int>(rng.next() % support);
  for (int k = 0; k < picks; ++k) weight[rng.next() % support] += 1 + static_cast<int>(rng.next() % 5);
  int total = 0;
  for (int w : weight) total += w;
  std::vector<Rational> out(support);
  for (int i = 0; i < support; ++i) out[i] = Rational(weight[i], total);
  return out;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

// random closed-interval trace cylinder over the model's label classes
inline Cylinder random_cylinder(SplitMix64& rng, const SmmModel& model, int max_steps = 3) {
  const auto ids = model.label_class_ids();
  int classes = 0;
  for (int id : ids) classes = std::max(classes, id + 1);
  std::vector<std::vector<int>> members(classes);
  for (int s = 0; s < model.state_count(); ++s) members[ids[s]].push_back(s);
  static const std::vector<Rational> grid = {Rational(0),     Rational(1, 2), Rational(1),
                                             Rational(3, 2),  Rational(2),    Rational(3)};
  Cylinder cyl;
  const int steps = static_cast<int>(rng.next() % (max_steps + 1));
  for (int i = 0; i <= steps; ++i) {
    cyl.state_sets.push_back(members[rng.next() % classes]);
    if (i < steps) {
      Rational a = grid[rng.next() % grid.size()];
      Rational b = grid[rng.next() % grid.size()];
      if (b < a) std::swap(a, b);
      cyl.intervals.push_back(DelayInterval::closed(a, b));
    }
  }
  return cyl;
}

// ---------------------------------------------------------------------------
// Brute-force oracles

// Coarsest equivalence satisfying the bisimulation conditions, found by
// enumerating every set partition (feasible for up to ~6 states).
inline StatePartition brute_force_bisimilarity(const SmmModel& model) {
  const int n = model.state_count();
  std::vector<int> assign(n, 0);
  StatePartition best;
  int best_blocks = n + 1;

  const auto is_bisimulation = [&](const std::vector<int>& blocks, int count) {
    for (int s = 0; s < n; ++s) {
      for (int t = s + 1; t < n; ++t) {
        if (blocks[s] != blocks[t]) continue;
        if (!model.equivalent(s, t)) return false;
        if (model.absorbing[s]) continue;
        if (!residence_equal(*model.residence[s], *model.residence[t])) return false;
        for (int c = 0; c < count; ++c) {
          Rational ms(0), mt(0);
          for (int u = 0; u < n; ++u) {
            if (blocks[u] != c) continue;
            ms += (*model.transitions[s])[u];
            mt += (*model.transitions[t])[u];
          }
          if (ms != mt) return false;
        }
      }
    }
    return true;
  };

  // restricted growth strings enumerate the set partitions once each
  const auto recurse = [&](auto&& self, int i, int used) -> void {
    if (i == n) {
      if (used < best_blocks && is_bisimulation(assign, used)) {
        best_blocks = used;
        best = partition_from_keys(assign);
      }
      return;
    }
    for (int b = 0; b <= used && b < n; ++b) {
      assign[i] = b;
      self(self, i + 1, std::max(used, b + 1));
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

inline int brute_force_max_clique(int n, const std::set<std::pair<int, int>>& edges) {
  int best = 0;
  for (int mask = 1; mask < (1 << n); ++mask) {
    bool clique = true;
    for (int u = 1; u <= n && clique; ++u) {
      if (!(mask & (1 << (u - 1)))) continue;
      for (int v = u + 1; v <= n && clique; ++v) {
        if (!(mask & (1 << (v - 1)))) continue;
        if (!edges.count({u, v})) clique = false;
      }
    }
    if (clique) best = std::max(best, __builtin_popcount(static_cast<unsigned>(mask)));
  }
  return best;
}

}  // namespace smmdist::testing
