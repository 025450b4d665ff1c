#include "gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "worddist.hpp"

namespace smmdist {

// ---------------------------------------------------------------------------
// Graphs

bool UndirectedGraph::adjacent(int u, int v) const {
  if (u > v) std::swap(u, v);
  return edges.count({u, v}) != 0;
}

int UndirectedGraph::degree(int v) const {
  int d = 0;
  for (const auto& [a, b] : edges) {
    if (a == v || b == v) ++d;
  }
  return d;
}

void UndirectedGraph::add_edge(int u, int v) {
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (u < 1 || v < 1 || u > n || v > n) throw std::invalid_argument("edge endpoint out of range");
  if (u > v) std::swap(u, v);
  edges.insert({u, v});
}

UndirectedGraph UndirectedGraph::from_json(const nlohmann::json& j) {
  UndirectedGraph g;
  g.n = j.at("n").get<int>();
  if (g.n < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edges are [u,v] pairs");
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  return g;
}

nlohmann::json UndirectedGraph::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  nlohmann::ordered_json edges = nlohmann::json::array();
  for (const auto& [u, v] : this->edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j;
}

// ---------------------------------------------------------------------------
// Gadgets

Gadget identity_gadget() {
  Gadget g;
  g.entry.push_back({Rational(1), Gadget::kSink});
  return g;
}

namespace {

// splice an edge list of g1 through the entry of g2 (targets offset)
std::vector<Gadget::Edge> splice(const std::vector<Gadget::Edge>& edges,
                                 const std::vector<Gadget::Edge>& entry2, int offset) {
  std::vector<Gadget::Edge> out;
  for (const auto& e : edges) {
    if (e.target != Gadget::kSink) {
      out.push_back(e);
      continue;
    }
    for (const auto& f : entry2) {
      Gadget::Edge spliced;
      spliced.p = e.p * f.p;
      spliced.target = f.target == Gadget::kSink ? Gadget::kSink : f.target + offset;
      if (spliced.p != 0) out.push_back(spliced);
    }
  }
  return out;
}

std::vector<Gadget::Edge> offset_edges(const std::vector<Gadget::Edge>& edges, int offset) {
  std::vector<Gadget::Edge> out = edges;
  for (auto& e : out) {
    if (e.target != Gadget::kSink) e.target += offset;
  }
  return out;
}

}  // namespace

Gadget sequence(const Gadget& g1, const Gadget& g2) {
  Gadget out;
  out.state_props = g1.state_props;
  out.state_props.insert(out.state_props.end(), g2.state_props.begin(), g2.state_props.end());
  const int offset = static_cast<int>(g1.state_props.size());
  out.transitions.reserve(out.state_props.size());
  for (const auto& row : g1.transitions) out.transitions.push_back(splice(row, g2.entry, offset));
  for (const auto& row : g2.transitions) out.transitions.push_back(offset_edges(row, offset));
  out.entry = splice(g1.entry, g2.entry, offset);
  return out;
}

Gadget rescale(const Gadget& g, const Rational& eps) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("rescale factor must lie in [0,1]");
  for (const auto& p : g.state_props) {
    if (p == "beta") throw std::invalid_argument("rescale needs the beta label to be fresh");
  }
  Gadget out = g;
  out.entry.clear();
  for (const auto& e : g.entry) {
    Gadget::Edge scaled{eps * e.p, e.target};
    if (scaled.p != 0) out.entry.push_back(scaled);
  }
  if (eps != 1) {
    const int beta = static_cast<int>(out.state_props.size());
    out.state_props.push_back("beta");
    out.transitions.push_back({{Rational(1), Gadget::kSink}});
    out.entry.push_back({1 - eps, beta});
  }
  return out;
}

Gadget hop_gadget(const UndirectedGraph& g, int v, int u) {
  if (u == v) {
    Gadget h;
    h.state_props.push_back(std::to_string(v));
    h.transitions.push_back({{Rational(1), Gadget::kSink}});
    h.entry.push_back({Rational(1), 0});
    return h;
  }
  if (g.adjacent(v, u)) {
    Gadget h;
    h.state_props.push_back(std::to_string(u));
    h.transitions.push_back({{Rational(1), Gadget::kSink}});
    h.entry.push_back({Rational(1, 2), 0});
    h.entry.push_back({Rational(1, 2), Gadget::kSink});
    return h;
  }
  return identity_gadget();
}

Gadget vertex_gadget(const UndirectedGraph& g, int v) {
  Gadget out = identity_gadget();
  for (int u = 1; u <= g.n; ++u) out = sequence(out, hop_gadget(g, v, u));
  return out;
}

SmmModel gadget_model(const Gadget& g, const ResidenceDist& kappa, const std::string& prefix) {
  SmmModel m;
  const int n_internal = static_cast<int>(g.state_props.size());
  const int alpha = 0;
  const int omega = n_internal + 1;
  const auto target_of = [&](int t) { return t == Gadget::kSink ? omega : t + 1; };

  m.states.push_back(prefix + "alpha");
  for (int i = 0; i < n_internal; ++i) {
    m.states.push_back(prefix + "s" + std::to_string(i) + "_" + g.state_props[i]);
  }
  m.states.push_back(prefix + "omega");
  const int total = n_internal + 2;
  m.absorbing.assign(total, false);
  m.absorbing[omega] = true;
  m.labels.assign(total, {});
  m.labels[alpha] = {"alpha"};
  m.labels[omega] = {"omega"};
  for (int i = 0; i < n_internal; ++i) m.labels[i + 1] = {g.state_props[i]};
  m.transitions.assign(total, std::nullopt);
  m.residence.assign(total, std::nullopt);

  const auto fill_row = [&](int state, const std::vector<Gadget::Edge>& edges) {
    std::vector<Rational> row(total, Rational(0));
    for (const auto& e : edges) row[target_of(e.target)] += e.p;
    m.transitions[state] = std::move(row);
    m.residence[state] = kappa;
  };
  fill_row(alpha, g.entry);
  for (int i = 0; i < n_internal; ++i) fill_row(i + 1, g.transitions[i]);

  for (const auto& ls : m.labels) m.atomic_props.insert(ls.begin(), ls.end());
  m.rebuild_index();
  return m;
}

namespace {

Gadget free_word_gadget(int n) {
  Gadget chain = identity_gadget();
  for (int u = 1; u <= n; ++u) {
    Gadget h;
    h.state_props.push_back(std::to_string(u));
    h.transitions.push_back({{Rational(1), Gadget::kSink}});
    h.entry.push_back({Rational(1, 2), 0});
    h.entry.push_back({Rational(1, 2), Gadget::kSink});
    chain = sequence(chain, h);
  }
  return chain;
}

Gadget graph_word_gadget(const UndirectedGraph& g) {
  Rational gamma(0);
  std::vector<Rational> weight(g.n + 1);
  for (int v = 1; v <= g.n; ++v) {
    weight[v] = Rational(BigInt(1) << g.degree(v));
    gamma += weight[v];
  }
  Gadget fan;
  for (int v = 1; v <= g.n; ++v) {
    const Gadget lv = vertex_gadget(g, v);
    const int offset = static_cast<int>(fan.state_props.size());
    fan.state_props.insert(fan.state_props.end(), lv.state_props.begin(), lv.state_props.end());
    for (const auto& row : lv.transitions) fan.transitions.push_back(offset_edges(row, offset));
    for (const auto& e : lv.entry) {
      Gadget::Edge scaled;
      scaled.p = weight[v] / gamma * e.p;
      scaled.target = e.target == Gadget::kSink ? Gadget::kSink : e.target + offset;
      if (scaled.p != 0) fan.entry.push_back(scaled);
    }
  }
  return fan;
}

SmmModel disjoint_union(const SmmModel& a, const SmmModel& b) {
  SmmModel m;
  const int na = a.state_count();
  const int nb = b.state_count();
  m.states = a.states;
  m.states.insert(m.states.end(), b.states.begin(), b.states.end());
  m.absorbing = a.absorbing;
  m.absorbing.insert(m.absorbing.end(), b.absorbing.begin(), b.absorbing.end());
  m.labels = a.labels;
  m.labels.insert(m.labels.end(), b.labels.begin(), b.labels.end());
  m.transitions.assign(na + nb, std::nullopt);
  m.residence.assign(na + nb, std::nullopt);
  for (int s = 0; s < na; ++s) {
    if (!a.transitions[s]) continue;
    std::vector<Rational> row(na + nb, Rational(0));
    std::copy(a.transitions[s]->begin(), a.transitions[s]->end(), row.begin());
    m.transitions[s] = std::move(row);
    m.residence[s] = a.residence[s];
  }
  for (int s = 0; s < nb; ++s) {
    if (!b.transitions[s]) continue;
    std::vector<Rational> row(na + nb, Rational(0));
    std::copy(b.transitions[s]->begin(), b.transitions[s]->end(), row.begin() + na);
    m.transitions[na + s] = std::move(row);
    m.residence[na + s] = b.residence[s];
  }
  m.atomic_props = a.atomic_props;
  m.atomic_props.insert(b.atomic_props.begin(), b.atomic_props.end());
  m.rebuild_index();
  return m;
}

Rational two_to(int n) { return Rational(BigInt(1) << n); }

Rational graph_gamma(const UndirectedGraph& g) {
  Rational gamma(0);
  for (int v = 1; v <= g.n; ++v) gamma += Rational(BigInt(1) << g.degree(v));
  return gamma;
}

}  // namespace

SmmModel graph_word_model(const UndirectedGraph& g, const ResidenceDist& kappa) {
  return gadget_model(graph_word_gadget(g), kappa, "g_");
}

SmmModel free_word_model(int n, const ResidenceDist& kappa) {
  return gadget_model(free_word_gadget(n), kappa, "v_");
}

CalibratedPair calibrated_pair(const UndirectedGraph& g, int i, const ResidenceDist& kappa) {
  if (i < 1 || i > g.n) throw std::invalid_argument("calibration index out of range");
  const Rational gamma = graph_gamma(g);
  const Rational pow2n = two_to(g.n);
  SmmModel left, right;
  if (Rational(i) * pow2n <= gamma) {
    left = graph_word_model(g, kappa);
    right = gadget_model(rescale(free_word_gadget(g.n), Rational(i) * pow2n / gamma), kappa, "v_");
  } else {
    left = gadget_model(rescale(graph_word_gadget(g), gamma / (Rational(i) * pow2n)), kappa, "g_");
    right = free_word_model(g.n, kappa);
  }
  CalibratedPair pair;
  pair.start_graph = 0;
  pair.start_free = left.state_count();
  pair.model = disjoint_union(left, right);
  return pair;
}

CliqueRecovery recover_max_clique(const UndirectedGraph& g, const std::vector<Rational>& deltas) {
  const int n = g.n;
  if (static_cast<int>(deltas.size()) != n) {
    throw std::invalid_argument("need one distance per calibration index 1..n");
  }
  const Rational gamma = graph_gamma(g);
  const Rational pow2n = two_to(n);

  // Unknowns x_0..x_n: x_j counts the increasing words of mass j/gamma in
  // the graph model (j = 0 for the words it cannot produce at all). Row 0
  // pins the total count 2^n; row i compares against calibration index i.
  const int dim = n + 1;
  std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim, Rational(0)));
  std::vector<Rational> b(dim, Rational(0));
  for (int j = 0; j <= n; ++j) a[0][j] = 1;
  b[0] = pow2n;
  for (int i = 1; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) a[i][j] = Rational(std::abs(j - i));
    if (Rational(i) * pow2n <= gamma) {
      b[i] = 2 * gamma * deltas[i - 1] + Rational(i) * pow2n - gamma;
    } else {
      b[i] = Rational(i) * 2 * pow2n * deltas[i - 1] + gamma - Rational(i) * pow2n;
    }
  }

  // exact Gaussian elimination
  for (int col = 0; col < dim; ++col) {
    int pivot = -1;
    for (int row = col; row < dim; ++row) {
      if (a[row][col] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw std::runtime_error("singular calibration system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int row = 0; row < dim; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational f = a[row][col] / a[col][col];
      for (int k = col; k < dim; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }

  CliqueRecovery out;
  out.counts.resize(dim);
  for (int j = 0; j < dim; ++j) {
    const Rational x = b[j] / a[j][j];
    if (denominator(x) != 1 || x < 0) {
      throw std::runtime_error("calibration distances are inconsistent with integer word counts");
    }
    out.counts[j] = numerator(x);
  }
  out.clique_size = 0;
  for (int j = n; j >= 1; --j) {
    if (out.counts[j] != 0) {
      out.clique_size = j;
      break;
    }
  }
  return out;
}

CliqueRecovery solve_max_clique(const UndirectedGraph& g, const ResidenceDist& kappa,
                                int threads) {
  std::vector<Rational> deltas(g.n);
  parallel_for(static_cast<std::size_t>(g.n), threads, [&](std::size_t k) {
    const auto pair = calibrated_pair(g, static_cast<int>(k) + 1, kappa);
    // the union is acyclic into its absorbing states, so depth |S| is exact
    const auto bounds = trace_distance_bounds(pair.model, pair.start_graph, pair.start_free,
                                              pair.model.state_count());
    if (bounds.lower != bounds.upper) {
      throw std::runtime_error("calibration model did not fully absorb");
    }
    deltas[k] = bounds.lower;
  });
  return recover_max_clique(g, deltas);
}

double approximation_error_threshold(int n, double alpha) {
  if (n < 2) throw std::invalid_argument("threshold needs n >= 2");
  if (alpha <= 1.0) throw std::invalid_argument("threshold needs alpha > 1");
  return static_cast<double>(n - 1) / (static_cast<double>(n) * std::ldexp(1.0, n)) * (alpha - 1.0);
}

}  // namespace smmdist
