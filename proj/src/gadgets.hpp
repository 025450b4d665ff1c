#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "model.hpp"

namespace smmdist {

struct UndirectedGraph {
  int n = 0;                            // vertices 1..n
  std::set<std::pair<int, int>> edges;  // stored with first < second

  bool adjacent(int u, int v) const;
  int degree(int v) const;
  void add_edge(int u, int v);

  static UndirectedGraph from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Model fragment with two link points: probability flows in through the
// source, through the labelled internal states, and out through the sink.
// Link points are pure composition devices and never become states.
struct Gadget {
  static constexpr int kSink = -1;

  struct Edge {
    Rational p;
    int target = kSink;  // internal state index or kSink
  };

  std::vector<std::string> state_props;       // one proposition per state
  std::vector<std::vector<Edge>> transitions; // per internal state
  std::vector<Edge> entry;                    // out of the source link point
};

// Bare link: source wired straight to sink.
Gadget identity_gadget();

// Glue g1's sink onto g2's source; edge probabilities multiply through.
Gadget sequence(const Gadget& g1, const Gadget& g2);

// Probability-eps detour through g, 1-eps through a fresh beta-labelled
// bypass state, both rejoining at the sink. g must not use the beta label.
Gadget rescale(const Gadget& g, const Rational& eps);

// Materializes a gadget between a fresh alpha start state and an absorbing
// omega end state; every non-absorbing state gets the shared residence
// distribution. State names carry `prefix` so unions stay disjoint.
SmmModel gadget_model(const Gadget& g, const ResidenceDist& kappa, const std::string& prefix);

// One hop of the vertex gadget for v at position u: forced state when u = v,
// an optional 1/2-1/2 visit when u is adjacent to v, a bare link otherwise.
Gadget hop_gadget(const UndirectedGraph& g, int v, int u);

// The vertex gadget: hops 1..n in sequence. It realizes, each with equal
// probability, exactly the increasing vertex words that contain v and stay
// inside v's neighbourhood; there are 2^deg(v) of them.
Gadget vertex_gadget(const UndirectedGraph& g, int v);

// alpha-source fanning into every vertex_gadget(v) with probability
// 2^deg(v) / gamma, gamma = sum_v 2^deg(v); all sinks on an absorbing
// omega state. Every source-to-sink path has probability exactly 1/gamma.
SmmModel graph_word_model(const UndirectedGraph& g, const ResidenceDist& kappa);

// alpha -> chain of n optional 1/2-1/2 vertex hops -> omega: all 2^n
// increasing vertex words, uniformly.
SmmModel free_word_model(int n, const ResidenceDist& kappa);

// Calibration instance i: the disjoint union of the graph model and the free
// model, one of the two rescaled so their word masses meet at i words'
// worth. Returns the two start states.
struct CalibratedPair {
  SmmModel model;
  int start_graph = 0;
  int start_free = 0;
};
CalibratedPair calibrated_pair(const UndirectedGraph& g, int i, const ResidenceDist& kappa);

// Recovers the word-count histogram from the n calibration distances by an
// exact rational linear solve, and with it the maximum clique size.
// counts[j] is the number of increasing vertex words the graph model hits
// with probability j/gamma (j = 0..n); the largest j >= 1 with a nonzero
// count is the clique number.
struct CliqueRecovery {
  std::vector<BigInt> counts;
  int clique_size = 0;
};
CliqueRecovery recover_max_clique(const UndirectedGraph& g, const std::vector<Rational>& deltas);

// Full pipeline: build the n calibration instances, evaluate their exact
// trace distances, solve. kappa defaults to Dirac(0) at the CLI.
CliqueRecovery solve_max_clique(const UndirectedGraph& g, const ResidenceDist& kappa,
                                int threads = 0);

// Absolute-error threshold below which approximating the trace distance
// would approximate Max Clique within factor alpha: (n-1)/(n*2^n) * (alpha-1).
double approximation_error_threshold(int n, double alpha);

}  // namespace smmdist
