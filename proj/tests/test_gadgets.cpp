#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "gadgets.hpp"
#include "rng.hpp"
#include "support.hpp"
#include "worddist.hpp"

using namespace smmdist;

namespace {

UndirectedGraph triangle() {
  UndirectedGraph g;
  g.n = 3;
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(1, 3);
  return g;
}

UndirectedGraph path4() {
  UndirectedGraph g;
  g.n = 4;
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  return g;
}

UndirectedGraph random_graph(SplitMix64& rng, int n, int percent) {
  UndirectedGraph g;
  g.n = n;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (rng.next() % 100 < static_cast<unsigned>(percent)) g.add_edge(u, v);
    }
  }
  return g;
}

Gadget two_branch(const std::string& a, const std::string& b, Rational pa, Rational pb) {
  Gadget g;
  g.state_props = {a, b};
  g.transitions = {{{Rational(1), Gadget::kSink}}, {{Rational(1), Gadget::kSink}}};
  g.entry = {{pa, 0}, {pb, 1}};
  return g;
}

// words keyed by label-set sequences, comparable across different models
std::map<std::vector<std::set<std::string>>, Rational> words_of(const SmmModel& m, int start) {
  const auto dist = absorbed_word_distribution(m, start, m.state_count());
  std::map<std::vector<std::set<std::string>>, Rational> out;
  for (const auto& [word, p] : dist.words) {
    std::vector<std::set<std::string>> labelled;
    for (int cls : word) labelled.push_back(dist.class_labels[cls]);
    out[labelled] += p;
  }
  return out;
}

// all source-to-sink path probabilities of a compiled gadget model
void enumerate_paths(const SmmModel& m, int state, const Rational& mass,
                     const std::function<void(const Rational&)>& emit) {
  if (m.absorbing[state]) {
    emit(mass);
    return;
  }
  const auto& row = *m.transitions[state];
  for (int t = 0; t < m.state_count(); ++t) {
    if (row[t] != 0) enumerate_paths(m, t, mass * row[t], emit);
  }
}

}  // namespace

TEST_CASE("composition with the bare link changes nothing") {
  const Gadget g = two_branch("1", "2", Rational(1, 2), Rational(1, 2));
  const auto kappa = ResidenceDist::dirac(Rational(0));
  const auto plain = words_of(gadget_model(g, kappa, "x_"), 0);
  CHECK(words_of(gadget_model(sequence(g, identity_gadget()), kappa, "x_"), 0) == plain);
  CHECK(words_of(gadget_model(sequence(identity_gadget(), g), kappa, "x_"), 0) == plain);
}

TEST_CASE("sequencing two branch gadgets multiplies the probabilities") {
  const Gadget g1 = two_branch("1", "2", Rational(1, 2), Rational(1, 2));
  const Gadget g2 = two_branch("3", "4", Rational(1, 3), Rational(2, 3));
  const Gadget seq = sequence(g1, g2);
  // four composite routes with products 1/6, 1/3, 1/6, 1/3
  std::multiset<Rational> probs;
  for (const auto& row : seq.transitions) {
    for (const auto& e : row) {
      if (e.target != Gadget::kSink) probs.insert(e.p);
    }
  }
  // each of states 1,2 fans into states 3,4 with the g2 entry masses
  CHECK(probs == std::multiset<Rational>{Rational(1, 3), Rational(1, 3), Rational(2, 3),
                                         Rational(2, 3)});
}

TEST_CASE("sequential composition is associative on word distributions") {
  const Gadget a = two_branch("1", "2", Rational(1, 4), Rational(3, 4));
  const Gadget b = two_branch("3", "4", Rational(1, 2), Rational(1, 2));
  const Gadget c = two_branch("5", "6", Rational(2, 5), Rational(3, 5));
  const auto kappa = ResidenceDist::dirac(Rational(0));
  const auto left = gadget_model(sequence(sequence(a, b), c), kappa, "l_");
  const auto right = gadget_model(sequence(a, sequence(b, c)), kappa, "r_");
  CHECK(words_of(left, 0) == words_of(right, 0));
}

TEST_CASE("rescaling by one keeps the word distribution") {
  const Gadget g = two_branch("1", "2", Rational(1, 2), Rational(1, 2));
  const auto kappa = ResidenceDist::dirac(Rational(0));
  CHECK(words_of(gadget_model(rescale(g, Rational(1)), kappa, "x_"), 0) ==
        words_of(gadget_model(g, kappa, "x_"), 0));
}

TEST_CASE("rescaling by zero sends all mass through the bypass") {
  const Gadget g = two_branch("1", "2", Rational(1, 2), Rational(1, 2));
  const auto m = gadget_model(rescale(g, Rational(0)), ResidenceDist::dirac(Rational(0)), "x_");
  const auto words = words_of(m, 0);
  REQUIRE(words.size() == 1);
  CHECK(words.begin()->second == 1);
}

TEST_CASE("rescaling scales every original word by the factor") {
  const Gadget g = two_branch("1", "2", Rational(1, 2), Rational(1, 2));
  const auto kappa = ResidenceDist::dirac(Rational(0));
  const auto plain = words_of(gadget_model(g, kappa, "x_"), 0);
  const auto scaled_words = words_of(gadget_model(rescale(g, Rational(1, 4)), kappa, "x_"), 0);
  for (const auto& [word, p] : plain) {
    auto it = scaled_words.find(word);
    REQUIRE(it != scaled_words.end());
    CHECK(it->second == p / 4);
  }
}

TEST_CASE("rescale rejects factors outside the unit interval and reused beta") {
  const Gadget g = two_branch("1", "2", Rational(1, 2), Rational(1, 2));
  CHECK_THROWS_AS(rescale(g, Rational(3, 2)), std::invalid_argument);
  Gadget with_beta = g;
  with_beta.state_props[0] = "beta";
  CHECK_THROWS_AS(rescale(with_beta, Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("single-vertex graph model produces one word") {
  UndirectedGraph g;
  g.n = 1;
  const auto m = graph_word_model(g, ResidenceDist::dirac(Rational(0)));
  const auto words = words_of(m, 0);
  REQUIRE(words.size() == 1);
  CHECK(words.begin()->second == 1);
  CHECK(words.begin()->first.size() == 3);  // alpha, vertex, omega
}

TEST_CASE("the free model over two vertices is uniform on four words") {
  const auto m = free_word_model(2, ResidenceDist::dirac(Rational(0)));
  const auto words = words_of(m, 0);
  REQUIRE(words.size() == 4);
  for (const auto& [word, p] : words) CHECK(p == Rational(1, 4));
}

TEST_CASE("triangle edge words carry mass 2/gamma") {
  const auto g = triangle();
  const auto m = graph_word_model(g, ResidenceDist::dirac(Rational(0)));
  const auto class_ids = m.label_class_ids();
  const auto dist = absorbed_word_distribution(m, 0, m.state_count());
  // map labels to class ids for readable lookups
  const auto class_of_label = [&](const std::string& label) {
    for (int s = 0; s < m.state_count(); ++s) {
      if (m.labels[s].count(label)) return class_ids[s];
    }
    FAIL("label not found");
    return -1;
  };
  const Rational gamma(12);
  int edge_words = 0;
  for (const auto& [word, p] : dist.words) {
    if (word.size() == 4) {  // alpha v u omega
      CHECK(p == Rational(2) / gamma);
      ++edge_words;
    }
  }
  CHECK(edge_words == 3);
  // the full clique word has mass 3/gamma
  const std::vector<int> clique_word = {class_of_label("alpha"), class_of_label("1"),
                                        class_of_label("2"), class_of_label("3"),
                                        class_of_label("omega")};
  REQUIRE(dist.words.count(clique_word));
  CHECK(dist.words.at(clique_word) == Rational(3) / gamma);
}

TEST_CASE("every source-to-sink path in the graph model weighs exactly 1/gamma") {
  SplitMix64 rng(4040);
  for (int round = 0; round < 12; ++round) {
    const auto g = random_graph(rng, 2 + static_cast<int>(rng.next() % 5), 50);
    const auto m = graph_word_model(g, ResidenceDist::dirac(Rational(0)));
    Rational gamma(0);
    for (int v = 1; v <= g.n; ++v) gamma += Rational(BigInt(1) << g.degree(v));
    int paths = 0;
    enumerate_paths(m, 0, Rational(1), [&](const Rational& p) {
      CHECK(p == 1 / gamma);
      ++paths;
    });
    CHECK(Rational(paths) == gamma);
  }
}

TEST_CASE("a word has mass k/gamma exactly when its vertices form a clique") {
  SplitMix64 rng(5050);
  for (int round = 0; round < 12; ++round) {
    const auto g = random_graph(rng, 2 + static_cast<int>(rng.next() % 5), 40);
    const auto m = graph_word_model(g, ResidenceDist::dirac(Rational(0)));
    Rational gamma(0);
    for (int v = 1; v <= g.n; ++v) gamma += Rational(BigInt(1) << g.degree(v));
    const auto dist = absorbed_word_distribution(m, 0, m.state_count());
    const auto class_ids = m.label_class_ids();
    std::map<int, int> vertex_of_class;
    for (int s = 0; s < m.state_count(); ++s) {
      for (int v = 1; v <= g.n; ++v) {
        if (m.labels[s].count(std::to_string(v))) vertex_of_class[class_ids[s]] = v;
      }
    }
    for (const auto& [word, p] : dist.words) {
      std::vector<int> vertices;
      for (std::size_t i = 1; i + 1 < word.size(); ++i) vertices.push_back(vertex_of_class.at(word[i]));
      bool clique = true;
      for (std::size_t a = 0; a < vertices.size() && clique; ++a) {
        for (std::size_t b = a + 1; b < vertices.size() && clique; ++b) {
          if (!g.adjacent(vertices[a], vertices[b])) clique = false;
        }
      }
      const int k = static_cast<int>(vertices.size());
      CHECK(clique == (p == Rational(k) / gamma));
    }
  }
}

TEST_CASE("calibration picks the rescaling side by the mass comparison") {
  // triangle, i = 1: 2^3 = 8 <= gamma = 12, so the free side is rescaled
  const auto pair1 = calibrated_pair(triangle(), 1, ResidenceDist::dirac(Rational(0)));
  const auto words1 = words_of(pair1.model, pair1.start_free);
  Rational beta_mass(0);
  for (const auto& [word, p] : words1) {
    if (word.size() == 3 && p == Rational(1, 3)) beta_mass = p;
  }
  CHECK(beta_mass == Rational(1, 3));  // 1 - 8/12

  // single vertex, i = 1: 2 > gamma = 1, so the graph side is rescaled by 1/2
  UndirectedGraph single;
  single.n = 1;
  const auto pair2 = calibrated_pair(single, 1, ResidenceDist::dirac(Rational(0)));
  const auto words2 = words_of(pair2.model, pair2.start_graph);
  Rational vertex_word_mass(0);
  for (const auto& [word, p] : words2) {
    if (word.size() == 3) vertex_word_mass = p;
  }
  CHECK(vertex_word_mass == Rational(1, 2));
}

TEST_CASE("boundary calibration leaves no bypass mass") {
  // two isolated vertices: gamma = 2, i = ... 2^n = 4; i*4 > 2 for i >= 1,
  // so pick a graph where i*2^n == gamma exists: single edge, n = 2:
  // gamma = 2 + 2 = 4, i = 1: 1*4 == 4 -> factor 1, no beta state
  UndirectedGraph g;
  g.n = 2;
  g.add_edge(1, 2);
  const auto pair = calibrated_pair(g, 1, ResidenceDist::dirac(Rational(0)));
  for (const auto& name : pair.model.states) CHECK(name.find("beta") == std::string::npos);
}

TEST_CASE("recovery over oracle distances finds the clique number") {
  const auto kappa = ResidenceDist::dirac(Rational(0));
  CHECK(solve_max_clique(triangle(), kappa).clique_size == 3);
  CHECK(solve_max_clique(path4(), kappa).clique_size == 2);
  UndirectedGraph single;
  single.n = 1;
  CHECK(solve_max_clique(single, kappa).clique_size == 1);
}

TEST_CASE("recovered counts are a nonnegative integer histogram of the words") {
  SplitMix64 rng(6060);
  for (int round = 0; round < 10; ++round) {
    const auto g = random_graph(rng, 2 + static_cast<int>(rng.next() % 5), 45);
    const auto kappa = ResidenceDist::dirac(Rational(0));
    const auto recovery = solve_max_clique(g, kappa);

    // histogram straight from the graph model's word distribution
    const auto m = graph_word_model(g, kappa);
    Rational gamma(0);
    for (int v = 1; v <= g.n; ++v) gamma += Rational(BigInt(1) << g.degree(v));
    const auto dist = absorbed_word_distribution(m, 0, m.state_count());
    std::vector<BigInt> expected(g.n + 1, 0);
    BigInt produced_total = 0;
    for (const auto& [word, p] : dist.words) {
      const Rational j = p * gamma;
      REQUIRE(denominator(j) == 1);
      expected[static_cast<int>(numerator(j))] += 1;
      produced_total += 1;
    }
    expected[0] = (BigInt(1) << g.n) - produced_total;

    CHECK(recovery.counts == expected);
    CHECK(recovery.clique_size == testing::brute_force_max_clique(g.n, g.edges));
  }
}

TEST_CASE("recovery works with a continuous shared residence too") {
  CHECK(solve_max_clique(triangle(), ResidenceDist::exponential(Rational(1))).clique_size == 3);
}

TEST_CASE("inconsistent distances are rejected instead of rounded") {
  const auto g = triangle();
  std::vector<Rational> deltas = {Rational(5, 12), Rational(1, 2), Rational(1, 2)};
  CHECK_THROWS_AS(recover_max_clique(g, deltas), std::runtime_error);
  CHECK_THROWS_AS(recover_max_clique(g, {Rational(1)}), std::invalid_argument);
}

TEST_CASE("approximation threshold formula") {
  CHECK(approximation_error_threshold(2, 2.0) == doctest::Approx(0.125));
  // vanishes as the factor approaches one
  CHECK(approximation_error_threshold(2, 1.0 + 1e-9) < 1e-9);
  // decreasing in the vertex count
  double prev = approximation_error_threshold(2, 2.0);
  for (int n = 3; n <= 10; ++n) {
    const double cur = approximation_error_threshold(n, 2.0);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(approximation_error_threshold(1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(approximation_error_threshold(3, 1.0), std::invalid_argument);
}

TEST_CASE("graph json round trip and validation") {
  const auto g = path4();
  const auto back = UndirectedGraph::from_json(g.to_json());
  CHECK(back.n == g.n);
  CHECK(back.edges == g.edges);
  CHECK_THROWS_AS(UndirectedGraph::from_json(nlohmann::json::parse(R"({"n":2,"edges":[[1,1]]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(UndirectedGraph::from_json(nlohmann::json::parse(R"({"n":2,"edges":[[1,5]]})")),
                  std::invalid_argument);
}
