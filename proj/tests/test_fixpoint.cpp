#include <cmath>

#include "doctest.h"
#include "exact_lp.hpp"
#include "metric.hpp"
#include "rng.hpp"
#include "support.hpp"
#include "worddist.hpp"

using namespace smmdist;
using testing::ModelBuilder;

namespace {

SmmModel parallel_labelled_pair() {
  // a and b share labels and residence but hit differently labelled targets
  return ModelBuilder()
      .state("a", {"p"})
      .state("b", {"p"})
      .absorbing_state("x", {"good"})
      .absorbing_state("y", {"bad"})
      .arrow("a", "x", "1")
      .arrow("b", "y", "1")
      .res("a", ResidenceDist::exponential(Rational(1)))
      .res("b", ResidenceDist::exponential(Rational(2)))
      .build();
}

}  // namespace

TEST_CASE("one operator application on equal rows is zero") {
  auto m = ModelBuilder()
               .state("a", {"p"})
               .state("b", {"p"})
               .absorbing_state("t", {"end"})
               .arrow("a", "t", "1")
               .arrow("b", "t", "1")
               .res("a", ResidenceDist::exponential(Rational(1)))
               .res("b", ResidenceDist::exponential(Rational(1)))
               .build();
  const auto tv = residence_tv_matrix(m);
  const auto out = step_distance(m, tv, PseudometricMatrix(3));
  CHECK(out.get(0, 1) == 0.0);
}

TEST_CASE("differently labelled pairs jump to one regardless of d") {
  auto m = ModelBuilder()
               .absorbing_state("x", {"good"})
               .absorbing_state("y", {"bad"})
               .build();
  const auto tv = residence_tv_matrix(m);
  PseudometricMatrix d(2);
  const auto out = step_distance(m, tv, d);
  CHECK(out.get(0, 1) == 1.0);
}

TEST_CASE("full residence discrepancy saturates the pair") {
  auto m = ModelBuilder()
               .state("a", {"p"})
               .state("b", {"p"})
               .absorbing_state("t", {"end"})
               .arrow("a", "t", "1")
               .arrow("b", "t", "1")
               .res("a", ResidenceDist::dirac(Rational(0)))
               .res("b", ResidenceDist::exponential(Rational(1)))
               .build();
  const auto tv = residence_tv_matrix(m);
  CHECK(step_distance(m, tv, PseudometricMatrix(3)).get(0, 1) == 1.0);
}

TEST_CASE("pinned operator zeroes bisimilar pairs and is dominated by the plain one") {
  SplitMix64 rng(1212);
  for (int round = 0; round < 30; ++round) {
    const auto m = testing::random_model(rng);
    const auto tv = residence_tv_matrix(m);
    const auto bisim = bisimilarity_partition(m);
    PseudometricMatrix d(m.state_count());
    for (int i = 0; i < m.state_count(); ++i) {
      for (int j = i + 1; j < m.state_count(); ++j) {
        d.set(i, j, static_cast<double>(rng.next() % 1000) / 1000.0);
      }
    }
    const auto f = step_distance(m, tv, d);
    const auto g = step_distance_pinned(m, tv, bisim, d);
    for (int i = 0; i < m.state_count(); ++i) {
      for (int j = 0; j < m.state_count(); ++j) {
        CHECK(g.get(i, j) <= f.get(i, j) + 1e-15);
        if (bisim.same_block(i, j)) CHECK(g.get(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("an all-bisimilar model converges to zero in one sweep") {
  auto m = ModelBuilder()
               .state("a", {"p"})
               .state("b", {"p"})
               .arrow("a", "b", "1")
               .arrow("b", "a", "1")
               .res("a", ResidenceDist::dirac(Rational(0)))
               .res("b", ResidenceDist::dirac(Rational(0)))
               .build();
  const auto report = bisimilarity_distance(m);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  for (double x : report.distance.v) CHECK(x == 0.0);
}

TEST_CASE("differently labelled absorbing states sit at distance one") {
  auto m = ModelBuilder().absorbing_state("x", {"good"}).absorbing_state("y", {"bad"}).build();
  const auto report = bisimilarity_distance(m);
  CHECK(report.distance.get(0, 1) == 1.0);
}

TEST_CASE("chain pair whose successors differ in label") {
  // one application: alpha + (1 - alpha) * 1 = 1
  const auto m = parallel_labelled_pair();
  const auto report = bisimilarity_distance(m);
  CHECK(report.converged);
  CHECK(report.distance.get(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // hand-unrolled single application from the zero matrix: the K term is the
  // mass that must move between differently labelled targets, here all of it
  const auto tv = residence_tv_matrix(m);
  PseudometricMatrix d0(m.state_count());
  auto d1 = step_distance(m, tv, d0);
  CHECK(d1.get(2, 3) == 1.0);
  auto d2 = step_distance(m, tv, d1);
  const double alpha = tv[0][1].value;
  CHECK(d2.get(0, 1) == doctest::Approx(alpha + (1 - alpha) * 1.0));
}

TEST_CASE("converged distances form a pseudometric and re-application is stable") {
  SplitMix64 rng(1313);
  for (int round = 0; round < 25; ++round) {
    const auto m = testing::random_model(rng);
    const auto report = bisimilarity_distance(m);
    REQUIRE(report.converged);
    CHECK(!report.distance.pseudometric_violation(1e-7));
    const auto tv = residence_tv_matrix(m);
    const auto bisim = bisimilarity_partition(m);
    const auto again = step_distance_pinned(m, tv, bisim, report.distance);
    CHECK(again.sup_diff(report.distance) <= 1e-8);
  }
}

TEST_CASE("kernel of the distance is exactly bisimilarity") {
  SplitMix64 rng(1414);
  for (int round = 0; round < 40; ++round) {
    const auto m = testing::random_model(rng);
    const auto report = bisimilarity_distance(m);
    REQUIRE(report.converged);
    const auto bisim = bisimilarity_partition(m);
    for (int i = 0; i < m.state_count(); ++i) {
      for (int j = i + 1; j < m.state_count(); ++j) {
        if (bisim.same_block(i, j)) {
          CHECK(report.distance.get(i, j) == 0.0);
        } else {
          CHECK(report.distance.get(i, j) > 1e-6);
        }
      }
    }
  }
}

TEST_CASE("iteration reports non-convergence instead of spinning") {
  const auto m = parallel_labelled_pair();
  DistanceOptions opts;
  opts.max_iter = 1;
  opts.tolerance = 1e-15;
  const auto report = bisimilarity_distance(m, opts);
  CHECK(!report.converged);
  CHECK(report.iterations == 1);
}

TEST_CASE("exact linear program agrees with the iteration") {
  SplitMix64 rng(1515);
  testing::RandomModelOptions opts;
  opts.min_states = 2;
  opts.max_states = 4;
  for (int round = 0; round < 30; ++round) {
    const auto m = testing::random_model(rng, opts);
    const auto report = bisimilarity_distance(m);
    REQUIRE(report.converged);
    const auto lp = bisimilarity_distance_lp(m);
    const auto lp_d = to_pseudometric(lp);
    CAPTURE(round);
    CHECK(report.distance.sup_diff(lp_d) < 1e-6);
  }
}

TEST_CASE("exact linear program pins trivial pairs") {
  auto m = ModelBuilder().absorbing_state("x", {"good"}).absorbing_state("y", {"bad"}).build();
  const auto lp = bisimilarity_distance_lp(m);
  CHECK(lp[0][1] == 1);

  auto all_bisim = ModelBuilder()
                       .state("a", {"p"})
                       .state("b", {"p"})
                       .arrow("a", "b", "1")
                       .arrow("b", "a", "1")
                       .res("a", ResidenceDist::dirac(Rational(0)))
                       .res("b", ResidenceDist::dirac(Rational(0)))
                       .build();
  const auto lp2 = bisimilarity_distance_lp(all_bisim);
  CHECK(lp2[0][1] == 0);
}

TEST_CASE("exact linear program refuses oversized models") {
  SplitMix64 rng(1616);
  testing::RandomModelOptions opts;
  opts.min_states = 9;
  opts.max_states = 9;
  const auto m = testing::random_model(rng, opts);
  CHECK_THROWS_AS(bisimilarity_distance_lp(m, 8), std::invalid_argument);
}

TEST_CASE("optimal witnesses reproduce the distance when re-iterated") {
  SplitMix64 rng(1717);
  testing::RandomModelOptions mopts;
  mopts.min_states = 2;
  mopts.max_states = 6;
  for (int round = 0; round < 15; ++round) {
    const auto m = testing::random_model(rng, mopts);
    DistanceOptions opts;
    opts.collect_witnesses = true;
    const auto report = bisimilarity_distance(m, opts);
    REQUIRE(report.converged);
    CouplingSpec coupling;
    for (const auto& w : report.witnesses) {
      coupling.plans[{w.s, w.t}] = w.plan.mass;
      coupling.alphas[{w.s, w.t}] = w.alpha;
    }
    // iterate the fixed coupling's operator to its own fixed point
    PseudometricMatrix d(m.state_count());
    for (int iter = 0; iter < 20000; ++iter) {
      auto next = coupling_discrepancy_step(m, coupling, d);
      const double res = next.sup_diff(d);
      d = std::move(next);
      if (res <= 1e-12) break;
    }
    CHECK(d.sup_diff(report.distance) < 1e-6);
  }
}

TEST_CASE("any valid coupling bounds the distance from above") {
  SplitMix64 rng(1818);
  testing::RandomModelOptions mopts;
  mopts.min_states = 2;
  mopts.max_states = 6;
  for (int round = 0; round < 15; ++round) {
    const auto m = testing::random_model(rng, mopts);
    const auto report = bisimilarity_distance(m);
    REQUIRE(report.converged);
    // independent-product couplings with the exact residence discrepancy
    CouplingSpec coupling;
    const auto tv = residence_tv_matrix(m);
    for (int s = 0; s < m.state_count(); ++s) {
      for (int t = s + 1; t < m.state_count(); ++t) {
        if (!m.equivalent(s, t) || m.absorbing[s]) continue;
        std::vector<std::vector<double>> plan(m.state_count(),
                                              std::vector<double>(m.state_count(), 0.0));
        for (int u = 0; u < m.state_count(); ++u) {
          for (int v = 0; v < m.state_count(); ++v) {
            plan[u][v] = to_double((*m.transitions[s])[u]) * to_double((*m.transitions[t])[v]);
          }
        }
        coupling.plans[{s, t}] = std::move(plan);
        coupling.alphas[{s, t}] = tv[s][t].value;
      }
    }
    PseudometricMatrix d(m.state_count());
    for (int iter = 0; iter < 20000; ++iter) {
      auto next = coupling_discrepancy_step(m, coupling, d);
      const double res = next.sup_diff(d);
      d = std::move(next);
      if (res <= 1e-12) break;
    }
    for (std::size_t k = 0; k < d.v.size(); ++k) {
      CHECK(d.v[k] >= report.distance.v[k] - 1e-7);
    }
  }
}

TEST_CASE("saturated residence discrepancy forces all non-trivial entries to one") {
  const auto m = parallel_labelled_pair();
  CouplingSpec coupling;
  std::vector<std::vector<double>> plan(4, std::vector<double>(4, 0.0));
  plan[2][3] = 1.0;  // product coupling of the two rows
  coupling.plans[{0, 1}] = plan;
  coupling.alphas[{0, 1}] = 1.0;
  PseudometricMatrix d(4);
  const auto out = coupling_discrepancy_step(m, coupling, d);
  CHECK(out.get(0, 1) == 1.0);
}

TEST_CASE("coupling validation rejects bad marginals and alphas") {
  const auto m = parallel_labelled_pair();
  CouplingSpec coupling;
  std::vector<std::vector<double>> plan(4, std::vector<double>(4, 0.0));
  plan[2][2] = 1.0;  // wrong column marginal
  coupling.plans[{0, 1}] = plan;
  coupling.alphas[{0, 1}] = 1.0;
  CHECK_THROWS_AS(coupling_discrepancy_step(m, coupling, PseudometricMatrix(4)),
                  std::invalid_argument);
  plan[2][2] = 0.0;
  plan[2][3] = 1.0;
  coupling.plans[{0, 1}] = plan;
  coupling.alphas[{0, 1}] = 0.0;  // below the total-variation floor
  CHECK_THROWS_AS(coupling_discrepancy_step(m, coupling, PseudometricMatrix(4)),
                  std::invalid_argument);
}

TEST_CASE("the distance dominates the exact trace distance on shared-residence models") {
  SplitMix64 rng(1919);
  testing::RandomModelOptions opts;
  opts.min_states = 3;
  opts.max_states = 7;
  opts.shared_residence = true;
  opts.acyclic_to_absorbing = true;
  for (int round = 0; round < 20; ++round) {
    const auto m = testing::random_model(rng, opts);
    const auto report = bisimilarity_distance(m);
    REQUIRE(report.converged);
    for (int i = 0; i < m.state_count(); ++i) {
      for (int j = i + 1; j < m.state_count(); ++j) {
        const auto bounds = trace_distance_bounds(m, i, j, m.state_count());
        REQUIRE(bounds.lower == bounds.upper);
        CHECK(to_double(bounds.lower) <= report.distance.get(i, j) + 1e-9);
      }
    }
  }
}
