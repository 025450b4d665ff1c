#include "doctest.h"
#include "gadgets.hpp"
#include "partition.hpp"
#include "rng.hpp"
#include "support.hpp"

using namespace smmdist;
using testing::ModelBuilder;

TEST_CASE("uniformly labelled states with one residence start in one block") {
  auto m = ModelBuilder()
               .state("a", {"p"})
               .state("b", {"p"})
               .state("c", {"p"})
               .arrow("a", "b", "1")
               .arrow("b", "c", "1")
               .arrow("c", "a", "1")
               .res("a", ResidenceDist::exponential(Rational(2)))
               .res("b", ResidenceDist::exponential(Rational(2)))
               .res("c", ResidenceDist::exponential(Rational(2)))
               .build();
  CHECK(initial_partition(m).block_count() == 1);
  CHECK(bisimilarity_partition(m).block_count() == 1);
}

TEST_CASE("a residence rate difference splits the initial partition") {
  auto m = ModelBuilder()
               .state("a", {"p"})
               .state("b", {"p"})
               .arrow("a", "b", "1")
               .arrow("b", "a", "1")
               .res("a", ResidenceDist::exponential(Rational(1)))
               .res("b", ResidenceDist::exponential(Rational(2)))
               .build();
  CHECK(initial_partition(m).block_count() == 2);
}

TEST_CASE("different labels are never merged") {
  auto m = ModelBuilder()
               .absorbing_state("a", {"p"})
               .absorbing_state("b", {"q"})
               .build();
  CHECK(!bisimilarity_partition(m).same_block(0, 1));
}

TEST_CASE("two glued copies of a chain are pairwise bisimilar") {
  auto m = ModelBuilder()
               .state("x0", {"p"})
               .state("x1", {"q"})
               .absorbing_state("x2", {"r"})
               .state("y0", {"p"})
               .state("y1", {"q"})
               .absorbing_state("y2", {"r"})
               .arrow("x0", "x1", "1")
               .arrow("x1", "x2", "1")
               .arrow("y0", "y1", "1")
               .arrow("y1", "y2", "1")
               .res("x0", ResidenceDist::uniform(Rational(0), Rational(1)))
               .res("x1", ResidenceDist::dirac(Rational(0)))
               .res("y0", ResidenceDist::uniform(Rational(0), Rational(1)))
               .res("y1", ResidenceDist::dirac(Rational(0)))
               .build();
  const auto p = bisimilarity_partition(m);
  CHECK(p.same_block(m.state_index("x0"), m.state_index("y0")));
  CHECK(p.same_block(m.state_index("x1"), m.state_index("y1")));
  CHECK(p.same_block(m.state_index("x2"), m.state_index("y2")));
}

TEST_CASE("block masses matter, not per-state probabilities") {
  // both states send all mass into the same (absorbing, equally labelled)
  // block, just split differently
  auto m = ModelBuilder()
               .state("a", {"p"})
               .state("b", {"p"})
               .absorbing_state("x", {"end"})
               .absorbing_state("y", {"end"})
               .arrow("a", "x", "1/2")
               .arrow("a", "y", "1/2")
               .arrow("b", "x", "1/3")
               .arrow("b", "y", "2/3")
               .res("a", ResidenceDist::dirac(Rational(0)))
               .res("b", ResidenceDist::dirac(Rational(0)))
               .build();
  const auto p = bisimilarity_partition(m);
  CHECK(p.same_block(0, 1));
  const auto oracle = testing::brute_force_bisimilarity(m);
  CHECK(oracle.same_block(0, 1));
}

TEST_CASE("calibration models start with labels fully separated") {
  UndirectedGraph k3;
  k3.n = 3;
  k3.add_edge(1, 2);
  k3.add_edge(2, 3);
  k3.add_edge(1, 3);
  const auto pair = calibrated_pair(k3, 1, ResidenceDist::dirac(Rational(0)));
  const auto& m = pair.model;
  const auto p = initial_partition(m);
  // blocks: alpha, omega, beta and one per vertex proposition
  CHECK(p.block_count() == 6);
  for (const auto& block : p.blocks) {
    for (int s : block) CHECK(m.labels[s] == m.labels[block.front()]);
  }
  // the two start states share a block, the bypass state sits alone
  CHECK(p.same_block(pair.start_graph, pair.start_free));
  for (int s = 0; s < m.state_count(); ++s) {
    if (m.labels[s].count("beta")) CHECK(p.blocks[p.block_of[s]].size() == 1);
  }
}

TEST_CASE("refinement agrees with enumerating every equivalence relation") {
  SplitMix64 rng(606);
  testing::RandomModelOptions opts;
  opts.min_states = 2;
  opts.max_states = 6;
  for (int round = 0; round < 120; ++round) {
    const auto m = testing::random_model(rng, opts);
    REQUIRE(validate(m).empty());
    const auto fast = bisimilarity_partition(m);
    const auto slow = testing::brute_force_bisimilarity(m);
    CAPTURE(round);
    REQUIRE(fast.block_count() == slow.block_count());
    CHECK(fast.block_of == slow.block_of);
  }
}

TEST_CASE("the result is stable under one more refinement pass") {
  SplitMix64 rng(707);
  for (int round = 0; round < 40; ++round) {
    const auto m = testing::random_model(rng);
    const auto p = bisimilarity_partition(m);
    const auto again = refine_once(m, p);
    CHECK(again.block_of == p.block_of);
  }
}

TEST_CASE("every block is label- and absorbing-homogeneous") {
  SplitMix64 rng(808);
  for (int round = 0; round < 40; ++round) {
    const auto m = testing::random_model(rng);
    const auto p = bisimilarity_partition(m);
    for (const auto& block : p.blocks) {
      for (int s : block) {
        CHECK(m.equivalent(block.front(), s));
      }
    }
  }
}

TEST_CASE("block numbering is deterministic and ordered by lowest state") {
  SplitMix64 rng(909);
  for (int round = 0; round < 20; ++round) {
    const auto m = testing::random_model(rng);
    const auto p = bisimilarity_partition(m);
    int prev = -1;
    for (const auto& block : p.blocks) {
      CHECK(block.front() > prev);
      prev = block.front();
      CHECK(std::is_sorted(block.begin(), block.end()));
    }
  }
}
