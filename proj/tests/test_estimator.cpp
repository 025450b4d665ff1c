#include <cmath>

#include "doctest.h"
#include "estimator.hpp"
#include "metric.hpp"
#include "rng.hpp"
#include "support.hpp"

using namespace smmdist;
using testing::ModelBuilder;

namespace {

SmmModel branch_model() {
  // 1/3 to a p-branch with uniform residence, 2/3 to a q-branch
  return ModelBuilder()
      .state("root", {"root"})
      .absorbing_state("left", {"p"})
      .absorbing_state("right", {"q"})
      .arrow("root", "left", "1/3")
      .arrow("root", "right", "2/3")
      .res("root", ResidenceDist::uniform(Rational(0), Rational(2)))
      .build();
}

}  // namespace

TEST_CASE("falsum estimates to zero, verum to one") {
  const auto m = branch_model();
  EstimateOptions opts;
  opts.samples = 2000;
  opts.seed = 1;
  const auto bottom = estimate_sat(m, 0, Spec{parse_mtl("false")}, opts);
  CHECK(bottom.point == 0.0);
  CHECK(bottom.lower == 0.0);
  CHECK(bottom.upper <= std::sqrt(std::log(2.0 / 0.01) / (2.0 * 2000)) + 1e-12);
  const auto top = estimate_sat(m, 0, Spec{parse_mtl("true")}, opts);
  CHECK(top.point == 1.0);
  CHECK(top.upper == 1.0);
}

TEST_CASE("cylinder-shaped estimate brackets the exact measure") {
  const auto m = branch_model();
  // run enters the p-branch within time [0,1]: mass (1/3) * (1/2) = 1/6
  Cylinder cyl;
  cyl.state_sets = {{0}, {1}};
  cyl.intervals = {DelayInterval::closed(Rational(0), Rational(1))};
  const auto exact = cylinder_prob(m, 0, cyl);
  REQUIRE(exact.rational() == Rational(1, 6));

  const auto formula = encode_cylinder_mtl(m, cyl);
  EstimateOptions opts;
  opts.samples = 50000;
  opts.horizon = 4;
  opts.seed = 99;
  const auto est = estimate_sat(m, 0, Spec{formula}, opts);
  CHECK(est.lower <= exact.value());
  CHECK(est.upper >= exact.value());
  CHECK(est.point == doctest::Approx(exact.value()).epsilon(0.05));
  CHECK(est.unknown_fraction == 0.0);
}

TEST_CASE("interval bounds contain the truth at the stated confidence") {
  const auto m = branch_model();
  Cylinder cyl;
  cyl.state_sets = {{0}, {2}};
  cyl.intervals = {DelayInterval::closed(Rational(1), Rational(2))};
  const double truth = cylinder_prob(m, 0, cyl).value();  // (2/3)*(1/2) = 1/3
  const auto formula = encode_cylinder_mtl(m, cyl);
  EstimateOptions opts;
  opts.samples = 3000;
  opts.horizon = 3;
  opts.confidence = 0.99;
  int covered = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    opts.seed = derive_seed(2025, trial);
    const auto est = estimate_sat(m, 0, Spec{formula}, opts);
    if (est.lower <= truth && truth <= est.upper) ++covered;
  }
  CHECK(covered >= 99);
}

TEST_CASE("unknown verdicts widen the interval on both sides") {
  // horizon 0 leaves every sample undecided
  const auto m = branch_model();
  EstimateOptions opts;
  opts.samples = 500;
  opts.horizon = 0;
  const auto est = estimate_sat(m, 0, Spec{parse_mtl("X[0,1] p")}, opts);
  CHECK(est.unknown_fraction == 1.0);
  CHECK(est.lower == 0.0);
  CHECK(est.upper == 1.0);
}

TEST_CASE("a state is at statistical distance zero from itself") {
  const auto m = branch_model();
  EstimateOptions opts;
  opts.samples = 2000;
  opts.seed = 5;
  const std::vector<Spec> specs = {Spec{parse_mtl("X[0,1] p")}, Spec{parse_mtl("X[0,2] q")}};
  CHECK(delta_lower_bound(m, 0, 0, specs, opts) == 0.0);
}

TEST_CASE("a distinguishing proposition pushes the bound toward one") {
  const auto m = branch_model();
  EstimateOptions opts;
  opts.samples = 4000;
  opts.seed = 6;
  const std::vector<Spec> specs = {Spec{parse_mtl("p")}};
  const double bound = delta_lower_bound(m, 1, 2, specs, opts);
  CHECK(bound > 0.9);
  CHECK(bound <= 1.0);
}

TEST_CASE("statistical lower bounds respect the computable upper distance") {
  SplitMix64 rng(777);
  testing::RandomModelOptions mopts;
  mopts.min_states = 2;
  mopts.max_states = 6;
  EstimateOptions opts;
  opts.samples = 2000;
  opts.horizon = 40;
  int rounds = 0;
  while (rounds < 10) {
    const auto m = testing::random_model(rng, mopts);
    const auto report = bisimilarity_distance(m);
    REQUIRE(report.converged);
    std::vector<Spec> specs;
    for (int k = 0; k < 3; ++k) {
      const auto cyl = testing::random_cylinder(rng, m, 2);
      specs.push_back(Spec{encode_cylinder_mtl(m, cyl)});
      specs.push_back(Spec{encode_cylinder_dta(m, cyl)});
    }
    const int s1 = 0;
    const int s2 = m.state_count() - 1;
    opts.seed = derive_seed(31337, rounds);
    const double bound = delta_lower_bound(m, s1, s2, specs, opts);
    // Hoeffding slack for the worst pair of interval endpoints
    const double slack = 2.0 * std::sqrt(std::log(2.0 / 0.01) / (2.0 * opts.samples));
    CHECK(bound <= report.distance.get(s1, s2) + slack);
    ++rounds;
  }
}

TEST_CASE("dta and mtl specifications are interchangeable inputs") {
  const auto m = branch_model();
  Cylinder cyl;
  cyl.state_sets = {{0}, {1}};
  cyl.intervals = {DelayInterval::closed(Rational(0), Rational(1))};
  EstimateOptions opts;
  opts.samples = 5000;
  opts.horizon = 3;
  opts.seed = 12;
  const auto via_mtl = estimate_sat(m, 0, Spec{encode_cylinder_mtl(m, cyl)}, opts);
  const auto via_dta = estimate_sat(m, 0, Spec{encode_cylinder_dta(m, cyl)}, opts);
  CHECK(via_mtl.point == via_dta.point);  // same seeds, same verdicts
}

TEST_CASE("option validation") {
  const auto m = branch_model();
  EstimateOptions opts;
  opts.samples = 0;
  CHECK_THROWS_AS(estimate_sat(m, 0, Spec{parse_mtl("true")}, opts), std::invalid_argument);
  opts.samples = 10;
  opts.confidence = 1.0;
  CHECK_THROWS_AS(estimate_sat(m, 0, Spec{parse_mtl("true")}, opts), std::invalid_argument);
}
