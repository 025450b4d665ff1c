#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "rational.hpp"

namespace smmdist {

// ---------------------------------------------------------------------------
// Delay intervals

// Interval over the nonnegative reals with rational endpoints and per-endpoint
// open/closed flags; `unbounded` drops the upper constraint entirely.
struct DelayInterval {
  Rational lo{0};
  Rational hi{0};
  bool lo_open = false;
  bool hi_open = false;
  bool unbounded = false;

  static DelayInterval closed(Rational lo, Rational hi);
  static DelayInterval nonneg_line();  // [0, infinity)

  bool empty() const;
  bool contains(const Rational& x) const;
  bool contains(double x) const;  // exact: doubles are dyadic rationals
  bool is_full_line() const;      // contains all of [0, infinity)
};

// Intersection of two intervals (possibly empty).
DelayInterval intersect(const DelayInterval& a, const DelayInterval& b);

// ---------------------------------------------------------------------------
// Probability values that stay exact as long as every factor is rational.

class Prob {
 public:
  Prob() : exact_(true), rat_(0), val_(0.0) {}
  static Prob exact(Rational r);
  static Prob approx(double v);

  bool is_exact() const { return exact_; }
  double value() const { return val_; }
  const Rational& rational() const;  // throws if not exact
  bool is_zero() const;

  Prob& operator+=(const Prob& o);
  Prob operator*(const Prob& o) const;

 private:
  bool exact_;
  Rational rat_;
  double val_;
};

// ---------------------------------------------------------------------------
// Residence-time distributions

struct ResidenceDist {
  enum class Kind { dirac, exponential, uniform };

  Kind kind = Kind::dirac;
  Rational a{0};  // dirac point, exponential rate, or uniform lower bound
  Rational b{0};  // uniform upper bound

  static ResidenceDist dirac(Rational point);
  static ResidenceDist exponential(Rational rate);
  static ResidenceDist uniform(Rational lo, Rational hi);

  bool operator==(const ResidenceDist& o) const;

  // Empty when parameters satisfy the sign/ordering constraints.
  std::optional<std::string> parameter_error() const;

  std::string describe() const;
};

// Mass the distribution assigns to the interval. Exact for dirac and uniform,
// and for any interval covering the full line; exponential masses otherwise
// come out as doubles via expm1-stable CDF differences.
Prob residence_mass(const ResidenceDist& dist, const DelayInterval& iv);

// Inverse-CDF sample (dirac returns the point).
double sample_residence(const ResidenceDist& dist, double unit);

// ---------------------------------------------------------------------------
// Models

struct Violation {
  std::string state;
  std::string message;
};

// Finite-state model with per-state residence-time distributions on the
// nonnegative reals, a set of absorbing states and propositional labels.
// Markov chains are the all-Dirac(0) case, CTMCs the all-exponential case.
struct SmmModel {
  std::vector<std::string> states;
  std::vector<bool> absorbing;
  std::vector<std::set<std::string>> labels;
  std::set<std::string> atomic_props;
  // Dense transition row per state; disengaged for absorbing states.
  std::vector<std::optional<std::vector<Rational>>> transitions;
  std::vector<std::optional<ResidenceDist>> residence;

  int state_count() const { return static_cast<int>(states.size()); }
  int state_index(const std::string& name) const;  // throws on unknown id
  bool has_state(const std::string& name) const;

  // Same labels and same absorbing status.
  bool equivalent(int s, int t) const;

  // Label-equivalence class id per state; ids are dense and ordered by the
  // lowest member state.
  std::vector<int> label_class_ids() const;
  std::vector<std::set<std::string>> label_class_sets() const;

  void rebuild_index();

 private:
  std::unordered_map<std::string, int> index_;
};

// Checks every model invariant; empty result means the model is valid.
std::vector<Violation> validate(const SmmModel& model);

// Convenience: throws std::invalid_argument listing the violations.
void require_valid(const SmmModel& model);

// ---------------------------------------------------------------------------
// Timed paths and cylinders

// Finite path s0 t0 s1 ... sn. `terminated` marks absorption: the run cannot
// be extended and positions past the end do not exist. A path cut off by the
// simulation horizon has terminated == false.
struct TimedPath {
  std::vector<int> states;
  std::vector<double> delays;
  bool terminated = false;

  std::size_t positions() const { return states.size(); }
};

// Prefix constraint: state sets alternating with delay intervals,
// sets.size() == intervals.size() + 1. Word cylinders use full-line intervals.
struct Cylinder {
  std::vector<std::vector<int>> state_sets;  // each sorted ascending
  std::vector<DelayInterval> intervals;

  std::size_t steps() const { return intervals.size(); }
};

// Probability that a run from `start` matches the cylinder prefix. Exact when
// every residence mass involved is rational.
Prob cylinder_prob(const SmmModel& model, int start, const Cylinder& cyl);

// Simulates up to `horizon` transitions; stops early at an absorbing state.
// Deterministic for a given seed.
TimedPath sample_path(const SmmModel& model, int start, int horizon,
                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// JSON interchange

nlohmann::json residence_to_json(const ResidenceDist& dist);
ResidenceDist residence_from_json(const nlohmann::json& j);

// Structural errors (unknown state names, malformed rationals) throw;
// semantic problems are left for validate().
SmmModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const SmmModel& model);

}  // namespace smmdist
