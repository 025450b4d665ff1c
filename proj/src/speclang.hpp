#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "model.hpp"

namespace smmdist {

// ---------------------------------------------------------------------------
// Three-valued verdicts. Unknown appears only when a finite path prefix
// cannot settle the point-based semantics.

enum class Verdict { True, False, Unknown };

Verdict verdict_not(Verdict a);
Verdict verdict_and(Verdict a, Verdict b);
Verdict verdict_or(Verdict a, Verdict b);
const char* to_string(Verdict v);

// ---------------------------------------------------------------------------
// Metric temporal logic. Core constructors only; negation, conjunction,
// disjunction and `true` are normalized away at construction time.

struct MtlFormula;
using MtlPtr = std::shared_ptr<const MtlFormula>;

struct MtlFormula {
  enum class Kind { atom, falsum, implies, next, until };

  Kind kind = Kind::falsum;
  std::string atom;         // Kind::atom
  Rational lo{0}, hi{0};    // next/until window, closed
  MtlPtr left, right;       // implies: left -> right; until: left U right
};

MtlPtr mtl_atom(std::string name);
MtlPtr mtl_false();
MtlPtr mtl_true();
MtlPtr mtl_implies(MtlPtr a, MtlPtr b);
MtlPtr mtl_not(MtlPtr a);
MtlPtr mtl_and(MtlPtr a, MtlPtr b);
MtlPtr mtl_or(MtlPtr a, MtlPtr b);
MtlPtr mtl_next(Rational lo, Rational hi, MtlPtr a);
MtlPtr mtl_until(Rational lo, Rational hi, MtlPtr a, MtlPtr b);

// Text syntax: `p`, `false`, `true`, `!f`, `(f -> g)`, `(f & g)`, `(f | g)`,
// `X[a,b] f`, `(f U[a,b] g)`; bounds are rationals like 3 or 1/2.
MtlPtr parse_mtl(const std::string& text);
std::string to_string(const MtlFormula& f);

// Point-based satisfaction on a finite path. True/False once the prefix
// determines the verdict; positions past the end of a terminated path do not
// exist, so quantifiers that would need them resolve to False, while a path
// cut off at the horizon yields Unknown.
Verdict mtl_eval(const SmmModel& model, const TimedPath& path, const MtlFormula& formula);

// ---------------------------------------------------------------------------
// Deterministic timed automata over label-set symbols.

struct ClockGuard {
  // conjunction of interval constraints, one per mentioned clock
  std::map<std::string, DelayInterval> by_clock;

  bool satisfied(const std::map<std::string, double>& valuation, double delay) const;
  // delays t >= 0 such that (valuation + t) satisfies the guard
  DelayInterval feasible_delays(const std::map<std::string, double>& valuation) const;
};

// No delay satisfies both guards on any clock valuation.
bool orthogonal(const ClockGuard& a, const ClockGuard& b);

struct DtaEdge {
  int from = 0;
  std::set<std::string> symbol;
  ClockGuard guard;
  std::set<std::string> resets;
  int to = 0;
};

struct Dta {
  std::vector<std::string> locations;
  int initial = 0;
  std::vector<bool> final_location;
  std::vector<std::string> clocks;
  std::vector<DtaEdge> edges;

  int location_index(const std::string& name) const;
  // single clock, reset on every edge
  bool is_single_clock_resetting() const;
};

// Empty when every pair of distinct same-source same-symbol edges has
// orthogonal guards (decided per clock by interval intersection).
std::optional<std::string> determinism_violation(const Dta& aut);

Dta dta_from_json(const nlohmann::json& j);  // validates determinism
nlohmann::json dta_to_json(const Dta& aut);

// Simulates the unique run over the path's label word. True at the first
// visit to a final location; False when no edge is enabled or when a
// terminated path provably cannot reach a final location with its one
// pending symbol; Unknown when the prefix was cut off undecided.
Verdict dta_accepts(const SmmModel& model, const TimedPath& path, const Dta& aut);

// ---------------------------------------------------------------------------
// Trace-cylinder encoders. Both require the cylinder's state sets to be label
// classes of the model and its intervals to be closed and bounded.

// Conjunction over all atomic propositions of per-proposition literal chains
// connected by interval-indexed next operators; satisfied exactly by the
// paths in the cylinder.
MtlPtr encode_cylinder_mtl(const SmmModel& model, const Cylinder& cyl);

// Linear single-clock automaton, every edge resetting: one guarded edge per
// cylinder step, one unguarded edge consuming the final class label, and an
// accepting sink looping over every label the model can emit.
Dta encode_cylinder_dta(const SmmModel& model, const Cylinder& cyl);

// Direct prefix check used as the reference for both encoders.
Verdict cylinder_membership(const SmmModel& model, const TimedPath& path, const Cylinder& cyl);

}  // namespace smmdist
