#include "speclang.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace smmdist {

// ---------------------------------------------------------------------------
// Verdicts (Kleene three-valued connectives)

Verdict verdict_not(Verdict a) {
  if (a == Verdict::True) return Verdict::False;
  if (a == Verdict::False) return Verdict::True;
  return Verdict::Unknown;
}

Verdict verdict_and(Verdict a, Verdict b) {
  if (a == Verdict::False || b == Verdict::False) return Verdict::False;
  if (a == Verdict::True && b == Verdict::True) return Verdict::True;
  return Verdict::Unknown;
}

Verdict verdict_or(Verdict a, Verdict b) {
  if (a == Verdict::True || b == Verdict::True) return Verdict::True;
  if (a == Verdict::False && b == Verdict::False) return Verdict::False;
  return Verdict::Unknown;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "true";
    case Verdict::False:
      return "false";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MTL constructors

MtlPtr mtl_atom(std::string name) {
  auto f = std::make_shared<MtlFormula>();
  f->kind = MtlFormula::Kind::atom;
  f->atom = std::move(name);
  return f;
}

MtlPtr mtl_false() {
  static const MtlPtr falsum = std::make_shared<MtlFormula>();
  return falsum;
}

MtlPtr mtl_implies(MtlPtr a, MtlPtr b) {
  auto f = std::make_shared<MtlFormula>();
  f->kind = MtlFormula::Kind::implies;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

MtlPtr mtl_true() { return mtl_implies(mtl_false(), mtl_false()); }

MtlPtr mtl_not(MtlPtr a) { return mtl_implies(std::move(a), mtl_false()); }

MtlPtr mtl_and(MtlPtr a, MtlPtr b) {
  return mtl_not(mtl_implies(std::move(a), mtl_not(std::move(b))));
}

MtlPtr mtl_or(MtlPtr a, MtlPtr b) { return mtl_implies(mtl_not(std::move(a)), std::move(b)); }

MtlPtr mtl_next(Rational lo, Rational hi, MtlPtr a) {
  if (lo > hi) throw std::invalid_argument("next window must satisfy lo <= hi");
  auto f = std::make_shared<MtlFormula>();
  f->kind = MtlFormula::Kind::next;
  f->lo = std::move(lo);
  f->hi = std::move(hi);
  f->left = std::move(a);
  return f;
}

MtlPtr mtl_until(Rational lo, Rational hi, MtlPtr a, MtlPtr b) {
  if (lo > hi) throw std::invalid_argument("until window must satisfy lo <= hi");
  auto f = std::make_shared<MtlFormula>();
  f->kind = MtlFormula::Kind::until;
  f->lo = std::move(lo);
  f->hi = std::move(hi);
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

// ---------------------------------------------------------------------------
// MTL parser (recursive descent over the text syntax)

namespace {

struct MtlParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit MtlParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("mtl parse error at offset " + std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (start == pos) fail("expected an identifier");
    return text.substr(start, pos - start);
  }

  Rational rational() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) {
      ++pos;
    }
    auto r = try_parse_rational(text.substr(start, pos - start));
    if (!r) fail("expected a rational number");
    return *r;
  }

  std::pair<Rational, Rational> window() {
    expect('[');
    Rational lo = rational();
    expect(',');
    Rational hi = rational();
    expect(']');
    if (lo > hi) fail("window bounds out of order");
    return {lo, hi};
  }

  MtlPtr primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (c == '!') {
      ++pos;
      return mtl_not(primary());
    }
    if (c == '(') {
      ++pos;
      MtlPtr lhs = formula();
      skip_ws();
      if (eat('-')) {
        expect('>');
        MtlPtr rhs = formula();
        expect(')');
        return mtl_implies(std::move(lhs), std::move(rhs));
      }
      if (eat('&')) {
        MtlPtr rhs = formula();
        expect(')');
        return mtl_and(std::move(lhs), std::move(rhs));
      }
      if (eat('|')) {
        MtlPtr rhs = formula();
        expect(')');
        return mtl_or(std::move(lhs), std::move(rhs));
      }
      if (pos < text.size() && text[pos] == 'U') {
        ++pos;
        auto [lo, hi] = window();
        MtlPtr rhs = formula();
        expect(')');
        return mtl_until(lo, hi, std::move(lhs), std::move(rhs));
      }
      fail("expected ->, &, | or U[...] inside parentheses");
    }
    if (c == 'X') {
      // lookahead: X must be followed by a window, otherwise it is an atom
      std::size_t save = pos;
      ++pos;
      skip_ws();
      if (pos < text.size() && text[pos] == '[') {
        pos = save + 1;
        auto [lo, hi] = window();
        return mtl_next(lo, hi, primary());
      }
      pos = save;
    }
    std::string name = ident();
    if (name == "false") return mtl_false();
    if (name == "true") return mtl_true();
    if (name == "X" || name == "U") fail("temporal operator needs a [lo,hi] window");
    return mtl_atom(std::move(name));
  }

  MtlPtr formula() { return primary(); }
};

}  // namespace

MtlPtr parse_mtl(const std::string& text) {
  MtlParser p(text);
  MtlPtr f = p.formula();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string to_string(const MtlFormula& f) {
  using Kind = MtlFormula::Kind;
  switch (f.kind) {
    case Kind::atom:
      return f.atom;
    case Kind::falsum:
      return "false";
    case Kind::implies:
      return "(" + to_string(*f.left) + " -> " + to_string(*f.right) + ")";
    case Kind::next:
      return "X[" + format_rational(f.lo) + "," + format_rational(f.hi) + "] " +
             to_string(*f.left);
    case Kind::until:
      return "(" + to_string(*f.left) + " U[" + format_rational(f.lo) + "," +
             format_rational(f.hi) + "] " + to_string(*f.right) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MTL evaluation

namespace {

struct MtlEvaluator {
  const SmmModel& model;
  const TimedPath& path;
  std::map<std::pair<const MtlFormula*, std::size_t>, Verdict> memo;

  Verdict eval(const MtlFormula& f, std::size_t i) {
    const auto key = std::make_pair(&f, i);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const Verdict v = compute(f, i);
    memo.emplace(key, v);
    return v;
  }

  Verdict compute(const MtlFormula& f, std::size_t i) {
    using Kind = MtlFormula::Kind;
    switch (f.kind) {
      case Kind::falsum:
        return Verdict::False;
      case Kind::atom: {
        if (!model.atomic_props.count(f.atom)) {
          throw std::invalid_argument("unknown atomic proposition: '" + f.atom + "'");
        }
        return model.labels[path.states[i]].count(f.atom) ? Verdict::True : Verdict::False;
      }
      case Kind::implies:
        return verdict_or(verdict_not(eval(*f.left, i)), eval(*f.right, i));
      case Kind::next: {
        if (i + 1 >= path.positions()) {
          return path.terminated ? Verdict::False : Verdict::Unknown;
        }
        const double delay = path.delays[i];
        const DelayInterval window = DelayInterval::closed(f.lo, f.hi);
        if (!window.contains(delay)) return Verdict::False;
        return eval(*f.left, i + 1);
      }
      case Kind::until: {
        // a witness j > 0 needs the cumulative delay in the window, the right
        // operand there and the left operand at every earlier offset
        const DelayInterval window = DelayInterval::closed(f.lo, f.hi);
        Verdict result = Verdict::False;
        Verdict left_conj = Verdict::True;
        double cum = 0.0;
        for (std::size_t j = 1;; ++j) {
          const std::size_t idx = i + j;
          if (idx >= path.positions()) {
            // ran out of positions; delays are nonnegative, so once the
            // accumulated time exceeds the window nothing later can land in it
            if (!path.terminated && left_conj != Verdict::False &&
                !(rational_from_double(cum) > f.hi)) {
              result = verdict_or(result, Verdict::Unknown);
            }
            break;
          }
          left_conj = verdict_and(left_conj, eval(*f.left, idx - 1));
          if (left_conj == Verdict::False) break;
          cum += path.delays[idx - 1];
          if (window.contains(cum)) {
            result = verdict_or(result, verdict_and(left_conj, eval(*f.right, idx)));
            if (result == Verdict::True) return Verdict::True;
          }
          if (rational_from_double(cum) > f.hi) break;
        }
        return result;
      }
    }
    return Verdict::Unknown;
  }
};

}  // namespace

Verdict mtl_eval(const SmmModel& model, const TimedPath& path, const MtlFormula& formula) {
  if (path.positions() == 0) throw std::invalid_argument("empty path");
  MtlEvaluator ev{model, path, {}};
  return ev.eval(formula, 0);
}

// ---------------------------------------------------------------------------
// Deterministic timed automata

bool ClockGuard::satisfied(const std::map<std::string, double>& valuation, double delay) const {
  for (const auto& [clock, iv] : by_clock) {
    const auto it = valuation.find(clock);
    const double base = it == valuation.end() ? 0.0 : it->second;
    if (!iv.contains(base + delay)) return false;
  }
  return true;
}

DelayInterval ClockGuard::feasible_delays(const std::map<std::string, double>& valuation) const {
  DelayInterval t = DelayInterval::nonneg_line();
  for (const auto& [clock, iv] : by_clock) {
    const auto it = valuation.find(clock);
    const Rational base = rational_from_double(it == valuation.end() ? 0.0 : it->second);
    DelayInterval shifted = iv;  // constraint on v(x) + t becomes one on t
    shifted.lo = iv.lo - base;
    if (!iv.unbounded) shifted.hi = iv.hi - base;
    t = intersect(t, shifted);
    if (t.empty()) return t;
  }
  return t;
}

bool orthogonal(const ClockGuard& a, const ClockGuard& b) {
  // unsatisfiable on some single clock <=> no valuation satisfies both,
  // because guards constrain clocks independently
  for (const auto& [clock, iv] : a.by_clock) {
    auto it = b.by_clock.find(clock);
    DelayInterval other = it == b.by_clock.end() ? DelayInterval::nonneg_line() : it->second;
    DelayInterval nonneg = intersect(intersect(iv, other), DelayInterval::nonneg_line());
    if (nonneg.empty()) return true;
  }
  for (const auto& [clock, iv] : b.by_clock) {
    if (a.by_clock.count(clock)) continue;
    if (intersect(iv, DelayInterval::nonneg_line()).empty()) return true;
  }
  return false;
}

int Dta::location_index(const std::string& name) const {
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i] == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown location: '" + name + "'");
}

bool Dta::is_single_clock_resetting() const {
  if (clocks.size() != 1) return false;
  for (const auto& e : edges) {
    if (!e.resets.count(clocks.front())) return false;
  }
  return true;
}

std::optional<std::string> determinism_violation(const Dta& aut) {
  for (std::size_t i = 0; i < aut.edges.size(); ++i) {
    for (std::size_t j = i + 1; j < aut.edges.size(); ++j) {
      const auto& a = aut.edges[i];
      const auto& b = aut.edges[j];
      if (a.from != b.from || a.symbol != b.symbol) continue;
      if (!orthogonal(a.guard, b.guard)) {
        return "overlapping guards on edges " + std::to_string(i) + " and " + std::to_string(j) +
               " from location '" + aut.locations[a.from] + "'";
      }
    }
  }
  return std::nullopt;
}

namespace {

void apply_comparison(DelayInterval& iv, const std::string& op, const Rational& bound) {
  DelayInterval constraint = DelayInterval::nonneg_line();
  if (op == "<=") {
    constraint.unbounded = false;
    constraint.lo = 0;
    constraint.hi = bound;
  } else if (op == "<") {
    constraint.unbounded = false;
    constraint.lo = 0;
    constraint.hi = bound;
    constraint.hi_open = true;
  } else if (op == ">=") {
    constraint.lo = bound;
  } else if (op == ">") {
    constraint.lo = bound;
    constraint.lo_open = true;
  } else {
    throw std::invalid_argument("unknown guard operator: '" + op + "'");
  }
  iv = intersect(iv, constraint);
}

}  // namespace

Dta dta_from_json(const nlohmann::json& j) {
  Dta aut;
  for (const auto& q : j.at("locations")) aut.locations.push_back(q.get<std::string>());
  if (aut.locations.empty()) throw std::invalid_argument("automaton needs locations");
  aut.final_location.assign(aut.locations.size(), false);
  aut.initial = aut.location_index(j.at("initial").get<std::string>());
  for (const auto& q : j.at("final")) aut.final_location[aut.location_index(q.get<std::string>())] = true;
  for (const auto& c : j.at("clocks")) aut.clocks.push_back(c.get<std::string>());
  for (const auto& e : j.at("edges")) {
    DtaEdge edge;
    edge.from = aut.location_index(e.at("from").get<std::string>());
    edge.to = aut.location_index(e.at("to").get<std::string>());
    for (const auto& p : e.at("symbol")) edge.symbol.insert(p.get<std::string>());
    if (e.contains("guard")) {
      for (const auto& atom : e["guard"]) {
        if (!atom.is_array() || atom.size() != 3) {
          throw std::invalid_argument("guard atoms are [clock, op, bound] triples");
        }
        const std::string clock = atom[0].get<std::string>();
        if (std::find(aut.clocks.begin(), aut.clocks.end(), clock) == aut.clocks.end()) {
          throw std::invalid_argument("guard mentions unknown clock: '" + clock + "'");
        }
        auto [it, inserted] = edge.guard.by_clock.emplace(clock, DelayInterval::nonneg_line());
        apply_comparison(it->second, atom[1].get<std::string>(), parse_rational(atom[2].get<std::string>()));
      }
    }
    if (e.contains("reset")) {
      for (const auto& c : e["reset"]) {
        const std::string clock = c.get<std::string>();
        if (std::find(aut.clocks.begin(), aut.clocks.end(), clock) == aut.clocks.end()) {
          throw std::invalid_argument("reset mentions unknown clock: '" + clock + "'");
        }
        edge.resets.insert(clock);
      }
    }
    aut.edges.push_back(std::move(edge));
  }
  if (auto err = determinism_violation(aut)) {
    throw std::invalid_argument("automaton is not deterministic: " + *err);
  }
  return aut;
}

nlohmann::json dta_to_json(const Dta& aut) {
  nlohmann::ordered_json j;
  j["locations"] = aut.locations;
  j["initial"] = aut.locations[aut.initial];
  std::vector<std::string> fin;
  for (std::size_t q = 0; q < aut.locations.size(); ++q) {
    if (aut.final_location[q]) fin.push_back(aut.locations[q]);
  }
  j["final"] = fin;
  j["clocks"] = aut.clocks;
  nlohmann::ordered_json edges = nlohmann::json::array();
  for (const auto& e : aut.edges) {
    nlohmann::ordered_json je;
    je["from"] = aut.locations[e.from];
    je["symbol"] = std::vector<std::string>(e.symbol.begin(), e.symbol.end());
    nlohmann::ordered_json guard = nlohmann::json::array();
    for (const auto& [clock, iv] : e.guard.by_clock) {
      if (iv.lo > 0 || iv.lo_open) {
        guard.push_back({clock, iv.lo_open ? ">" : ">=", format_rational(iv.lo)});
      }
      if (!iv.unbounded) {
        guard.push_back({clock, iv.hi_open ? "<" : "<=", format_rational(iv.hi)});
      }
    }
    je["guard"] = std::move(guard);
    je["reset"] = std::vector<std::string>(e.resets.begin(), e.resets.end());
    je["to"] = aut.locations[e.to];
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j;
}

namespace {

// union of delay intervals covers [0, infinity)
bool covers_nonneg_line(std::vector<DelayInterval> ivs) {
  for (auto& iv : ivs) iv = intersect(iv, DelayInterval::nonneg_line());
  ivs.erase(std::remove_if(ivs.begin(), ivs.end(), [](const DelayInterval& iv) { return iv.empty(); }),
            ivs.end());
  std::sort(ivs.begin(), ivs.end(), [](const DelayInterval& x, const DelayInterval& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    return !x.lo_open && y.lo_open;
  });
  Rational point(0);
  bool point_covered = false;  // whether `point` itself is already covered
  for (const auto& iv : ivs) {
    if (iv.lo > point) return false;
    if (iv.lo == point && iv.lo_open && !point_covered) return false;
    if (iv.unbounded) return true;
    if (iv.hi > point || (iv.hi == point && !iv.hi_open && !point_covered)) {
      point = iv.hi;
      point_covered = !iv.hi_open;
    }
  }
  return false;
}

}  // namespace

Verdict dta_accepts(const SmmModel& model, const TimedPath& path, const Dta& aut) {
  if (path.positions() == 0) throw std::invalid_argument("empty path");
  int loc = aut.initial;
  std::map<std::string, double> valuation;
  for (const auto& c : aut.clocks) valuation[c] = 0.0;
  if (aut.final_location[loc]) return Verdict::True;

  for (std::size_t step = 0; step < path.delays.size(); ++step) {
    const auto& symbol = model.labels[path.states[step]];
    const double delay = path.delays[step];
    const DtaEdge* taken = nullptr;
    for (const auto& e : aut.edges) {
      if (e.from != loc || e.symbol != symbol) continue;
      if (!e.guard.satisfied(valuation, delay)) continue;
      if (taken) {
        throw std::runtime_error("determinism violation: two edges enabled from location '" +
                                 aut.locations[loc] + "'");
      }
      taken = &e;
    }
    if (!taken) return Verdict::False;  // the run dies on every continuation
    for (auto& [clock, value] : valuation) {
      value = taken->resets.count(clock) ? 0.0 : value + delay;
    }
    loc = taken->to;
    if (aut.final_location[loc]) return Verdict::True;
  }

  // Input exhausted with the last state's label still pending (its delay is
  // past the end of the path). The pending symbol alone can settle the
  // verdict: with no feasible edge the run dies on every continuation, and
  // when every feasible delay leads into a final location the whole bundle
  // of continuations accepts. On a terminated path nothing exists beyond the
  // pending symbol, so failing to reach a final location there is final.
  const auto& pending = model.labels[path.states.back()];
  std::vector<DelayInterval> feasible;
  bool some_final = false, some_nonfinal = false;
  for (const auto& e : aut.edges) {
    if (e.from != loc || e.symbol != pending) continue;
    DelayInterval t = e.guard.feasible_delays(valuation);
    if (t.empty()) continue;
    feasible.push_back(t);
    (aut.final_location[e.to] ? some_final : some_nonfinal) = true;
  }
  if (feasible.empty()) return Verdict::False;
  if (!some_nonfinal && some_final && covers_nonneg_line(feasible)) return Verdict::True;
  if (path.terminated && !some_final) return Verdict::False;
  return Verdict::Unknown;
}

// ---------------------------------------------------------------------------
// Cylinder encoders

namespace {

// class id per cylinder position, after checking the preconditions
std::vector<int> cylinder_class_reps(const SmmModel& model, const Cylinder& cyl) {
  if (cyl.state_sets.empty() || cyl.state_sets.size() != cyl.intervals.size() + 1) {
    throw std::invalid_argument("malformed cylinder");
  }
  for (const auto& iv : cyl.intervals) {
    if (iv.unbounded || iv.lo_open || iv.hi_open || iv.lo > iv.hi || iv.lo < 0) {
      throw std::invalid_argument("cylinder encoders need closed bounded intervals");
    }
  }
  const auto class_ids = model.label_class_ids();
  std::vector<std::vector<int>> class_members(
      1 + *std::max_element(class_ids.begin(), class_ids.end()));
  for (int s = 0; s < model.state_count(); ++s) class_members[class_ids[s]].push_back(s);
  std::vector<int> reps;
  for (const auto& set : cyl.state_sets) {
    if (set.empty()) throw std::invalid_argument("cylinder state sets must be label classes");
    const int cls = class_ids[set.front()];
    if (set != class_members[cls]) {
      throw std::invalid_argument("cylinder state sets must be label classes");
    }
    reps.push_back(set.front());
  }
  return reps;
}

}  // namespace

MtlPtr encode_cylinder_mtl(const SmmModel& model, const Cylinder& cyl) {
  const auto reps = cylinder_class_reps(model, cyl);
  const std::size_t n = cyl.intervals.size();
  const auto literal_chain = [&](const std::optional<std::string>& prop) {
    // literal for the final class, then wrap backwards with next operators
    const auto lit = [&](int pos) -> MtlPtr {
      if (!prop) return mtl_true();
      const bool holds = model.labels[reps[pos]].count(*prop) != 0;
      return holds ? mtl_atom(*prop) : mtl_not(mtl_atom(*prop));
    };
    MtlPtr f = lit(static_cast<int>(n));
    for (std::size_t i = n; i-- > 0;) {
      f = mtl_and(lit(static_cast<int>(i)), mtl_next(cyl.intervals[i].lo, cyl.intervals[i].hi, f));
    }
    return f;
  };
  if (model.atomic_props.empty()) return literal_chain(std::nullopt);
  MtlPtr out;
  for (const auto& prop : model.atomic_props) {
    MtlPtr chain = literal_chain(prop);
    out = out ? mtl_and(std::move(out), std::move(chain)) : std::move(chain);
  }
  return out;
}

Dta encode_cylinder_dta(const SmmModel& model, const Cylinder& cyl) {
  const auto reps = cylinder_class_reps(model, cyl);
  const std::size_t n = cyl.intervals.size();
  Dta aut;
  for (std::size_t q = 0; q <= n + 1; ++q) aut.locations.push_back("q" + std::to_string(q));
  aut.initial = 0;
  aut.final_location.assign(n + 2, false);
  aut.final_location[n + 1] = true;
  aut.clocks = {"x"};
  for (std::size_t i = 0; i < n; ++i) {
    DtaEdge e;
    e.from = static_cast<int>(i);
    e.to = static_cast<int>(i + 1);
    e.symbol = model.labels[reps[i]];
    DelayInterval iv = DelayInterval::closed(cyl.intervals[i].lo, cyl.intervals[i].hi);
    e.guard.by_clock.emplace("x", std::move(iv));
    e.resets.insert("x");
    aut.edges.push_back(std::move(e));
  }
  {
    // unguarded edge consuming the final class label
    DtaEdge e;
    e.from = static_cast<int>(n);
    e.to = static_cast<int>(n + 1);
    e.symbol = model.labels[reps[n]];
    e.resets.insert("x");
    aut.edges.push_back(std::move(e));
  }
  for (const auto& symbol : model.label_class_sets()) {
    DtaEdge loop;
    loop.from = static_cast<int>(n + 1);
    loop.to = static_cast<int>(n + 1);
    loop.symbol = symbol;
    loop.resets.insert("x");
    aut.edges.push_back(std::move(loop));
  }
  return aut;
}

Verdict cylinder_membership(const SmmModel& model, const TimedPath& path, const Cylinder& cyl) {
  (void)model;
  if (cyl.state_sets.size() != cyl.intervals.size() + 1) {
    throw std::invalid_argument("malformed cylinder");
  }
  for (std::size_t i = 0; i < cyl.state_sets.size(); ++i) {
    if (i >= path.positions()) {
      return path.terminated ? Verdict::False : Verdict::Unknown;
    }
    if (!std::binary_search(cyl.state_sets[i].begin(), cyl.state_sets[i].end(), path.states[i])) {
      return Verdict::False;
    }
    if (i < cyl.intervals.size()) {
      if (i >= path.delays.size()) {
        return path.terminated ? Verdict::False : Verdict::Unknown;
      }
      if (!cyl.intervals[i].contains(path.delays[i])) return Verdict::False;
    }
  }
  return Verdict::True;
}

}  // namespace smmdist
