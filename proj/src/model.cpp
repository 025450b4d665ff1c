#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rng.hpp"

namespace smmdist {

// ---------------------------------------------------------------------------
// DelayInterval

DelayInterval DelayInterval::closed(Rational lo, Rational hi) {
  DelayInterval iv;
  iv.lo = std::move(lo);
  iv.hi = std::move(hi);
  return iv;
}

DelayInterval DelayInterval::nonneg_line() {
  DelayInterval iv;
  iv.lo = 0;
  iv.unbounded = true;
  return iv;
}

bool DelayInterval::empty() const {
  if (unbounded) return false;
  if (lo > hi) return true;
  if (lo == hi) return lo_open || hi_open;
  return false;
}

bool DelayInterval::contains(const Rational& x) const {
  if (x < lo || (x == lo && lo_open)) return false;
  if (unbounded) return true;
  if (x > hi || (x == hi && hi_open)) return false;
  return true;
}

bool DelayInterval::contains(double x) const {
  return contains(rational_from_double(x));
}

bool DelayInterval::is_full_line() const {
  return unbounded && (lo < 0 || (lo == 0 && !lo_open));
}

DelayInterval intersect(const DelayInterval& a, const DelayInterval& b) {
  DelayInterval r;
  if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lo_open = a.lo_open;
  } else if (b.lo > a.lo) {
    r.lo = b.lo;
    r.lo_open = b.lo_open;
  } else {
    r.lo = a.lo;
    r.lo_open = a.lo_open || b.lo_open;
  }
  if (a.unbounded && b.unbounded) {
    r.unbounded = true;
  } else if (a.unbounded) {
    r.hi = b.hi;
    r.hi_open = b.hi_open;
  } else if (b.unbounded) {
    r.hi = a.hi;
    r.hi_open = a.hi_open;
  } else if (a.hi < b.hi) {
    r.hi = a.hi;
    r.hi_open = a.hi_open;
  } else if (b.hi < a.hi) {
    r.hi = b.hi;
    r.hi_open = b.hi_open;
  } else {
    r.hi = a.hi;
    r.hi_open = a.hi_open || b.hi_open;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Prob

Prob Prob::exact(Rational r) {
  Prob p;
  p.exact_ = true;
  p.val_ = to_double(r);
  p.rat_ = std::move(r);
  return p;
}

Prob Prob::approx(double v) {
  Prob p;
  p.exact_ = false;
  p.val_ = v;
  return p;
}

const Rational& Prob::rational() const {
  if (!exact_) throw std::logic_error("probability is not exact");
  return rat_;
}

bool Prob::is_zero() const { return exact_ ? rat_ == 0 : val_ == 0.0; }

Prob& Prob::operator+=(const Prob& o) {
  if (exact_ && o.exact_) {
    rat_ += o.rat_;
    val_ = to_double(rat_);
  } else {
    exact_ = false;
    val_ += o.val_;
  }
  return *this;
}

Prob Prob::operator*(const Prob& o) const {
  if (exact_ && o.exact_) return Prob::exact(rat_ * o.rat_);
  return Prob::approx(val_ * o.val_);
}

// ---------------------------------------------------------------------------
// ResidenceDist

ResidenceDist ResidenceDist::dirac(Rational point) {
  return ResidenceDist{Kind::dirac, std::move(point), Rational(0)};
}

ResidenceDist ResidenceDist::exponential(Rational rate) {
  return ResidenceDist{Kind::exponential, std::move(rate), Rational(0)};
}

ResidenceDist ResidenceDist::uniform(Rational lo, Rational hi) {
  return ResidenceDist{Kind::uniform, std::move(lo), std::move(hi)};
}

bool ResidenceDist::operator==(const ResidenceDist& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::uniform) return a == o.a && b == o.b;
  return a == o.a;
}

std::optional<std::string> ResidenceDist::parameter_error() const {
  switch (kind) {
    case Kind::dirac:
      if (a < 0) return "dirac point must be >= 0";
      break;
    case Kind::exponential:
      if (a <= 0) return "exponential rate must be > 0";
      break;
    case Kind::uniform:
      if (a < 0) return "uniform lower bound must be >= 0";
      if (b <= a) return "uniform upper bound must exceed the lower bound";
      break;
  }
  return std::nullopt;
}

std::string ResidenceDist::describe() const {
  switch (kind) {
    case Kind::dirac:
      return "dirac(" + format_rational(a) + ")";
    case Kind::exponential:
      return "exp(" + format_rational(a) + ")";
    case Kind::uniform:
      return "uniform(" + format_rational(a) + "," + format_rational(b) + ")";
  }
  return "?";
}

Prob residence_mass(const ResidenceDist& dist, const DelayInterval& iv) {
  if (iv.empty()) return Prob::exact(Rational(0));
  if (iv.is_full_line()) return Prob::exact(Rational(1));
  switch (dist.kind) {
    case ResidenceDist::Kind::dirac:
      return Prob::exact(Rational(iv.contains(dist.a) ? 1 : 0));
    case ResidenceDist::Kind::uniform: {
      // overlap length / (hi - lo); endpoint openness carries no mass
      Rational lo = std::max(iv.lo, dist.a);
      Rational hi = iv.unbounded ? dist.b : std::min(iv.hi, dist.b);
      if (hi <= lo) return Prob::exact(Rational(0));
      return Prob::exact((hi - lo) / (dist.b - dist.a));
    }
    case ResidenceDist::Kind::exponential: {
      const double rate = to_double(dist.a);
      const double lo = std::max(0.0, to_double(iv.lo));
      if (iv.unbounded) return Prob::approx(std::exp(-rate * lo));
      const double hi = to_double(iv.hi);
      if (hi <= lo) return Prob::exact(Rational(0));
      // exp(-r*lo) - exp(-r*hi), kept stable for narrow intervals
      return Prob::approx(-std::exp(-rate * lo) * std::expm1(-rate * (hi - lo)));
    }
  }
  return Prob::exact(Rational(0));
}

double sample_residence(const ResidenceDist& dist, double unit) {
  switch (dist.kind) {
    case ResidenceDist::Kind::dirac:
      return to_double(dist.a);
    case ResidenceDist::Kind::uniform:
      return to_double(dist.a) + unit * (to_double(dist.b) - to_double(dist.a));
    case ResidenceDist::Kind::exponential:
      // unit in [0,1) keeps the argument of log1p inside (-1, 0]
      return -std::log1p(-unit) / to_double(dist.a);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// SmmModel

int SmmModel::state_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("unknown state id: '" + name + "'");
  return it->second;
}

bool SmmModel::has_state(const std::string& name) const {
  return index_.count(name) != 0;
}

bool SmmModel::equivalent(int s, int t) const {
  return absorbing[s] == absorbing[t] && labels[s] == labels[t];
}

std::vector<int> SmmModel::label_class_ids() const {
  std::map<std::set<std::string>, int> seen;
  std::vector<int> ids(states.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    auto [it, inserted] = seen.emplace(labels[s], next);
    if (inserted) ++next;
    ids[s] = it->second;
  }
  // renumber so class ids follow the lowest member state
  std::vector<int> first(next, -1);
  for (int s = static_cast<int>(states.size()) - 1; s >= 0; --s) first[ids[s]] = s;
  std::vector<int> order(next);
  for (int c = 0; c < next; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return first[x] < first[y]; });
  std::vector<int> rank(next);
  for (int r = 0; r < next; ++r) rank[order[r]] = r;
  for (auto& id : ids) id = rank[id];
  return ids;
}

std::vector<std::set<std::string>> SmmModel::label_class_sets() const {
  const auto ids = label_class_ids();
  int classes = 0;
  for (int id : ids) classes = std::max(classes, id + 1);
  std::vector<std::set<std::string>> sets(classes);
  for (std::size_t s = 0; s < states.size(); ++s) sets[ids[s]] = labels[s];
  return sets;
}

void SmmModel::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < states.size(); ++i) index_.emplace(states[i], static_cast<int>(i));
}

std::vector<Violation> validate(const SmmModel& model) {
  std::vector<Violation> out;
  const int n = model.state_count();
  for (int s = 0; s < n; ++s) {
    const auto& name = model.states[s];
    for (const auto& p : model.labels[s]) {
      if (!model.atomic_props.count(p)) {
        out.push_back({name, "label '" + p + "' is not in atomic_props"});
      }
    }
    if (model.absorbing[s]) {
      if (model.transitions[s]) out.push_back({name, "absorbing state has a transition row"});
      if (model.residence[s]) out.push_back({name, "absorbing state has a residence entry"});
      continue;
    }
    if (!model.transitions[s]) {
      out.push_back({name, "non-absorbing state lacks a transition row"});
    } else {
      Rational sum(0);
      bool in_range = true;
      for (const auto& p : *model.transitions[s]) {
        if (p < 0 || p > 1) in_range = false;
        sum += p;
      }
      if (!in_range) out.push_back({name, "transition probability outside [0,1]"});
      if (sum != 1) {
        out.push_back({name, "transition row sums to " + format_rational(sum) + ", expected 1"});
      }
    }
    if (!model.residence[s]) {
      out.push_back({name, "non-absorbing state lacks a residence distribution"});
    } else if (auto err = model.residence[s]->parameter_error()) {
      out.push_back({name, *err});
    }
  }
  return out;
}

void require_valid(const SmmModel& model) {
  const auto violations = validate(model);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += "\n  " + v.state + ": " + v.message;
  throw std::invalid_argument(msg);
}

// ---------------------------------------------------------------------------
// Cylinder probability

namespace {

bool set_contains(const std::vector<int>& sorted_set, int value) {
  return std::binary_search(sorted_set.begin(), sorted_set.end(), value);
}

}  // namespace

Prob cylinder_prob(const SmmModel& model, int start, const Cylinder& cyl) {
  if (start < 0 || start >= model.state_count()) throw std::invalid_argument("unknown state id");
  if (cyl.state_sets.size() != cyl.intervals.size() + 1) {
    throw std::invalid_argument("cylinder must have one more state set than intervals");
  }
  const int n = model.state_count();
  std::vector<Prob> weight(n);
  if (!set_contains(cyl.state_sets[0], start)) return Prob::exact(Rational(0));
  weight[start] = Prob::exact(Rational(1));

  for (std::size_t step = 0; step < cyl.intervals.size(); ++step) {
    std::vector<Prob> next(n);
    for (int s = 0; s < n; ++s) {
      if (weight[s].is_zero()) continue;
      // steps out of an absorbing state carry probability zero
      if (model.absorbing[s]) continue;
      const Prob mass = residence_mass(*model.residence[s], cyl.intervals[step]);
      if (mass.is_zero()) continue;
      const Prob base = weight[s] * mass;
      const auto& row = *model.transitions[s];
      for (int t : cyl.state_sets[step + 1]) {
        if (row[t] == 0) continue;
        next[t] += base * Prob::exact(row[t]);
      }
    }
    weight = std::move(next);
  }

  Prob total;
  for (int s = 0; s < n; ++s) total += weight[s];
  return total;
}

TimedPath sample_path(const SmmModel& model, int start, int horizon, std::uint64_t seed) {
  if (start < 0 || start >= model.state_count()) throw std::invalid_argument("unknown state id");
  TimedPath path;
  path.states.push_back(start);
  SplitMix64 rng(seed);
  for (int step = 0; step < horizon; ++step) {
    const int s = path.states.back();
    if (model.absorbing[s]) break;
    const double delay = sample_residence(*model.residence[s], rng.next_unit());
    // successor drawn by exact comparison against the cumulative rational row
    const Rational u = rational_from_double(rng.next_unit());
    const auto& row = *model.transitions[s];
    Rational cum(0);
    int chosen = -1;
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (row[t] == 0) continue;
      cum += row[t];
      if (u < cum) {
        chosen = static_cast<int>(t);
        break;
      }
    }
    if (chosen < 0) {
      // u landed in rounding slack past the final cumulative value
      for (int t = static_cast<int>(row.size()) - 1; t >= 0; --t) {
        if (row[t] != 0) {
          chosen = t;
          break;
        }
      }
    }
    path.delays.push_back(delay);
    path.states.push_back(chosen);
  }
  path.terminated = model.absorbing[path.states.back()];
  return path;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json residence_to_json(const ResidenceDist& dist) {
  nlohmann::json j;
  switch (dist.kind) {
    case ResidenceDist::Kind::dirac:
      j["dirac"] = format_rational(dist.a);
      break;
    case ResidenceDist::Kind::exponential:
      j["exp"] = format_rational(dist.a);
      break;
    case ResidenceDist::Kind::uniform:
      j["uniform"] = nlohmann::json::array({format_rational(dist.a), format_rational(dist.b)});
      break;
  }
  return j;
}

ResidenceDist residence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw std::invalid_argument("residence entry must be an object with a single key");
  }
  if (j.contains("dirac")) return ResidenceDist::dirac(parse_rational(j["dirac"].get<std::string>()));
  if (j.contains("exp")) return ResidenceDist::exponential(parse_rational(j["exp"].get<std::string>()));
  if (j.contains("uniform")) {
    const auto& arr = j["uniform"];
    if (!arr.is_array() || arr.size() != 2) throw std::invalid_argument("uniform expects [lo, hi]");
    return ResidenceDist::uniform(parse_rational(arr[0].get<std::string>()),
                                  parse_rational(arr[1].get<std::string>()));
  }
  throw std::invalid_argument("unknown residence kind");
}

SmmModel model_from_json(const nlohmann::json& j) {
  SmmModel m;
  if (!j.is_object()) throw std::invalid_argument("model must be a JSON object");
  for (const auto& s : j.at("states")) m.states.push_back(s.get<std::string>());
  if (m.states.empty()) throw std::invalid_argument("model needs at least one state");
  {
    std::set<std::string> uniq(m.states.begin(), m.states.end());
    if (uniq.size() != m.states.size()) throw std::invalid_argument("duplicate state ids");
  }
  m.rebuild_index();
  const int n = m.state_count();
  m.absorbing.assign(n, false);
  m.labels.assign(n, {});
  m.transitions.assign(n, std::nullopt);
  m.residence.assign(n, std::nullopt);

  if (j.contains("absorbing")) {
    for (const auto& s : j["absorbing"]) m.absorbing[m.state_index(s.get<std::string>())] = true;
  }
  if (j.contains("labels")) {
    for (const auto& [name, props] : j["labels"].items()) {
      auto& slot = m.labels[m.state_index(name)];
      for (const auto& p : props) slot.insert(p.get<std::string>());
    }
  }
  if (j.contains("transitions")) {
    for (const auto& [name, row] : j["transitions"].items()) {
      std::vector<Rational> dense(n, Rational(0));
      for (const auto& [target, prob] : row.items()) {
        dense[m.state_index(target)] = parse_rational(prob.get<std::string>());
      }
      m.transitions[m.state_index(name)] = std::move(dense);
    }
  }
  if (j.contains("residence")) {
    for (const auto& [name, dist] : j["residence"].items()) {
      m.residence[m.state_index(name)] = residence_from_json(dist);
    }
  }
  if (j.contains("atomic_props")) {
    for (const auto& p : j["atomic_props"]) m.atomic_props.insert(p.get<std::string>());
  } else {
    for (const auto& ls : m.labels) m.atomic_props.insert(ls.begin(), ls.end());
  }
  return m;
}

nlohmann::json model_to_json(const SmmModel& model) {
  nlohmann::ordered_json j;
  j["states"] = model.states;
  nlohmann::ordered_json absorbing = nlohmann::json::array();
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.absorbing[s]) absorbing.push_back(model.states[s]);
  }
  j["absorbing"] = std::move(absorbing);
  nlohmann::ordered_json labels = nlohmann::json::object();
  for (int s = 0; s < model.state_count(); ++s) {
    labels[model.states[s]] = std::vector<std::string>(model.labels[s].begin(), model.labels[s].end());
  }
  j["labels"] = std::move(labels);
  nlohmann::ordered_json trans = nlohmann::json::object();
  for (int s = 0; s < model.state_count(); ++s) {
    if (!model.transitions[s]) continue;
    nlohmann::ordered_json row = nlohmann::json::object();
    for (int t = 0; t < model.state_count(); ++t) {
      const auto& p = (*model.transitions[s])[t];
      if (p != 0) row[model.states[t]] = format_rational(p);
    }
    trans[model.states[s]] = std::move(row);
  }
  j["transitions"] = std::move(trans);
  nlohmann::ordered_json res = nlohmann::json::object();
  for (int s = 0; s < model.state_count(); ++s) {
    if (model.residence[s]) res[model.states[s]] = residence_to_json(*model.residence[s]);
  }
  j["residence"] = std::move(res);
  j["atomic_props"] = std::vector<std::string>(model.atomic_props.begin(), model.atomic_props.end());
  return j;
}

}  // namespace smmdist
