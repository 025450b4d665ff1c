#include "tv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace smmdist {

TvResult TvResult::exact_closed(Rational r) {
  TvResult t;
  t.exact = true;
  t.method = Method::closed_form;
  t.value = to_double(r);
  t.value_rational = std::move(r);
  return t;
}

TvResult TvResult::approx_closed(double v) {
  TvResult t;
  t.exact = false;
  t.method = Method::closed_form;
  t.value = v;
  return t;
}

TvResult TvResult::numeric(double v) {
  TvResult t;
  t.exact = false;
  t.method = Method::numeric_integration;
  t.value = v;
  return t;
}

namespace {

using Kind = ResidenceDist::Kind;

// uniform/uniform: densities are piecewise constant, so the L1 distance is a
// finite sum over the breakpoint segments, exact in rationals.
TvResult tv_uniform_uniform(const ResidenceDist& a, const ResidenceDist& b) {
  if (a == b) return TvResult::exact_closed(Rational(0));
  const Rational ca = Rational(1) / (a.b - a.a);
  const Rational cb = Rational(1) / (b.b - b.a);
  std::vector<Rational> cuts{a.a, a.b, b.a, b.b};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rational l1(0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational mid2 = cuts[i] + cuts[i + 1];  // 2*midpoint, avoids division
    const bool in_a = mid2 > 2 * a.a && mid2 < 2 * a.b;
    const bool in_b = mid2 > 2 * b.a && mid2 < 2 * b.b;
    Rational da = in_a ? ca : Rational(0);
    Rational db = in_b ? cb : Rational(0);
    Rational diff = da > db ? da - db : db - da;
    l1 += diff * (cuts[i + 1] - cuts[i]);
  }
  return TvResult::exact_closed(l1 / 2);
}

// exp/exp: the densities cross exactly once, at
// x* = (log l - log l') / (l - l'), and the total variation is the CDF gap
// there: |exp(-l x*) - exp(-l' x*)|.
TvResult tv_exp_exp(const ResidenceDist& a, const ResidenceDist& b) {
  if (a.a == b.a) return TvResult::exact_closed(Rational(0));
  const double la = to_double(a.a);
  const double lb = to_double(b.a);
  const double xstar = (std::log(la) - std::log(lb)) / (la - lb);
  return TvResult::approx_closed(std::abs(std::exp(-la * xstar) - std::exp(-lb * xstar)));
}

// exp/uniform: split the L1 integral at the uniform's support and at the
// single point where the exponential density crosses the uniform level.
TvResult tv_exp_uniform(const ResidenceDist& e, const ResidenceDist& u) {
  const double rate = to_double(e.a);
  const double lo = to_double(u.a);
  const double hi = to_double(u.b);
  const double level = 1.0 / (hi - lo);
  const double flo = rate * std::exp(-rate * lo);
  const double fhi = rate * std::exp(-rate * hi);
  const double outside = (1.0 - std::exp(-rate * lo)) + std::exp(-rate * hi);
  double inside;
  if (flo <= level) {
    inside = 1.0 - (std::exp(-rate * lo) - std::exp(-rate * hi));
  } else if (fhi >= level) {
    inside = (std::exp(-rate * lo) - std::exp(-rate * hi)) - 1.0;
  } else {
    const double xc = std::log(rate / level) / rate;  // density crossing point
    inside = std::exp(-rate * lo) + std::exp(-rate * hi) - 2.0 * level / rate -
             level * (2.0 * xc - lo - hi);
  }
  return TvResult::approx_closed(0.5 * (outside + inside));
}

double density(const ResidenceDist& d, double x) {
  switch (d.kind) {
    case Kind::dirac:
      return 0.0;  // the atom is handled separately
    case Kind::exponential: {
      const double rate = to_double(d.a);
      return x < 0 ? 0.0 : rate * std::exp(-rate * x);
    }
    case Kind::uniform: {
      const double lo = to_double(d.a), hi = to_double(d.b);
      return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
    }
  }
  return 0.0;
}

double tail_cutoff(const ResidenceDist& d) {
  switch (d.kind) {
    case Kind::dirac:
      return to_double(d.a);
    case Kind::uniform:
      return to_double(d.b);
    case Kind::exponential:
      return -std::log(1e-15) / to_double(d.a);
  }
  return 0.0;
}

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double flo, double fmid, double fhi, double whole, double tol,
                        int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  const double flm = f(lm), frm = f(rm);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo), fmid = f(mid), fhi = f(hi);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

}  // namespace

TvResult total_variation(const ResidenceDist& a, const ResidenceDist& b) {
  if (auto err = a.parameter_error()) throw std::invalid_argument(*err);
  if (auto err = b.parameter_error()) throw std::invalid_argument(*err);
  if (a.kind == Kind::dirac && b.kind == Kind::dirac) {
    return TvResult::exact_closed(Rational(a.a == b.a ? 0 : 1));
  }
  // an atom against an atomless distribution is at full distance
  if (a.kind == Kind::dirac || b.kind == Kind::dirac) {
    return TvResult::exact_closed(Rational(1));
  }
  if (a.kind == Kind::uniform && b.kind == Kind::uniform) return tv_uniform_uniform(a, b);
  if (a.kind == Kind::exponential && b.kind == Kind::exponential) return tv_exp_exp(a, b);
  if (a.kind == Kind::exponential) return tv_exp_uniform(a, b);
  return tv_exp_uniform(b, a);
}

TvResult total_variation_numeric(const ResidenceDist& a, const ResidenceDist& b,
                                 double abs_tol) {
  if (auto err = a.parameter_error()) throw std::invalid_argument(*err);
  if (auto err = b.parameter_error()) throw std::invalid_argument(*err);
  double atoms = 0.0;
  if (a.kind == Kind::dirac && b.kind == Kind::dirac) {
    atoms = a.a == b.a ? 0.0 : 2.0;
  } else if (a.kind == Kind::dirac || b.kind == Kind::dirac) {
    atoms = 1.0;
  }

  std::vector<double> cuts{0.0, std::max(tail_cutoff(a), tail_cutoff(b))};
  for (const auto* d : {&a, &b}) {
    if (d->kind == Kind::uniform) {
      cuts.push_back(to_double(d->a));
      cuts.push_back(to_double(d->b));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto diff = [&](double x) { return std::abs(density(a, x) - density(b, x)); };
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[0]) continue;
    l1 += integrate(diff, std::max(cuts[i], 0.0), cuts[i + 1],
                    abs_tol / static_cast<double>(cuts.size()));
  }
  return TvResult::numeric(0.5 * (atoms + l1));
}

std::vector<std::vector<TvResult>> residence_tv_matrix(const SmmModel& model) {
  const int n = model.state_count();
  std::vector<std::vector<TvResult>> m(n, std::vector<TvResult>(n, TvResult::exact_closed(Rational(0))));
  for (int s = 0; s < n; ++s) {
    if (model.absorbing[s]) continue;
    for (int t = s + 1; t < n; ++t) {
      if (model.absorbing[t]) continue;
      auto r = total_variation(*model.residence[s], *model.residence[t]);
      m[s][t] = r;
      m[t][s] = std::move(r);
    }
  }
  return m;
}

bool residence_equal(const ResidenceDist& a, const ResidenceDist& b) {
  const auto r = total_variation(a, b);
  if (r.exact) return r.value_rational == 0;
  return a == b;
}

}  // namespace smmdist
