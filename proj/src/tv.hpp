#pragma once

#include <vector>

#include "model.hpp"

namespace smmdist {

struct TvResult {
  enum class Method { closed_form, numeric_integration };

  double value = 0.0;
  bool exact = false;              // implies method == closed_form
  Method method = Method::closed_form;
  Rational value_rational{0};      // meaningful only when exact

  static TvResult exact_closed(Rational r);
  static TvResult approx_closed(double v);
  static TvResult numeric(double v);
};

// Total variation distance between two residence-time distributions, by
// closed form. Exact (rational) for dirac/dirac, dirac vs. a continuous
// distribution, and uniform/uniform; a double for the exponential cases.
TvResult total_variation(const ResidenceDist& a, const ResidenceDist& b);

// Reference evaluation: atom discrepancy plus half the L1 distance of the
// continuous densities, by adaptive quadrature. Integration is truncated
// where both tail masses drop below 1e-15.
TvResult total_variation_numeric(const ResidenceDist& a, const ResidenceDist& b,
                                 double abs_tol = 1e-12);

// Entry (s,t) is tv(rho(s), rho(t)) for non-absorbing s,t; rows or columns
// touching absorbing states are zero placeholders (never consumed).
std::vector<std::vector<TvResult>> residence_tv_matrix(const SmmModel& model);

// Equality of distributions decided through the exact closed forms; pairs
// whose distance is only available numerically are equal only when variant
// and parameters coincide, which avoids false merges from rounding.
bool residence_equal(const ResidenceDist& a, const ResidenceDist& b);

}  // namespace smmdist
