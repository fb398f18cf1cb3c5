#pragma once

// MAP decision boundaries for the superposed constellation.
//
// sign(P(X=1|r) - P(X=0|r)) equals the sign of
//   w(x) = a e^{r_a x} + b e^{r_b x} + c e^{r_c x} + d
// with r_a = 2(alpha+beta)(P1+P2)/N0, r_b = 2(alpha+beta)P1/N0,
// r_c = 2(alpha+beta)P2/N0, and a..d the bar coefficients times strictly
// positive Gaussian factors. D0 = {w <= 0}.

#include <array>
#include <optional>
#include <vector>

#include "macdet/exp_sum.hpp"
#include "macdet/model.hpp"

namespace macdet {

struct WCoefficients {
  // Linear values; these underflow to zero at very small N0, use terms for
  // anything sign- or magnitude-sensitive.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  std::array<double, 3> rates{};  // r_a, r_b, r_c
  std::array<ExpTerm, 4> terms{};  // a, b, c, d in log form
};

WCoefficients w_coefficients(double power1, double power2, const ModelParams& params);

struct WSign {
  int sign = 0;
  double log_magnitude = 0.0;
};

WSign w_sign_eval(double x, double power1, double power2, const ModelParams& params);
WSign w_sign_eval(double x, const WCoefficients& w);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double r) const;
};

struct BoundarySet {
  std::vector<double> roots;  // ascending; size 0, 1 or 3
  std::vector<Interval> d0_intervals;

  // MAP decision for received value r; ties resolve to 0.
  int detect(double r) const;
};

struct DecisionRegions {
  std::vector<Interval> d0;
  std::vector<Interval> d1;
};

// Throws ConvergenceError on bisection failure or an even/oversized root set.
BoundarySet find_boundaries(double power1, double power2, const ModelParams& params);

// Builds D0 from sign-change points; D0 alternates starting at -infinity.
BoundarySet boundary_set_from_roots(std::vector<double> roots, bool d0_at_neg_inf = true);

DecisionRegions decision_regions(const BoundarySet& boundaries);

// Case III interior optimum for sensor 2 at sensor-1 amplitude power1.
// Throws CaseError outside Case III and DomainError for power1 <= 0.
double p2_tilde(double power1, const ModelParams& params);

struct BracketFunctions {
  std::optional<double> k_val;        // K(P1), needs a_bar/(-c_bar) > 0
  std::optional<double> l_val;        // L(P2), needs a_bar/(-b_bar) > 0
  std::optional<double> k_alpha_val;  // Case III only
  std::optional<double> k_beta_val;   // Case III only
  std::optional<double> p2_tilde_val; // Case III only
};

BracketFunctions bracket_functions(double power1, double power2,
                                   const ModelParams& params);

// Open interval that must contain every root in Case III when P2 != P2~(P1).
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

std::optional<RootBracket> case3_root_bracket(double power1, double power2,
                                              const ModelParams& params);

}  // namespace macdet
