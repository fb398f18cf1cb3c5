#pragma once

// Sign-stable evaluation and zero isolation for short real exponential sums
//   f(x) = sum_k s_k * exp(log_abs_k + rate_k * x).
// Every term is kept in log form so values like exp(-1e4) never underflow to
// a zero coefficient.

#include <span>
#include <vector>

namespace macdet {

struct ExpTerm {
  int sign = 0;         // -1, 0, +1
  double log_abs = 0;   // log |coefficient|
  double rate = 0;      // exponent slope
};

struct SignedLog {
  int sign = 0;
  double log_abs = 0;  // -inf when sign == 0
};

SignedLog exp_sum_eval(std::span<const ExpTerm> terms, double x);

// Merges equal rates, drops zero terms, sorts by rate.
std::vector<ExpTerm> normalize_terms(std::span<const ExpTerm> terms);

struct ZeroOptions {
  double rel_tol = 1e-12;
  int max_iter = 200;
};

// All points where f changes sign, ascending. The number of such points never
// exceeds the number of sign changes in the rate-ordered coefficients.
// Throws ConvergenceError if a bracket cannot be shrunk to tolerance.
std::vector<double> exp_sum_sign_changes(std::span<const ExpTerm> terms,
                                         const ZeroOptions& opts = {});

}  // namespace macdet
