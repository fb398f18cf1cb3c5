#include "macdet/exp_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "macdet/errors.hpp"

namespace macdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool same_rate(double r1, double r2) {
  return std::abs(r1 - r2) <= 1e-14 * std::max(std::abs(r1), std::abs(r2));
}

double bisect(std::span<const ExpTerm> terms, double lo, double hi, int sign_lo,
              const ZeroOptions& opts) {
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= opts.rel_tol * std::max(1.0, std::abs(mid))) return mid;
    const int s = exp_sum_eval(terms, mid).sign;
    if (s == 0) return mid;
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisection did not reach tolerance within " +
                         std::to_string(opts.max_iter) + " iterations on [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

SignedLog exp_sum_eval(std::span<const ExpTerm> terms, double x) {
  double peak = kNegInf;
  for (const auto& t : terms) {
    if (t.sign != 0) peak = std::max(peak, t.log_abs + t.rate * x);
  }
  if (peak == kNegInf) return {0, kNegInf};
  if (!std::isfinite(peak)) {
    // A single term dominates without bound.
    for (const auto& t : terms) {
      if (t.sign != 0 && t.log_abs + t.rate * x == peak) return {t.sign, peak};
    }
  }
  // Sum in increasing magnitude to limit cancellation error.
  double scaled[8];
  int n = 0;
  for (const auto& t : terms) {
    if (t.sign != 0 && n < 8) {
      scaled[n++] = t.sign * std::exp(t.log_abs + t.rate * x - peak);
    }
  }
  std::sort(scaled, scaled + n,
            [](double u, double v) { return std::abs(u) < std::abs(v); });
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += scaled[i];
  if (s == 0.0) return {0, kNegInf};
  return {s > 0 ? 1 : -1, peak + std::log(std::abs(s))};
}

std::vector<ExpTerm> normalize_terms(std::span<const ExpTerm> terms) {
  std::vector<ExpTerm> sorted;
  for (const auto& t : terms) {
    if (t.sign != 0 && t.log_abs != kNegInf) sorted.push_back(t);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const ExpTerm& u, const ExpTerm& v) { return u.rate < v.rate; });
  std::vector<ExpTerm> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && same_rate(sorted[i].rate, sorted[j].rate)) ++j;
    if (j == i + 1) {
      out.push_back(sorted[i]);
    } else {
      std::vector<ExpTerm> group(sorted.begin() + static_cast<long>(i),
                                 sorted.begin() + static_cast<long>(j));
      for (auto& g : group) g.rate = 0.0;
      const auto merged = exp_sum_eval(group, 0.0);
      if (merged.sign != 0) out.push_back({merged.sign, merged.log_abs, sorted[i].rate});
    }
    i = j;
  }
  return out;
}

std::vector<double> exp_sum_sign_changes(std::span<const ExpTerm> terms,
                                         const ZeroOptions& opts) {
  const auto t = normalize_terms(terms);
  const std::size_t n = t.size();
  if (n < 2) return {};
  int changes = 0;
  for (std::size_t k = 1; k < n; ++k) changes += (t[k].sign != t[k - 1].sign);
  if (changes == 0) return {};

  // Outside [left, right] the lowest (highest) rate term outweighs the rest.
  const double margin = std::log(2.0 * static_cast<double>(n));
  double left = std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    left = std::min(left, (t[0].log_abs - t[k].log_abs - margin) /
                              (t[k].rate - t[0].rate));
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    right = std::max(right, (t[k].log_abs - t[n - 1].log_abs + margin) /
                                (t[n - 1].rate - t[k].rate));
  }
  if (!(left < right)) {
    const double lo = std::min(left, right);
    const double hi = std::max(left, right);
    left = lo - 1.0;
    right = hi + 1.0;
  }

  // f * exp(-rate_0 x) has the same zeros; its derivative drops the lowest
  // term, so its critical points split [left, right] into monotone pieces.
  std::vector<ExpTerm> deriv;
  deriv.reserve(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    deriv.push_back({t[k].sign, t[k].log_abs + std::log(t[k].rate - t[0].rate),
                     t[k].rate - t[0].rate});
  }
  std::vector<double> cuts{left};
  for (double c : exp_sum_sign_changes(deriv, opts)) {
    if (c > left && c < right) cuts.push_back(c);
  }
  cuts.push_back(right);

  std::vector<int> signs(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) signs[i] = exp_sum_eval(t, cuts[i]).sign;

  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      zeros.push_back(bisect(t, cuts[i], cuts[i + 1], signs[i], opts));
    }
  }
  // Exact zeros landing on a cut point.
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    if (signs[i] != 0) continue;
    int before = 0;
    for (std::size_t j = i; j-- > 0;) {
      if (signs[j] != 0) {
        before = signs[j];
        break;
      }
    }
    int after = 0;
    for (std::size_t j = i + 1; j < cuts.size(); ++j) {
      if (signs[j] != 0) {
        after = signs[j];
        break;
      }
    }
    if (before * after < 0) zeros.push_back(cuts[i]);
  }
  std::sort(zeros.begin(), zeros.end());
  zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
  return zeros;
}

}  // namespace macdet
