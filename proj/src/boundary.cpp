#include "macdet/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "macdet/errors.hpp"

namespace macdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExpTerm make_term(double bar, double point, double rate, double n0) {
  if (bar == 0.0) return {0, -kInf, rate};
  return {bar > 0 ? 1 : -1, std::log(std::abs(bar)) - point * point / n0, rate};
}

void require_nonnegative(double power1, double power2) {
  if (!(power1 >= 0.0) || !(power2 >= 0.0)) {
    throw DomainError("sensor amplitudes must be >= 0");
  }
}

}  // namespace

WCoefficients w_coefficients(double power1, double power2, const ModelParams& params) {
  require_nonnegative(power1, power2);
  const auto bars = bar_coefficients(params);
  const auto f = asym_factors(params);
  const auto jc = joint_constellation(params, power1, power2);
  const double n0 = params.n0;
  const double scale = 2.0 * f.sum() / n0;

  WCoefficients w;
  w.rates = {scale * (power1 + power2), scale * power1, scale * power2};
  w.terms = {make_term(bars.a_bar, jc.a11, w.rates[0], n0),
             make_term(bars.b_bar, jc.a10, w.rates[1], n0),
             make_term(bars.c_bar, jc.a01, w.rates[2], n0),
             make_term(bars.d_bar, jc.a00, 0.0, n0)};
  w.a = bars.a_bar * std::exp(-jc.a11 * jc.a11 / n0);
  w.b = bars.b_bar * std::exp(-jc.a10 * jc.a10 / n0);
  w.c = bars.c_bar * std::exp(-jc.a01 * jc.a01 / n0);
  w.d = bars.d_bar * std::exp(-jc.a00 * jc.a00 / n0);
  return w;
}

WSign w_sign_eval(double x, const WCoefficients& w) {
  const auto v = exp_sum_eval(w.terms, x);
  return {v.sign, v.log_abs};
}

WSign w_sign_eval(double x, double power1, double power2, const ModelParams& params) {
  return w_sign_eval(x, w_coefficients(power1, power2, params));
}

bool Interval::contains(double r) const {
  const bool above = lo_closed ? r >= lo : r > lo;
  const bool below = hi_closed ? r <= hi : r < hi;
  return above && below;
}

int BoundarySet::detect(double r) const {
  for (const auto& iv : d0_intervals) {
    if (iv.contains(r)) return 0;
  }
  return 1;
}

BoundarySet boundary_set_from_roots(std::vector<double> roots, bool d0_at_neg_inf) {
  std::sort(roots.begin(), roots.end());
  BoundarySet out;
  out.roots = std::move(roots);
  const auto& x = out.roots;
  if (x.empty()) {
    if (d0_at_neg_inf) out.d0_intervals.push_back({-kInf, kInf, false, false});
    return out;
  }
  std::size_t first = 1;
  if (d0_at_neg_inf) {
    out.d0_intervals.push_back({-kInf, x[0], false, true});
  } else {
    first = 0;
  }
  for (std::size_t i = first; i < x.size(); i += 2) {
    if (i + 1 < x.size()) {
      out.d0_intervals.push_back({x[i], x[i + 1], true, true});
    } else {
      out.d0_intervals.push_back({x[i], kInf, true, false});
    }
  }
  return out;
}

BoundarySet find_boundaries(double power1, double power2, const ModelParams& params) {
  const auto w = w_coefficients(power1, power2, params);
  auto roots = exp_sum_sign_changes(w.terms);
  if (roots.size() == 2 || roots.size() > 3) {
    throw ConvergenceError("w(x) produced " + std::to_string(roots.size()) +
                           " sign changes; expected 0, 1 or 3");
  }
  return boundary_set_from_roots(std::move(roots));
}

DecisionRegions decision_regions(const BoundarySet& boundaries) {
  DecisionRegions out;
  out.d0 = boundaries.d0_intervals;
  double cursor = -kInf;
  bool cursor_in_d0 = false;
  for (const auto& iv : out.d0) {
    if (iv.lo > cursor) {
      out.d1.push_back({cursor, iv.lo, !cursor_in_d0 && cursor > -kInf, !iv.lo_closed});
    }
    cursor = iv.hi;
    cursor_in_d0 = iv.hi_closed;
  }
  if (cursor < kInf) out.d1.push_back({cursor, kInf, !cursor_in_d0, false});
  return out;
}

double p2_tilde(double power1, const ModelParams& params) {
  if (classify_case(params).variant != Case::III) {
    throw CaseError("P2 tilde is only defined in Case III");
  }
  if (!(power1 > 0.0)) throw DomainError("P2 tilde requires P1 > 0");
  const auto bars = bar_coefficients(params);
  const double s = asym_factors(params).sum();
  return params.n0 / (2.0 * s * s * power1) *
         std::log(bars.a_bar * bars.d_bar / (bars.b_bar * bars.c_bar));
}

BracketFunctions bracket_functions(double power1, double power2,
                                   const ModelParams& params) {
  if (!(power1 > 0.0) || !(power2 > 0.0)) {
    throw DomainError("bracket functions require P1, P2 > 0");
  }
  const auto bars = bar_coefficients(params);
  const auto f = asym_factors(params);
  const double half_diff = 0.5 * (f.alpha - f.beta);
  const double pre1 = params.n0 / (2.0 * f.sum() * power1);
  const double pre2 = params.n0 / (2.0 * f.sum() * power2);

  BracketFunctions out;
  if (bars.c_bar != 0.0 && bars.a_bar / -bars.c_bar > 0.0) {
    out.k_val = pre1 * std::log(bars.a_bar / -bars.c_bar) - half_diff * power1;
  }
  if (bars.b_bar != 0.0 && bars.a_bar / -bars.b_bar > 0.0) {
    out.l_val = pre2 * std::log(bars.a_bar / -bars.b_bar) - half_diff * power2;
  }
  if (classify_case(params).variant == Case::III) {
    out.k_alpha_val = pre1 * std::log(bars.a_bar / -bars.c_bar) - half_diff * power1;
    out.k_beta_val = pre1 * std::log(-bars.d_bar / bars.b_bar) + half_diff * power1;
    out.p2_tilde_val = p2_tilde(power1, params);
  }
  return out;
}

std::optional<RootBracket> case3_root_bracket(double power1, double power2,
                                              const ModelParams& params) {
  if (!(power1 > 0.0) || !(power2 > 0.0)) return std::nullopt;
  const auto bf = bracket_functions(power1, power2, params);
  if (!bf.k_alpha_val || !bf.k_beta_val) return std::nullopt;
  const auto f = asym_factors(params);
  const double u = f.alpha * power2 - *bf.k_alpha_val;
  const double v = -f.beta * power2 + *bf.k_beta_val;
  return RootBracket{std::min(u, v), std::max(u, v)};
}

}  // namespace macdet
