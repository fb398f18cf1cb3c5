#include "macdet/error_probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "macdet/errors.hpp"
#include "macdet/exp_sum.hpp"

namespace macdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_by_magnitude(std::vector<double> values) {
  std::sort(values.begin(), values.end(),
            [](double u, double v) { return std::abs(u) < std::abs(v); });
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

// P(a + Z in iv) as a signed pair of Q terms, Z ~ N(0, sigma^2).
void interval_mass_terms(const Interval& iv, double a, double sigma, double weight,
                         std::vector<double>& sink, double& mass) {
  const double upper = iv.hi == kInf ? 1.0 : q_function((a - iv.hi) / sigma);
  const double lower = iv.lo == -kInf ? 0.0 : q_function((a - iv.lo) / sigma);
  sink.push_back(weight * upper);
  if (lower != 0.0) sink.push_back(-weight * lower);
  mass += upper - lower;
}

ErrorBreakdown error_from_regions(const PointGrid& points, BoundarySet bs,
                                  const ModelParams& params) {
  const auto bars = bar_coefficients(params);
  const auto cp = conditional_probs(params);
  const double sigma = params.sigma();

  ErrorBreakdown out;
  std::vector<double> terms;
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      const double weight = bars.weight(l, m);
      std::vector<double> local;
      double mass = 0.0;
      for (const auto& iv : bs.d0_intervals) {
        interval_mass_terms(iv, points[l][m], sigma, weight, local, mass);
      }
      out.per_symbol_terms[l][m] = weight * mass;
      terms.insert(terms.end(), local.begin(), local.end());
      terms.push_back(params.p0() * cp(l, m, 0));
    }
  }
  out.pe = std::clamp(sum_by_magnitude(std::move(terms)), 0.0, 1.0);
  out.boundaries_used = std::move(bs);
  return out;
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

PointGrid asymmetric_points(double power1, double power2, const ModelParams& params) {
  const auto jc = joint_constellation(params, power1, power2);
  return PointGrid{{{jc.a00, jc.a01}, {jc.a10, jc.a11}}};
}

PointGrid symmetric_points(double power1, double power2) {
  PointGrid g{};
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      g[l][m] = (l == 1 ? power1 : -power1) + (m == 1 ? power2 : -power2);
    }
  }
  return g;
}

ErrorBreakdown error_probability(double power1, double power2, const ModelParams& params) {
  auto bs = find_boundaries(power1, power2, params);
  if (bs.roots.empty()) {
    const auto bars = bar_coefficients(params);
    ErrorBreakdown out;
    out.pe = params.p1;
    for (int l = 0; l < 2; ++l) {
      for (int m = 0; m < 2; ++m) out.per_symbol_terms[l][m] = bars.weight(l, m);
    }
    out.boundaries_used = std::move(bs);
    return out;
  }
  return error_from_regions(asymmetric_points(power1, power2, params), std::move(bs),
                            params);
}

double error_upper_bound(double x_hat, double power1, double power2,
                         const ModelParams& params) {
  const auto bars = bar_coefficients(params);
  const auto pts = asymmetric_points(power1, power2, params);
  const double sigma = params.sigma();
  std::vector<double> terms;
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      terms.push_back(bars.weight(l, m) * q_function((pts[l][m] - x_hat) / sigma));
    }
  }
  terms.push_back(params.p0());
  return sum_by_magnitude(std::move(terms));
}

GhSplit g_h_split(double x, double power1, double power2, const ModelParams& params) {
  const auto bars = bar_coefficients(params);
  const auto jc = joint_constellation(params, power1, power2);
  const double sigma = params.sigma();
  GhSplit out;
  out.g = bars.a_bar * q_function((jc.a11 - x) / sigma) +
          bars.c_bar * q_function((jc.a01 - x) / sigma);
  out.h = bars.b_bar * q_function((jc.a10 - x) / sigma) +
          bars.d_bar * q_function((jc.a00 - x) / sigma);
  return out;
}

BoundarySet superposed_boundaries(const PointGrid& points, const ModelParams& params) {
  const auto bars = bar_coefficients(params);
  const double n0 = params.n0;
  // sum_lm bar * exp(-(x - a)^2 / N0) shares its sign with
  // sum_lm bar * exp(-a^2 / N0) * exp(2 a x / N0).
  std::vector<ExpTerm> terms;
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      const double w = bars.weight(l, m);
      if (w == 0.0) continue;
      const double a = points[l][m];
      terms.push_back({w > 0 ? 1 : -1, std::log(std::abs(w)) - a * a / n0, 2.0 * a / n0});
    }
  }
  const auto normalized = normalize_terms(terms);
  const int sign_left = normalized.empty() ? 0 : normalized.front().sign;
  auto roots = exp_sum_sign_changes(terms);
  if (roots.size() > 3) {
    throw ConvergenceError("superposed constellation produced more than 3 boundaries");
  }
  return boundary_set_from_roots(std::move(roots), sign_left <= 0);
}

ErrorBreakdown superposed_error(const PointGrid& points, const ModelParams& params) {
  return error_from_regions(points, superposed_boundaries(points, params), params);
}

AllocationResult optimal_allocation(const ModelParams& params) {
  AllocationResult out;
  out.case_type = classify_case(params);
  const double cap1 = std::sqrt(params.p1max);
  const double cap2 = std::sqrt(params.p2max);
  switch (out.case_type.variant) {
    case Case::I:
      out.pe_star = params.p1;
      return out;
    case Case::II:
      out.p1_star = cap1;
      out.p2_star = cap2;
      out.p2_capped = true;
      break;
    case Case::III: {
      out.p1_star = cap1;
      const double tilde = cap1 > 0.0 ? p2_tilde(cap1, params) : kInf;
      out.p2_capped = cap2 <= tilde;
      out.p2_star = out.p2_capped ? cap2 : tilde;
      break;
    }
  }
  out.pe_star = error_probability(out.p1_star, out.p2_star, params).pe;
  return out;
}

std::string_view to_string(PowerPolicy policy) {
  switch (policy) {
    case PowerPolicy::Optimal:
      return "optimal";
    case PowerPolicy::BothMax:
      return "both-max";
    case PowerPolicy::Sensor1Only:
      return "sensor1-only";
    case PowerPolicy::Sensor2Only:
      return "sensor2-only";
  }
  return "?";
}

std::array<double, 2> policy_amplitudes(const ModelParams& params, PowerPolicy policy) {
  const double cap1 = std::sqrt(params.p1max);
  const double cap2 = std::sqrt(params.p2max);
  switch (policy) {
    case PowerPolicy::Optimal: {
      const auto r = optimal_allocation(params);
      return {r.p1_star, r.p2_star};
    }
    case PowerPolicy::BothMax:
      return {cap1, cap2};
    case PowerPolicy::Sensor1Only:
      return {cap1, 0.0};
    case PowerPolicy::Sensor2Only:
      return {0.0, cap2};
  }
  return {0.0, 0.0};
}

namespace {

// Noiseless MAP on one sensor bit: report it iff p1 (1 - eps) > p0 eps.
double single_sensor_limit(const ModelParams& params, double eps) {
  return params.p1 * (1.0 - eps) > params.p0() * eps ? eps : params.p1;
}

double pair_limit(const ModelParams& params) {
  const double e1 = params.eps1;
  const double e2 = params.eps2;
  return e1 * e2 + params.p1 * (e1 + e2 - 2.0 * e1 * e2);
}

}  // namespace

double high_snr_limit(const ModelParams& params, PowerPolicy policy) {
  const auto kind = classify_case(params).variant;
  if (kind == Case::I) return params.p1;

  const bool has1 = params.p1max > 0.0;
  const bool has2 = params.p2max > 0.0;
  switch (policy) {
    case PowerPolicy::Sensor1Only:
      return has1 ? single_sensor_limit(params, params.eps1) : params.p1;
    case PowerPolicy::Sensor2Only:
      return has2 ? single_sensor_limit(params, params.eps2) : params.p1;
    case PowerPolicy::Optimal:
    case PowerPolicy::BothMax:
      break;
  }
  if (!has1 && !has2) return params.p1;
  if (!has2) return single_sensor_limit(params, params.eps1);
  if (!has1) return single_sensor_limit(params, params.eps2);

  if (kind == Case::II) return pair_limit(params);
  // Case III: the optimal P2* vanishes as N0 -> 0, leaving sensor 1 alone.
  if (policy == PowerPolicy::Optimal) return params.eps1;
  return params.p1max != params.p2max ? params.eps1 : pair_limit(params);
}

}  // namespace macdet
