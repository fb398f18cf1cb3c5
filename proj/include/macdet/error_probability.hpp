#pragma once

#include <array>
#include <string_view>

#include "macdet/boundary.hpp"
#include "macdet/model.hpp"

namespace macdet {

// Gaussian tail probability P(N(0,1) > x).
double q_function(double x);

struct ErrorBreakdown {
  double pe = 0.0;
  // bar(l,m) * P(R in D0 | a_lm), indexed [l][m].
  std::array<std::array<double, 2>, 2> per_symbol_terms{};
  BoundarySet boundaries_used;
};

// Exact MAP error for the asymmetric design at amplitudes (P1, P2):
//   Pe = sum_lm p0 p(lm|0) + sum_lm bar(l,m) P(R in D0 | a_lm).
ErrorBreakdown error_probability(double power1, double power2, const ModelParams& params);

// Error of the single-threshold rule "detect 0 iff r <= x_hat".
double error_upper_bound(double x_hat, double power1, double power2,
                         const ModelParams& params);

struct GhSplit {
  double g = 0.0;  // a11 and a01 terms
  double h = 0.0;  // a10 and a00 terms
};

GhSplit g_h_split(double x, double power1, double power2, const ModelParams& params);

// MAP error for an arbitrary superposed 1-D constellation; points[l][m] is the
// received mean when sensor 1 reports l and sensor 2 reports m.
using PointGrid = std::array<std::array<double, 2>, 2>;

ErrorBreakdown superposed_error(const PointGrid& points, const ModelParams& params);
BoundarySet superposed_boundaries(const PointGrid& points, const ModelParams& params);

PointGrid asymmetric_points(double power1, double power2, const ModelParams& params);
PointGrid symmetric_points(double power1, double power2);

struct AllocationResult {
  CaseType case_type;
  double p1_star = 0.0;  // amplitude
  double p2_star = 0.0;  // amplitude
  double pe_star = 0.0;
  bool p2_capped = false;  // P2* equals sqrt(P2max) rather than P2~
};

AllocationResult optimal_allocation(const ModelParams& params);

enum class PowerPolicy { Optimal, BothMax, Sensor1Only, Sensor2Only };

std::string_view to_string(PowerPolicy policy);

// Amplitudes used by a policy under the instance's caps.
std::array<double, 2> policy_amplitudes(const ModelParams& params, PowerPolicy policy);

// lim_{N0 -> 0} of the error probability under the policy.
double high_snr_limit(const ModelParams& params, PowerPolicy policy);

}  // namespace macdet
