#include "macdet/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "macdet/errors.hpp"

namespace macdet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double ModelParams::sigma() const { return std::sqrt(n0 / 2.0); }

ModelParams validate_params(double p1, double eps1, double eps2, double n0,
                            double p1max, double p2max) {
  for (double v : {p1, eps1, eps2, n0, p1max, p2max}) {
    require(std::isfinite(v), "parameters must be finite");
  }
  require(p1 > 0.0, "p1 must be > 0 (got " + fmt(p1) + ")");
  require(p1 <= 0.5, "p1 must be <= 0.5 (got " + fmt(p1) + ")");
  require(eps1 > 0.0, "eps1 must be > 0 (got " + fmt(eps1) + ")");
  require(eps2 < 0.5, "eps2 must be < 0.5 (got " + fmt(eps2) + ")");
  require(eps1 <= eps2, "eps1 must be <= eps2 (got eps1=" + fmt(eps1) +
                            ", eps2=" + fmt(eps2) + ")");
  require(n0 > 0.0, "n0 must be > 0 (got " + fmt(n0) + ")");
  require(p1max >= 0.0, "p1max must be >= 0 (got " + fmt(p1max) + ")");
  require(p2max >= 0.0, "p2max must be >= 0 (got " + fmt(p2max) + ")");
  return ModelParams{p1, eps1, eps2, n0, p1max, p2max};
}

void validate_params(const ModelParams& params) {
  validate_params(params.p1, params.eps1, params.eps2, params.n0, params.p1max,
                  params.p2max);
}

std::string_view to_string(Case c) {
  switch (c) {
    case Case::I:
      return "Case I";
    case Case::II:
      return "Case II";
    case Case::III:
      return "Case III";
  }
  return "?";
}

double lower_case_threshold(double eps1, double eps2) {
  return eps1 * eps2 / (1.0 - eps1 - eps2 + 2.0 * eps1 * eps2);
}

double upper_case_threshold(double eps1, double eps2) {
  return (eps1 - eps1 * eps2) / (eps1 + eps2 - 2.0 * eps1 * eps2);
}

CaseType classify_case(const ModelParams& params) {
  CaseType out;
  out.lower_threshold = lower_case_threshold(params.eps1, params.eps2);
  out.upper_threshold = upper_case_threshold(params.eps1, params.eps2);
  if (params.p1 <= out.lower_threshold) {
    out.variant = Case::I;
  } else if (params.p1 <= out.upper_threshold) {
    out.variant = Case::II;
  } else {
    out.variant = Case::III;
  }
  return out;
}

ConditionalProbs conditional_probs(const ModelParams& params) {
  const double e1 = params.eps1;
  const double e2 = params.eps2;
  ConditionalProbs cp;
  // Given X = i, sensor s reports i with probability 1 - eps_s.
  for (int i = 0; i < 2; ++i) {
    for (int l = 0; l < 2; ++l) {
      for (int m = 0; m < 2; ++m) {
        const double q1 = (l == i) ? 1.0 - e1 : e1;
        const double q2 = (m == i) ? 1.0 - e2 : e2;
        cp.p[l][m][i] = q1 * q2;
      }
    }
  }
  return cp;
}

double BarCoefficients::weight(int l, int m) const {
  if (l == 1) return m == 1 ? a_bar : b_bar;
  return m == 1 ? c_bar : d_bar;
}

BarCoefficients bar_coefficients(const ModelParams& params) {
  const auto cp = conditional_probs(params);
  const double p1 = params.p1;
  const double p0 = params.p0();
  auto bar = [&](int l, int m) { return p1 * cp(l, m, 1) - p0 * cp(l, m, 0); };
  return BarCoefficients{bar(1, 1), bar(1, 0), bar(0, 1), bar(0, 0)};
}

AsymFactors asym_factors(const ModelParams& params) {
  return AsymFactors{std::sqrt(params.p0() / params.p1),
                     std::sqrt(params.p1 / params.p0())};
}

double JointConstellation::point(int l, int m) const {
  if (l == 1) return m == 1 ? a11 : a10;
  return m == 1 ? a01 : a00;
}

JointConstellation joint_constellation(const ModelParams& params, double power1,
                                       double power2) {
  const auto f = asym_factors(params);
  JointConstellation jc;
  jc.a11 = f.alpha * (power1 + power2);
  jc.a01 = -f.beta * power1 + f.alpha * power2;
  jc.a10 = f.alpha * power1 - f.beta * power2;
  jc.a00 = -f.beta * (power1 + power2);
  jc.overlap_flag = std::abs(jc.a01 - jc.a10) <= kProbTolerance;
  return jc;
}

BinaryPair asymmetric_pair(const ModelParams& params, double amplitude) {
  const auto f = asym_factors(params);
  return BinaryPair{-f.beta * amplitude, f.alpha * amplitude};
}

double mean_power(const BinaryPair& pair, double p1) {
  return (1.0 - p1) * pair.c0 * pair.c0 + p1 * pair.c1 * pair.c1;
}

}  // namespace macdet
