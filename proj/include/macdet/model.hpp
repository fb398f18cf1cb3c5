#pragma once

// Problem instance for the two-sensor binary detection network:
// source X ~ Bernoulli(p1), sensors X_s = X xor Z_s with Z_s ~ Bernoulli(eps_s),
// each sensor maps its bit to {-beta*P_s, alpha*P_s}, and the fusion center
// observes R = S1 + S2 + Z with Z ~ N(0, n0/2).

#include <array>
#include <string_view>

namespace macdet {

inline constexpr double kProbTolerance = 1e-12;

struct ModelParams {
  double p1 = 0.5;
  double eps1 = 0.1;
  double eps2 = 0.1;
  double n0 = 1.0;
  double p1max = 1.0;
  double p2max = 1.0;

  double p0() const { return 1.0 - p1; }
  double sigma() const;
};

// Throws DomainError naming the first violated constraint.
ModelParams validate_params(double p1, double eps1, double eps2, double n0,
                            double p1max, double p2max);
void validate_params(const ModelParams& params);

enum class Case { I, II, III };

std::string_view to_string(Case c);

struct CaseType {
  Case variant = Case::I;
  double lower_threshold = 0.0;
  double upper_threshold = 0.0;
};

double lower_case_threshold(double eps1, double eps2);
double upper_case_threshold(double eps1, double eps2);

// Boundary values of p1 fall into the lower-numbered case.
CaseType classify_case(const ModelParams& params);

// p(X1 = l, X2 = m | X = i), indexed [l][m][i].
struct ConditionalProbs {
  std::array<std::array<std::array<double, 2>, 2>, 2> p{};

  double operator()(int l, int m, int i) const { return p[l][m][i]; }
};

ConditionalProbs conditional_probs(const ModelParams& params);

// xbar = p1 p(lm|1) - p0 p(lm|0); a <-> 11, b <-> 10, c <-> 01, d <-> 00.
struct BarCoefficients {
  double a_bar = 0.0;
  double b_bar = 0.0;
  double c_bar = 0.0;
  double d_bar = 0.0;

  // Weight for constellation point a_lm.
  double weight(int l, int m) const;
};

BarCoefficients bar_coefficients(const ModelParams& params);

struct AsymFactors {
  double alpha = 1.0;  // sqrt(p0/p1)
  double beta = 1.0;   // sqrt(p1/p0)

  double sum() const { return alpha + beta; }
};

AsymFactors asym_factors(const ModelParams& params);

// Superposed MAC constellation under the minimum-power asymmetric design.
// Amplitudes P1, P2 satisfy P_s^2 = E[S_s^2].
struct JointConstellation {
  double a11 = 0.0;
  double a01 = 0.0;
  double a10 = 0.0;
  double a00 = 0.0;
  bool overlap_flag = false;

  double point(int l, int m) const;
};

JointConstellation joint_constellation(const ModelParams& params, double power1,
                                       double power2);

// Minimum-power two-point constellation {c0, c1} for one sensor.
struct BinaryPair {
  double c0 = 0.0;
  double c1 = 0.0;
};

BinaryPair asymmetric_pair(const ModelParams& params, double amplitude);

// E[S^2] for a sensor whose bit equals the source (marginal p1 of sending c1).
double mean_power(const BinaryPair& pair, double p1);

}  // namespace macdet
