#pragma once

// Bit-level simulation of source -> BSC sensors -> constellation -> channel ->
// MAP detector. Trials are split into fixed-size blocks; block k draws from
// rng_stream(seed, k), so results depend only on (seed, trials) and never on
// the thread count.

#include <cstdint>
#include <optional>
#include <string_view>

#include "macdet/boundary.hpp"
#include "macdet/error_probability.hpp"
#include "macdet/model.hpp"

namespace macdet {

enum class Scheme { MacOptimalAsym, MacSymmetricMax, OrthSymmetricBpsk, OrthAsymmetricBpsk };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
bool is_mac(Scheme scheme);

inline constexpr std::uint64_t kDefaultTrials = 500000;
inline constexpr std::uint64_t kBlockTrials = 8192;

struct SimConfig {
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::MacOptimalAsym;
  double power1 = 0.0;  // amplitude, sensor 1
  double power2 = 0.0;  // amplitude, sensor 2
  int threads = 0;      // 0: OpenMP default
};

struct SimReport {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double pe_hat = 0.0;
  double ci95_halfwidth = 0.0;
  std::uint64_t seed = 0;
  bool ci_reliable = true;  // normal approximation adequate (pe_hat >= 1e-3)
};

SimReport make_report(std::uint64_t errors, std::uint64_t trials, std::uint64_t seed);

// MAC schemes only. Throws CapError when the allocation exceeds the caps.
SimReport simulate_mac(const ModelParams& params, const SimConfig& config);
// Orthogonal schemes only.
SimReport simulate_orthogonal(const ModelParams& params, const SimConfig& config);
// Dispatches on config.scheme.
SimReport simulate(const ModelParams& params, const SimConfig& config);

// Single-threaded reference producing the same counts as simulate().
SimReport simulate_serial(const ModelParams& params, const SimConfig& config);

// MAP decision by direct posterior comparison in log domain; ties detect 0.
class PosteriorDetector {
 public:
  PosteriorDetector(const PointGrid& points, const ModelParams& params);
  int detect(double r) const;

 private:
  PointGrid points_;
  double inv_n0_;
  std::array<std::array<std::array<double, 2>, 2>, 2> log_weight_{};  // [i][l][m]
};

// Two-channel MAP detector for orthogonal signaling; c[s][bit] is the point
// sensor s sends for its bit.
class OrthogonalDetector {
 public:
  OrthogonalDetector(const std::array<std::array<double, 2>, 2>& c,
                     const ModelParams& params);
  int detect(double r1, double r2) const;

 private:
  std::array<std::array<double, 2>, 2> c_;
  double inv_n0_;
  std::array<std::array<std::array<double, 2>, 2>, 2> log_weight_{};
};

}  // namespace macdet
