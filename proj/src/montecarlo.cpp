#include "macdet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "macdet/errors.hpp"
#include "macdet/kernels.hpp"
#include "macdet/rng.hpp"

namespace macdet {

namespace {

double log_sum_exp(std::initializer_list<double> xs) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double x : xs) peak = std::max(peak, x);
  if (!std::isfinite(peak)) return peak;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - peak);
  return peak + std::log(s);
}

void check_allocation(const ModelParams& params, const SimConfig& config) {
  if (!(config.power1 >= 0.0) || !(config.power2 >= 0.0)) {
    throw DomainError("allocation amplitudes must be >= 0");
  }
  if (config.trials < 1) throw DomainError("trials must be >= 1");
  const double slack = 1.0 + 1e-12;
  if (config.power1 > std::sqrt(params.p1max) * slack) {
    throw CapError("sensor 1 amplitude " + std::to_string(config.power1) +
                   " exceeds sqrt(p1max) = " + std::to_string(std::sqrt(params.p1max)));
  }
  if (config.power2 > std::sqrt(params.p2max) * slack) {
    throw CapError("sensor 2 amplitude " + std::to_string(config.power2) +
                   " exceeds sqrt(p2max) = " + std::to_string(std::sqrt(params.p2max)));
  }
}

struct SourceDraw {
  int x;
  int l;
  int m;
};

inline SourceDraw draw_source(RngStream& rng, const ModelParams& params) {
  const int x = rng.bernoulli(params.p1) ? 1 : 0;
  const int l = x ^ (rng.bernoulli(params.eps1) ? 1 : 0);
  const int m = x ^ (rng.bernoulli(params.eps2) ? 1 : 0);
  return {x, l, m};
}

template <class Detector>
std::uint64_t mac_block(const ModelParams& params, const PointGrid& pts,
                        const Detector& detector, std::uint64_t seed, std::uint64_t block,
                        std::uint64_t n) {
  RngStream rng(seed, block);
  const double sigma = params.sigma();
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const auto s = draw_source(rng, params);
    const double r = pts[s.l][s.m] + sigma * rng.gaussian();
    errors += static_cast<std::uint64_t>(detector.detect(r) != s.x);
  }
  return errors;
}

std::uint64_t orth_block(const ModelParams& params,
                         const std::array<std::array<double, 2>, 2>& c,
                         const OrthogonalDetector& detector, std::uint64_t seed,
                         std::uint64_t block, std::uint64_t n) {
  RngStream rng(seed, block);
  const double sigma = params.sigma();
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const auto s = draw_source(rng, params);
    const double r1 = c[0][s.l] + sigma * rng.gaussian();
    const double r2 = c[1][s.m] + sigma * rng.gaussian();
    errors += static_cast<std::uint64_t>(detector.detect(r1, r2) != s.x);
  }
  return errors;
}

std::array<std::array<double, 2>, 2> orthogonal_points(const ModelParams& params,
                                                       const SimConfig& config) {
  if (config.scheme == Scheme::OrthAsymmetricBpsk) {
    const auto f = asym_factors(params);
    return {{{-f.beta * config.power1, f.alpha * config.power1},
             {-f.beta * config.power2, f.alpha * config.power2}}};
  }
  return {{{-config.power1, config.power1}, {-config.power2, config.power2}}};
}

template <class Runner>
SimReport run(const ModelParams& params, const SimConfig& config, Runner&& runner) {
  validate_params(params);
  check_allocation(params, config);
  const std::uint64_t seed = config.seed;
  std::uint64_t errors = 0;
  switch (config.scheme) {
    case Scheme::MacOptimalAsym: {
      const auto pts = asymmetric_points(config.power1, config.power2, params);
      const auto regions = find_boundaries(config.power1, config.power2, params);
      errors = runner([&](std::uint64_t k, std::uint64_t n) {
        return mac_block(params, pts, regions, seed, k, n);
      });
      break;
    }
    case Scheme::MacSymmetricMax: {
      const auto pts = symmetric_points(config.power1, config.power2);
      const PosteriorDetector detector(pts, params);
      errors = runner([&](std::uint64_t k, std::uint64_t n) {
        return mac_block(params, pts, detector, seed, k, n);
      });
      break;
    }
    case Scheme::OrthSymmetricBpsk:
    case Scheme::OrthAsymmetricBpsk: {
      const auto c = orthogonal_points(params, config);
      const OrthogonalDetector detector(c, params);
      errors = runner([&](std::uint64_t k, std::uint64_t n) {
        return orth_block(params, c, detector, seed, k, n);
      });
      break;
    }
  }
  return make_report(errors, config.trials, seed);
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::MacOptimalAsym:
      return "mac-optimal-asym";
    case Scheme::MacSymmetricMax:
      return "mac-symmetric-max";
    case Scheme::OrthSymmetricBpsk:
      return "orth-symmetric-bpsk";
    case Scheme::OrthAsymmetricBpsk:
      return "orth-asymmetric-bpsk";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (auto s : {Scheme::MacOptimalAsym, Scheme::MacSymmetricMax, Scheme::OrthSymmetricBpsk,
                 Scheme::OrthAsymmetricBpsk}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

bool is_mac(Scheme scheme) {
  return scheme == Scheme::MacOptimalAsym || scheme == Scheme::MacSymmetricMax;
}

SimReport make_report(std::uint64_t errors, std::uint64_t trials, std::uint64_t seed) {
  SimReport r;
  r.errors = errors;
  r.trials = trials;
  r.seed = seed;
  r.pe_hat = trials > 0 ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
  r.ci95_halfwidth =
      trials > 0 ? 1.96 * std::sqrt(r.pe_hat * (1.0 - r.pe_hat) / static_cast<double>(trials))
                 : 0.0;
  r.ci_reliable = r.pe_hat >= 1e-3;
  return r;
}

SimReport simulate_mac(const ModelParams& params, const SimConfig& config) {
  if (!is_mac(config.scheme)) throw DomainError("simulate_mac requires a MAC scheme");
  return simulate(params, config);
}

SimReport simulate_orthogonal(const ModelParams& params, const SimConfig& config) {
  if (is_mac(config.scheme)) {
    throw DomainError("simulate_orthogonal requires an orthogonal scheme");
  }
  return simulate(params, config);
}

SimReport simulate(const ModelParams& params, const SimConfig& config) {
  return run(params, config, [&](auto&& block_fn) {
    return kernels::run_blocks_parallel(config.trials, kBlockTrials, config.threads, block_fn);
  });
}

SimReport simulate_serial(const ModelParams& params, const SimConfig& config) {
  return run(params, config, [&](auto&& block_fn) {
    return kernels::run_blocks_serial(config.trials, kBlockTrials, block_fn);
  });
}

PosteriorDetector::PosteriorDetector(const PointGrid& points, const ModelParams& params)
    : points_(points), inv_n0_(1.0 / params.n0) {
  const auto cp = conditional_probs(params);
  const double prior[2] = {params.p0(), params.p1};
  for (int i = 0; i < 2; ++i) {
    for (int l = 0; l < 2; ++l) {
      for (int m = 0; m < 2; ++m) log_weight_[i][l][m] = std::log(prior[i] * cp(l, m, i));
    }
  }
}

int PosteriorDetector::detect(double r) const {
  double score[2];
  for (int i = 0; i < 2; ++i) {
    const auto& lw = log_weight_[i];
    auto e = [&](int l, int m) {
      const double dr = r - points_[l][m];
      return lw[l][m] - dr * dr * inv_n0_;
    };
    score[i] = log_sum_exp({e(0, 0), e(0, 1), e(1, 0), e(1, 1)});
  }
  return score[1] > score[0] ? 1 : 0;
}

OrthogonalDetector::OrthogonalDetector(const std::array<std::array<double, 2>, 2>& c,
                                       const ModelParams& params)
    : c_(c), inv_n0_(1.0 / params.n0) {
  const auto cp = conditional_probs(params);
  const double prior[2] = {params.p0(), params.p1};
  for (int i = 0; i < 2; ++i) {
    for (int l = 0; l < 2; ++l) {
      for (int m = 0; m < 2; ++m) log_weight_[i][l][m] = std::log(prior[i] * cp(l, m, i));
    }
  }
}

int OrthogonalDetector::detect(double r1, double r2) const {
  double d1[2];
  double d2[2];
  for (int b = 0; b < 2; ++b) {
    d1[b] = (r1 - c_[0][b]) * (r1 - c_[0][b]) * inv_n0_;
    d2[b] = (r2 - c_[1][b]) * (r2 - c_[1][b]) * inv_n0_;
  }
  double score[2];
  for (int i = 0; i < 2; ++i) {
    const auto& lw = log_weight_[i];
    score[i] = log_sum_exp({lw[0][0] - d1[0] - d2[0], lw[0][1] - d1[0] - d2[1],
                            lw[1][0] - d1[1] - d2[0], lw[1][1] - d1[1] - d2[1]});
  }
  return score[1] > score[0] ? 1 : 0;
}

}  // namespace macdet
