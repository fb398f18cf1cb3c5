#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "macdet/boundary.hpp"
#include "macdet/error_probability.hpp"
#include "macdet/errors.hpp"
#include "oracles.hpp"

using namespace macdet;

namespace {

const ModelParams kCase2{0.3, 0.1, 0.15, 1, 1, 1};
const ModelParams kCase3{0.4, 0.01, 0.05, 1, 1, 1};

double q_reference(double x) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big v = boost::math::erfc(big(x) / boost::multiprecision::sqrt(big(2))) / 2;
  return v.convert_to<double>();
}

}  // namespace

TEST_CASE("q_function") {
  CHECK(q_function(0.0) == 0.5);
  for (double x : {0.1, 0.7, 1.5, 3.0, 5.5}) CHECK(q_function(x) + q_function(-x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q_function(1.2815515655) == doctest::Approx(0.1).epsilon(1e-9));
  for (double x = -8.0; x <= 8.0; x += 0.125) {
    const double ref = q_reference(x);
    REQUIRE(std::abs(q_function(x) - ref) <= 1e-12 * ref);
  }
  for (double x : {10.0, 20.0, 37.0}) {
    REQUIRE(std::abs(q_function(x) - q_reference(x)) < 1e-300 + 1e-12 * q_reference(x));
  }
}

TEST_CASE("error_probability basics") {
  const ModelParams case1{0.01, 0.2, 0.3, 1, 1, 1};
  CHECK(error_probability(1, 1, case1).pe == case1.p1);
  CHECK(error_probability(0.3, 2, case1).pe == case1.p1);
  CHECK(error_probability(0, 0, kCase2).pe == kCase2.p1);
  CHECK(error_probability(0, 0, kCase3).pe == kCase3.p1);

  const double pt = p2_tilde(1, kCase3);
  const double ref = oracle::map_error_quadrature(kCase3, oracle::asym_points(kCase3, 1, pt));
  CHECK(std::abs(error_probability(1, pt, kCase3).pe - ref) < 1e-9);
  CHECK(std::abs(error_probability(1, 0.7637, kCase3).pe -
                 oracle::map_error_quadrature(kCase3, oracle::asym_points(kCase3, 1, 0.7637))) <
        1e-9);
}

TEST_CASE("breakdown structure") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 300; ++k) {
    const auto d = oracle::random_instance(rng, 1 + k % 3);
    const auto eb = error_probability(d.P1, d.P2, d.params);
    REQUIRE(eb.pe >= 0.0);
    REQUIRE(eb.pe <= 1.0);
    if (eb.boundaries_used.roots.empty()) continue;
    double s = 0;
    for (int l = 0; l < 2; ++l)
      for (int m = 0; m < 2; ++m) s += eb.per_symbol_terms[l][m] + d.params.p0() * oracle::cond(d.params, l, m, 0);
    REQUIRE(s == doctest::Approx(eb.pe).epsilon(1e-12));
  }
}

TEST_CASE("error_probability matches the quadrature oracle") {
  std::mt19937_64 rng(42);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const auto d = oracle::random_instance(rng, 1 + k % 3);
    const double pe = error_probability(d.P1, d.P2, d.params).pe;
    const double ref = oracle::map_error_quadrature(d.params, oracle::asym_points(d.params, d.P1, d.P2));
    worst = std::max(worst, std::abs(pe - ref));
    REQUIRE(std::abs(pe - ref) < 1e-8);
  }
  MESSAGE("worst |pe - oracle| = " << worst);
}

TEST_CASE("three-root instances match the oracle") {
  std::mt19937_64 rng(43);
  int found = 0;
  for (int k = 0; k < 4000 && found < 50; ++k) {
    auto d = oracle::random_instance(rng, 3);
    d.P2 = 2.0 + 2.0 * d.P2;
    const auto eb = error_probability(d.P1, d.P2, d.params);
    if (eb.boundaries_used.roots.size() != 3) continue;
    ++found;
    const double ref = oracle::map_error_quadrature(d.params, oracle::asym_points(d.params, d.P1, d.P2));
    REQUIRE(std::abs(eb.pe - ref) < 1e-8);
  }
  CHECK(found >= 20);
}

TEST_CASE("superposed_error handles arbitrary constellations") {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 100; ++k) {
    const auto d = oracle::random_instance(rng, 1 + k % 3);
    const auto sym = superposed_error(symmetric_points(d.P1, d.P2), d.params).pe;
    CHECK(std::abs(sym - oracle::map_error_quadrature(d.params, oracle::sym_points(d.P1, d.P2))) < 1e-8);
    const auto asym = superposed_error(asymmetric_points(d.P1, d.P2, d.params), d.params).pe;
    CHECK(asym == doctest::Approx(error_probability(d.P1, d.P2, d.params).pe).epsilon(1e-10));
  }
}

TEST_CASE("single-threshold upper bound") {
  const auto bs = find_boundaries(1, 1, kCase2);
  REQUIRE(bs.roots.size() == 1);
  const double x = bs.roots[0];
  const double pe = error_probability(1, 1, kCase2).pe;
  const double sigma = kCase2.sigma();
  CHECK(error_upper_bound(x, 1, 1, kCase2) == doctest::Approx(pe).epsilon(1e-13));
  CHECK(error_upper_bound(x + 0.5 * sigma, 1, 1, kCase2) > pe);
  CHECK(error_upper_bound(x - 0.5 * sigma, 1, 1, kCase2) > pe);
  CHECK(error_upper_bound(1e3, 1, 1, kCase2) == doctest::Approx(kCase2.p1).epsilon(1e-13));

  const auto pts = oracle::asym_points(kCase2, 1, 1);
  for (double t : {-2.0, -0.3, 0.0, 0.8, 2.5})
    CHECK(error_upper_bound(t, 1, 1, kCase2) == doctest::Approx(oracle::threshold_error(kCase2, pts, t)).epsilon(1e-12));

  std::mt19937_64 rng(45);
  std::normal_distribution<double> g(0, 3);
  for (int k = 0; k < 1000; ++k) {
    const auto d = oracle::random_instance(rng, 1 + k % 3);
    const double pe_k = error_probability(d.P1, d.P2, d.params).pe;
    REQUIRE(error_upper_bound(g(rng), d.P1, d.P2, d.params) >= pe_k - 1e-12);
  }
}

TEST_CASE("g and h decomposition") {
  std::mt19937_64 rng(46);
  for (int k = 0; k < 200; ++k) {
    const auto d = oracle::random_instance(rng, 3);
    const auto& p = d.params;
    const auto f = asym_factors(p);
    const auto bf = bracket_functions(d.P1, d.P2, p);
    const double sigma = p.sigma();

    for (double x : {-1.0, 0.0, 0.4}) {
      const auto gh = g_h_split(x, d.P1, d.P2, p);
      REQUIRE(gh.g + gh.h + p.p0() == doctest::Approx(error_upper_bound(x, d.P1, d.P2, p)).epsilon(1e-12));
    }

    const double xg = f.alpha * d.P2 - *bf.k_alpha_val;
    const double xh = -f.beta * d.P2 + *bf.k_beta_val;
    const double step = 0.02 * sigma;
    auto dg = [&](double x) {
      return g_h_split(x + 1e-4 * sigma, d.P1, d.P2, p).g - g_h_split(x - 1e-4 * sigma, d.P1, d.P2, p).g;
    };
    auto dh = [&](double x) {
      return g_h_split(x + 1e-4 * sigma, d.P1, d.P2, p).h - g_h_split(x - 1e-4 * sigma, d.P1, d.P2, p).h;
    };
    // Skip instances where the derivative underflows near the minimizer.
    const double gscale = std::abs(g_h_split(xg, d.P1, d.P2, p).g);
    const double hscale = std::abs(g_h_split(xh, d.P1, d.P2, p).h);
    if (gscale > 1e-200 && std::abs(dg(xg - step)) > 1e-280 && std::abs(dg(xg + step)) > 1e-280) {
      REQUIRE(dg(xg - step) < 0);
      REQUIRE(dg(xg + step) > 0);
    }
    if (hscale > 1e-200 && std::abs(dh(xh - step)) > 1e-280 && std::abs(dh(xh + step)) > 1e-280) {
      REQUIRE(dh(xh - step) < 0);
      REQUIRE(dh(xh + step) > 0);
    }
  }
  // At P2 = P2~ both minimizers meet at the unique root.
  const double pt = p2_tilde(1, kCase3);
  const auto f = asym_factors(kCase3);
  const auto bf = bracket_functions(1, pt, kCase3);
  const auto roots = find_boundaries(1, pt, kCase3).roots;
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(f.alpha * pt - *bf.k_alpha_val).epsilon(1e-9));
  CHECK(roots[0] == doctest::Approx(-f.beta * pt + *bf.k_beta_val).epsilon(1e-9));
}

TEST_CASE("optimal allocation") {
  const auto c1 = optimal_allocation({0.01, 0.2, 0.3, 1, 1, 1});
  CHECK(c1.case_type.variant == Case::I);
  CHECK(c1.p1_star == 0.0);
  CHECK(c1.p2_star == 0.0);
  CHECK(c1.pe_star == 0.01);
  CHECK_FALSE(c1.p2_capped);

  const auto c2 = optimal_allocation({0.3, 0.1, 0.15, 1, 2, 3});
  CHECK(c2.case_type.variant == Case::II);
  CHECK(c2.p1_star == doctest::Approx(std::sqrt(2.0)));
  CHECK(c2.p2_star == doctest::Approx(std::sqrt(3.0)));
  CHECK(c2.p2_capped);
  CHECK(c2.pe_star == error_probability(c2.p1_star, c2.p2_star, {0.3, 0.1, 0.15, 1, 2, 3}).pe);

  const auto c3 = optimal_allocation(kCase3);
  CHECK(c3.p1_star == 1.0);
  CHECK(c3.p2_star == doctest::Approx(0.7637).epsilon(0.005 / 0.7637));
  CHECK_FALSE(c3.p2_capped);

  auto noisy = kCase3;
  noisy.n0 = 10;
  const auto c3n = optimal_allocation(noisy);
  CHECK(c3n.p2_star == 1.0);
  CHECK(c3n.p2_capped);

  auto silent1 = kCase3;
  silent1.p1max = 0;
  const auto s = optimal_allocation(silent1);
  CHECK(s.p1_star == 0.0);
  CHECK(s.p2_star == 1.0);
  CHECK(s.p2_capped);
}

TEST_CASE("optimal allocation beats nearby allocations") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 200; ++k) {
    auto d = oracle::random_instance(rng, 2 + k % 2);
    d.params.p1max = 0.1 + 2 * u(rng);
    d.params.p2max = 0.1 + 2 * u(rng);
    const auto best = optimal_allocation(d.params);
    for (int j = 0; j < 20; ++j) {
      const double a1 = std::sqrt(d.params.p1max) * u(rng);
      const double a2 = std::sqrt(d.params.p2max) * u(rng);
      REQUIRE(error_probability(a1, a2, d.params).pe >= best.pe_star - 1e-12);
    }
  }
}

TEST_CASE("high-SNR limits") {
  CHECK(high_snr_limit(kCase3, PowerPolicy::Optimal) == 0.01);
  CHECK(high_snr_limit(kCase2, PowerPolicy::Optimal) == doctest::Approx(0.081).epsilon(1e-14));
  CHECK(high_snr_limit(kCase2, PowerPolicy::BothMax) == doctest::Approx(0.081).epsilon(1e-14));
  const double pair = 0.01 * 0.05 + 0.4 * (0.06 - 2 * 0.0005);
  CHECK(high_snr_limit(kCase3, PowerPolicy::BothMax) == doctest::Approx(pair).epsilon(1e-14));
  CHECK(high_snr_limit(kCase3, PowerPolicy::BothMax) > 0.01);
  auto uneven = kCase3;
  uneven.p2max = 2;
  CHECK(high_snr_limit(uneven, PowerPolicy::BothMax) == 0.01);
  CHECK(high_snr_limit(kCase3, PowerPolicy::Sensor1Only) == 0.01);
  CHECK(high_snr_limit(kCase3, PowerPolicy::Sensor2Only) == 0.05);
  CHECK(high_snr_limit({0.01, 0.2, 0.3, 1, 1, 1}, PowerPolicy::BothMax) == 0.01);
  // A sensor too unreliable to follow on its own leaves the prior in charge.
  CHECK(high_snr_limit({0.1, 0.05, 0.3, 1, 1, 1}, PowerPolicy::Sensor2Only) == 0.1);
}

TEST_CASE("error approaches the high-SNR limit") {
  const ModelParams bases[] = {kCase2, kCase3, {0.45, 0.01, 0.05, 1, 1, 1}, {0.4, 0.01, 0.05, 1, 1, 2}};
  for (const auto& base : bases) {
    for (auto policy : {PowerPolicy::Optimal, PowerPolicy::BothMax, PowerPolicy::Sensor1Only,
                        PowerPolicy::Sensor2Only}) {
      const double limit = high_snr_limit(base, policy);
      double prev = 1.0;
      for (int k = 0; k <= 40; ++k) {
        auto p = base;
        p.n0 = std::pow(10.0, -1.0 - 2.0 * k / 40.0);
        const auto a = policy_amplitudes(p, policy);
        const double gap = std::abs(error_probability(a[0], a[1], p).pe - limit);
        REQUIRE(gap <= prev + 1e-15);
        prev = gap;
      }
      CHECK(prev < 0.05 * limit);
    }
  }
}

TEST_CASE("Case II error decreases in both amplitudes") {
  const int n = 20;
  std::vector<std::vector<double>> pe(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pe[i][j] = error_probability((i + 1.0) / n, (j + 1.0) / n, kCase2).pe;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i + 1 < n) REQUIRE(pe[i + 1][j] < pe[i][j]);
      if (j + 1 < n) REQUIRE(pe[i][j + 1] < pe[i][j]);
    }
}

TEST_CASE("Case III interior optimum in P2") {
  for (double p1amp : {0.5, 1.0, 1.5}) {
    const double pt = p2_tilde(p1amp, kCase3);
    const int n = 200;
    // Past P~2 the curve rises and then sinks back toward pe(P~2) as P2 grows
    // without bound, so a window reaching far right ends in a near tie.
    const double hi = 2.0 * pt;
    std::vector<double> grid(n), pe(n);
    for (int k = 0; k < n; ++k) {
      grid[k] = hi * (k + 1.0) / n;
      pe[k] = error_probability(p1amp, grid[k], kCase3).pe;
    }
    int arg = 0, nearest = 0;
    for (int k = 1; k < n; ++k) {
      if (pe[k] < pe[arg]) arg = k;
      if (std::abs(grid[k] - pt) < std::abs(grid[nearest] - pt)) nearest = k;
    }
    CHECK(std::abs(arg - nearest) <= 1);
    for (int k = 0; k + 1 < n && grid[k + 1] < pt; ++k) REQUIRE(pe[k + 1] < pe[k]);
    CHECK(error_probability(p1amp, pt, kCase3).pe <= pe[arg] + 1e-15);
    const double far = error_probability(p1amp, 40.0 * pt, kCase3).pe;
    CHECK(far == doctest::Approx(error_probability(p1amp, pt, kCase3).pe).epsilon(1e-7));
    CHECK(error_probability(p1amp, 1.5 * pt, kCase3).pe > far);
  }
}

TEST_CASE("Case III optimal error is non-increasing in P1") {
  for (double cap2 : {1.0, 0.25}) {
    double prev = 1.0;
    for (int k = 1; k <= 100; ++k) {
      auto p = kCase3;
      p.p1max = std::pow(2.0 * k / 100.0, 2);
      p.p2max = cap2;
      const double pe = optimal_allocation(p).pe_star;
      REQUIRE(pe <= prev + 1e-15);
      prev = pe;
    }
  }
}
