#pragma once

// Grid sweeps behind the CLI: theory and simulation rows for P2 sweeps,
// (P1, P2) heatmaps, SNR curves and case-region maps.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "macdet/format.hpp"
#include "macdet/model.hpp"
#include "macdet/montecarlo.hpp"

namespace macdet {

// 10 log10(sqrt(p1max p2max) / n0).
double snr_db(const ModelParams& params);
double n0_for_snr_db(double snr_db, double p1max, double p2max);

struct Axis {
  std::string var;
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  bool log = false;

  std::vector<double> values() const;
};

// Recognized variables: p1 eps1 eps2 n0 snr_db p1max p2max power1 power2.
bool is_axis_variable(std::string_view var);

// "var:min:max:points[:log]"; throws DomainError.
Axis parse_axis(std::string_view text);
void validate_axis(const Axis& axis);

// How a sweep row picks its signaling.
enum class SweepScheme {
  MacOptimal,    // Table II allocation, asymmetric design
  MacBothMax,    // asymmetric design at both caps
  MacSensor1,    // asymmetric design, sensor 1 at cap, sensor 2 silent
  MacSensor2,    // asymmetric design, sensor 2 at cap, sensor 1 silent
  MacAsym,       // asymmetric design at explicit amplitudes (flags or axes)
  MacSymmetricMax,
  OrthSymmetric,
  OrthAsymmetric,
};

std::string_view to_string(SweepScheme scheme);
std::optional<SweepScheme> parse_sweep_scheme(std::string_view name);

struct SweepSpec {
  ModelParams base;
  std::vector<Axis> axes;  // one or two; the last axis varies fastest
  std::vector<SweepScheme> schemes{SweepScheme::MacOptimal};
  std::optional<double> power1;  // amplitudes for MacAsym when not swept
  std::optional<double> power2;
  std::uint64_t trials = kDefaultTrials;  // 0 disables simulation
  std::uint64_t seed = 0;                 // row k simulates with seed + k
  bool common_seed = false;               // every row simulates with seed
  int threads = 0;
};

void validate_sweep(const SweepSpec& spec);

// One row per grid point per scheme in grid order. Rows whose root isolation
// fails carry status "convergence-error" and empty numeric cells. Fixed
// columns that duplicate an axis variable are omitted.
Table run_sweep(const SweepSpec& spec);

struct RegionMapSpec {
  double p1 = 0.5;
  int resolution = 50;  // cells per axis over (0, 0.5)
};

void validate_region_map(const RegionMapSpec& spec);

// Cell centres eps = 0.5 (k + 0.5) / resolution on both axes; cells with
// eps1 > eps2 are labelled "n/a".
Table region_map(const RegionMapSpec& spec);

struct RegionCounts {
  int case1 = 0;
  int case2 = 0;
  int case3 = 0;
  int excluded = 0;
};

RegionCounts count_regions(const Table& region_table);

}  // namespace macdet
