#include "macdet/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "macdet/error_probability.hpp"
#include "macdet/errors.hpp"
#include "macdet/kernels.hpp"

namespace macdet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::array<std::string_view, 9> kAxisVars = {
    "p1", "eps1", "eps2", "n0", "snr_db", "p1max", "p2max", "power1", "power2"};

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw DomainError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

struct GridPoint {
  std::vector<double> coords;
  ModelParams params;
  std::optional<double> power1;
  std::optional<double> power2;
};

void apply_axis(GridPoint& pt, const std::string& var, double v) {
  auto& p = pt.params;
  if (var == "p1") {
    p.p1 = v;
  } else if (var == "eps1") {
    p.eps1 = v;
  } else if (var == "eps2") {
    p.eps2 = v;
  } else if (var == "n0") {
    p.n0 = v;
  } else if (var == "p1max") {
    p.p1max = v;
  } else if (var == "p2max") {
    p.p2max = v;
  } else if (var == "power1") {
    pt.power1 = v;
  } else if (var == "power2") {
    pt.power2 = v;
  }
}

std::vector<GridPoint> expand_grid(const SweepSpec& spec) {
  std::vector<std::vector<double>> values;
  for (const auto& ax : spec.axes) values.push_back(ax.values());
  std::vector<GridPoint> out;
  std::vector<std::size_t> idx(spec.axes.size(), 0);
  while (true) {
    GridPoint pt;
    pt.params = spec.base;
    pt.power1 = spec.power1;
    pt.power2 = spec.power2;
    std::optional<double> snr;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      const double v = values[a][idx[a]];
      pt.coords.push_back(v);
      if (spec.axes[a].var == "snr_db") {
        snr = v;
      } else {
        apply_axis(pt, spec.axes[a].var, v);
      }
    }
    // SNR is applied last so it sees swept caps.
    if (snr) pt.params.n0 = n0_for_snr_db(*snr, pt.params.p1max, pt.params.p2max);
    out.push_back(std::move(pt));

    std::size_t a = spec.axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < values[a].size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (spec.axes.empty()) return out;
  }
}

struct RowJob {
  const GridPoint* point = nullptr;
  SweepScheme scheme = SweepScheme::MacOptimal;
  double power1 = 0.0;
  double power2 = 0.0;
  std::uint64_t seed = 0;
  // filled by evaluation
  std::string case_label;
  double pe_theory = kNaN;
  std::int64_t roots = -1;
  std::optional<SimReport> sim;
  std::string status = "ok";
};

Scheme simulation_scheme(SweepScheme s) {
  switch (s) {
    case SweepScheme::MacSymmetricMax:
      return Scheme::MacSymmetricMax;
    case SweepScheme::OrthSymmetric:
      return Scheme::OrthSymmetricBpsk;
    case SweepScheme::OrthAsymmetric:
      return Scheme::OrthAsymmetricBpsk;
    default:
      return Scheme::MacOptimalAsym;
  }
}

void resolve_amplitudes(RowJob& job) {
  const auto& p = job.point->params;
  switch (job.scheme) {
    case SweepScheme::MacOptimal:
      break;  // computed with the theory pass
    case SweepScheme::MacBothMax:
    case SweepScheme::MacSymmetricMax:
    case SweepScheme::OrthSymmetric:
    case SweepScheme::OrthAsymmetric: {
      const auto amp = policy_amplitudes(p, PowerPolicy::BothMax);
      job.power1 = amp[0];
      job.power2 = amp[1];
      break;
    }
    case SweepScheme::MacSensor1: {
      const auto amp = policy_amplitudes(p, PowerPolicy::Sensor1Only);
      job.power1 = amp[0];
      job.power2 = amp[1];
      break;
    }
    case SweepScheme::MacSensor2: {
      const auto amp = policy_amplitudes(p, PowerPolicy::Sensor2Only);
      job.power1 = amp[0];
      job.power2 = amp[1];
      break;
    }
    case SweepScheme::MacAsym:
      if (!job.point->power1 || !job.point->power2) {
        throw DomainError("scheme mac-asym needs power1 and power2 (flags or grid axes)");
      }
      job.power1 = *job.point->power1;
      job.power2 = *job.point->power2;
      break;
  }
}

void evaluate_theory(RowJob& job) {
  const auto& p = job.point->params;
  job.case_label = std::string(to_string(classify_case(p).variant));
  try {
    switch (job.scheme) {
      case SweepScheme::MacOptimal: {
        const auto alloc = optimal_allocation(p);
        job.power1 = alloc.p1_star;
        job.power2 = alloc.p2_star;
        const auto eb = error_probability(job.power1, job.power2, p);
        job.pe_theory = eb.pe;
        job.roots = static_cast<std::int64_t>(eb.boundaries_used.roots.size());
        break;
      }
      case SweepScheme::MacBothMax:
      case SweepScheme::MacSensor1:
      case SweepScheme::MacSensor2:
      case SweepScheme::MacAsym: {
        const auto eb = error_probability(job.power1, job.power2, p);
        job.pe_theory = eb.pe;
        job.roots = static_cast<std::int64_t>(eb.boundaries_used.roots.size());
        break;
      }
      case SweepScheme::MacSymmetricMax: {
        const auto eb = superposed_error(symmetric_points(job.power1, job.power2), p);
        job.pe_theory = eb.pe;
        job.roots = static_cast<std::int64_t>(eb.boundaries_used.roots.size());
        break;
      }
      case SweepScheme::OrthSymmetric:
      case SweepScheme::OrthAsymmetric:
        break;
    }
  } catch (const ConvergenceError& e) {
    job.status = std::string("convergence-error: ") + e.what();
    job.pe_theory = kNaN;
    job.roots = -1;
  }
}

Cell opt_cell(double v) { return std::isnan(v) ? Cell{} : Cell{v}; }

}  // namespace

double snr_db(const ModelParams& params) {
  return 10.0 * std::log10(std::sqrt(params.p1max * params.p2max) / params.n0);
}

double n0_for_snr_db(double snr, double p1max, double p2max) {
  return std::sqrt(p1max * p2max) / std::pow(10.0, snr / 10.0);
}

std::vector<double> Axis::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    if (log) {
      out[i] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    } else {
      out[i] = min + t * (max - min);
    }
  }
  out.front() = min;
  out.back() = max;
  return out;
}

bool is_axis_variable(std::string_view var) {
  return std::find(kAxisVars.begin(), kAxisVars.end(), var) != kAxisVars.end();
}

void validate_axis(const Axis& axis) {
  if (!is_axis_variable(axis.var)) throw DomainError("unknown grid variable '" + axis.var + "'");
  if (axis.points < 2) throw DomainError("grid '" + axis.var + "' needs points >= 2");
  if (!(axis.min < axis.max)) throw DomainError("grid '" + axis.var + "' needs min < max");
  if (axis.log && !(axis.min > 0.0)) {
    throw DomainError("grid '" + axis.var + "' uses log spacing and needs min > 0");
  }
}

Axis parse_axis(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 && parts.size() != 5) {
    throw DomainError("grid spec must be var:min:max:points[:log], got '" + std::string(text) +
                      "'");
  }
  Axis ax;
  ax.var = std::string(parts[0]);
  ax.min = parse_number(parts[1], "grid min");
  ax.max = parse_number(parts[2], "grid max");
  const double pts = parse_number(parts[3], "grid points");
  if (pts != std::floor(pts) || pts > 1e7) throw DomainError("grid points must be an integer");
  ax.points = static_cast<int>(pts);
  if (parts.size() == 5) {
    if (parts[4] == "log") {
      ax.log = true;
    } else if (parts[4] != "lin") {
      throw DomainError("grid spacing must be 'log' or 'lin'");
    }
  }
  validate_axis(ax);
  return ax;
}

std::string_view to_string(SweepScheme scheme) {
  switch (scheme) {
    case SweepScheme::MacOptimal:
      return "mac-optimal";
    case SweepScheme::MacBothMax:
      return "mac-both-max";
    case SweepScheme::MacSensor1:
      return "mac-sensor1";
    case SweepScheme::MacSensor2:
      return "mac-sensor2";
    case SweepScheme::MacAsym:
      return "mac-asym";
    case SweepScheme::MacSymmetricMax:
      return "mac-symmetric-max";
    case SweepScheme::OrthSymmetric:
      return "orth-symmetric-bpsk";
    case SweepScheme::OrthAsymmetric:
      return "orth-asymmetric-bpsk";
  }
  return "?";
}

std::optional<SweepScheme> parse_sweep_scheme(std::string_view name) {
  for (auto s : {SweepScheme::MacOptimal, SweepScheme::MacBothMax, SweepScheme::MacSensor1,
                 SweepScheme::MacSensor2, SweepScheme::MacAsym, SweepScheme::MacSymmetricMax,
                 SweepScheme::OrthSymmetric, SweepScheme::OrthAsymmetric}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw DomainError("sweep needs one or two --grid axes");
  }
  for (const auto& ax : spec.axes) validate_axis(ax);
  if (spec.axes.size() == 2 && spec.axes[0].var == spec.axes[1].var) {
    throw DomainError("grid axes must use different variables");
  }
  if (spec.schemes.empty()) throw DomainError("sweep needs at least one scheme");
  for (const auto& pt : expand_grid(spec)) validate_params(pt.params);
}

Table run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  const auto grid = expand_grid(spec);

  std::vector<RowJob> jobs;
  jobs.reserve(grid.size() * spec.schemes.size());
  for (const auto& pt : grid) {
    for (auto scheme : spec.schemes) {
      RowJob job;
      job.point = &pt;
      job.scheme = scheme;
      job.seed = spec.common_seed ? spec.seed : spec.seed + jobs.size();
      resolve_amplitudes(job);
      jobs.push_back(std::move(job));
    }
  }

  kernels::for_each_index_parallel(static_cast<std::int64_t>(jobs.size()), spec.threads,
                                   [&](std::int64_t i) { evaluate_theory(jobs[i]); });

  if (spec.trials > 0) {
    for (auto& job : jobs) {
      if (job.status != "ok") continue;
      SimConfig cfg;
      cfg.trials = spec.trials;
      cfg.seed = job.seed;
      cfg.scheme = simulation_scheme(job.scheme);
      cfg.power1 = job.power1;
      cfg.power2 = job.power2;
      cfg.threads = spec.threads;
      try {
        job.sim = simulate(job.point->params, cfg);
      } catch (const ConvergenceError& e) {
        job.status = std::string("convergence-error: ") + e.what();
      }
    }
  }

  Table table;
  for (const auto& ax : spec.axes) table.columns.push_back(ax.var);
  const std::vector<std::string> fixed{"scheme", "case", "p1",     "eps1",      "eps2",
                                       "n0",     "snr_db", "power1", "power2", "roots",
                                       "pe_theory", "pe_sim", "ci95", "errors", "trials",
                                       "seed",   "status"};
  std::vector<bool> keep;
  for (const auto& c : fixed) {
    const bool dup = std::any_of(spec.axes.begin(), spec.axes.end(),
                                 [&](const Axis& ax) { return ax.var == c; });
    keep.push_back(!dup);
    if (!dup) table.columns.push_back(c);
  }
  for (const auto& job : jobs) {
    const auto& p = job.point->params;
    std::vector<Cell> full;
    full.emplace_back(std::string(to_string(job.scheme)));
    full.emplace_back(job.case_label);
    full.emplace_back(p.p1);
    full.emplace_back(p.eps1);
    full.emplace_back(p.eps2);
    full.emplace_back(p.n0);
    full.emplace_back(snr_db(p));
    full.emplace_back(job.power1);
    full.emplace_back(job.power2);
    full.push_back(job.roots >= 0 ? Cell{job.roots} : Cell{});
    full.push_back(opt_cell(job.pe_theory));
    if (job.sim) {
      full.emplace_back(job.sim->pe_hat);
      full.emplace_back(job.sim->ci95_halfwidth);
      full.emplace_back(static_cast<std::int64_t>(job.sim->errors));
      full.emplace_back(static_cast<std::int64_t>(job.sim->trials));
      full.emplace_back(static_cast<std::int64_t>(job.sim->seed));
    } else {
      full.insert(full.end(), 5, Cell{});
    }
    full.emplace_back(job.status);
    std::vector<Cell> row;
    for (double c : job.point->coords) row.emplace_back(c);
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (keep[i]) row.push_back(std::move(full[i]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void validate_region_map(const RegionMapSpec& spec) {
  if (!(spec.p1 > 0.0 && spec.p1 <= 0.5)) throw DomainError("region map needs 0 < p1 <= 0.5");
  if (spec.resolution < 2) throw DomainError("region map needs resolution >= 2");
}

Table region_map(const RegionMapSpec& spec) {
  validate_region_map(spec);
  Table table;
  table.columns = {"eps1", "eps2", "case", "lower_threshold", "upper_threshold"};
  const int n = spec.resolution;
  for (int i = 0; i < n; ++i) {
    const double eps1 = 0.5 * (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double eps2 = 0.5 * (j + 0.5) / n;
      std::vector<Cell> row{eps1, eps2};
      if (eps1 > eps2) {
        row.insert(row.end(), {Cell{std::string("n/a")}, Cell{}, Cell{}});
      } else {
        const auto ct = classify_case(ModelParams{spec.p1, eps1, eps2, 1.0, 1.0, 1.0});
        const char* label = ct.variant == Case::I ? "I" : ct.variant == Case::II ? "II" : "III";
        row.insert(row.end(), {Cell{std::string(label)}, Cell{ct.lower_threshold},
                               Cell{ct.upper_threshold}});
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

RegionCounts count_regions(const Table& region_table) {
  const auto it = std::find(region_table.columns.begin(), region_table.columns.end(), "case");
  if (it == region_table.columns.end()) throw DomainError("table has no 'case' column");
  const auto col = static_cast<std::size_t>(it - region_table.columns.begin());
  RegionCounts counts;
  for (const auto& row : region_table.rows) {
    const auto* label = std::get_if<std::string>(&row[col]);
    if (!label || *label == "n/a") {
      ++counts.excluded;
    } else if (*label == "I") {
      ++counts.case1;
    } else if (*label == "II") {
      ++counts.case2;
    } else {
      ++counts.case3;
    }
  }
  return counts;
}

}  // namespace macdet
