// macdet: command-line front end for the two-sensor MAC detection library.
//
// Exit codes: 0 success, 1 I/O error, 2 validation error, 3 convergence error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "macdet/boundary.hpp"
#include "macdet/error_probability.hpp"
#include "macdet/errors.hpp"
#include "macdet/format.hpp"
#include "macdet/model.hpp"
#include "macdet/montecarlo.hpp"
#include "macdet/sweep.hpp"

namespace {

using macdet::ModelParams;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct ParamFlags {
  double p1 = NAN;
  double eps1 = NAN;
  double eps2 = NAN;
  double n0 = NAN;
  double p1max = NAN;
  double p2max = NAN;
};

struct OutputFlags {
  std::string out;
  std::string format;
};

void add_params(CLI::App* cmd, ParamFlags& f, bool channel_required) {
  cmd->add_option("--p1", f.p1, "P(X = 1), 0 < p1 <= 0.5")->required();
  cmd->add_option("--eps1", f.eps1, "sensor 1 crossover probability")->required();
  cmd->add_option("--eps2", f.eps2, "sensor 2 crossover probability")->required();
  auto* n0 = cmd->add_option("--n0", f.n0, "noise spectral density (variance n0/2)");
  auto* c1 = cmd->add_option("--p1max", f.p1max, "sensor 1 power cap");
  auto* c2 = cmd->add_option("--p2max", f.p2max, "sensor 2 power cap");
  if (channel_required) {
    n0->required();
    c1->required();
    c2->required();
  }
}

ModelParams to_params(const ParamFlags& f) {
  // Channel values only matter to commands that require them.
  auto or_one = [](double v) { return std::isnan(v) ? 1.0 : v; };
  return macdet::validate_params(f.p1, f.eps1, f.eps2, or_one(f.n0), or_one(f.p1max),
                                 or_one(f.p2max));
}

void add_output(CLI::App* cmd, OutputFlags& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "text"}));
}

void emit(const std::string& text, const OutputFlags& o) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw macdet::IoError("cannot open '" + o.out + "' for writing");
  file << text;
  if (!file) throw macdet::IoError("failed writing '" + o.out + "'");
}

std::string render_record(const json& obj, const std::string& format) {
  if (format == "json") return obj.dump(2) + "\n";
  macdet::Table table;
  std::vector<macdet::Cell> row;
  for (const auto& [key, value] : obj.items()) {
    table.columns.push_back(key);
    if (value.is_null()) {
      row.emplace_back();
    } else if (value.is_number_integer()) {
      row.emplace_back(value.get<std::int64_t>());
    } else if (value.is_number()) {
      row.emplace_back(value.get<double>());
    } else if (value.is_string()) {
      row.emplace_back(value.get<std::string>());
    } else {
      row.emplace_back(value.dump());
    }
  }
  table.rows.push_back(std::move(row));
  if (format == "csv") return macdet::to_csv(table);
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << table.columns[i] << ": " << obj[table.columns[i]].dump() << "\n";
  }
  return os.str();
}

json interval_json(const std::vector<macdet::Interval>& ivs) {
  auto arr = json::array();
  for (const auto& iv : ivs) {
    json e;
    e["lo"] = std::isfinite(iv.lo) ? json(iv.lo) : json(macdet::format_double(iv.lo));
    e["hi"] = std::isfinite(iv.hi) ? json(iv.hi) : json(macdet::format_double(iv.hi));
    e["lo_closed"] = iv.lo_closed;
    e["hi_closed"] = iv.hi_closed;
    arr.push_back(e);
  }
  return arr;
}

std::pair<double, double> amplitudes_or_optimal(const ModelParams& p,
                                                const std::optional<double>& a1,
                                                const std::optional<double>& a2) {
  if (a1 && a2) return {*a1, *a2};
  const auto alloc = macdet::optimal_allocation(p);
  return {a1.value_or(alloc.p1_star), a2.value_or(alloc.p2_star)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal binary signaling for a two-sensor Gaussian MAC detection network"};
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.require_subcommand(1);

  // classify
  ParamFlags classify_p;
  OutputFlags classify_o;
  auto* classify = app.add_subcommand("classify", "case classification and thresholds");
  add_params(classify, classify_p, false);
  add_output(classify, classify_o, "text");

  // optimize
  ParamFlags optimize_p;
  OutputFlags optimize_o;
  auto* optimize = app.add_subcommand("optimize", "optimal power allocation");
  add_params(optimize, optimize_p, true);
  add_output(optimize, optimize_o, "json");

  // boundaries / pe
  ParamFlags boundaries_p;
  OutputFlags boundaries_o;
  std::optional<double> boundaries_a1;
  std::optional<double> boundaries_a2;
  auto* boundaries = app.add_subcommand("boundaries", "MAP decision boundaries");
  add_params(boundaries, boundaries_p, true);
  add_output(boundaries, boundaries_o, "json");
  boundaries->add_option("--power1", boundaries_a1, "sensor 1 amplitude (default: optimal)");
  boundaries->add_option("--power2", boundaries_a2, "sensor 2 amplitude (default: optimal)");

  ParamFlags pe_p;
  OutputFlags pe_o;
  std::optional<double> pe_a1;
  std::optional<double> pe_a2;
  auto* pe = app.add_subcommand("pe", "exact MAP error probability");
  add_params(pe, pe_p, true);
  add_output(pe, pe_o, "json");
  pe->add_option("--power1", pe_a1, "sensor 1 amplitude (default: optimal)");
  pe->add_option("--power2", pe_a2, "sensor 2 amplitude (default: optimal)");

  // sweep
  ParamFlags sweep_p;
  OutputFlags sweep_o;
  std::vector<std::string> sweep_grids;
  std::vector<std::string> sweep_schemes{"mac-optimal"};
  std::uint64_t sweep_trials = macdet::kDefaultTrials;
  std::uint64_t sweep_seed = 0;
  int sweep_threads = 0;
  std::optional<double> sweep_a1;
  std::optional<double> sweep_a2;
  auto* sweep = app.add_subcommand("sweep", "grid sweep of theory and simulation");
  add_params(sweep, sweep_p, true);
  add_output(sweep, sweep_o, "csv");
  sweep->add_option("--grid", sweep_grids, "var:min:max:points[:log] (one or two)")
      ->required();
  sweep->add_option("--scheme", sweep_schemes, "sweep schemes")->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "trials per row (0: theory only)");
  sweep->add_option("--seed", sweep_seed, "base seed; row k uses seed + k")->required();
  bool sweep_common_seed = false;
  sweep->add_flag("--common-seed", sweep_common_seed,
                  "simulate every row with the same seed (common random numbers)");
  sweep->add_option("--threads", sweep_threads, "worker threads (0: default)");
  sweep->add_option("--power1", sweep_a1, "sensor 1 amplitude for mac-asym");
  sweep->add_option("--power2", sweep_a2, "sensor 2 amplitude for mac-asym");

  // region-map
  double region_p1 = NAN;
  int region_resolution = 50;
  OutputFlags region_o;
  auto* region = app.add_subcommand("region-map", "case labels over (eps1, eps2)");
  region->add_option("--p1", region_p1, "P(X = 1)")->required();
  region->add_option("--resolution", region_resolution, "cells per axis");
  add_output(region, region_o, "csv");

  // simulate
  ParamFlags sim_p;
  OutputFlags sim_o;
  std::string sim_scheme = "mac-optimal-asym";
  std::uint64_t sim_trials = macdet::kDefaultTrials;
  std::uint64_t sim_seed = 0;
  int sim_threads = 0;
  std::optional<double> sim_a1;
  std::optional<double> sim_a2;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo error rate");
  add_params(simulate, sim_p, true);
  add_output(simulate, sim_o, "json");
  simulate->add_option("--scheme", sim_scheme, "signaling scheme")
      ->check(CLI::IsMember({"mac-optimal-asym", "mac-symmetric-max", "orth-symmetric-bpsk",
                             "orth-asymmetric-bpsk"}));
  simulate->add_option("--trials", sim_trials, "number of source bits");
  simulate->add_option("--seed", sim_seed, "random seed")->required();
  simulate->add_option("--threads", sim_threads, "worker threads (0: default)");
  simulate->add_option("--power1", sim_a1,
                       "sensor 1 amplitude (default: optimal for mac-optimal-asym, else cap)");
  simulate->add_option("--power2", sim_a2,
                       "sensor 2 amplitude (default: optimal for mac-optimal-asym, else cap)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*classify) {
      const auto p = to_params(classify_p);
      const auto ct = macdet::classify_case(p);
      json obj;
      obj["case"] = std::string(macdet::to_string(ct.variant));
      obj["lower_threshold"] = ct.lower_threshold;
      obj["upper_threshold"] = ct.upper_threshold;
      std::string text;
      if (classify_o.format == "text") {
        text = obj["case"].get<std::string>() + "\nlower_threshold " +
               macdet::format_double(ct.lower_threshold) + "\nupper_threshold " +
               macdet::format_double(ct.upper_threshold) + "\n";
      } else {
        text = render_record(obj, classify_o.format);
      }
      emit(text, classify_o);
    } else if (*optimize) {
      const auto p = to_params(optimize_p);
      const auto r = macdet::optimal_allocation(p);
      json obj;
      obj["case"] = std::string(macdet::to_string(r.case_type.variant));
      obj["lower_threshold"] = r.case_type.lower_threshold;
      obj["upper_threshold"] = r.case_type.upper_threshold;
      obj["p1_star"] = r.p1_star;
      obj["p2_star"] = r.p2_star;
      obj["pe_star"] = r.pe_star;
      obj["p2_capped"] = r.p2_capped;
      if (r.case_type.variant == macdet::Case::III && r.p1_star > 0.0) {
        obj["p2_tilde"] = macdet::p2_tilde(r.p1_star, p);
      } else {
        obj["p2_tilde"] = nullptr;
      }
      obj["snr_db"] = macdet::snr_db(p);
      obj["high_snr_limit"] = macdet::high_snr_limit(p, macdet::PowerPolicy::Optimal);
      emit(render_record(obj, optimize_o.format), optimize_o);
    } else if (*boundaries) {
      const auto p = to_params(boundaries_p);
      const auto [a1, a2] = amplitudes_or_optimal(p, boundaries_a1, boundaries_a2);
      const auto bs = macdet::find_boundaries(a1, a2, p);
      const auto regions = macdet::decision_regions(bs);
      json obj;
      obj["case"] = std::string(macdet::to_string(macdet::classify_case(p).variant));
      obj["power1"] = a1;
      obj["power2"] = a2;
      obj["roots"] = bs.roots;
      obj["d0"] = interval_json(regions.d0);
      obj["d1"] = interval_json(regions.d1);
      emit(boundaries_o.format == "json" ? obj.dump(2) + "\n"
                                         : render_record(obj, boundaries_o.format),
           boundaries_o);
    } else if (*pe) {
      const auto p = to_params(pe_p);
      const auto [a1, a2] = amplitudes_or_optimal(p, pe_a1, pe_a2);
      const auto eb = macdet::error_probability(a1, a2, p);
      json obj;
      obj["case"] = std::string(macdet::to_string(macdet::classify_case(p).variant));
      obj["power1"] = a1;
      obj["power2"] = a2;
      obj["pe"] = eb.pe;
      obj["roots"] = static_cast<std::int64_t>(eb.boundaries_used.roots.size());
      obj["snr_db"] = macdet::snr_db(p);
      emit(render_record(obj, pe_o.format), pe_o);
    } else if (*sweep) {
      macdet::SweepSpec spec;
      spec.base = to_params(sweep_p);
      for (const auto& g : sweep_grids) spec.axes.push_back(macdet::parse_axis(g));
      spec.schemes.clear();
      for (const auto& s : sweep_schemes) {
        const auto parsed = macdet::parse_sweep_scheme(s);
        if (!parsed) throw macdet::DomainError("unknown sweep scheme '" + s + "'");
        spec.schemes.push_back(*parsed);
      }
      spec.power1 = sweep_a1;
      spec.power2 = sweep_a2;
      spec.trials = sweep_trials;
      spec.seed = sweep_seed;
      spec.common_seed = sweep_common_seed;
      spec.threads = sweep_threads;
      const auto table = macdet::run_sweep(spec);
      const auto fmt = sweep_o.format == "json" ? macdet::OutputFormat::Json
                                                : macdet::OutputFormat::Csv;
      emit(macdet::render(table, fmt), sweep_o);
    } else if (*region) {
      const auto table = macdet::region_map({region_p1, region_resolution});
      const auto fmt = region_o.format == "json" ? macdet::OutputFormat::Json
                                                 : macdet::OutputFormat::Csv;
      emit(macdet::render(table, fmt), region_o);
    } else if (*simulate) {
      const auto p = to_params(sim_p);
      macdet::SimConfig cfg;
      cfg.scheme = *macdet::parse_scheme(sim_scheme);
      cfg.trials = sim_trials;
      cfg.seed = sim_seed;
      cfg.threads = sim_threads;
      if (cfg.scheme == macdet::Scheme::MacOptimalAsym) {
        const auto [a1, a2] = amplitudes_or_optimal(p, sim_a1, sim_a2);
        cfg.power1 = a1;
        cfg.power2 = a2;
      } else {
        cfg.power1 = sim_a1.value_or(std::sqrt(p.p1max));
        cfg.power2 = sim_a2.value_or(std::sqrt(p.p2max));
      }
      const auto rep = macdet::simulate(p, cfg);
      json obj;
      obj["scheme"] = sim_scheme;
      obj["power1"] = cfg.power1;
      obj["power2"] = cfg.power2;
      obj["errors"] = rep.errors;
      obj["trials"] = rep.trials;
      obj["pe_hat"] = rep.pe_hat;
      obj["ci95_halfwidth"] = rep.ci95_halfwidth;
      obj["ci_reliable"] = rep.ci_reliable;
      obj["seed"] = rep.seed;
      emit(render_record(obj, sim_o.format), sim_o);
    }
  } catch (const macdet::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const macdet::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const macdet::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const macdet::CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const macdet::CaseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
