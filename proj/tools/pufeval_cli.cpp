// Copyright 2026 The pufeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pufeval command-line front end. Exit codes: 0 accepted / continue,
// 1 rejected / abort, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pufeval/pufeval.hpp"

namespace {

using namespace pufeval;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw DomainError("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty number list");
  return out;
}

std::pair<double, double> parse_pair(const std::string& text,
                                     const char* what) {
  const auto v = parse_doubles(text);
  if (v.size() != 2) {
    throw DomainError(std::string(what) + " expects two values a,b");
  }
  return {v[0], v[1]};
}

std::string precise(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// Options shared by analyze and early-stop.
struct BoundOptions {
  std::string limits;
  std::optional<double> min_entropy;
  std::optional<double> shannon_entropy;

  void attach(CLI::App* cmd) {
    auto* l = cmd->add_option("--limits", limits,
                              "permissible Bit-Alias band p_l,p_u")
                  ->default_str("0.45,0.55");
    auto* h = cmd->add_option("--min-entropy", min_entropy,
                              "band from a minimum min-entropy per bit");
    auto* s = cmd->add_option("--shannon-entropy", shannon_entropy,
                              "band from a minimum Shannon entropy per bit");
    l->excludes(h)->excludes(s);
    h->excludes(s);
  }

  std::variant<AliasLimits, EntropySpec> bound() const {
    if (min_entropy) return EntropySpec(EntropyKind::kMin, *min_entropy);
    if (shannon_entropy) {
      return EntropySpec(EntropyKind::kShannon, *shannon_entropy);
    }
    const auto [lo, hi] = parse_pair(limits.empty() ? "0.45,0.55" : limits,
                                     "--limits");
    return AliasLimits(lo, hi);
  }

  AliasLimits resolved() const {
    const auto b = bound();
    if (const auto* l = std::get_if<AliasLimits>(&b)) return *l;
    return limits_from_entropy(std::get<EntropySpec>(b));
  }
};

PositionCounts counts_of(const AnalysisInput& input, Count* ties) {
  if (const auto* c = std::get_if<PositionCounts>(&input)) return *c;
  const auto r = derive_noise_free_response(std::get<MeasurementTensor>(input));
  if (ties) *ties = r.tie_count;
  return count_ones(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical evaluation of PUF response unpredictability"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pufeval 0.1.0");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "test every position");
  std::string analyze_file, analyze_format = "text", analyze_out;
  double analyze_alpha = 0.01;
  std::vector<std::string> analyze_methods;
  std::optional<double> es_alpha;
  double max_flag = 0.0;
  BoundOptions analyze_bound;
  analyze_cmd->add_option("file", analyze_file, "measurement or counts file")
      ->required();
  analyze_cmd->add_option("--alpha", analyze_alpha, "significance level")
      ->capture_default_str();
  analyze_bound.attach(analyze_cmd);
  analyze_cmd
      ->add_option("--ci-method", analyze_methods,
                   "normal | wilson | clopper_pearson (repeatable)")
      ->take_all();
  analyze_cmd->add_option("--format", analyze_format, "text | json | csv")
      ->capture_default_str();
  analyze_cmd->add_option("--early-stop-alpha", es_alpha,
                          "also evaluate the early-stop rule at this level");
  analyze_cmd->add_option("--max-flag-fraction", max_flag,
                          "flagged fraction tolerated before abort")
      ->capture_default_str();
  analyze_cmd->add_option("--out", analyze_out, "output file (default stdout)");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "device-count planning");
  plan_cmd->require_subcommand(1);
  auto* plan_width = plan_cmd->add_subcommand(
      "width", "devices for a target interval width at p_hat = 0.5");
  double width = 0.1, width_alpha = 0.01;
  std::string width_method = "normal";
  plan_width->add_option("--width", width, "full interval width")
      ->capture_default_str();
  plan_width->add_option("--alpha", width_alpha)->capture_default_str();
  plan_width->add_option("--method", width_method,
                         "normal | wilson | clopper_pearson")
      ->capture_default_str();
  auto* plan_frr = plan_cmd->add_subcommand(
      "frr", "devices for a false-rejection bound on an inner band");
  std::string frr_limits = "0.45,0.55", frr_inner = "0.48,0.52";
  double frr_alpha = 0.01, frr_beta = 0.01;
  plan_frr->add_option("--limits", frr_limits)->capture_default_str();
  plan_frr->add_option("--inner", frr_inner, "inner band p_k,p_v")
      ->capture_default_str();
  plan_frr->add_option("--alpha", frr_alpha)->capture_default_str();
  plan_frr->add_option("--beta", frr_beta, "false-rejection bound")
      ->capture_default_str();

  // check
  auto* check_cmd = app.add_subcommand("check", "test a single position");
  Count check_x = 0, check_n = 0;
  double check_alpha = 0.01;
  BoundOptions check_bound;
  check_cmd->add_option("--x", check_x, "number of ones")->required();
  check_cmd->add_option("--n", check_n, "number of devices")->required();
  check_cmd->add_option("--alpha", check_alpha)->capture_default_str();
  check_bound.attach(check_cmd);

  // early-stop
  auto* es_cmd = app.add_subcommand("early-stop",
                                    "decide whether to abandon an experiment");
  std::string es_file;
  double es_cmd_alpha = 0.01, es_max_flag = 0.0;
  BoundOptions es_bound;
  es_cmd->add_option("file", es_file)->required();
  es_cmd->add_option("--alpha", es_cmd_alpha)->capture_default_str();
  es_cmd->add_option("--max-flag-fraction", es_max_flag)->capture_default_str();
  es_bound.attach(es_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "synthesize measurements");
  PopulationSpec sim;
  std::string sim_alias = "0.5", sim_out;
  bool sim_binary = false;
  sim_cmd->add_option("--devices", sim.devices)->required();
  sim_cmd->add_option("--positions", sim.positions)->required();
  sim_cmd->add_option("--repeats", sim.repeats)->capture_default_str();
  sim_cmd->add_option("--alias", sim_alias,
                      "value, comma list of T values, or ideal | ramp | "
                      "biased:<p>")
      ->capture_default_str();
  sim_cmd->add_option("--noise", sim.flip_noise, "per-measurement flip rate")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--out", sim_out, "output file (default stdout)");
  sim_cmd->add_flag("--binary", sim_binary, "write the packed binary format");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "interval width series (csv)");
  std::string curve_method = "wilson", curve_sweep = "n", curve_n_values;
  double curve_alpha = 0.01, curve_p_hat = 0.5, curve_step = 0.01;
  Count curve_n = 100;
  curve_cmd->add_option("--method", curve_method)->capture_default_str();
  curve_cmd->add_option("--alpha", curve_alpha)->capture_default_str();
  curve_cmd->add_option("--sweep", curve_sweep, "n | p")
      ->check(CLI::IsMember({"n", "p"}))
      ->capture_default_str();
  curve_cmd->add_option("--p-hat", curve_p_hat, "fixed p_hat for --sweep n")
      ->capture_default_str();
  curve_cmd->add_option("--n", curve_n, "fixed N for --sweep p")
      ->capture_default_str();
  curve_cmd->add_option("--n-values", curve_n_values,
                        "comma list of N (default: log grid 2..10000)");
  curve_cmd->add_option("--p-step", curve_step, "grid step for --sweep p")
      ->capture_default_str();

  // validate
  auto* val_cmd = app.add_subcommand("validate", "Monte-Carlo check");
  std::string val_kind = "coverage", val_method = "clopper_pearson",
              val_limits = "0.45,0.55";
  double val_p = 0.5, val_alpha = 0.05;
  Count val_n = 100, val_trials = 100000;
  std::uint64_t val_seed = 0;
  val_cmd->add_option("--kind", val_kind, "coverage | far | frr")
      ->check(CLI::IsMember({"coverage", "far", "frr"}))
      ->capture_default_str();
  val_cmd->add_option("--method", val_method, "interval for coverage")
      ->capture_default_str();
  val_cmd->add_option("--limits", val_limits)->capture_default_str();
  val_cmd->add_option("--p", val_p, "true Bit-Alias")->capture_default_str();
  val_cmd->add_option("--n", val_n, "devices")->capture_default_str();
  val_cmd->add_option("--alpha", val_alpha)->capture_default_str();
  val_cmd->add_option("--trials", val_trials)->capture_default_str();
  val_cmd->add_option("--seed", val_seed)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) {
      AnalysisConfig cfg;
      cfg.alpha = analyze_alpha;
      cfg.bound = analyze_bound.bound();
      if (!analyze_methods.empty()) {
        cfg.ci_methods.clear();
        for (const auto& m : analyze_methods) {
          cfg.ci_methods.push_back(parse_ci_method(m));
        }
      }
      if (es_alpha) cfg.early_stop = EarlyStopConfig{*es_alpha, max_flag};
      const ReportFormat format = parse_report_format(analyze_format);
      const auto result = analyze(load_input(analyze_file), cfg);
      emit(render_report(result, format), analyze_out);
      return result.all_accepted() ? kExitOk : kExitRejected;
    }

    if (*plan_width) {
      const CiMethod method = parse_ci_method(width_method);
      const PlanResult r = method == CiMethod::kNormal
                               ? plan_devices_normal(width, width_alpha)
                               : plan_devices_exact(method, width, width_alpha);
      std::cout << "method=" << to_string(r.method)
                << " width=" << format_number(r.target_width)
                << " alpha=" << format_number(r.alpha)
                << " devices=" << r.devices << '\n';
      return kExitOk;
    }

    if (*plan_frr) {
      const auto [pl, pu] = parse_pair(frr_limits, "--limits");
      const auto [pk, pv] = parse_pair(frr_inner, "--inner");
      const auto r =
          plan_devices_frr(AliasLimits(pl, pu), InnerBand{pk, pv}, frr_alpha,
                           frr_beta);
      std::cout << "alpha=" << format_number(r.alpha)
                << " beta=" << format_number(r.beta)
                << " devices=" << r.devices
                << " frr_lower=" << format_number(r.frr_at_inner_lower)
                << " frr_upper=" << format_number(r.frr_at_inner_upper)
                << " bisection=" << r.bisection_devices << '\n';
      return kExitOk;
    }

    if (*check_cmd) {
      const AliasLimits limits = check_bound.resolved();
      const auto v = test_position(check_x, check_n, limits, check_alpha);
      std::cout << "x=" << v.ones << " N=" << check_n
                << " p_value_lower=" << format_number(v.p_value_lower)
                << " p_value_upper=" << format_number(v.p_value_upper)
                << " verdict=" << (v.accepted ? "accept" : "reject") << '\n';
      return v.accepted ? kExitOk : kExitRejected;
    }

    if (*es_cmd) {
      const AliasLimits limits = es_bound.resolved();
      const auto counts = counts_of(load_input(es_file), nullptr);
      const auto advice =
          early_stop_decision(counts, limits, es_cmd_alpha, es_max_flag);
      for (Count t : advice.flagged_positions) {
        const auto& pv = advice.per_position[static_cast<std::size_t>(t)];
        std::cout << "flagged t=" << t
                  << " p_lower=" << format_number(pv.lower_prime)
                  << " p_upper=" << format_number(pv.upper_prime) << '\n';
      }
      const bool abort = advice.decision == EarlyStopDecision::kAbort;
      std::cout << "decision=" << (abort ? "abort" : "continue")
                << " flagged=" << advice.flagged_positions.size() << '/'
                << counts.positions() << '\n';
      return abort ? kExitRejected : kExitOk;
    }

    if (*sim_cmd) {
      const bool is_profile = sim_alias == "ideal" || sim_alias == "ramp" ||
                              sim_alias.rfind("biased:", 0) == 0;
      sim.alias = is_profile ? alias_profile(sim_alias, sim.positions)
                             : parse_doubles(sim_alias);
      const auto m = simulate_population(sim);
      std::ostringstream out;
      if (sim_binary) {
        write_measurements_binary(out, m);
      } else {
        write_measurements_csv(out, m);
      }
      emit(out.str(), sim_out);
      return kExitOk;
    }

    if (*curve_cmd) {
      const CiMethod method = parse_ci_method(curve_method);
      WidthSweep sweep;
      if (curve_sweep == "n") {
        DeviceSweep d;
        d.p_hat = curve_p_hat;
        if (curve_n_values.empty()) {
          d.devices = log_device_grid();
        } else {
          for (double v : parse_doubles(curve_n_values)) {
            if (v < 1 || v != static_cast<double>(static_cast<Count>(v))) {
              throw DomainError("--n-values must be positive integers");
            }
            d.devices.push_back(static_cast<Count>(v));
          }
        }
        sweep = d;
      } else {
        sweep = ProportionSweep{curve_n, linear_proportion_grid(curve_step)};
      }
      std::cout << (curve_sweep == "n" ? "N" : "p_hat") << ",width\n";
      for (const auto& pt : ci_width_curve(method, curve_alpha, sweep)) {
        std::cout << precise(pt.abscissa) << ',' << precise(pt.width) << '\n';
      }
      return kExitOk;
    }

    if (*val_cmd) {
      Experiment e;
      const auto [pl, pu] = parse_pair(val_limits, "--limits");
      if (val_kind == "coverage") {
        e = CoverageExperiment{parse_ci_method(val_method), val_p, val_n,
                               val_alpha};
      } else if (val_kind == "far") {
        e = FarExperiment{AliasLimits(pl, pu), val_p, val_n, val_alpha};
      } else {
        e = FrrExperiment{AliasLimits(pl, pu), val_p, val_n, val_alpha};
      }
      const auto r = monte_carlo_validate(e, val_trials, val_seed);
      std::cout << "kind=" << val_kind << " estimate=" << precise(r.estimate)
                << " standard_error=" << precise(r.standard_error)
                << " hits=" << r.hits << " trials=" << r.trials << '\n';
      return kExitOk;
    }
  } catch (const pufeval::ParseError& e) {
    std::cerr << "pufeval: parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "pufeval: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
