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

// Report emission as an aligned text table, JSON or CSV, and re-reading of
// the JSON and CSV forms.

#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pufeval/analysis.hpp"
#include "pufeval/errors.hpp"

namespace pufeval {

enum class ReportFormat { kText, kJson, kCsv };

inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw DomainError("unknown report format: " + std::string(name));
}

inline constexpr std::string_view kPerPositionNote =
    "alpha applies to each position separately; no correction for testing "
    "many positions is made";
inline constexpr std::string_view kEntropyNote =
    "entropy values are per position; positions may be correlated, so their "
    "sum is not the entropy of the whole PUF";

inline constexpr std::string_view kCsvHeader =
    "t,x,N,p_hat,ci_lo,ci_hi,p_val_lo,p_val_hi,accepted,min_entropy,"
    "shannon_entropy";

/// Six significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
  Count t = 0;
  Count x = 0;
  Count n = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double p_val_lo = 0.0;
  double p_val_hi = 0.0;
  bool accepted = false;
  double min_entropy = 0.0;
  double shannon_entropy = 0.0;
};

inline std::vector<CsvRow> csv_rows(const AnalysisResult& result) {
  std::vector<CsvRow> rows;
  rows.reserve(result.positions.size());
  for (const auto& p : result.positions) {
    const Interval& iv = p.intervals.front();
    rows.push_back({p.position, p.ones, p.devices, p.p_hat, iv.lower, iv.upper,
                    p.verdict.p_value_lower, p.verdict.p_value_upper,
                    p.verdict.accepted, p.entropy.min_at_estimate,
                    p.entropy.shannon_at_estimate});
  }
  return rows;
}

inline std::string render_csv(const std::vector<CsvRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.t) + ',' + std::to_string(r.x) + ',' +
           std::to_string(r.n) + ',' + format_number(r.p_hat) + ',' +
           format_number(r.ci_lo) + ',' + format_number(r.ci_hi) + ',' +
           format_number(r.p_val_lo) + ',' + format_number(r.p_val_hi) + ',' +
           (r.accepted ? "1" : "0") + ',' + format_number(r.min_entropy) +
           ',' + format_number(r.shannon_entropy) + '\n';
  }
  return out;
}

inline std::vector<CsvRow> parse_report_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != kCsvHeader) {
    throw ParseError(ParseError::Kind::kHeader, 1, "line 1: bad report header");
  }
  auto number = [](std::string_view s, std::size_t line) {
    try {
      std::size_t used = 0;
      const std::string str(s);
      const double v = std::stod(str, &used);
      if (used == str.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(ParseError::Kind::kSymbol, line,
                     detail::line_msg(line, "bad number"));
  };
  auto integer = [](std::string_view s, std::size_t line) {
    Count v = 0;
    if (!detail::parse_count(s, v)) {
      throw ParseError(ParseError::Kind::kSymbol, line,
                       detail::line_msg(line, "bad integer"));
    }
    return v;
  };
  std::vector<CsvRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 11) {
      throw ParseError(ParseError::Kind::kDimension, line,
                       detail::line_msg(line, "expected 11 fields"));
    }
    CsvRow r;
    r.t = integer(f[0], line);
    r.x = integer(f[1], line);
    r.n = integer(f[2], line);
    r.p_hat = number(f[3], line);
    r.ci_lo = number(f[4], line);
    r.ci_hi = number(f[5], line);
    r.p_val_lo = number(f[6], line);
    r.p_val_hi = number(f[7], line);
    if (f[8] != "0" && f[8] != "1") {
      throw ParseError(ParseError::Kind::kSymbol, line,
                       detail::line_msg(line, "accepted must be 0 or 1"));
    }
    r.accepted = f[8] == "1";
    r.min_entropy = number(f[9], line);
    r.shannon_entropy = number(f[10], line);
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// JSON
//
// {
//   "config":    {"alpha", "limits": {"lower","upper"},
//                 "entropy": null | {"kind": "min"|"shannon", "bits"},
//                 "ci_methods": [...],
//                 "early_stop": null | {"alpha","max_flag_fraction"}},
//   "positions": [{"t","x","N","p_hat",
//                  "intervals": [{"method","lower","upper","width","alpha"}],
//                  "p_value_lower","p_value_upper","accepted",
//                  "entropy": {"min","shannon","min_worst_case",
//                              "shannon_worst_case"}}],
//   "summary":   {"devices","positions","accepted","rejected","tie_count",
//                 "acceptance_region": null | {"x_lower","x_upper","empty"},
//                 "early_stop": null | {"decision","flagged_positions",
//                                       "p_values": [[lower', upper'], ...]},
//                 "significance_note","entropy_note"}
// }
//
// Numbers are written with full round-trip precision.

inline nlohmann::json to_json(const AnalysisResult& result) {
  using nlohmann::json;
  const auto& cfg = result.config;
  const AliasLimits limits = cfg.limits();
  json config = {{"alpha", cfg.alpha},
                 {"limits", {{"lower", limits.lower}, {"upper", limits.upper}}},
                 {"entropy", nullptr},
                 {"ci_methods", json::array()},
                 {"early_stop", nullptr}};
  if (const auto* e = std::get_if<EntropySpec>(&cfg.bound)) {
    config["entropy"] = {
        {"kind", e->kind == EntropyKind::kMin ? "min" : "shannon"},
        {"bits", e->bits}};
  }
  for (CiMethod m : cfg.ci_methods) config["ci_methods"].push_back(to_string(m));
  if (cfg.early_stop) {
    config["early_stop"] = {
        {"alpha", cfg.early_stop->alpha},
        {"max_flag_fraction", cfg.early_stop->max_flag_fraction}};
  }

  json positions = json::array();
  for (const auto& p : result.positions) {
    json intervals = json::array();
    for (const auto& iv : p.intervals) {
      intervals.push_back({{"method", to_string(iv.method)},
                           {"lower", iv.lower},
                           {"upper", iv.upper},
                           {"width", iv.width()},
                           {"alpha", iv.alpha}});
    }
    positions.push_back(
        {{"t", p.position},
         {"x", p.ones},
         {"N", p.devices},
         {"p_hat", p.p_hat},
         {"intervals", intervals},
         {"p_value_lower", p.verdict.p_value_lower},
         {"p_value_upper", p.verdict.p_value_upper},
         {"accepted", p.verdict.accepted},
         {"entropy",
          {{"min", p.entropy.min_at_estimate},
           {"shannon", p.entropy.shannon_at_estimate},
           {"min_worst_case", p.entropy.min_worst_case},
           {"shannon_worst_case", p.entropy.shannon_worst_case}}}});
  }

  const auto& s = result.summary;
  json summary = {{"devices", s.devices},
                  {"positions", s.positions},
                  {"accepted", s.accepted},
                  {"rejected", s.rejected},
                  {"tie_count", s.tie_count},
                  {"acceptance_region", nullptr},
                  {"early_stop", nullptr},
                  {"significance_note", kPerPositionNote},
                  {"entropy_note", kEntropyNote}};
  if (s.region) {
    summary["acceptance_region"] = {{"x_lower", s.region->x_lower},
                                    {"x_upper", s.region->x_upper},
                                    {"empty", s.region->empty()}};
  }
  if (s.early_stop) {
    json pv = json::array();
    for (const auto& v : s.early_stop->per_position) {
      pv.push_back({v.lower_prime, v.upper_prime});
    }
    summary["early_stop"] = {
        {"decision", s.early_stop->decision == EarlyStopDecision::kAbort
                         ? "abort"
                         : "continue"},
        {"flagged_positions", s.early_stop->flagged_positions},
        {"p_values", pv}};
  }
  return {{"config", config}, {"positions", positions}, {"summary", summary}};
}

/// Inverse of to_json.
inline AnalysisResult result_from_json(const nlohmann::json& j) {
  try {
    AnalysisResult out;
    const auto& c = j.at("config");
    out.config.alpha = c.at("alpha").get<double>();
    if (c.at("entropy").is_null()) {
      out.config.bound = AliasLimits(c.at("limits").at("lower").get<double>(),
                                     c.at("limits").at("upper").get<double>());
    } else {
      const auto& e = c.at("entropy");
      out.config.bound = EntropySpec(e.at("kind").get<std::string>() == "min"
                                         ? EntropyKind::kMin
                                         : EntropyKind::kShannon,
                                     e.at("bits").get<double>());
    }
    out.config.ci_methods.clear();
    for (const auto& m : c.at("ci_methods")) {
      out.config.ci_methods.push_back(parse_ci_method(m.get<std::string>()));
    }
    if (!c.at("early_stop").is_null()) {
      out.config.early_stop = EarlyStopConfig{
          c["early_stop"].at("alpha").get<double>(),
          c["early_stop"].at("max_flag_fraction").get<double>()};
    }

    for (const auto& p : j.at("positions")) {
      PositionReport r;
      r.position = p.at("t").get<Count>();
      r.ones = p.at("x").get<Count>();
      r.devices = p.at("N").get<Count>();
      r.p_hat = p.at("p_hat").get<double>();
      for (const auto& iv : p.at("intervals")) {
        r.intervals.push_back({iv.at("lower").get<double>(),
                               iv.at("upper").get<double>(),
                               iv.at("alpha").get<double>(),
                               parse_ci_method(iv.at("method").get<std::string>()),
                               iv.at("width").get<double>()});
      }
      r.verdict = {r.position, r.ones, p.at("p_value_upper").get<double>(),
                   p.at("p_value_lower").get<double>(),
                   p.at("accepted").get<bool>()};
      const auto& e = p.at("entropy");
      r.entropy = {e.at("min").get<double>(), e.at("shannon").get<double>(),
                   e.at("min_worst_case").get<double>(),
                   e.at("shannon_worst_case").get<double>()};
      out.positions.push_back(std::move(r));
    }

    const auto& s = j.at("summary");
    out.summary.devices = s.at("devices").get<Count>();
    out.summary.positions = s.at("positions").get<Count>();
    out.summary.accepted = s.at("accepted").get<Count>();
    out.summary.rejected = s.at("rejected").get<Count>();
    out.summary.tie_count = s.at("tie_count").get<Count>();
    if (!s.at("acceptance_region").is_null()) {
      const auto& r = s["acceptance_region"];
      out.summary.region = AcceptanceRegion{
          r.at("x_lower").get<Count>(), r.at("x_upper").get<Count>(),
          out.summary.devices, out.config.limits(), out.config.alpha};
    }
    if (!s.at("early_stop").is_null()) {
      const auto& e = s["early_stop"];
      EarlyStopAdvice advice;
      advice.decision = e.at("decision").get<std::string>() == "abort"
                            ? EarlyStopDecision::kAbort
                            : EarlyStopDecision::kContinue;
      advice.flagged_positions = e.at("flagged_positions").get<std::vector<Count>>();
      for (const auto& pv : e.at("p_values")) {
        advice.per_position.push_back(
            {pv.at(0).get<double>(), pv.at(1).get<double>()});
      }
      out.summary.early_stop = std::move(advice);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::kHeader, 0,
                     std::string("report json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace detail

inline std::string render_text(const AnalysisResult& result) {
  using detail::pad_left;
  const auto& cfg = result.config;
  const auto& s = result.summary;
  const AliasLimits limits = cfg.limits();
  std::ostringstream out;
  out << "devices N=" << s.devices << "  positions T=" << s.positions
      << "  alpha=" << format_number(cfg.alpha) << "  limits=("
      << format_number(limits.lower) << ", " << format_number(limits.upper)
      << ")  interval=" << to_string(cfg.ci_methods.front()) << '\n';
  if (s.region) {
    if (s.region->empty()) {
      out << "acceptance region: empty (no count can qualify at this N)\n";
    } else {
      out << "acceptance region: x in [" << s.region->x_lower << ", "
          << s.region->x_upper << "]\n";
    }
  }
  out << '\n';
  const std::vector<std::pair<std::string, std::size_t>> cols = {
      {"t", 6},        {"x", 8},        {"p_hat", 12},  {"ci_lo", 12},
      {"ci_hi", 12},   {"p_val_lo", 12}, {"p_val_hi", 12}, {"verdict", 9},
      {"h_min", 12},   {"h_shannon", 12}};
  for (const auto& [name, w] : cols) out << pad_left(name, w);
  out << '\n';
  for (const auto& p : result.positions) {
    const Interval& iv = p.intervals.front();
    const std::vector<std::string> cells = {
        std::to_string(p.position),
        std::to_string(p.ones),
        format_number(p.p_hat),
        format_number(iv.lower),
        format_number(iv.upper),
        format_number(p.verdict.p_value_lower),
        format_number(p.verdict.p_value_upper),
        p.verdict.accepted ? "accept" : "reject",
        format_number(p.entropy.min_at_estimate),
        format_number(p.entropy.shannon_at_estimate)};
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << pad_left(cells[i], cols[i].second);
    }
    out << '\n';
  }
  out << "\naccepted=" << s.accepted << "  rejected=" << s.rejected
      << "  majority-vote ties=" << s.tie_count << '\n';
  if (s.early_stop) {
    out << "early stop: "
        << (s.early_stop->decision == EarlyStopDecision::kAbort ? "abort"
                                                                 : "continue")
        << " (" << s.early_stop->flagged_positions.size()
        << " flagged positions)\n";
  }
  out << "note: " << kPerPositionNote << '\n';
  out << "note: " << kEntropyNote << '\n';
  return out.str();
}

inline std::string render_report(const AnalysisResult& result,
                                  ReportFormat format) {
  switch (format) {
    case ReportFormat::kText:
      return render_text(result);
    case ReportFormat::kJson:
      return to_json(result).dump(2) + "\n";
    case ReportFormat::kCsv:
      return render_csv(csv_rows(result));
  }
  return {};
}

}  // namespace pufeval
