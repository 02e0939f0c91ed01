#pragma once

// Command implementations behind the supercone command-line tool. Each command
// writes to a stream and reports failure through exceptions or an exit code.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "supercone/dynamics.hpp"
#include "supercone/errors.hpp"
#include "supercone/random.hpp"
#include "supercone/superforms.hpp"
#include "supercone/verify.hpp"

namespace supercone::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kInvalidInput = 2,
  kOutsideCone = 3,
  kNotClosed = 4,
};

enum class Format { Csv, Json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw SchemaError("unknown output format '" + s + "' (expected csv or json)");
}

/// Shortest text that is stable across platforms: 17 significant digits.
inline std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError("'" + path.string() + "': " + ex.what());
  }
}

/// Writes a header row and data rows, comma separated, LF line endings.
inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << number(row[c]);
    out << '\n';
  }
}

inline void write_json_rows(std::ostream& out, const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = row[c];
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

inline void write_table(std::ostream& out, Format format, const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
  if (format == Format::Csv) {
    write_csv(out, header, rows);
  } else {
    write_json_rows(out, header, rows);
  }
}

// ---------------------------------------------------------------------------
// evolve

/// {"system": {...} | "system_file": path,
///  "initial": {"state": {"phi", "phi_a": [2], "phibar"}} | {"probabilities": [4]} | {"random": true},
///  "T": start time (default t0), "t_end": end time (default t1), "intervals": n (default 100),
///  "seed": u64 (for random initial states)}
struct RunConfig {
  TwoBitSystem system;
  enum class Initial { State, Probabilities, Random } mode = Initial::State;
  StateFunction state;
  std::array<double, 4> probabilities{};
  double T = 0.0;
  double t_end = 0.0;
  int intervals = 100;
  std::uint64_t seed = 20240601;
};

inline RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  try {
    RunConfig cfg;
    if (j.contains("system") == j.contains("system_file")) {
      throw SchemaError("run config needs exactly one of 'system' and 'system_file'");
    }
    cfg.system = j.contains("system") ? system_from_json(j.at("system"))
                                      : system_from_json(read_json_file(base_dir / j.at("system_file").get<std::string>()));
    const auto& init = j.at("initial");
    const int modes = static_cast<int>(init.contains("state")) + static_cast<int>(init.contains("probabilities")) +
                      static_cast<int>(init.contains("random"));
    if (modes != 1) throw SchemaError("initial condition needs exactly one of 'state', 'probabilities', 'random'");
    if (init.contains("state")) {
      const auto& s = init.at("state");
      const auto pa = s.at("phi_a").get<std::vector<double>>();
      if (pa.size() != 2) throw SchemaError("phi_a needs two components");
      cfg.state = StateFunction{s.at("phi").get<double>(), Vec2(pa[0], pa[1]), s.at("phibar").get<double>()};
      cfg.mode = RunConfig::Initial::State;
    } else if (init.contains("probabilities")) {
      const auto p = init.at("probabilities").get<std::vector<double>>();
      if (p.size() != 4) throw SchemaError("probabilities need four entries");
      cfg.probabilities = {p[0], p[1], p[2], p[3]};
      cfg.mode = RunConfig::Initial::Probabilities;
    } else {
      if (!init.at("random").get<bool>()) throw SchemaError("'random' initial condition must be true");
      cfg.mode = RunConfig::Initial::Random;
    }
    cfg.T = j.value("T", cfg.system.t0);
    cfg.t_end = j.value("t_end", cfg.system.t1);
    cfg.intervals = j.value("intervals", 100);
    cfg.seed = j.value("seed", cfg.seed);
    if (cfg.intervals < 1) throw SchemaError("intervals must be positive");
    cfg.system.check_time(cfg.T);
    cfg.system.check_time(cfg.t_end);
    return cfg;
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("run config: ") + ex.what());
  }
}

/// Raw-coordinate initial state at T. Probability and random inputs are read
/// in the orthonormal frame of η(T).
inline StateFunction initial_state(const RunConfig& cfg) {
  const Mat2 eta = cfg.system.eta.value(cfg.T);
  switch (cfg.mode) {
    case RunConfig::Initial::State: return cfg.state;
    case RunConfig::Initial::Probabilities:
      return from_orthonormal(state_from_probabilities(cfg.probabilities), eta);
    case RunConfig::Initial::Random: {
      Rng rng(cfg.seed);
      return from_orthonormal(random_unit_state(rng), eta);
    }
  }
  return cfg.state;
}

inline const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{"t",  "phi", "phi1", "phi2", "phibar",          "p1",
                                             "p2", "p3",  "p4",   "delta_ellipsoid", "norm"};
  return cols;
}

inline std::vector<std::vector<double>> evolve_rows(const RunConfig& cfg) {
  const StateFunction s0 = initial_state(cfg);
  const int intervals = cfg.T == cfg.t_end ? 0 : cfg.intervals;
  std::vector<std::vector<double>> rows;
  for (const auto& pt : trajectory(cfg.system, s0, cfg.T, cfg.t_end, intervals)) {
    const auto p = measure_probabilities(cfg.system, pt.state, pt.t);
    const auto& s = pt.state;
    rows.push_back({pt.t, s.phi, s.phi_a(0), s.phi_a(1), s.phibar, p.p[0], p.p[1], p.p[2], p.p[3],
                    p.delta_ellipsoid, state_norm(s, cfg.system.eta.value(pt.t))});
  }
  return rows;
}

inline int cmd_evolve(const RunConfig& cfg, Format format, std::ostream& out) {
  write_table(out, format, trajectory_columns(), evolve_rows(cfg));
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

inline int cmd_verify(const std::vector<std::string>& suites, const VerifyOptions& opt, Format format,
                      std::ostream& out) {
  const std::vector<std::string> names = suites.empty() ? suite_names() : suites;
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw SchemaError("unknown suite '" + n + "'");
    }
  }
  const auto reports = run_suites(names, opt);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  if (format == Format::Json) {
    nlohmann::json j;
    j["ok"] = ok;
    j["seed"] = opt.seed;
    j["samples"] = opt.samples;
    for (const auto& r : reports) {
      j["suites"].push_back({{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}, {"failures", r.failures}});
    }
    out << j.dump(2) << '\n';
  } else {
    out << "suite,passed,failed,status\n";
    for (const auto& r : reports) {
      out << r.name << ',' << r.passed << ',' << r.failed << ',' << (r.ok() ? "PASS" : "FAIL") << '\n';
    }
  }
  return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// ellipsoid

inline const std::vector<std::string>& ellipsoid_columns() {
  static const std::vector<std::string> cols{"p1",         "p2",         "p3",      "p4",     "delta_ellipsoid",
                                             "delta_cone", "in_simplex", "in_cone", "in_ellipsoid"};
  return cols;
}

inline std::vector<double> ellipsoid_row(double p1, double p2, double p3) {
  const double de = delta_ellipsoid(p1, p2, p3), dc = delta_cone(p1, p2, p3);
  const bool simplex = p1 >= 0.0 && p2 >= 0.0 && p3 >= 0.0 && p1 + p2 + p3 <= 1.0;
  return {p1, p2, p3, 1.0 - p1 - p2 - p3, de, dc, simplex ? 1.0 : 0.0, (simplex && dc <= 0.0) ? 1.0 : 0.0,
          (simplex && de <= 0.0) ? 1.0 : 0.0};
}

/// Explicit points first, then `samples` uniform draws from the unit cube of
/// (p₁, p₂, p₃) so every region of the figure gets populated.
inline int cmd_ellipsoid(const std::vector<std::array<double, 3>>& points, int samples, std::uint64_t seed,
                         Format format, std::ostream& out) {
  if (samples < 0) throw SchemaError("samples must be non-negative");
  std::vector<std::vector<double>> rows;
  for (const auto& p : points) rows.push_back(ellipsoid_row(p[0], p[1], p[2]));
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const double p1 = uniform01(rng), p2 = uniform01(rng), p3 = uniform01(rng);
    rows.push_back(ellipsoid_row(p1, p2, p3));
  }
  write_table(out, format, ellipsoid_columns(), rows);
  return kOk;
}

// ---------------------------------------------------------------------------
// decompose

inline nlohmann::json residuals_json(const QuartetResiduals& r) {
  return {{"d_omega", r.d_omega},
          {"dhat_omega_d_a", r.dhat_omega_d_a},
          {"dhat_a_d_eta", r.dhat_a_d_eta},
          {"dhat_eta", r.dhat_eta}};
}

/// Splits and decomposes a two-form. A non-closed input still gets a residual
/// report, with exit code kNotClosed.
inline int cmd_decompose(const SuperForm& big_omega, std::ostream& out) {
  const OmegaSplit split = split_omega(big_omega);
  nlohmann::json j;
  j["residuals"] = residuals_json(split.residuals);
  try {
    const HodgeParts parts = hodge_decompose(big_omega);
    j["closed"] = true;
    j["omega0"] = to_json(parts.omega0);
    j["beta"] = to_json(parts.beta);
    j["gamma"] = to_json(parts.gamma);
    j["reconstruction_error"] = max_abs_diff(hodge_reconstruct(parts), big_omega);
    out << j.dump(2) << '\n';
    return kOk;
  } catch (const NotClosed& ex) {
    j["closed"] = false;
    j["error"] = ex.what();
    out << j.dump(2) << '\n';
    return kNotClosed;
  }
}

}  // namespace supercone::cli
