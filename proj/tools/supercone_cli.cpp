#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "supercone/cli.hpp"

namespace cli = supercone::cli;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("supercone");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SUPERCONE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour it when asked for
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

/// Runs `body` against the --out file, or stdout when no path is given.
template <typename Body>
int with_output(const std::string& path, Body&& body) {
  if (path.empty()) return body(std::cout);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw supercone::SchemaError("cannot write '" + path + "'");
  const int code = body(out);
  spdlog::info("wrote {}", path);
  return code;
}

std::array<double, 3> parse_point(const std::string& text) {
  std::array<double, 3> p{};
  std::stringstream ss(text);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 3) throw supercone::SchemaError("point '" + text + "' needs three comma-separated values");
    try {
      p[k++] = std::stod(item);
    } catch (const std::exception&) {
      throw supercone::SchemaError("point '" + text + "' is not numeric");
    }
  }
  if (k != 3) throw supercone::SchemaError("point '" + text + "' needs three comma-separated values");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Supersymplectic two-bit toolkit: evolution, invariant checks, Hodge decompositions"};
  app.require_subcommand(1);

  std::string config, out_path, format = "csv";
  std::uint64_t seed = 20240601;
  int samples = -1;
  std::vector<std::string> suites, points;
  std::string fault;

  auto* evolve = app.add_subcommand("evolve", "Evolve a two-bit state and write its probability trajectory");
  evolve->add_option("--config", config, "Run config JSON")->required();
  evolve->add_option("--out", out_path, "Output path (default stdout)");
  evolve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* evolve_seed = evolve->add_option("--seed", seed, "Seed for a random initial state");

  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--suite", suites, "Suite name (repeatable; default all)")->delimiter(',');
  verify->add_option("--samples", samples, "Random samples per suite");
  verify->add_option("--seed", seed, "Run seed");
  verify->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--out", out_path, "Output path (default stdout)");
  verify->add_option("--inject-fault", fault, "Deliberate defect for mutation checks")
      ->check(CLI::IsMember({"berezin-sign"}));

  auto* ellipsoid = app.add_subcommand("ellipsoid", "Sample (p1,p2,p3) labelled by simplex, cone and ellipsoid");
  ellipsoid->add_option("--samples", samples, "Random samples (default 1000)");
  ellipsoid->add_option("--seed", seed, "Sampling seed");
  ellipsoid->add_option("--point", points, "Extra point p1,p2,p3 (repeatable)");
  ellipsoid->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  ellipsoid->add_option("--out", out_path, "Output path (default stdout)");

  auto* decompose = app.add_subcommand("decompose", "Split and Hodge-decompose a closed two-form");
  decompose->add_option("--config", config, "Two-form JSON")->required();
  decompose->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  try {
    const cli::Format fmt = cli::parse_format(format);
    if (*evolve) {
      auto cfg = cli::run_config_from_json(cli::read_json_file(config),
                                           std::filesystem::path(config).parent_path());
      if (*evolve_seed) cfg.seed = seed;
      spdlog::info("evolving from t={} to t={} in {} intervals", cfg.T, cfg.t_end, cfg.intervals);
      return with_output(out_path, [&](std::ostream& out) { return cli::cmd_evolve(cfg, fmt, out); });
    }
    if (*verify) {
      supercone::VerifyOptions opt;
      opt.seed = seed;
      if (samples >= 0) opt.samples = samples;
      opt.fault = fault;
      const int code = with_output(out_path, [&](std::ostream& out) { return cli::cmd_verify(suites, opt, fmt, out); });
      if (code != cli::kOk) spdlog::error("verification failed");
      return code;
    }
    if (*ellipsoid) {
      std::vector<std::array<double, 3>> pts;
      for (const auto& p : points) pts.push_back(parse_point(p));
      const int n = samples >= 0 ? samples : 1000;
      return with_output(out_path, [&](std::ostream& out) { return cli::cmd_ellipsoid(pts, n, seed, fmt, out); });
    }
    if (*decompose) {
      const auto omega = supercone::superform_from_json(cli::read_json_file(config));
      const int code = with_output(out_path, [&](std::ostream& out) { return cli::cmd_decompose(omega, out); });
      if (code == cli::kNotClosed) spdlog::error("two-form is not closed");
      return code;
    }
  } catch (const supercone::OutsideCone& e) {
    spdlog::error("{}", e.what());
    return cli::kOutsideCone;
  } catch (const supercone::NotClosed& e) {
    spdlog::error("{}", e.what());
    return cli::kNotClosed;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return cli::kInvalidInput;
  }
  return cli::kInvalidInput;
}
