// Command line front end: sample | boundary | verify | sweep.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pairspec/error.hpp"
#include "pairspec/harness.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment configuration (defaults if omitted)");
  cmd->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
  cmd->add_option("--seed", opts.seed, "base seed (overrides base_seed)");
  cmd->add_option("--threads", opts.threads, "worker threads, 0 = auto");
  cmd->add_flag("--strict", opts.strict, "promote advisory checks to fatal");
}

pairspec::ExperimentConfig resolve(const CommonOptions& opts) {
  pairspec::ExperimentConfig config =
      opts.config_path.empty() ? pairspec::ExperimentConfig{} : pairspec::load_config(opts.config_path);
  if (opts.out_dir) config.output.dir = *opts.out_dir;
  if (opts.seed) config.base_seed = *opts.seed;
  if (opts.threads) config.threads = *opts.threads;
  if (opts.strict) config.strict = true;
  pairspec::validate_config(config);
  return config;
}

void print_report(const pairspec::VerificationReport& report) {
  for (const auto& check : report.checks) {
    std::cout << "  " << pairspec::to_string(check.id) << ": " << pairspec::to_string(check.status);
    if (!check.message.empty()) std::cout << " (" << check.message << ")";
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paired Gaussian matrix spectra: sampling, predicted supports and verification"};
  app.set_version_flag("--version", std::string(pairspec::software_version()));
  app.require_subcommand(1);

  CommonOptions opts;
  auto* sample = app.add_subcommand("sample", "write eigenvalue clouds as CSV");
  auto* boundary = app.add_subcommand("boundary", "write predicted support boundaries as CSV");
  auto* verify = app.add_subcommand("verify", "run the configured checks and write a JSON report");
  auto* sweep = app.add_subcommand("sweep", "verify every (tau, alpha) cell of the sweep grid");
  for (auto* cmd : {sample, boundary, verify, sweep}) add_common(cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const pairspec::ExperimentConfig config = resolve(opts);
    if (sample->parsed()) {
      for (const auto& path : pairspec::cmd_sample(config)) std::cout << path.string() << '\n';
      return 0;
    }
    if (boundary->parsed()) {
      for (const auto& path : pairspec::cmd_boundary(config)) std::cout << path.string() << '\n';
      return 0;
    }
    if (verify->parsed()) {
      const auto report = pairspec::cmd_verify(config);
      std::cout << (config.output.dir / config.output.report_json).string() << '\n';
      print_report(report);
      return report.exit_code();
    }
    const auto reports = pairspec::cmd_sweep(config);
    int code = 0;
    for (const auto& report : reports) {
      std::cout << "tau=" << report.config.params.tau << " dims=" << report.config.dims.front().n << "x"
                << report.config.dims.front().p << ": " << (report.passed() ? "pass" : "FAIL") << '\n';
      if (!report.passed()) code = 1;
    }
    return code;
  } catch (const pairspec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
