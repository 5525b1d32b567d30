#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairspec/empirical.hpp"
#include "pairspec/ensembles.hpp"
#include "pairspec/predict.hpp"

namespace pairspec {

std::string_view software_version() noexcept;

enum class CheckId {
  Penrose,
  WeinsteinAronszajn,
  ZeroAtoms,
  Coverage,
  Equivalence,
  MeanEigenvalue,
  Rotation,
};

std::string_view to_string(CheckId id) noexcept;
std::optional<CheckId> check_from_string(std::string_view name) noexcept;
std::vector<CheckId> all_checks();

struct ZeroTolPolicy {
  enum class Mode { RelativeMedian, Absolute };
  Mode mode = Mode::RelativeMedian;
  /// Relative factor for RelativeMedian, the tolerance itself for Absolute.
  double value = 1e-8;

  double resolve(std::span<const cplx> eigs) const;

  friend bool operator==(const ZeroTolPolicy&, const ZeroTolPolicy&) = default;
};

struct DimsSpec {
  Eigen::Index n = 0;
  Eigen::Index p = 0;

  Dims to_dims() const { return Dims(n, p); }
  friend bool operator==(const DimsSpec&, const DimsSpec&) = default;
};

struct SweepGrid {
  std::vector<cplx> taus;
  std::vector<double> alphas;
  Eigen::Index n = 200;

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct DensitySpec {
  cplx lower{-2.0, -2.0};
  cplx upper{2.0, 2.0};
  std::size_t nx = 64;
  std::size_t ny = 64;

  friend bool operator==(const DensitySpec&, const DensitySpec&) = default;
};

struct OutputPaths {
  std::filesystem::path dir = ".";
  std::string samples_csv = "eigenvalues.csv";
  std::string boundary_prefix = "boundary";
  std::string density_csv = "density.csv";
  std::string report_json = "report.json";

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

/// One experiment, stored on disk as a single JSON document. Every field has
/// a default, so `{}` is a valid configuration.
struct ExperimentConfig {
  EnsembleParams params{1.0, 1.0, {0.5, 0.0}, EnsembleKind::ComplexIndependent, 0.5};
  std::vector<DimsSpec> dims{{200, 100}, {100, 200}};
  ProductKind product = ProductKind::ConjTranspose;
  std::size_t trials = 20;
  std::uint64_t base_seed = 20230611;
  double margin = 0.1;
  double coverage_threshold = 0.995;
  double wa_tol = 1e-7;
  double penrose_tol = 1e-10;
  std::size_t equivalence_draws = 1000;
  double rotation_angle = std::numbers::pi / 3.0;
  ZeroTolPolicy zero_tol;
  std::vector<CheckId> checks = all_checks();
  SweepGrid sweep{{{0.0, 0.0}, {0.5, 0.0}}, {0.5, 2.0}, 200};
  std::optional<DensitySpec> density;
  OutputPaths output;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  bool strict = false;   ///< promote advisory checks to fatal

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws Error{InvalidConfig} (or the underlying parameter error).
void validate_config(const ExperimentConfig& config);

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

/// Per-trial seed: the splitmix64 finalizer applied to
/// base_seed XOR (trial_index * 0x9E3779B97F4A7C15). Both steps are
/// bijections of the 64-bit words, so distinct trial indices never collide
/// for a fixed base seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial_index) noexcept;

/// Seed of trial `trial` for the dims entry `dims_index`.
std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t dims_index,
                         std::size_t trial) noexcept;

enum class CheckStatus { Pass, Fail, Advisory };
std::string_view to_string(CheckStatus status) noexcept;

struct CheckResult {
  CheckId id;
  CheckStatus status = CheckStatus::Pass;
  bool advisory = false;  ///< the failing part is non-fatal unless strict
  std::map<std::string, double> statistics;
  std::string message;
  std::optional<std::string> error;  ///< error code name if the check could not run
};

struct VerificationReport {
  ExperimentConfig config;
  std::vector<CheckResult> checks;
  double wall_time_seconds = 0.0;
  std::string timestamp;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
  const CheckResult* find(CheckId id) const;

  /// Timestamp and wall time are omitted when include_volatile is false,
  /// which gives the byte-stable form used for determinism comparisons.
  std::string to_json(bool include_volatile = true) const;
};

/// Eigenvalue clouds as CSV `trial,n,p,re_lambda,im_lambda` (one
/// concatenated file), plus a density grid when configured. Returns the
/// files written.
std::vector<std::filesystem::path> cmd_sample(const ExperimentConfig& config);

/// One 512-point boundary polyline per dims entry, CSV `re,im,zero_atom`.
/// A final row `0,0,1` marks the zero atom when present.
std::vector<std::filesystem::path> cmd_boundary(const ExperimentConfig& config);

/// Number of points in a boundary polyline.
inline constexpr std::size_t kBoundaryPoints = 512;
std::vector<cplx> boundary_polyline(const Support& support, std::size_t points = kBoundaryPoints);

/// Runs the configured checks without touching the filesystem.
VerificationReport run_verification(const ExperimentConfig& config);

/// run_verification plus the JSON report on disk.
VerificationReport cmd_verify(const ExperimentConfig& config);

/// One verification per (tau, alpha) cell, reports written as
/// report_t<i>_a<j>.json, plus sweep_summary.json.
std::vector<VerificationReport> cmd_sweep(const ExperimentConfig& config);

}  // namespace pairspec
