#include "pairspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pairspec/error.hpp"
#include "pairspec/matalg.hpp"

#ifndef PAIRSPEC_VERSION
#define PAIRSPEC_VERSION "0.0.0"
#endif

namespace pairspec {

using nlohmann::json;

std::string_view software_version() noexcept { return PAIRSPEC_VERSION; }

namespace {

constexpr std::pair<CheckId, std::string_view> kCheckNames[] = {
    {CheckId::Penrose, "penrose"},
    {CheckId::WeinsteinAronszajn, "weinstein_aronszajn"},
    {CheckId::ZeroAtoms, "zero_atoms"},
    {CheckId::Coverage, "coverage"},
    {CheckId::Equivalence, "equivalence"},
    {CheckId::MeanEigenvalue, "mean_eigenvalue"},
    {CheckId::Rotation, "rotation"},
};

constexpr double kSigmaBand = 4.0;
// Absolute slack for identities that hold up to rounding (e.g. the imaginary
// part of a real-matrix trace).
constexpr double kRoundoffFloor = 1e-12;

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count). Results must be written to slot i by fn,
/// so aggregation order never depends on scheduling. The first exception is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

bool enabled(const ExperimentConfig& c, CheckId id) {
  return std::find(c.checks.begin(), c.checks.end(), id) != c.checks.end();
}

Support predicted_support(const EnsembleParams& params, double alpha, ProductKind product) {
  if (product == ProductKind::ConjTranspose) return ellipse_support(params, alpha);
  return disc_support(params, alpha);
}

/// Everything one (dims, trial) job contributes to the report.
struct TrialOutcome {
  PenroseResiduals penrose;
  Eigen::Index rank = 0;
  WaCheck wa;
  std::vector<cplx> eigs;
  std::size_t zero_count = 0;
  double zero_tol = 0.0;
  std::optional<CoverageReport> cover;
};

struct MinMax {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t n = 0;

  void add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
    sum += v;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
};

CheckResult make_result(CheckId id) {
  CheckResult r;
  r.id = id;
  return r;
}

void mark_failed(CheckResult& r, bool fatal, bool strict, const std::string& why) {
  const bool hard = fatal || strict;
  if (hard) {
    r.status = CheckStatus::Fail;
  } else if (r.status == CheckStatus::Pass) {
    r.status = CheckStatus::Advisory;
  }
  if (!fatal) r.advisory = true;
  if (!r.message.empty()) r.message += "; ";
  r.message += why;
}

std::string dims_label(const DimsSpec& d) {
  return std::to_string(d.n) + "x" + std::to_string(d.p);
}

/// Uniform in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

CheckResult run_equivalence(const ExperimentConfig& c) {
  CheckResult r = make_result(CheckId::Equivalence);
  std::mt19937_64 rng(derive_seed(c.base_seed, std::numeric_limits<std::uint64_t>::max()));
  std::size_t compared = 0;
  std::size_t agreed = 0;
  std::size_t excluded = 0;
  for (std::size_t k = 0; k < c.equivalence_draws; ++k) {
    EnsembleParams p;
    p.kind = EnsembleKind::ComplexGeneral;
    p.sigma_x = std::exp(std::log(0.2) + unit(rng) * std::log(25.0));
    p.sigma_y = std::exp(std::log(0.2) + unit(rng) * std::log(25.0));
    p.tau = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    double alpha = std::exp(std::log(0.1) + unit(rng) * std::log(100.0));
    if (std::abs(alpha - 1.0) < 1e-6) alpha = 2.0;

    const DiscSupport disc = disc_support(p, alpha);
    // Points out to twice the radius so both outcomes are well represented.
    const cplx lambda =
        disc.center + std::polar(2.0 * disc.radius * std::sqrt(unit(rng)),
                                 2.0 * std::numbers::pi * unit(rng));
    if (lambda == cplx(0.0, 0.0)) {
      ++excluded;
      continue;
    }
    const double band = std::norm(lambda - disc.center) / (disc.radius * disc.radius) - 1.0;
    if (std::abs(band) <= 1e-9) {
      ++excluded;
      continue;
    }
    ++compared;
    if (in_support_via_tau(p, alpha, lambda) == support_contains(disc, lambda, 0.0)) ++agreed;
  }
  r.statistics["compared"] = static_cast<double>(compared);
  r.statistics["agreed"] = static_cast<double>(agreed);
  r.statistics["excluded_boundary"] = static_cast<double>(excluded);
  r.statistics["agreement_fraction"] =
      compared ? static_cast<double>(agreed) / static_cast<double>(compared) : 1.0;
  if (agreed != compared) {
    mark_failed(r, true, c.strict,
                std::to_string(compared - agreed) + " of " + std::to_string(compared) +
                    " draws disagree");
  }
  return r;
}

CheckResult run_rotation(const ExperimentConfig& c) {
  CheckResult r = make_result(CheckId::Rotation);
  EnsembleParams base = c.params;
  base.kind = EnsembleKind::ComplexGeneral;
  const cplx phase = std::polar(1.0, c.rotation_angle);
  EnsembleParams turned = base;
  turned.tau = phase * base.tau;

  // Field-level identity of the predicted ellipses.
  double field_error = 0.0;
  for (const auto& d : c.dims) {
    const double alpha = d.to_dims().alpha();
    const EllipseSupport e0 = ellipse_support(base, alpha);
    const EllipseSupport e1 = ellipse_support(turned, alpha);
    const double scale = std::max({1.0, std::abs(e0.center), e0.semi_major});
    field_error = std::max(field_error, std::abs(e1.center - phase * e0.center) / scale);
    field_error = std::max(field_error, std::abs(e1.semi_major - e0.semi_major) / scale);
    field_error = std::max(field_error, std::abs(e1.semi_minor - e0.semi_minor) / scale);
    if (base.tau != cplx(0.0, 0.0)) {
      const double turn = std::remainder(e1.rotation - e0.rotation - c.rotation_angle,
                                         2.0 * std::numbers::pi);
      field_error = std::max(field_error, std::abs(turn));
    }
  }
  r.statistics["field_error"] = field_error;
  if (field_error > 1e-12) {
    mark_failed(r, true, c.strict, "rotated ellipse fields differ from the rotated prediction");
  }

  // Empirical mean eigenvalue of X Y^*, rotated vs unrotated ensembles,
  // drawn from disjoint seed streams.
  const std::size_t jobs = c.dims.size() * c.trials;
  std::vector<std::optional<SpectrumSample>> plain_slots(jobs);
  std::vector<std::optional<SpectrumSample>> rotated_slots(jobs);
  const std::uint64_t stream = derive_seed(c.base_seed, 0x524f54ULL);
  parallel_for(jobs, c.threads, [&](std::size_t job) {
    const std::size_t di = job / c.trials;
    const Dims dims = c.dims[di].to_dims();
    plain_slots[job] = spectrum(sample_pair(base, dims, derive_seed(stream, 2 * job)),
                                ProductKind::ConjTranspose);
    rotated_slots[job] = spectrum(sample_pair(turned, dims, derive_seed(stream, 2 * job + 1)),
                                  ProductKind::ConjTranspose);
  });

  for (std::size_t di = 0; di < c.dims.size(); ++di) {
    std::vector<SpectrumSample> a;
    std::vector<SpectrumSample> b;
    for (std::size_t t = 0; t < c.trials; ++t) {
      a.push_back(std::move(*plain_slots[di * c.trials + t]));
      b.push_back(std::move(*rotated_slots[di * c.trials + t]));
    }
    const MeanEstimate m0 = mean_eigenvalue(a);
    const MeanEstimate m1 = mean_eigenvalue(b);
    const cplx expected = phase * m0.mean;
    // Standard errors of the rotated reference follow from rotating the
    // (assumed uncorrelated) real and imaginary errors.
    const double cs = std::cos(c.rotation_angle);
    const double sn = std::sin(c.rotation_angle);
    const double ref_re = std::hypot(cs * m0.se_re, sn * m0.se_im);
    const double ref_im = std::hypot(sn * m0.se_re, cs * m0.se_im);
    const double se_re = std::hypot(ref_re, m1.se_re);
    const double se_im = std::hypot(ref_im, m1.se_im);
    const double dev_re = std::abs(m1.mean.real() - expected.real());
    const double dev_im = std::abs(m1.mean.imag() - expected.imag());

    const std::string tag = dims_label(c.dims[di]);
    r.statistics["mean_re_" + tag] = m1.mean.real();
    r.statistics["mean_im_" + tag] = m1.mean.imag();
    r.statistics["expected_re_" + tag] = expected.real();
    r.statistics["expected_im_" + tag] = expected.imag();
    r.statistics["z_re_" + tag] = se_re > 0.0 ? dev_re / se_re : 0.0;
    r.statistics["z_im_" + tag] = se_im > 0.0 ? dev_im / se_im : 0.0;
    if (c.trials < 2) {
      mark_failed(r, true, c.strict, "rotation check needs at least 2 trials");
    } else if (dev_re > kSigmaBand * se_re + kRoundoffFloor ||
               dev_im > kSigmaBand * se_im + kRoundoffFloor) {
      mark_failed(r, true, c.strict, "mean eigenvalue not rotated within 4 standard errors at " + tag);
    }

    // Coverage of each cloud against its own ellipse; reported, advisory.
    const double alpha = c.dims[di].to_dims().alpha();
    const Support s0 = ellipse_support(base, alpha);
    const Support s1 = ellipse_support(turned, alpha);
    MinMax c0;
    MinMax c1;
    for (std::size_t t = 0; t < c.trials; ++t) {
      c0.add(coverage(a[t], s0, c.margin, c.zero_tol.resolve(a[t].eigs)).inside_fraction);
      c1.add(coverage(b[t], s1, c.margin, c.zero_tol.resolve(b[t].eigs)).inside_fraction);
    }
    r.statistics["inside_fraction_plain_" + tag] = c0.mean();
    r.statistics["inside_fraction_rotated_" + tag] = c1.mean();
    if (c0.min < c.coverage_threshold || c1.min < c.coverage_threshold) {
      mark_failed(r, false, c.strict, "rotated or unrotated coverage below threshold at " + tag);
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(CheckId id) noexcept {
  for (const auto& [k, name] : kCheckNames) {
    if (k == id) return name;
  }
  return "unknown";
}

std::optional<CheckId> check_from_string(std::string_view name) noexcept {
  for (const auto& [k, n] : kCheckNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::vector<CheckId> all_checks() {
  std::vector<CheckId> out;
  for (const auto& [k, name] : kCheckNames) out.push_back(k);
  return out;
}

std::string_view to_string(CheckStatus status) noexcept {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Advisory: return "advisory";
  }
  return "unknown";
}

double ZeroTolPolicy::resolve(std::span<const cplx> eigs) const {
  return mode == Mode::Absolute ? value : default_zero_tol(eigs, value);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial_index) noexcept {
  std::uint64_t z = base_seed ^ (trial_index * 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t dims_index,
                         std::size_t trial) noexcept {
  return derive_seed(config.base_seed, dims_index * config.trials + trial);
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& r) { return r.status == CheckStatus::Fail; });
}

const CheckResult* VerificationReport::find(CheckId id) const {
  for (const auto& r : checks) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string VerificationReport::to_json(bool include_volatile) const {
  json j;
  j["software_version"] = software_version();
  j["config"] = json::parse(serialize_config(config));
  j["passed"] = passed();
  j["exit_code"] = exit_code();
  j["checks"] = json::array();
  for (const auto& r : checks) {
    json cj;
    cj["name"] = to_string(r.id);
    cj["status"] = to_string(r.status);
    cj["advisory"] = r.advisory;
    cj["message"] = r.message;
    if (r.error) cj["error"] = *r.error;
    json stats = json::object();
    for (const auto& [k, v] : r.statistics) {
      if (std::isfinite(v)) {
        stats[k] = v;
      } else {
        stats[k] = nullptr;
      }
    }
    cj["statistics"] = stats;
    j["checks"].push_back(cj);
  }
  if (include_volatile) {
    j["timestamp"] = timestamp;
    j["wall_time_seconds"] = wall_time_seconds;
  }
  return j.dump(2) + "\n";
}

std::vector<cplx> boundary_polyline(const Support& support, std::size_t points) {
  std::vector<cplx> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
    if (const auto* e = std::get_if<EllipseSupport>(&support)) {
      const cplx local(e->semi_major * std::cos(t), e->semi_minor * std::sin(t));
      out.push_back(e->center + std::polar(1.0, e->rotation) * local);
    } else {
      const auto& d = std::get<DiscSupport>(support);
      out.push_back(d.center + std::polar(d.radius, t));
    }
  }
  return out;
}

std::vector<std::filesystem::path> cmd_sample(const ExperimentConfig& config) {
  validate_config(config);
  const std::size_t jobs = config.dims.size() * config.trials;
  std::vector<std::vector<cplx>> clouds(jobs);
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const std::size_t di = job / config.trials;
    const std::size_t t = job % config.trials;
    const auto pair = sample_pair(config.params, config.dims[di].to_dims(), trial_seed(config, di, t));
    clouds[job] = spectrum(pair, config.product).eigs;
  });

  std::vector<std::filesystem::path> written;
  const auto csv_path = config.output.dir / config.output.samples_csv;
  {
    auto out = open_output(csv_path);
    out << "trial,n,p,re_lambda,im_lambda\n";
    for (std::size_t job = 0; job < jobs; ++job) {
      const std::size_t di = job / config.trials;
      const std::string prefix = std::to_string(job % config.trials) + "," +
                                 std::to_string(config.dims[di].n) + "," +
                                 std::to_string(config.dims[di].p) + ",";
      for (const cplx& z : clouds[job]) {
        out << prefix << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
      }
    }
    finish_output(out, csv_path);
  }
  written.push_back(csv_path);

  if (config.density) {
    const auto& win = *config.density;
    DensityGrid grid = density_grid(std::span<const cplx>{}, {win.lower, win.upper}, win.nx, win.ny);
    for (const auto& cloud : clouds) {
      const DensityGrid part = density_grid(cloud, {win.lower, win.upper}, win.nx, win.ny);
      for (std::size_t k = 0; k < grid.counts.size(); ++k) grid.counts[k] += part.counts[k];
    }
    const auto path = config.output.dir / config.output.density_csv;
    auto out = open_output(path);
    const double dx = (win.upper.real() - win.lower.real()) / static_cast<double>(win.nx);
    const double dy = (win.upper.imag() - win.lower.imag()) / static_cast<double>(win.ny);
    out << "ix,iy,re_center,im_center,count\n";
    for (std::size_t iy = 0; iy < win.ny; ++iy) {
      for (std::size_t ix = 0; ix < win.nx; ++ix) {
        out << ix << ',' << iy << ','
            << format_double(win.lower.real() + (static_cast<double>(ix) + 0.5) * dx) << ','
            << format_double(win.lower.imag() + (static_cast<double>(iy) + 0.5) * dy) << ','
            << grid.at(ix, iy) << '\n';
      }
    }
    finish_output(out, path);
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> cmd_boundary(const ExperimentConfig& config) {
  validate_config(config);
  std::vector<std::filesystem::path> written;
  for (const auto& d : config.dims) {
    const Support support = predicted_support(config.params, d.to_dims().alpha(), config.product);
    const bool atom = std::visit([](const auto& s) { return s.zero_atom; }, support);
    const auto path = config.output.dir /
                      (config.output.boundary_prefix + "_" + dims_label(d) + ".csv");
    auto out = open_output(path);
    out << "re,im,zero_atom\n";
    for (const cplx& z : boundary_polyline(support)) {
      out << format_double(z.real()) << ',' << format_double(z.imag()) << ",0\n";
    }
    if (atom) out << "0,0,1\n";
    finish_output(out, path);
    written.push_back(path);
  }
  return written;
}

VerificationReport run_verification(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();

  VerificationReport report;
  report.config = config;
  report.timestamp = utc_timestamp();

  const bool need_penrose = enabled(config, CheckId::Penrose);
  const bool need_wa = enabled(config, CheckId::WeinsteinAronszajn);
  const bool need_spectrum = enabled(config, CheckId::ZeroAtoms) ||
                             enabled(config, CheckId::Coverage) ||
                             enabled(config, CheckId::MeanEigenvalue);

  // Predicted supports per dims entry; a failure here is recorded against
  // the coverage check instead of aborting the run.
  std::vector<std::optional<Support>> supports(config.dims.size());
  std::optional<Error> support_error;
  if (enabled(config, CheckId::Coverage)) {
    for (std::size_t di = 0; di < config.dims.size(); ++di) {
      try {
        supports[di] = predicted_support(config.params, config.dims[di].to_dims().alpha(),
                                         config.product);
      } catch (const Error& e) {
        if (!support_error) support_error = e;
      }
    }
  }

  const std::size_t jobs = config.dims.size() * config.trials;
  std::vector<TrialOutcome> outcomes(jobs);
  if (need_penrose || need_wa || need_spectrum) {
    parallel_for(jobs, config.threads, [&](std::size_t job) {
      const std::size_t di = job / config.trials;
      const std::size_t t = job % config.trials;
      const auto pair = sample_pair(config.params, config.dims[di].to_dims(), trial_seed(config, di, t));
      TrialOutcome& o = outcomes[job];
      if (need_penrose) {
        const PinvResult pinv = pseudo_inverse(pair.y);
        o.penrose = penrose_residuals(pair.y, pinv.pinv);
        o.rank = pinv.rank;
      }
      if (need_wa) o.wa = wa_identity_check(pair, config.wa_tol);
      if (need_spectrum) {
        SpectrumSample s = spectrum(pair, config.product);
        o.zero_tol = config.zero_tol.resolve(s.eigs);
        o.zero_count = count_zeros(s.eigs, o.zero_tol);
        if (supports[di]) o.cover = coverage(s, *supports[di], config.margin, o.zero_tol);
        o.eigs = std::move(s.eigs);
      }
    });
  }

  for (const CheckId id : config.checks) {
    CheckResult r = make_result(id);
    switch (id) {
      case CheckId::Penrose: {
        MinMax worst;
        for (std::size_t job = 0; job < jobs; ++job) {
          const auto& o = outcomes[job];
          const auto& d = config.dims[job / config.trials];
          worst.add(o.penrose.max());
          if (o.penrose.max() > config.penrose_tol) {
            mark_failed(r, true, config.strict, "residual above tolerance at " + dims_label(d));
          }
          if (o.rank != std::min(d.n, d.p)) {
            mark_failed(r, true, config.strict, "rank deficiency reported at " + dims_label(d));
          }
        }
        r.statistics["max_residual"] = worst.max;
        r.statistics["tolerance"] = config.penrose_tol;
        break;
      }
      case CheckId::WeinsteinAronszajn: {
        MinMax worst;
        for (std::size_t job = 0; job < jobs; ++job) {
          worst.add(outcomes[job].wa.max_mismatch);
          if (!outcomes[job].wa.ok) {
            mark_failed(r, true, config.strict,
                        "spectra mismatch at " + dims_label(config.dims[job / config.trials]));
          }
        }
        r.statistics["max_mismatch"] = worst.max;
        r.statistics["tolerance"] = config.wa_tol;
        break;
      }
      case CheckId::ZeroAtoms: {
        for (std::size_t di = 0; di < config.dims.size(); ++di) {
          const auto& d = config.dims[di];
          const std::string tag = dims_label(d);
          const double alpha = d.to_dims().alpha();
          const auto expected = static_cast<std::size_t>(std::max<Eigen::Index>(0, d.n - d.p));
          MinMax zeros;
          for (std::size_t t = 0; t < config.trials; ++t) {
            const std::size_t z = outcomes[di * config.trials + t].zero_count;
            zeros.add(static_cast<double>(z));
            if (alpha < 1.0 && z < expected) {
              mark_failed(r, true, config.strict, "fewer than N-P zeros at " + tag);
            }
            if (alpha < 1.0 && config.product == ProductKind::ConjTranspose && z != expected) {
              mark_failed(r, true, config.strict, "zero count differs from N-P at " + tag);
            }
          }
          r.statistics["zero_count_min_" + tag] = zeros.min;
          r.statistics["zero_count_max_" + tag] = zeros.max;
          r.statistics["expected_zeros_" + tag] = static_cast<double>(expected);
          if (alpha < 1.0 && config.product == ProductKind::PseudoInverse) {
            // Only "at least N - P" is guaranteed; the exact fraction is advisory.
            const double band = 2.0 / std::sqrt(static_cast<double>(d.n));
            const double frac = zeros.mean() / static_cast<double>(d.n);
            r.statistics["zero_fraction_" + tag] = frac;
            if (std::abs(frac - (1.0 - alpha)) > band) {
              mark_failed(r, false, config.strict, "zero fraction outside (1-alpha) +- 2/sqrt(N) at " + tag);
            }
          }
        }
        break;
      }
      case CheckId::Coverage: {
        if (support_error) {
          r.status = CheckStatus::Fail;
          r.error = std::string(to_string(support_error->code()));
          r.message = support_error->what();
          break;
        }
        for (std::size_t di = 0; di < config.dims.size(); ++di) {
          const std::string tag = dims_label(config.dims[di]);
          MinMax inside;
          double excess = 0.0;
          for (std::size_t t = 0; t < config.trials; ++t) {
            const auto& cov = *outcomes[di * config.trials + t].cover;
            inside.add(cov.inside_fraction);
            excess = std::max(excess, cov.max_excess);
          }
          r.statistics["inside_fraction_min_" + tag] = inside.min;
          r.statistics["inside_fraction_mean_" + tag] = inside.mean();
          r.statistics["max_excess_" + tag] = excess;
          if (inside.min < config.coverage_threshold) {
            mark_failed(r, false, config.strict, "inside fraction below threshold at " + tag);
          }
        }
        r.statistics["margin"] = config.margin;
        r.statistics["threshold"] = config.coverage_threshold;
        break;
      }
      case CheckId::MeanEigenvalue: {
        for (std::size_t di = 0; di < config.dims.size(); ++di) {
          const auto& d = config.dims[di];
          const std::string tag = dims_label(d);
          std::vector<SpectrumSample> samples;
          samples.reserve(config.trials);
          for (std::size_t t = 0; t < config.trials; ++t) {
            samples.push_back({outcomes[di * config.trials + t].eigs, config.product, d.to_dims(),
                               config.params, trial_seed(config, di, t)});
          }
          const MeanEstimate m = mean_eigenvalue(samples);
          const cplx pred = mean_eigenvalue_prediction(config.params, d.to_dims().alpha(), config.product);
          r.statistics["mean_re_" + tag] = m.mean.real();
          r.statistics["mean_im_" + tag] = m.mean.imag();
          r.statistics["predicted_re_" + tag] = pred.real();
          r.statistics["predicted_im_" + tag] = pred.imag();
          r.statistics["se_re_" + tag] = m.se_re;
          r.statistics["se_im_" + tag] = m.se_im;
          if (config.trials < 2) {
            mark_failed(r, true, config.strict, "mean eigenvalue check needs at least 2 trials");
          } else if (std::abs(m.mean.real() - pred.real()) > kSigmaBand * m.se_re + kRoundoffFloor ||
                     std::abs(m.mean.imag() - pred.imag()) > kSigmaBand * m.se_im + kRoundoffFloor) {
            mark_failed(r, true, config.strict, "mean eigenvalue off prediction by more than 4 SE at " + tag);
          }
        }
        break;
      }
      case CheckId::Equivalence:
        r = run_equivalence(config);
        break;
      case CheckId::Rotation:
        try {
          r = run_rotation(config);
        } catch (const Error& e) {
          r.status = CheckStatus::Fail;
          r.error = std::string(to_string(e.code()));
          r.message = e.what();
        }
        break;
    }
    report.checks.push_back(std::move(r));
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationReport cmd_verify(const ExperimentConfig& config) {
  VerificationReport report = run_verification(config);
  const auto path = config.output.dir / config.output.report_json;
  auto out = open_output(path);
  out << report.to_json();
  finish_output(out, path);
  return report;
}

std::vector<VerificationReport> cmd_sweep(const ExperimentConfig& config) {
  validate_config(config);
  std::vector<VerificationReport> reports;
  json summary = json::array();
  for (std::size_t ti = 0; ti < config.sweep.taus.size(); ++ti) {
    for (std::size_t ai = 0; ai < config.sweep.alphas.size(); ++ai) {
      ExperimentConfig cell = config;
      cell.params.tau = config.sweep.taus[ti];
      if (cell.params.tau.imag() != 0.0) cell.params.kind = EnsembleKind::ComplexGeneral;
      const double alpha = config.sweep.alphas[ai];
      const auto p = std::max<Eigen::Index>(
          1, static_cast<Eigen::Index>(std::llround(alpha * static_cast<double>(config.sweep.n))));
      cell.dims = {{config.sweep.n, p}};
      cell.output.report_json = "report_t" + std::to_string(ti) + "_a" + std::to_string(ai) + ".json";
      cell.base_seed = derive_seed(config.base_seed, ti * config.sweep.alphas.size() + ai);

      VerificationReport rep = cmd_verify(cell);
      summary.push_back({{"tau", json::array({cell.params.tau.real(), cell.params.tau.imag()})},
                         {"alpha", alpha},
                         {"n", config.sweep.n},
                         {"p", p},
                         {"report", cell.output.report_json},
                         {"passed", rep.passed()}});
      reports.push_back(std::move(rep));
    }
  }
  const auto path = config.output.dir / "sweep_summary.json";
  auto out = open_output(path);
  out << summary.dump(2) << '\n';
  finish_output(out, path);
  return reports;
}

}  // namespace pairspec
