#include "pairspec/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "pairspec/error.hpp"
#include "pairspec/matalg.hpp"

namespace pairspec {

Eigen::MatrixXcd product_matrix(const MatrixPair& pair, ProductKind product) {
  switch (product) {
    case ProductKind::ConjTranspose:
      return pair.x * pair.y.adjoint();
    case ProductKind::PseudoInverse:
      return pair.x * pseudo_inverse(pair.y).pinv;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown product kind");
}

SpectrumSample spectrum(const MatrixPair& pair, ProductKind product) {
  SpectrumSample s{eigenvalues(product_matrix(pair, product)), product, pair.dims, pair.params,
                   pair.seed};
  sort_spectrum(s.eigs);
  return s;
}

WaCheck compare_with_zero_padding(std::span<const cplx> larger, std::span<const cplx> smaller,
                                  double tol) {
  if (smaller.size() > larger.size()) {
    throw Error(ErrorCode::ShapeMismatch, "padded spectrum is larger than the reference");
  }
  std::vector<cplx> padded(smaller.begin(), smaller.end());
  padded.resize(larger.size(), cplx(0.0, 0.0));

  WaCheck out;
  double scale = 0.0;
  for (const cplx& z : larger) scale = std::max(scale, std::abs(z));
  out.scale = scale > 0.0 ? scale : 1.0;
  out.max_mismatch = match_spectra(larger, padded).max_distance / out.scale;
  out.ok = out.max_mismatch <= tol;
  return out;
}

WaCheck wa_identity_check(const MatrixPair& pair, double tol) {
  const Eigen::MatrixXcd outer = pair.x * pair.y.adjoint();  // N x N
  const Eigen::MatrixXcd inner = pair.y.adjoint() * pair.x;  // P x P
  const auto outer_eigs = eigenvalues(outer);
  const auto inner_eigs = eigenvalues(inner);
  if (outer_eigs.size() >= inner_eigs.size()) {
    return compare_with_zero_padding(outer_eigs, inner_eigs, tol);
  }
  return compare_with_zero_padding(inner_eigs, outer_eigs, tol);
}

double default_zero_tol(std::span<const cplx> eigs, double factor) {
  double largest = 0.0;
  for (const cplx& z : eigs) largest = std::max(largest, std::abs(z));
  if (largest == 0.0) return factor;

  std::vector<double> moduli;
  moduli.reserve(eigs.size());
  for (const cplx& z : eigs) {
    const double m = std::abs(z);
    if (m > 1e-6 * largest) moduli.push_back(m);
  }
  const auto mid = moduli.begin() + static_cast<std::ptrdiff_t>(moduli.size() / 2);
  std::nth_element(moduli.begin(), mid, moduli.end());
  return factor * *mid;
}

std::size_t count_zeros(std::span<const cplx> eigs, double zero_tol) {
  return static_cast<std::size_t>(
      std::count_if(eigs.begin(), eigs.end(), [&](const cplx& z) { return std::abs(z) <= zero_tol; }));
}

CoverageReport coverage(const SpectrumSample& sample, const Support& support, double margin,
                        double zero_tol) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "margin must be nonnegative");
  if (!(zero_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "zero_tol must be positive");
  if (sample.eigs.empty()) throw Error(ErrorCode::EmptyInput, "empty spectrum");

  const bool atom = std::visit([](const auto& s) { return s.zero_atom; }, support);
  // A numerical zero is also inside when the bulk itself covers the origin.
  const bool zero_inside = atom || support_form(support, cplx(0.0, 0.0), margin) <= 1.0;

  CoverageReport rep;
  for (const cplx& z : sample.eigs) {
    if (std::abs(z) <= zero_tol) {
      ++rep.zero_count;
      if (!zero_inside) {
        ++rep.outlier_count;
        rep.max_excess = std::max(rep.max_excess, support_form(support, z, margin) - 1.0);
      }
      continue;
    }
    const double f = support_form(support, z, margin);
    if (f > 1.0) {
      ++rep.outlier_count;
      rep.max_excess = std::max(rep.max_excess, f - 1.0);
    }
  }
  rep.inside_fraction =
      1.0 - static_cast<double>(rep.outlier_count) / static_cast<double>(sample.eigs.size());
  return rep;
}

std::size_t DensityGrid::total() const {
  std::size_t t = 0;
  for (const std::size_t c : counts) t += c;
  return t;
}

DensityGrid density_grid(std::span<const cplx> eigs, const Window& window, std::size_t nx,
                         std::size_t ny) {
  const double x0 = window.lower.real();
  const double y0 = window.lower.imag();
  const double width = window.upper.real() - x0;
  const double height = window.upper.imag() - y0;
  if (!(width > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::DegenerateWindow, "window must have positive width and height");
  }
  if (nx == 0 || ny == 0) {
    throw Error(ErrorCode::InvalidArgument, "bin counts must be at least 1");
  }

  DensityGrid grid{nx, ny, std::vector<std::size_t>(nx * ny, 0)};
  for (const cplx& z : eigs) {
    const double fx = (z.real() - x0) / width;
    const double fy = (z.imag() - y0) / height;
    if (!(fx >= 0.0 && fx <= 1.0 && fy >= 0.0 && fy <= 1.0)) continue;
    const auto ix = std::min(static_cast<std::size_t>(fx * static_cast<double>(nx)), nx - 1);
    const auto iy = std::min(static_cast<std::size_t>(fy * static_cast<double>(ny)), ny - 1);
    ++grid.counts[iy * nx + ix];
  }
  return grid;
}

DensityGrid density_grid(std::span<const SpectrumSample> samples, const Window& window,
                         std::size_t nx, std::size_t ny) {
  DensityGrid grid = density_grid(std::span<const cplx>{}, window, nx, ny);
  for (const auto& s : samples) {
    const DensityGrid part = density_grid(s.eigs, window, nx, ny);
    for (std::size_t k = 0; k < grid.counts.size(); ++k) grid.counts[k] += part.counts[k];
  }
  return grid;
}

MeanEstimate mean_eigenvalue(std::span<const SpectrumSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no samples");

  std::vector<cplx> per_trial;
  per_trial.reserve(samples.size());
  cplx total(0.0, 0.0);
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.eigs.empty()) throw Error(ErrorCode::EmptyInput, "sample without eigenvalues");
    cplx sum(0.0, 0.0);
    for (const cplx& z : s.eigs) sum += z;
    total += sum;
    count += s.eigs.size();
    per_trial.push_back(sum / static_cast<double>(s.eigs.size()));
  }

  MeanEstimate est;
  est.mean = total / static_cast<double>(count);
  est.trials = samples.size();
  if (per_trial.size() > 1) {
    cplx trial_mean(0.0, 0.0);
    for (const cplx& m : per_trial) trial_mean += m;
    trial_mean /= static_cast<double>(per_trial.size());
    double ss_re = 0.0;
    double ss_im = 0.0;
    for (const cplx& m : per_trial) {
      ss_re += (m.real() - trial_mean.real()) * (m.real() - trial_mean.real());
      ss_im += (m.imag() - trial_mean.imag()) * (m.imag() - trial_mean.imag());
    }
    const double t = static_cast<double>(per_trial.size());
    est.se_re = std::sqrt(ss_re / (t - 1.0) / t);
    est.se_im = std::sqrt(ss_im / (t - 1.0) / t);
  }
  return est;
}

}  // namespace pairspec
