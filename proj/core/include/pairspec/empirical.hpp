#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairspec/ensembles.hpp"
#include "pairspec/predict.hpp"

namespace pairspec {

/// Eigenvalues of one product matrix, sorted by (Re, Im).
struct SpectrumSample {
  std::vector<cplx> eigs;
  ProductKind product;
  Dims dims;
  EnsembleParams params;
  std::uint64_t seed;
};

/// Returns the N x N product X Y^* or X Y^+.
Eigen::MatrixXcd product_matrix(const MatrixPair& pair, ProductKind product);

SpectrumSample spectrum(const MatrixPair& pair, ProductKind product);

struct WaCheck {
  bool ok = false;
  double max_mismatch = 0.0;  ///< largest matched distance, relative to `scale`
  double scale = 1.0;         ///< max |lambda| of the larger spectrum (1 if all zero)
};

/// Compares eigs(A B) against eigs(B A) padded with zeros up to the larger
/// size. `larger` has the larger dimension; `smaller` is padded.
WaCheck compare_with_zero_padding(std::span<const cplx> larger, std::span<const cplx> smaller,
                                  double tol);

/// Characteristic-polynomial identity p_{XY*}(x) = x^{N-P} p_{Y*X}(x),
/// checked on the eigenvalues. Roles swap automatically when P > N.
WaCheck wa_identity_check(const MatrixPair& pair, double tol);

struct CoverageReport {
  double inside_fraction = 0.0;
  std::size_t outlier_count = 0;
  double max_excess = 0.0;
  std::size_t zero_count = 0;
};

/// Eigenvalues within zero_tol of the origin count as zeros and are inside
/// exactly when the support has a zero atom. Everything else is classified
/// against the support dilated by (1 + margin). max_excess is the largest
/// support_form(...) - 1 among outliers.
CoverageReport coverage(const SpectrumSample& sample, const Support& support, double margin,
                        double zero_tol);

/// `factor` times the median modulus of the eigenvalues that are not
/// negligible (|lambda| > 1e-6 max|lambda|).
double default_zero_tol(std::span<const cplx> eigs, double factor = 1e-8);

std::size_t count_zeros(std::span<const cplx> eigs, double zero_tol);

struct Window {
  cplx lower;  ///< (min Re, min Im)
  cplx upper;  ///< (max Re, max Im)
};

/// Row-major counts, ny rows of nx cells. Cells are half-open except the
/// last row and column, which include the upper window edge.
struct DensityGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<std::size_t> counts;

  std::size_t at(std::size_t ix, std::size_t iy) const { return counts[iy * nx + ix]; }
  std::size_t total() const;
};

DensityGrid density_grid(std::span<const cplx> eigs, const Window& window, std::size_t nx,
                         std::size_t ny);
DensityGrid density_grid(std::span<const SpectrumSample> samples, const Window& window,
                         std::size_t nx, std::size_t ny);

struct MeanEstimate {
  cplx mean;
  double se_re = 0.0;  ///< standard errors from the spread of per-trial means
  double se_im = 0.0;
  std::size_t trials = 0;
};

/// Grand mean of all eigenvalues. Standard errors are zero for one trial.
/// Throws Error{EmptyInput}.
MeanEstimate mean_eigenvalue(std::span<const SpectrumSample> samples);

}  // namespace pairspec
