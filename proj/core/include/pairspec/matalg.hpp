#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pairspec {

struct PinvResult {
  Eigen::MatrixXcd pinv;
  Eigen::Index rank = 0;
  double cutoff = 0.0;  ///< absolute singular-value threshold actually applied
};

/// max(rows, cols) * machine epsilon.
double default_pinv_rtol(Eigen::Index rows, Eigen::Index cols) noexcept;

/// Moore-Penrose pseudo-inverse through a full SVD. Singular values below
/// rtol * sigma_max are treated as zero. Throws Error{EmptyMatrix}.
PinvResult pseudo_inverse(const Eigen::MatrixXcd& y, std::optional<double> rtol = std::nullopt);

/// Relative Frobenius residuals of the four Penrose conditions:
///   |Y P Y - Y| / |Y|,  |P Y P - P| / |P|,
///   |(Y P)^* - Y P| / |Y P|,  |(P Y)^* - P Y| / |P Y|.
struct PenroseResiduals {
  double reproduce = 0.0;
  double reproduce_pinv = 0.0;
  double hermitian_left = 0.0;
  double hermitian_right = 0.0;

  double max() const noexcept;
};

PenroseResiduals penrose_residuals(const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& pinv);

/// All eigenvalues of a square complex matrix with algebraic multiplicity,
/// in no particular order. Backed by LAPACK zgeev (Hessenberg reduction and
/// shifted QR). Throws Error{NonSquare | NonFinite | NoConvergence}.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& m);

/// Orders by real part, then imaginary part.
void sort_spectrum(std::vector<std::complex<double>>& values);

struct SpectrumMatch {
  double max_distance = 0.0;
  /// matched[i] is the index in `b` paired with a[i] (inputs in caller order).
  std::vector<std::size_t> matched;
};

/// Greedy nearest-neighbour bipartite matching of two equal-size multisets:
/// `a` is visited in (Re, Im) order and each element claims the closest
/// unclaimed element of `b`. Throws Error{ShapeMismatch} on size mismatch.
SpectrumMatch match_spectra(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b);

}  // namespace pairspec
