#include "pairspec/matalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/SVD>
#include <lapacke.h>

#include "pairspec/error.hpp"

namespace pairspec {

namespace {

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

double default_pinv_rtol(Eigen::Index rows, Eigen::Index cols) noexcept {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

PinvResult pseudo_inverse(const Eigen::MatrixXcd& y, std::optional<double> rtol) {
  if (y.rows() == 0 || y.cols() == 0) {
    throw Error(ErrorCode::EmptyMatrix, "pseudo-inverse of an empty matrix");
  }
  const double tol = rtol.value_or(default_pinv_rtol(y.rows(), y.cols()));
  if (!(tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rtol must be nonnegative");
  }
  if (!y.allFinite()) {
    throw Error(ErrorCode::NonFinite, "pseudo-inverse input has non-finite entries");
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  PinvResult out;
  out.cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    // Singular values equal to zero never count, even with cutoff 0.
    if (sv(k) > out.cutoff && sv(k) > 0.0) {
      inv_sv(k) = 1.0 / sv(k);
      ++out.rank;
    }
  }
  out.pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
  return out;
}

double PenroseResiduals::max() const noexcept {
  return std::max({reproduce, reproduce_pinv, hermitian_left, hermitian_right});
}

PenroseResiduals penrose_residuals(const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& pinv) {
  if (pinv.rows() != y.cols() || pinv.cols() != y.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "pinv must have the transposed shape of y");
  }
  const Eigen::MatrixXcd left = y * pinv;   // N x N
  const Eigen::MatrixXcd right = pinv * y;  // P x P

  PenroseResiduals r;
  r.reproduce = relative((left * y - y).norm(), y.norm());
  r.reproduce_pinv = relative((right * pinv - pinv).norm(), pinv.norm());
  r.hermitian_left = relative((left.adjoint() - left).norm(), left.norm());
  r.hermitian_right = relative((right.adjoint() - right).norm(), right.norm());
  return r;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NonSquare, "eigenvalues of a " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + " matrix");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, "eigenvalue input has non-finite entries");
  }
  const auto n = static_cast<lapack_int>(m.rows());
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  if (n == 0) return w;

  Eigen::MatrixXcd work = m;  // zgeev overwrites its input
  static_assert(sizeof(lapack_complex_double) == sizeof(std::complex<double>));
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(work.data()),
      static_cast<lapack_int>(work.outerStride()), reinterpret_cast<lapack_complex_double*>(w.data()),
      nullptr, 1, nullptr, 1);
  if (info > 0) {
    throw Error(ErrorCode::NoConvergence,
                "QR iteration failed to converge (zgeev info=" + std::to_string(info) + ")");
  }
  if (info < 0) {
    throw Error(ErrorCode::InvalidArgument, "zgeev rejected argument " + std::to_string(-info));
  }
  return w;
}

void sort_spectrum(std::vector<std::complex<double>>& values) {
  std::sort(values.begin(), values.end(), [](const auto& lhs, const auto& rhs) {
    if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
    return lhs.imag() < rhs.imag();
  });
}

SpectrumMatch match_spectra(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::ShapeMismatch, "multisets differ in size");
  }
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (a[i].real() != a[j].real()) return a[i].real() < a[j].real();
    return a[i].imag() < a[j].imag();
  });

  SpectrumMatch out;
  out.matched.assign(n, 0);
  std::vector<bool> used(n, false);
  for (const std::size_t i : order) {
    std::size_t best = n;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(a[i] - b[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == n) {  // only NaN distances left
      best = static_cast<std::size_t>(std::find(used.begin(), used.end(), false) - used.begin());
    }
    used[best] = true;
    out.matched[i] = best;
    out.max_distance = std::max(out.max_distance, best_dist);
  }
  return out;
}

}  // namespace pairspec
