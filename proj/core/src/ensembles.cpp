#include "pairspec/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pairspec/error.hpp"

namespace pairspec {

namespace {

constexpr double kTauSlack = 1e-12;

}  // namespace

Dims::Dims(Eigen::Index n, Eigen::Index p) : n_(n), p_(p), alpha_(0.0) {
  if (n < 1 || p < 1) {
    throw Error(ErrorCode::InvalidDims,
                "dimensions must be positive, got " + std::to_string(n) + "x" + std::to_string(p));
  }
  alpha_ = static_cast<double>(p) / static_cast<double>(n);
}

void validate_params(const EnsembleParams& params) {
  if (!(params.sigma_x > 0.0) || !(params.sigma_y > 0.0) || !std::isfinite(params.sigma_x) ||
      !std::isfinite(params.sigma_y)) {
    throw Error(ErrorCode::NonPositiveSigma, "sigma_x and sigma_y must be positive and finite");
  }
  const double mod = std::abs(params.tau);
  if (!std::isfinite(mod) || mod > 1.0 + kTauSlack) {
    throw Error(ErrorCode::TauOutOfUnitDisc, "|tau| = " + std::to_string(mod) + " exceeds 1");
  }
  if (params.kind != EnsembleKind::ComplexGeneral && params.tau.imag() != 0.0) {
    throw Error(ErrorCode::ComplexTauInRealKind,
                "complex tau requires the ComplexGeneral ensemble kind");
  }
  if (params.kind == EnsembleKind::ComplexIndependent &&
      !(params.split > 0.0 && params.split < 1.0)) {
    throw Error(ErrorCode::InvalidSplit, "split must lie in (0, 1)");
  }
}

MixingCoefficients mixing_coefficients(const EnsembleParams& params) {
  validate_params(params);
  const double mod2 = std::norm(params.tau);
  return {std::conj(params.tau), std::sqrt(std::max(0.0, 1.0 - mod2))};
}

Eigen::Matrix4d entry_covariance(const EnsembleParams& params) {
  const auto [a, b] = mixing_coefficients(params);

  // Variances of the real and imaginary parts of u (and of v).
  double var_re = 1.0;
  double var_im = 0.0;
  switch (params.kind) {
    case EnsembleKind::Real: break;
    case EnsembleKind::ComplexIndependent:
      var_re = params.split;
      var_im = 1.0 - params.split;
      break;
    case EnsembleKind::ComplexGeneral:
      var_re = 0.5;
      var_im = 0.5;
      break;
  }

  // (Re x, Im x, Re y, Im y) = L (Re u, Im u, Re v, Im v)
  const double sx = params.sigma_x;
  const double sy = params.sigma_y;
  Eigen::Matrix4d lin;
  lin << sx, 0.0, 0.0, 0.0,
         0.0, sx, 0.0, 0.0,
         sy * a.real(), -sy * a.imag(), sy * b, 0.0,
         sy * a.imag(), sy * a.real(), 0.0, sy * b;
  const Eigen::Vector4d diag(var_re, var_im, var_re, var_im);
  return lin * diag.asDiagonal() * lin.transpose();
}

double GaussianStream::uniform_open() {
  // 53 random bits mapped into (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

MatrixPair sample_pair(const EnsembleParams& params, Dims dims, std::uint64_t seed) {
  const auto [a, b] = mixing_coefficients(params);
  const Eigen::Index n = dims.n();
  const Eigen::Index p = dims.p();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  double re_scale = inv_sqrt_n;
  double im_scale = 0.0;
  if (params.kind == EnsembleKind::ComplexIndependent) {
    re_scale = std::sqrt(params.split) * inv_sqrt_n;
    im_scale = std::sqrt(1.0 - params.split) * inv_sqrt_n;
  } else if (params.kind == EnsembleKind::ComplexGeneral) {
    re_scale = std::sqrt(0.5) * inv_sqrt_n;
    im_scale = re_scale;
  }

  MatrixPair pair{Eigen::MatrixXcd(n, p), Eigen::MatrixXcd(n, p), params, dims, seed};
  GaussianStream gauss(seed);
  const bool real_kind = params.kind == EnsembleKind::Real;
  for (Eigen::Index col = 0; col < p; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      cplx u;
      cplx v;
      if (real_kind) {
        u = cplx(re_scale * gauss.next(), 0.0);
        v = cplx(re_scale * gauss.next(), 0.0);
      } else {
        const double ur = gauss.next();
        const double ui = gauss.next();
        const double vr = gauss.next();
        const double vi = gauss.next();
        u = cplx(re_scale * ur, im_scale * ui);
        v = cplx(re_scale * vr, im_scale * vi);
      }
      pair.x(row, col) = params.sigma_x * u;
      pair.y(row, col) = params.sigma_y * (a * u + b * v);
    }
  }
  return pair;
}

}  // namespace pairspec
