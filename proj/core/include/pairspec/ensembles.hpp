#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace pairspec {

using cplx = std::complex<double>;

enum class EnsembleKind {
  Real,                ///< real entries
  ComplexIndependent,  ///< independent Re/Im parts, Re carries `split` of the covariance
  ComplexGeneral,      ///< circularly-symmetric complex entries, complex tau allowed
};

/// Distribution of one entry pair (x, y). The population covariance is
///
///   Var(x, y) = [ sx^2        tau sx sy ]
///               [ conj(tau)   sy^2      ] / N
///
/// with E[x conj(y)] = tau sx sy / N.
struct EnsembleParams {
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  cplx tau{0.0, 0.0};
  EnsembleKind kind = EnsembleKind::ComplexIndependent;
  /// Fraction of the covariance carried by the real parts. Only read for
  /// ComplexIndependent.
  double split = 0.5;

  friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;
};

/// Matrix shape N x P; alpha = P / N.
class Dims {
 public:
  Dims(Eigen::Index n, Eigen::Index p);

  Eigen::Index n() const noexcept { return n_; }
  Eigen::Index p() const noexcept { return p_; }
  double alpha() const noexcept { return alpha_; }

  friend bool operator==(const Dims&, const Dims&) = default;

 private:
  Eigen::Index n_;
  Eigen::Index p_;
  double alpha_;
};

struct MatrixPair {
  Eigen::MatrixXcd x;
  Eigen::MatrixXcd y;
  EnsembleParams params;
  Dims dims;
  std::uint64_t seed;
};

/// Throws Error{NonPositiveSigma | TauOutOfUnitDisc | ComplexTauInRealKind | InvalidSplit}.
void validate_params(const EnsembleParams& params);

/// y = sy (a u + b v) with x = sx u.
struct MixingCoefficients {
  cplx a;
  double b;
};

MixingCoefficients mixing_coefficients(const EnsembleParams& params);

/// Population covariance of (Re x, Im x, Re y, Im y), scaled by N.
Eigen::Matrix4d entry_covariance(const EnsembleParams& params);

/// Standard normal deviates via Box-Muller on a 64-bit Mersenne twister.
/// Both the engine and the uniform mapping are fully specified, so a seed
/// gives the same stream on every conforming platform.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Entries are drawn column-major, entry pair by entry pair, from a single
/// stream seeded with `seed`.
MatrixPair sample_pair(const EnsembleParams& params, Dims dims, std::uint64_t seed);

}  // namespace pairspec
