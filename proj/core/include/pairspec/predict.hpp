#pragma once

#include <complex>
#include <variant>

#include "pairspec/ensembles.hpp"

namespace pairspec {

enum class ProductKind {
  ConjTranspose,  ///< M = X Y^*
  PseudoInverse,  ///< M = X Y^+ (Moore-Penrose)
};

/// Limiting support of X Y^*: a closed ellipse, rotated by arg(tau), plus a
/// point mass at zero when alpha < 1.
struct EllipseSupport {
  cplx center;
  double semi_major = 0.0;  ///< along the direction arg(tau)
  double semi_minor = 0.0;
  double rotation = 0.0;    ///< arg(tau), 0 for tau = 0
  bool zero_atom = false;
};

/// Limiting support of X Y^+ for alpha != 1: a closed disc plus a point mass
/// at zero when alpha < 1.
struct DiscSupport {
  cplx center;
  double radius = 0.0;
  bool zero_atom = false;
};

using Support = std::variant<EllipseSupport, DiscSupport>;

EllipseSupport ellipse_support(const EnsembleParams& params, double alpha);

/// Throws Error{AlphaOneUnsupported} for alpha == 1, where no disc law exists.
DiscSupport disc_support(const EnsembleParams& params, double alpha);

/// Shape value of lambda against the support dilated by (1 + margin):
/// the quadratic form  (x'/a')^2 + (y'/b')^2  for an ellipse, the radial
/// ratio |lambda - c| / r' for a disc. Inside iff the value is <= 1.
/// The zero atom is not considered here.
double support_form(const Support& support, cplx lambda, double margin);

/// Closed-set membership; lambda within 1e-12 of zero is a member whenever
/// the support carries a zero atom.
bool support_contains(const Support& support, cplx lambda, double margin = 0.0);

/// Whether 0 lies in the X Y^* support: |tau|^2 <= 1 / alpha.
bool zero_in_ellipse(cplx tau, double alpha);

/// Squared correlation coefficient between entries of y and y - x / lambda:
///
///   |sy - sx tau / lambda|^2 / (|sy - sx tau / lambda|^2 + sx^2 (1 - |tau|^2) / |lambda|^2)
///
/// Lies in [0, 1]. At the single point where y - x / lambda vanishes
/// identically (|tau| = 1, lambda = sx tau / sy) the value is defined as 0.
/// Throws Error{LambdaZero}.
double tau_lambda_sq(const EnsembleParams& params, cplx lambda);

/// X Y^+ support membership through the correlation threshold
/// tau_lambda_sq <= min(alpha, 1 / alpha). Independent of disc_support.
/// Throws Error{LambdaZero | AlphaOneUnsupported}.
bool in_support_via_tau(const EnsembleParams& params, double alpha, cplx lambda);

/// Expected mean eigenvalue E[trace(M)] / N:
///   X Y^* : alpha tau sx sy
///   X Y^+ : tau (sx / sy) min(1, alpha)
cplx mean_eigenvalue_prediction(const EnsembleParams& params, double alpha, ProductKind kind);

}  // namespace pairspec
