#include "pairspec/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairspec/error.hpp"

namespace pairspec {

namespace {

constexpr double kZeroAtomTol = 1e-12;
constexpr double kMinStrip = 1e-12;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive and finite");
  }
}

void require_alpha_not_one(double alpha) {
  if (alpha == 1.0) {
    throw Error(ErrorCode::AlphaOneUnsupported, "the case alpha = 1 is not covered");
  }
}

double form(const EllipseSupport& e, cplx lambda, double margin) {
  const cplx local = (lambda - e.center) * std::polar(1.0, -e.rotation);
  const double a = e.semi_major * (1.0 + margin);
  const double b = std::max(e.semi_minor * (1.0 + margin), kMinStrip);
  const double u = local.real() / a;
  const double v = local.imag() / b;
  return u * u + v * v;
}

double form(const DiscSupport& d, cplx lambda, double margin) {
  const double dist = std::abs(lambda - d.center);
  const double r = d.radius * (1.0 + margin);
  if (r > 0.0) return dist / r;
  return dist == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

EllipseSupport ellipse_support(const EnsembleParams& params, double alpha) {
  validate_params(params);
  require_alpha(alpha);
  const double scale = params.sigma_x * params.sigma_y;
  const double mod2 = std::min(1.0, std::norm(params.tau));
  const double root_alpha = std::sqrt(alpha);

  EllipseSupport e;
  e.center = scale * (1.0 + alpha) * params.tau;
  e.semi_major = scale * root_alpha * (1.0 + mod2);
  e.semi_minor = scale * root_alpha * (1.0 - mod2);
  e.rotation = params.tau == cplx(0.0, 0.0) ? 0.0 : std::arg(params.tau);
  e.zero_atom = alpha < 1.0;
  return e;
}

DiscSupport disc_support(const EnsembleParams& params, double alpha) {
  validate_params(params);
  require_alpha(alpha);
  require_alpha_not_one(alpha);
  const double ratio = params.sigma_x / params.sigma_y;
  const double beta = std::max(alpha, 1.0 / alpha);
  const double mod2 = std::min(1.0, std::norm(params.tau));

  DiscSupport d;
  d.center = ratio * params.tau;
  d.radius = ratio * std::sqrt((1.0 - mod2) / (beta - 1.0));
  d.zero_atom = alpha < 1.0;
  return d;
}

double support_form(const Support& support, cplx lambda, double margin) {
  if (!(margin >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "margin must be nonnegative");
  }
  return std::visit([&](const auto& s) { return form(s, lambda, margin); }, support);
}

bool support_contains(const Support& support, cplx lambda, double margin) {
  const bool atom = std::visit([](const auto& s) { return s.zero_atom; }, support);
  if (atom && std::abs(lambda) <= kZeroAtomTol) return true;
  return support_form(support, lambda, margin) <= 1.0;
}

bool zero_in_ellipse(cplx tau, double alpha) {
  require_alpha(alpha);
  return std::norm(tau) <= 1.0 / alpha;
}

double tau_lambda_sq(const EnsembleParams& params, cplx lambda) {
  if (lambda == cplx(0.0, 0.0)) {
    throw Error(ErrorCode::LambdaZero, "tau_lambda is undefined at lambda = 0");
  }
  const double sx = params.sigma_x;
  const double sy = params.sigma_y;
  // <|y - x/lambda|^2> N = |sy - sx tau/lambda|^2 + sx^2 (1 - |tau|^2) / |lambda|^2
  const double shared = std::norm(sy - sx * params.tau / lambda);
  const double residual = sx * sx * std::max(0.0, 1.0 - std::norm(params.tau)) / std::norm(lambda);
  const double total = shared + residual;
  if (total == 0.0) return 0.0;
  return shared / total;
}

bool in_support_via_tau(const EnsembleParams& params, double alpha, cplx lambda) {
  require_alpha(alpha);
  require_alpha_not_one(alpha);
  return tau_lambda_sq(params, lambda) <= std::min(alpha, 1.0 / alpha);
}

cplx mean_eigenvalue_prediction(const EnsembleParams& params, double alpha, ProductKind kind) {
  require_alpha(alpha);
  switch (kind) {
    case ProductKind::ConjTranspose:
      return alpha * params.tau * params.sigma_x * params.sigma_y;
    case ProductKind::PseudoInverse:
      return params.tau * (params.sigma_x / params.sigma_y) * std::min(1.0, alpha);
  }
  return {};
}

}  // namespace pairspec
