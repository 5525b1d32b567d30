#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pairspec/empirical.hpp"
#include "pairspec/error.hpp"
#include "pairspec/matalg.hpp"
#include "pairspec/predict.hpp"

using namespace pairspec;

namespace {

EnsembleParams params(double sx, double sy, cplx tau,
                      EnsembleKind kind = EnsembleKind::ComplexGeneral) {
  return {sx, sy, tau, kind, 0.5};
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected pairspec::Error";
  return ErrorCode::InvalidArgument;
}

// Quadratic support inequality for X Y^+, written out in coordinates:
//   (1-a)|l|^2 sy^2 - 2(1-a) sx sy (Re t Re l + Im t Im l) + (|t|^2 - a) sx^2 <= 0
// with a = alpha for alpha < 1 and a = 1/alpha for alpha > 1.
double quadratic_form(const EnsembleParams& p, double alpha, cplx l) {
  const double a = alpha < 1.0 ? alpha : 1.0 / alpha;
  const cplx t = p.tau;
  return (1 - a) * std::norm(l) * p.sigma_y * p.sigma_y -
         2 * (1 - a) * p.sigma_x * p.sigma_y * (t.real() * l.real() + t.imag() * l.imag()) +
         (std::norm(t) - a) * p.sigma_x * p.sigma_x;
}

// Ellipse inequality for real tau, evaluated in the axis-aligned form.
double ellipse_lhs_real_tau(double sx, double sy, double tau, double alpha, cplx l) {
  const double s = sx * sy;
  const double u = (l.real() - s * (1 + alpha) * tau) / (s * std::sqrt(alpha) * (1 + tau * tau));
  const double v = l.imag() / (s * std::sqrt(alpha) * (1 - tau * tau));
  return u * u + v * v;
}

}  // namespace

TEST(EllipseSupport, UnitDisc) {
  const auto e = ellipse_support(params(1, 1, 0.0), 1.0);
  EXPECT_EQ(e.center, cplx(0, 0));
  EXPECT_DOUBLE_EQ(e.semi_major, 1.0);
  EXPECT_DOUBLE_EQ(e.semi_minor, 1.0);
  EXPECT_FALSE(e.zero_atom);
  EXPECT_EQ(e.rotation, 0.0);
}

TEST(EllipseSupport, PerfectCorrelationMatchesMarchenkoPasturEdges) {
  for (const double alpha : {0.25, 0.5, 2.0, 4.0}) {
    const auto e = ellipse_support(params(1, 1, 1.0, EnsembleKind::Real), alpha);
    EXPECT_EQ(e.semi_minor, 0.0);
    EXPECT_NEAR(e.center.real() - e.semi_major, std::pow(1 - std::sqrt(alpha), 2), 1e-14);
    EXPECT_NEAR(e.center.real() + e.semi_major, std::pow(1 + std::sqrt(alpha), 2), 1e-14);
  }
  const auto e = ellipse_support(params(1, 1, 1.0, EnsembleKind::Real), 4.0);
  EXPECT_DOUBLE_EQ(e.center.real(), 5.0);
  EXPECT_DOUBLE_EQ(e.semi_major, 4.0);
}

TEST(EllipseSupport, ScaledWithZeroAtom) {
  const auto e = ellipse_support(params(2, 3, 0.5, EnsembleKind::ComplexIndependent), 0.25);
  EXPECT_NEAR(std::abs(e.center - cplx(3.75, 0)), 0.0, 1e-14);
  EXPECT_NEAR(e.semi_major, 3.75, 1e-14);
  EXPECT_NEAR(e.semi_minor, 2.25, 1e-14);
  EXPECT_TRUE(e.zero_atom);
}

TEST(DiscSupport, Examples) {
  const auto d = disc_support(params(2, 1, 0.0), 2.0);
  EXPECT_EQ(d.center, cplx(0, 0));
  EXPECT_DOUBLE_EQ(d.radius, 2.0);
  EXPECT_FALSE(d.zero_atom);

  const auto d2 = disc_support(params(1, 1, 0.6), 4.0);
  EXPECT_NEAR(d2.center.real(), 0.6, 1e-15);
  EXPECT_NEAR(d2.radius, 0.46188021535170065, 1e-14);
  EXPECT_FALSE(d2.zero_atom);

  EXPECT_TRUE(disc_support(params(1, 1, 0.6), 0.25).zero_atom);
}

TEST(DiscSupport, AlphaOneIsRejected) {
  EXPECT_EQ(code_of([] { disc_support(params(1, 1, 0.3), 1.0); }), ErrorCode::AlphaOneUnsupported);
  EXPECT_EQ(code_of([] { in_support_via_tau(params(1, 1, 0.3), 1.0, 1.0); }),
            ErrorCode::AlphaOneUnsupported);
}

TEST(DiscSupport, InverseAlphaGivesSameDisc) {
  const auto p = params(1.5, 0.5, {0.2, 0.3});
  const auto a = disc_support(p, 3.0);
  const auto b = disc_support(p, 1.0 / 3.0);
  EXPECT_NEAR(a.radius, b.radius, 1e-14);
  EXPECT_EQ(a.center, b.center);
}

TEST(SupportContains, Examples) {
  const Support unit = ellipse_support(params(1, 1, 0.0), 1.0);
  EXPECT_TRUE(support_contains(unit, 1.0, 0.0));
  EXPECT_FALSE(support_contains(unit, 1.01, 0.0));
  EXPECT_TRUE(support_contains(unit, 1.01, 0.1));

  const Support disc = disc_support(params(1, 1, 0.6), 4.0);
  EXPECT_FALSE(support_contains(disc, 0.0, 0.0));
  EXPECT_TRUE(support_contains(disc, 0.6, 0.0));

  const Support atom = disc_support(params(1, 1, 0.95), 0.5);
  EXPECT_TRUE(support_contains(atom, 0.0, 0.0));
  EXPECT_TRUE(support_contains(atom, 1e-13, 0.0));
  const Support ellipse_atom = ellipse_support(params(1, 1, 1.0), 0.25);
  EXPECT_TRUE(support_contains(ellipse_atom, 0.0, 0.0));
}

TEST(SupportContains, DegenerateSegment) {
  const Support seg = ellipse_support(params(1, 1, 1.0, EnsembleKind::Real), 4.0);
  EXPECT_TRUE(support_contains(seg, 1.0, 0.0));
  EXPECT_TRUE(support_contains(seg, 9.0, 0.0));
  EXPECT_TRUE(support_contains(seg, cplx(5.0, 1e-13), 0.0));
  EXPECT_FALSE(support_contains(seg, cplx(5.0, 1e-9), 0.0));
  EXPECT_FALSE(support_contains(seg, 9.5, 0.0));
}

TEST(SupportContains, MatchesAxisAlignedEquation) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double sx = 0.5 + std::abs(unif(rng));
    const double sy = 0.5 + std::abs(unif(rng));
    const double tau = 0.98 * unif(rng);
    const double alpha = std::exp(2.0 * unif(rng));
    const cplx l(6 * unif(rng), 3 * unif(rng));
    const double lhs = ellipse_lhs_real_tau(sx, sy, tau, alpha, l);
    if (std::abs(lhs - 1.0) < 1e-9) continue;
    const auto e = ellipse_support(params(sx, sy, tau, EnsembleKind::Real), alpha);
    // skip the zero atom so only the ellipse body is compared
    if (std::abs(l) < 1e-12) continue;
    EXPECT_EQ(support_contains(e, l, 0.0), lhs <= 1.0) << "k=" << k;
  }
}

TEST(ZeroInEllipse, Examples) {
  EXPECT_TRUE(zero_in_ellipse(0.99, 0.5));
  EXPECT_TRUE(zero_in_ellipse(cplx(0, 1), 0.5));
  EXPECT_TRUE(zero_in_ellipse(0.5, 4.0));
  EXPECT_FALSE(zero_in_ellipse(0.6, 4.0));
}

TEST(ZeroInEllipseProperty, AgreesWithEllipseAtOrigin) {
  int compared = 0;
  for (const double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int m = 0; m <= 50; ++m) {
      for (int ph = 0; ph < 8; ++ph) {
        const cplx tau = std::polar(m / 50.0, 2 * std::numbers::pi * ph / 8.0);
        const auto e = ellipse_support(params(1.3, 0.8, tau), alpha);
        // boundary tie: |tau| (1 + alpha) = sqrt(alpha) (1 + |tau|^2)
        const double mod = std::abs(tau);
        if (!e.zero_atom && std::abs(mod * (1 + alpha) - std::sqrt(alpha) * (1 + mod * mod)) <= 1e-12) continue;
        EXPECT_EQ(zero_in_ellipse(tau, alpha), support_contains(e, 0.0, 0.0))
            << "tau=" << tau << " alpha=" << alpha;
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 1900);
}

TEST(TauLambdaSq, Examples) {
  EXPECT_DOUBLE_EQ(tau_lambda_sq(params(1, 1, 1.0), cplx(0.3, -2.0)), 1.0);
  EXPECT_DOUBLE_EQ(tau_lambda_sq(params(1, 1, 0.0), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(tau_lambda_sq(params(1, 1, 0.5), 1.0), 0.25);
  EXPECT_EQ(code_of([] { tau_lambda_sq(params(1, 1, 0.5), 0.0); }), ErrorCode::LambdaZero);
}

TEST(TauLambdaSqProperty, MatchesExpandedRatioAndIsBounded) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double sx = 0.2 + 3 * unif(rng);
    const double sy = 0.2 + 3 * unif(rng);
    const cplx tau = std::polar(std::sqrt(unif(rng)), 2 * std::numbers::pi * unif(rng));
    const cplx l = std::polar(0.05 + 5 * unif(rng), 2 * std::numbers::pi * unif(rng));
    const double re = (tau / l).real();
    const double num = sy * sy - 2 * sx * sy * re + std::norm(tau) * sx * sx / std::norm(l);
    const double den = sy * sy - 2 * sx * sy * re + sx * sx / std::norm(l);
    const double got = tau_lambda_sq(params(sx, sy, tau), l);
    EXPECT_NEAR(got, num / den, 1e-10 * std::max(1.0, 1.0 / den));
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0);
  }
}

TEST(InSupportViaTau, Examples) {
  EXPECT_FALSE(in_support_via_tau(params(1, 1, 1.0), 2.0, cplx(0.4, 0.1)));
  EXPECT_TRUE(in_support_via_tau(params(1, 1, 0.0), 2.0, 1.0));
  EXPECT_FALSE(in_support_via_tau(params(1, 1, 0.0), 2.0, 2.0));
  EXPECT_FALSE(support_contains(disc_support(params(1, 1, 0.0), 2.0), 2.0, 0.0));
}

// Three routes to X Y^+ membership: correlation threshold, disc, and the
// expanded quadratic inequality.
TEST(InSupportViaTauProperty, EquivalentToDiscAndQuadratic) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int compared = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto p = params(0.2 + 3 * unif(rng), 0.2 + 3 * unif(rng),
                          std::polar(std::sqrt(unif(rng)), 2 * std::numbers::pi * unif(rng)));
    double alpha = std::exp(std::log(0.1) + std::log(100.0) * unif(rng));
    if (std::abs(alpha - 1.0) < 1e-3) continue;
    const auto disc = disc_support(p, alpha);
    const cplx l = disc.center + std::polar(2 * disc.radius * std::sqrt(unif(rng)),
                                            2 * std::numbers::pi * unif(rng));
    if (std::abs(std::norm(l - disc.center) / (disc.radius * disc.radius) - 1.0) <= 1e-9) continue;
    const bool via_tau = in_support_via_tau(p, alpha, l);
    EXPECT_EQ(via_tau, support_contains(disc, l, 0.0)) << k;
    EXPECT_EQ(via_tau, quadratic_form(p, alpha, l) <= 0.0) << k;
    ++compared;
  }
  EXPECT_GT(compared, 990);
}

TEST(PredictProperty, RotationCovariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const cplx tau = std::polar(0.05 + 0.9 * unif(rng), 2 * std::numbers::pi * unif(rng));
    const double theta = 2 * std::numbers::pi * unif(rng);
    const double alpha = 0.2 + 4 * unif(rng);
    const auto e0 = ellipse_support(params(1.2, 0.7, tau), alpha);
    const auto e1 = ellipse_support(params(1.2, 0.7, std::polar(1.0, theta) * tau), alpha);
    EXPECT_NEAR(std::abs(e1.center - std::polar(1.0, theta) * e0.center), 0.0, 1e-14);
    EXPECT_NEAR(e1.semi_major, e0.semi_major, 1e-14);
    EXPECT_NEAR(e1.semi_minor, e0.semi_minor, 1e-14);
    EXPECT_NEAR(std::remainder(e1.rotation - e0.rotation - theta, 2 * std::numbers::pi), 0.0, 1e-13);
  }
}

TEST(PredictProperty, DegenerateAtUnitCorrelation) {
  for (const cplx tau : {cplx(1, 0), cplx(-1, 0), std::polar(1.0, 0.7)}) {
    EXPECT_EQ(ellipse_support(params(1, 2, tau), 3.0).semi_minor, 0.0);
    EXPECT_EQ(disc_support(params(1, 2, tau), 3.0).radius, 0.0);
    EXPECT_EQ(disc_support(params(1, 2, tau), 0.3).radius, 0.0);
  }
}

TEST(PredictProperty, ScaleCovariance) {
  const double c = 2.5;
  for (const double alpha : {0.3, 2.0, 5.0}) {
    const cplx tau(0.3, -0.4);
    const auto e0 = ellipse_support(params(0.8, 1.1, tau), alpha);
    const auto e1 = ellipse_support(params(c * 0.8, 1.1, tau), alpha);
    EXPECT_NEAR(std::abs(e1.center - c * e0.center), 0.0, 1e-14);
    EXPECT_NEAR(e1.semi_major, c * e0.semi_major, 1e-14);
    EXPECT_NEAR(e1.semi_minor, c * e0.semi_minor, 1e-14);
    const auto d0 = disc_support(params(0.8, 1.1, tau), alpha);
    const auto d1 = disc_support(params(c * 0.8, 1.1, tau), alpha);
    EXPECT_NEAR(std::abs(d1.center - c * d0.center), 0.0, 1e-14);
    EXPECT_NEAR(d1.radius, c * d0.radius, 1e-14);
  }
}

TEST(MeanEigenvaluePrediction, Closed) {
  EXPECT_EQ(mean_eigenvalue_prediction(params(1, 1, 0.0), 2.0, ProductKind::ConjTranspose), cplx(0, 0));
  EXPECT_EQ(mean_eigenvalue_prediction(params(1, 1, 0.0), 2.0, ProductKind::PseudoInverse), cplx(0, 0));
  EXPECT_DOUBLE_EQ(mean_eigenvalue_prediction(params(1, 1, 0.5), 2.0, ProductKind::ConjTranspose).real(), 1.0);
  EXPECT_DOUBLE_EQ(mean_eigenvalue_prediction(params(2, 1, 0.5), 0.5, ProductKind::PseudoInverse).real(), 0.5);
}

// Monte Carlo trace oracle: trace(M) / N averaged over 200 trials at N = 200.
TEST(MeanEigenvaluePrediction, MonteCarloTraceOracle) {
  struct Case {
    EnsembleParams p;
    Eigen::Index n, pcols;
    ProductKind kind;
  };
  const Case cases[] = {
      {params(1, 1, 0.5, EnsembleKind::ComplexIndependent), 200, 400, ProductKind::ConjTranspose},
      {params(2, 1, 0.5, EnsembleKind::ComplexIndependent), 200, 100, ProductKind::PseudoInverse},
  };
  for (const auto& c : cases) {
    const int trials = 200;
    double s = 0.0;
    double s2 = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto pair = sample_pair(c.p, Dims(c.n, c.pcols), 4000 + t);
      const double tr = product_matrix(pair, c.kind).trace().real() / static_cast<double>(c.n);
      s += tr;
      s2 += tr * tr;
    }
    const double mean = s / trials;
    const double se = std::sqrt((s2 / trials - mean * mean) / (trials - 1));
    const cplx pred = mean_eigenvalue_prediction(c.p, Dims(c.n, c.pcols).alpha(), c.kind);
    EXPECT_NEAR(mean, pred.real(), 4 * se);
  }
}
