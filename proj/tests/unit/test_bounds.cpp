#include <gtest/gtest.h>

#include <cmath>

#include "consensus/bounds.hpp"
#include "consensus/error.hpp"
#include "consensus/graph.hpp"
#include "consensus/spectral.hpp"
#include "support.hpp"

namespace consensus {
namespace {

using test::kPi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Margins, Triangle) {
  const AgentGraph g = test::triangle();
  const SpectralSummary s = spectral_summary(g);
  EXPECT_NEAR(margin_constant_uniform(s), kPi / 6, 1e-12);
  EXPECT_NEAR(margin_constant_uniform(s), 0.5236, 1e-4);
  EXPECT_EQ(margin_constant_nonuniform(s), margin_constant_uniform(s));
  EXPECT_NEAR(margin_timevarying_uniform(s), 0.5, 1e-12);
}

TEST(Margins, SingleClassTriangleNonuniform) {
  const AgentGraph g = complete_graph(3, 1.0, ClassLayout::single);
  EXPECT_NEAR(margin_timevarying_nonuniform(g), 1.0 / 3.0, 1e-9);
}

TEST(Margins, CompleteGraphFormulas) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (double delta : {0.5, 2.0}) {
      const AgentGraph g = complete_graph(n, delta, ClassLayout::per_edge);
      const SpectralSummary s = spectral_summary(g);
      EXPECT_NEAR(margin_constant_uniform(s), kPi / (2 * n * delta), 1e-12);
      EXPECT_NEAR(margin_timevarying_uniform(s), 3 / (2 * n * delta), 1e-12);
      EXPECT_LT(rel(margin_timevarying_nonuniform(g), 1 / (delta * n * (n - 1.0))), 1e-9);
    }
  }
}

TEST(Margins, LoopFormulas) {
  for (std::size_t n = 3; n <= 12; ++n) {
    const AgentGraph g = loop_graph(n, 1.0, ClassLayout::per_edge);
    const double top = 4 * std::pow(std::sin(static_cast<double>(n / 2) * kPi / n), 2);
    EXPECT_NEAR(margin_constant_uniform(spectral_summary(g)), kPi / (2 * top), 1e-12);
    EXPECT_LT(rel(margin_timevarying_nonuniform(g), 2 * std::pow(std::sin(kPi / n), 2) / (3.0 * n)), 1e-9);
  }
  EXPECT_NEAR(margin_timevarying_nonuniform(loop_graph(4, 1.0, ClassLayout::per_edge)), 1.0 / 12.0, 1e-10);
}

TEST(Margins, ScalingHalvesMargin) {
  const SpectralSummary a = spectral_summary(test::triangle(1, 2, 3));
  const SpectralSummary b = spectral_summary(test::triangle(2, 4, 6));
  EXPECT_NEAR(margin_timevarying_uniform(b), 0.5 * margin_timevarying_uniform(a), 1e-12);
  EXPECT_NEAR(margin_constant_uniform(b), 0.5 * margin_constant_uniform(a), 1e-12);
}

TEST(Margins, ReportInvariants) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const AgentGraph g = test::random_connected_graph(6, 3, rng);
    const MarginReport radius = margin_report(g, NormMode::spectral_radius);
    const MarginReport two = margin_report(g, NormMode::operator_two_norm);
    EXPECT_EQ(radius.constant_uniform, radius.constant_nonuniform);
    EXPECT_LT(radius.timevarying_uniform, radius.constant_uniform);
    EXPECT_LE(two.timevarying_nonuniform, two.timevarying_uniform);
    EXPECT_LE(two.timevarying_nonuniform, radius.timevarying_nonuniform + 1e-15);
  }
}

TEST(DecayRate, Endpoints) {
  const SpectralSummary s = spectral_summary(test::triangle());
  EXPECT_EQ(margin_decay_rate(s, 0.0), margin_constant_uniform(s));
  EXPECT_EQ(margin_decay_rate(s, s.norm_delta), 0.0);
  try {
    margin_decay_rate(s, 3.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecayRateTooLarge);
  }
}

TEST(DecayRate, ResidualAndRange) {
  const double tau = margin_decay_rate(3.0, 1.5);
  EXPECT_GT(tau, 0.0);
  EXPECT_LT(tau, kPi / 6);
  EXPECT_LT(std::abs(decay_rate_residual(3.0, 1.5, tau)), 1e-8);
  // Independent evaluation of the crossing equation.
  const double lhs = 3.0 * std::exp(1.5 * tau) * std::cos(tau * std::sqrt(9.0 * std::exp(3.0 * tau) - 2.25));
  EXPECT_NEAR(lhs, 1.5, 1e-8);
}

TEST(DecayRate, StrictlyDecreasing) {
  for (double nd : {0.7, 3.0, 12.0}) {
    double prev = margin_decay_rate(nd, 0.0);
    for (int k = 1; k <= 20; ++k) {
      const double h = nd * k / 20.0;
      const double tau = margin_decay_rate(nd, h);
      EXPECT_LT(tau, prev) << "nd=" << nd << " h=" << h;
      if (k < 20) EXPECT_LT(std::abs(decay_rate_residual(nd, h, tau)), 1e-8 * nd);
      prev = tau;
    }
  }
}

TEST(DelayIndependence, EqualTriangleFails) {
  const AgentGraph g = test::triangle();
  const auto r = delay_independent_check(g, 2);
  EXPECT_EQ(r.verdict, DelayIndependence::Fails);
  EXPECT_LT(r.min_eigenvalue, -1e-10);
  // Every single edge made delay-free fails too.
  const AgentGraph k3 = complete_graph(3, 1.0, ClassLayout::per_edge);
  for (std::size_t c = 1; c <= 3; ++c) EXPECT_EQ(delay_independent_check(k3, c).verdict, DelayIndependence::Fails);
}

TEST(DelayIndependence, HeavyPathHoldsStrict) {
  const AgentGraph g = test::triangle(10, 10, 1, 1);
  const auto r = delay_independent_check(g, 1);
  EXPECT_EQ(r.verdict, DelayIndependence::HoldsStrict);
  EXPECT_GT(r.min_eigenvalue, 1e-10);
}

TEST(DelayIndependence, SingleClassHoldsStrict) {
  EXPECT_EQ(delay_independent_check(loop_graph(5, 1.0, ClassLayout::single), 1).verdict,
            DelayIndependence::HoldsStrict);
}

TEST(DelayIndependence, BorderlineIsWeak) {
  // a[(u2-u1)^2 + (u3-u2)^2] >= (u3-u1)^2 holds iff a >= 2, with equality
  // along u2 - u1 = u3 - u2 when a = 2.
  const auto r = delay_independent_check(test::triangle(2, 2, 1, 1), 1);
  EXPECT_NEAR(r.min_eigenvalue, 0.0, 1e-10);
  EXPECT_EQ(r.verdict, DelayIndependence::HoldsWeak);
  EXPECT_EQ(delay_independent_check(test::triangle(1.9, 1.9, 1, 1), 1).verdict, DelayIndependence::Fails);
  EXPECT_EQ(delay_independent_check(test::triangle(2.1, 2.1, 1, 1), 1).verdict, DelayIndependence::HoldsStrict);
}

TEST(DelayIndependence, ScaleInvariant) {
  const auto a = delay_independent_check(test::triangle(10, 10, 1, 1), 1);
  const auto b = delay_independent_check(test::triangle(30, 30, 3, 1), 1);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_NEAR(b.min_eigenvalue, 3 * a.min_eigenvalue, 1e-10);
  const auto c = delay_independent_check(test::triangle(2, 2, 2, 1), 2);
  EXPECT_EQ(c.verdict, DelayIndependence::Fails);
}

TEST(DelayIndependence, UnknownClass) {
  try {
    delay_independent_check(test::triangle(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownClass);
  }
}

TEST(ClosedForm, CompleteThree) {
  const MarginReport r = closed_form_margins(GraphFamily::complete, 3, 1.0);
  EXPECT_NEAR(r.constant_uniform, kPi / 6, 1e-15);
  EXPECT_NEAR(r.timevarying_uniform, 0.5, 1e-15);
  EXPECT_NEAR(r.constant_nonuniform, kPi / 6, 1e-15);
  EXPECT_NEAR(r.timevarying_nonuniform, 1.0 / 6.0, 1e-15);
}

TEST(ClosedForm, LoopFour) {
  const MarginReport r = closed_form_margins(GraphFamily::loop, 4, 1.0);
  EXPECT_NEAR(r.constant_uniform, kPi / 8, 1e-15);
  EXPECT_NEAR(r.constant_nonuniform, kPi / 8, 1e-15);
  EXPECT_NEAR(r.timevarying_nonuniform, 1.0 / 12.0, 1e-15);
}

TEST(ClosedForm, LoopThreeIsCompleteThree) {
  for (double delta : {0.5, 1.0, 2.0}) {
    const MarginReport a = closed_form_margins(GraphFamily::loop, 3, delta);
    const MarginReport b = closed_form_margins(GraphFamily::complete, 3, delta);
    EXPECT_NEAR(a.constant_uniform, b.constant_uniform, 1e-15);
    EXPECT_NEAR(a.timevarying_uniform, b.timevarying_uniform, 1e-15);
    EXPECT_NEAR(a.timevarying_nonuniform, b.timevarying_nonuniform, 1e-15);
  }
}

TEST(ClosedForm, MatchesNumericPipeline) {
  for (double delta : {0.5, 1.0, 2.0}) {
    for (std::size_t n = 2; n <= 12; ++n) {
      const MarginReport c = closed_form_margins(GraphFamily::complete, n, delta);
      const MarginReport m = margin_report(complete_graph(n, delta, ClassLayout::per_edge), NormMode::spectral_radius);
      EXPECT_LT(rel(m.constant_uniform, c.constant_uniform), 1e-9);
      EXPECT_LT(rel(m.timevarying_uniform, c.timevarying_uniform), 1e-9);
      EXPECT_LT(rel(m.timevarying_nonuniform, c.timevarying_nonuniform), 1e-9) << n;
    }
    for (std::size_t n = 3; n <= 24; ++n) {
      const MarginReport c = closed_form_margins(GraphFamily::loop, n, delta);
      const MarginReport m = margin_report(loop_graph(n, delta, ClassLayout::per_edge), NormMode::spectral_radius);
      EXPECT_LT(rel(m.constant_uniform, c.constant_uniform), 1e-9);
      EXPECT_LT(rel(m.timevarying_uniform, c.timevarying_uniform), 1e-9);
      EXPECT_LT(rel(m.timevarying_nonuniform, c.timevarying_nonuniform), 1e-9) << n;
    }
  }
}

TEST(ClosedForm, BadSizes) {
  EXPECT_THROW(closed_form_margins(GraphFamily::complete, 1, 1.0), Error);
  EXPECT_THROW(closed_form_margins(GraphFamily::loop, 2, 1.0), Error);
}

TEST(Modal, ZeroDelay) {
  const auto z = modal_rightmost_root(-2.0, 0.0);
  EXPECT_DOUBLE_EQ(z.real(), -2.0);
  EXPECT_DOUBLE_EQ(z.imag(), 0.0);
}

TEST(Modal, ImaginaryAtMargin) {
  for (double lambda : {-1.0, -3.0, -10.0}) {
    const auto z = modal_rightmost_root(lambda, kPi / (2 * std::abs(lambda)));
    EXPECT_LT(std::abs(z.real()), 1e-8);
    EXPECT_NEAR(z.imag(), std::abs(lambda), 1e-8);
  }
}

TEST(Modal, SignChangeAtMargin) {
  for (double lambda : {-1.0, -3.0, -10.0}) {
    const double margin = kPi / (2 * std::abs(lambda));
    EXPECT_LT(modal_rightmost_root(lambda, 0.99 * margin).real(), 0.0);
    EXPECT_GT(modal_rightmost_root(lambda, 1.01 * margin).real(), 0.0);
  }
}

TEST(Modal, RootSatisfiesEquation) {
  for (double tau : {0.1, 0.3, 0.51, 0.53, 1.0}) {
    const std::complex<double> s = modal_rightmost_root(-3.0, tau);
    EXPECT_LT(std::abs(s + 3.0 * std::exp(-s * tau)), 1e-9);
  }
  EXPECT_GT(modal_rightmost_root(-3.0, 0.53).real(), 0.0);
}

}  // namespace
}  // namespace consensus
