#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"
#include "sublimit/signal.hpp"

using namespace sublimit;

namespace {

const TimeGrid kSmall(-3.0, 1.0 / 16.0, 96);

Spectrum triangle_spectrum(const TimeGrid& g) {
  ComplexVector v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::max(0.0, 1.0 - std::abs(g.frequency(i)));
  return Spectrum(g, std::move(v));
}

}  // namespace

TEST(TimeGrid, DeskDefaultIsSquare) {
  const auto g = TimeGrid::desk_default();
  EXPECT_EQ(g.size(), 4096u);
  EXPECT_DOUBLE_EQ(g.dt(), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(g.dw(), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(g.t_start(), -32.0);
  EXPECT_DOUBLE_EQ(g.frequency(0), -32.0);
  EXPECT_DOUBLE_EQ(g.frequency(2048), 0.0);
}

TEST(TimeGrid, RejectsBadShapes) {
  EXPECT_THROW(TimeGrid(0.0, 0.0, 8), PreconditionError);
  EXPECT_THROW(TimeGrid(0.0, 1.0, 1), PreconditionError);
  EXPECT_THROW(TimeGrid(0.0, 1.0, 7), PreconditionError);
}

TEST(TimeGrid, HalfOpenMembership) {
  const auto g = TimeGrid::desk_default();
  // [-1/8, 1/8) holds t = -8/64 .. 7/64.
  const auto r = g.samples_in(Interval(0.0, 0.25));
  EXPECT_EQ(r.size(), 16);
  EXPECT_DOUBLE_EQ(g.time(static_cast<std::size_t>(r.first)), -0.125);
  EXPECT_DOUBLE_EQ(g.time(static_cast<std::size_t>(r.last - 1)), 0.125 - 1.0 / 64.0);
  const auto b = g.bins_in(Interval(0.0, 2.0));
  EXPECT_EQ(b.size(), 128);
  EXPECT_DOUBLE_EQ(g.frequency(static_cast<std::size_t>(b.first)), -1.0);
  EXPECT_TRUE(g.samples_in(Interval(0.0, 0.0)).empty());
  // Adjacent intervals tile without overlap.
  const auto left = g.samples_in(Interval(-0.5, 1.0));
  const auto right = g.samples_in(Interval(0.5, 1.0));
  EXPECT_EQ(left.last, right.first);
}

TEST(TimeGrid, RejectsOutOfRange) {
  const auto g = TimeGrid::desk_default();
  EXPECT_THROW(g.bins_in(Interval(0.0, 70.0)), PreconditionError);
  EXPECT_THROW(g.samples_in(Interval(40.0, 1.0)), PreconditionError);
  EXPECT_NO_THROW(g.bins_in(Interval(-0.5 / 64.0, 64.0)));
}

TEST(Transform, MatchesDirectSum) {
  const auto s = oracle::random_signal(kSmall, 11);
  const auto spec = forward_spectrum(s);
  const auto ref = oracle::direct_dft(kSmall, s.values());
  EXPECT_LT(oracle::rel_l2(spec.values(), ref), 1e-12);
  const auto back = oracle::direct_idft(kSmall, spec.values());
  EXPECT_LT(oracle::rel_l2(inverse_signal(spec).values(), back), 1e-12);
}

TEST(Transform, ImpulseIsFlat) {
  const auto g = TimeGrid::desk_default();
  ComplexVector v(g.size());
  v[2048] = 1.0;  // t = 0
  const auto spec = forward_spectrum(SampledSignal(g, v));
  for (std::size_t i = 0; i < g.size(); ++i) ASSERT_LT(std::abs(spec[i] - g.dt()), 1e-15);

  const auto back = inverse_signal(Spectrum(g, ComplexVector(g.size(), Complex{g.dt()})));
  EXPECT_LT(oracle::max_abs_diff(back.values(), v), 1e-12);
}

TEST(Transform, ZeroSpectrumGivesZeroSignal) {
  const auto g = TimeGrid::desk_default();
  EXPECT_EQ(l2_norm(inverse_signal(Spectrum(g))), 0.0);
}

TEST(Transform, RoundTripParsevalLinearity) {
  const auto g = TimeGrid::desk_default();
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto a = oracle::random_signal(g, seed);
    const auto b = oracle::random_signal(g, seed + 100);
    const auto fa = forward_spectrum(a);
    EXPECT_LT(oracle::rel_l2(inverse_signal(fa).values(), a.values()), 1e-12);
    EXPECT_NEAR(l2_norm(fa) / l2_norm(a), 1.0, 1e-10);

    const Complex alpha(0.3, -1.7), beta(-2.1, 0.4);
    const auto combo = forward_spectrum(alpha * a + beta * b);
    const auto fb = forward_spectrum(b);
    ComplexVector expect(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) expect[i] = alpha * fa[i] + beta * fb[i];
    EXPECT_LT(oracle::rel_l2(combo.values(), expect), 1e-12);
  }
}

TEST(Transform, RealSignalsAreConjugateSymmetric) {
  const auto g = TimeGrid::desk_default();
  const auto demo = make_demo_signal(g);
  const auto spec = forward_spectrum(demo);
  const std::size_t n = g.size();
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) worst = std::max(worst, std::abs(spec[n - i] - std::conj(spec[i])));
  EXPECT_LT(worst, 1e-12);
}

TEST(Transform, SincSquaredSpectrumIsTriangle) {
  const auto g = TimeGrid::desk_default();
  const auto spec = forward_spectrum(make_demo_signal(g));
  double vs_quadrature = 0.0, vs_triangle = 0.0;
  for (std::size_t i = 1920; i <= 2176; i += 8) {  // w in [-2, 2]
    const double w = g.frequency(i);
    vs_quadrature = std::max(vs_quadrature, std::abs(spec[i] - oracle::sinc2_transform(w, 32.0, 1u << 16)));
    vs_triangle = std::max(vs_triangle, std::abs(spec[i] - std::max(0.0, 1.0 - std::abs(w))));
  }
  EXPECT_LE(vs_quadrature, 1e-3);
  // The [-32, 32) truncation alone costs 1/(32 pi^2) at w = 0.
  EXPECT_LE(vs_triangle, 4e-3);
}

TEST(Transform, TriangleInvertsToSincSquared) {
  const auto g = TimeGrid::desk_default();
  const auto s = inverse_signal(triangle_spectrum(g));
  const auto demo = make_demo_signal(g);
  const auto interior = g.samples_in(Interval(0.0, 32.0));
  double worst = 0.0;
  for (auto k = interior.first; k < interior.last; ++k)
    worst = std::max(worst, std::abs(s[static_cast<std::size_t>(k)] - demo[static_cast<std::size_t>(k)]));
  EXPECT_LE(worst, 1e-3);
}

TEST(Geometry, SincSquaredNorm) {
  const auto g = TimeGrid::desk_default();
  const double norm = l2_norm(make_demo_signal(g));
  EXPECT_NEAR(norm * norm, oracle::sinc4_integral(32.0), 1e-4);
  EXPECT_NEAR(norm * norm, 2.0 / 3.0, 1e-4);
}

TEST(Geometry, InnerProductProperties) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = oracle::random_signal(kSmall, seed);
    const auto b = oracle::random_signal(kSmall, seed * 7 + 3);
    const Complex aa = inner_product(a, a);
    EXPECT_EQ(aa.imag(), 0.0);
    EXPECT_GE(aa.real(), 0.0);
    EXPECT_NEAR(std::sqrt(aa.real()), l2_norm(a), 1e-12 * l2_norm(a));
    EXPECT_LE(std::abs(inner_product(a, b)), l2_norm(a) * l2_norm(b) * (1.0 + 1e-14));
  }
}

TEST(Geometry, GridMismatchIsShapeError) {
  const auto a = oracle::random_signal(kSmall, 1);
  const auto b = oracle::random_signal(TimeGrid(0.0, 1.0 / 16.0, 96), 1);
  EXPECT_THROW(inner_product(a, b), ShapeError);
  EXPECT_THROW(a - b, ShapeError);
  EXPECT_THROW(SampledSignal(kSmall, ComplexVector(3)), ShapeError);
}

TEST(DemoSignal, ReferenceValues) {
  const auto g = TimeGrid::desk_default();
  const auto s = make_demo_signal(g);
  EXPECT_DOUBLE_EQ(s[2048].real(), 1.0);
  EXPECT_NEAR(s[2048 + 32].real(), 4.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_NEAR(s[2048 - 32].real(), 4.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_NEAR(s[2048 + 64].real(), 0.0, 1e-15);
  EXPECT_NEAR(s[2048 - 64].real(), 0.0, 1e-15);
  EXPECT_THROW(make_demo_signal(TimeGrid(-8.0, 1.0 / 64.0, 1024)), PreconditionError);
}

TEST(Csv, SignalRoundTripIsExact) {
  const auto s = oracle::random_signal(kSmall, 5);
  std::stringstream buf;
  write_signal_csv(buf, s);
  const auto back = read_signal_csv(buf);
  EXPECT_EQ(back.grid().size(), s.size());
  EXPECT_DOUBLE_EQ(back.grid().dt(), kSmall.dt());
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(back[k], s[k]);
}

TEST(Csv, SpectrumRoundTripIsExact) {
  const auto spec = forward_spectrum(oracle::random_signal(kSmall, 6));
  std::stringstream buf;
  write_spectrum_csv(buf, spec);
  const auto back = read_spectrum_csv(buf, kSmall.t_start());
  for (std::size_t i = 0; i < spec.size(); ++i) EXPECT_EQ(back[i], spec[i]);
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream bad_header("x,re,im\n0,1,0\n1,1,0\n");
  EXPECT_THROW(read_signal_csv(bad_header), PreconditionError);
  std::stringstream uneven("t,re,im\n0,1,0\n1,1,0\n3,1,0\n4,0,0\n");
  EXPECT_THROW(read_signal_csv(uneven), PreconditionError);
  std::stringstream text("t,re,im\n0,a,0\n1,1,0\n");
  EXPECT_THROW(read_signal_csv(text), PreconditionError);
}
