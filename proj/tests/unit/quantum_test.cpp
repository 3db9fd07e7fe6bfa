#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "sublimit/error.hpp"
#include "sublimit/projections.hpp"
#include "sublimit/quantum.hpp"

using namespace sublimit;

namespace {

const TimeGrid kGrid = TimeGrid::desk_default();
// Box of length L = M / P = 4 for P = 2, M = 8.
const TimeGrid kBox(-2.0, 1.0 / 64.0, 256);
const PhaseSpaceWindows kWindows{Interval(0.0, 0.25), Interval(0.0, 2.0)};

// Momentum-limited Gaussian-like packet centered at x = 0.3.
SampledSignal packet(const TimeGrid& g) {
  ComplexVector v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.time(k) - 0.3;
    v[k] = std::exp(-x * x / 0.5) * oracle::cis(0.2 * g.time(k));
  }
  return normalize(momentum_project(SampledSignal(g, std::move(v)), kWindows.p_band)).psi;
}

SampledSignal box_state(std::uint64_t seed) {
  const auto c = random_coefficients(8, seed);
  std::vector<double> p;
  for (int j = -4; j < 4; ++j) p.push_back(j / 4.0);
  return synthesize_state(kBox, p, c);
}

double max_abs(const DensityMatrix& a, const DensityMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.elements.size(); ++i) m = std::max(m, std::abs(a.elements[i] - b.elements[i]));
  return m;
}

}  // namespace

TEST(MomentumBins, MirroredFrequencies) {
  const auto bins = momentum_bins(kBox, kWindows.p_band);
  EXPECT_EQ(bins.size(), 8);
  // p in [-1, 1) is w in (-1, 1].
  EXPECT_DOUBLE_EQ(kBox.frequency(static_cast<std::size_t>(bins.first)), -0.75);
  EXPECT_DOUBLE_EQ(kBox.frequency(static_cast<std::size_t>(bins.last - 1)), 1.0);
  // A plane wave exp(2 pi i p x) at p = 1/2 sits in a band around +1/2.
  ComplexVector v(kBox.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = oracle::cis(0.5 * kBox.time(k));
  const SampledSignal wave(kBox, v);
  EXPECT_NEAR(l2_norm(momentum_project(wave, Interval(0.5, 0.25))), l2_norm(wave), 1e-12);
  EXPECT_LT(l2_norm(momentum_project(wave, Interval(-0.5, 0.25))), 1e-12);
  EXPECT_THROW(momentum_bins(kBox, Interval(0.0, 100.0)), PreconditionError);
}

TEST(LandauPollak, Bounds) {
  const auto psi = packet(kGrid);
  EXPECT_NEAR(landau_pollak_ratio(psi, {Interval(0.0, 64.0), kWindows.p_band}), 1.0, 1e-12);
  const double ratio = landau_pollak_ratio(psi, kWindows);
  EXPECT_GT(ratio, 0.0);
  EXPECT_LE(ratio, 0.5);
  const auto rotated = Complex(std::polar(1.0, 1.234)) * psi;
  EXPECT_NEAR(landau_pollak_ratio(rotated, kWindows), ratio, 1e-14);
  EXPECT_THROW(landau_pollak_ratio(SampledSignal(kGrid), kWindows), PreconditionError);
}

TEST(LandauPollak, OperatorBoundSweep) {
  for (const auto& [p, x] : std::vector<std::pair<double, double>>{{2.0, 0.25}, {1.0, 0.5}, {0.8, 0.125}, {1.8, 0.5}}) {
    const Interval band(0.0, p), window(0.0, x);
    const double lambda0 =
        power_iteration(ConcentrationOperator(kGrid, momentum_bins(kGrid, band), kGrid.samples_in(window))).lambda0;
    EXPECT_LE(lambda0, p * x + grid_slack(kGrid, band, window)) << p << ' ' << x;
  }
}

TEST(GateState, GapAndOutOfBandContent) {
  const auto psi_p = packet(kGrid);
  const auto psi_m = gate_state(psi_p, kWindows);
  EXPECT_TRUE(psi_m.normalized);
  EXPECT_NEAR(l2_norm(psi_m.psi), 1.0, 1e-12);
  const auto gap = kGrid.samples_in(kWindows.x_window);
  for (auto k = gap.first; k < gap.last; ++k) ASSERT_EQ(psi_m.psi[static_cast<std::size_t>(k)], Complex{});

  const auto gated = complement_gate(psi_p, kWindows.x_window);
  const double out = std::pow(l2_norm(momentum_reject(time_gate(psi_p, kWindows.x_window), kWindows.p_band)), 2) /
                     std::pow(l2_norm(time_gate(psi_p, kWindows.x_window)), 2);
  EXPECT_GE(out, 0.5 - grid_slack(kGrid, kWindows.p_band, kWindows.x_window));
  EXPECT_GT(l2_norm(momentum_reject(gated, kWindows.p_band)), 1e-3);
}

TEST(GateState, EdgeCases) {
  const auto psi_p = packet(kGrid);
  const auto same = gate_state(psi_p, {Interval(0.0, 0.0), kWindows.p_band});
  EXPECT_LT(oracle::max_abs_diff(same.psi.values(), psi_p.values()), 1e-12);
  EXPECT_THROW(gate_state(oracle::random_signal(kGrid, 1), kWindows), PreconditionError);
}

TEST(MomentumSmooth, FillsTheGap) {
  const auto psi_p = packet(kGrid);
  const auto smooth = momentum_smooth(gate_state(psi_p, kWindows).psi, kWindows);
  EXPECT_GT(std::abs(smooth.psi[2048]), 1e-2);
  const auto same = momentum_smooth(psi_p, {Interval(0.0, 0.0), kWindows.p_band});
  EXPECT_LT(oracle::max_abs_diff(same.psi.values(), psi_p.values()), 1e-12);
}

TEST(MomentumSmooth, CoordinateProfileOnTheGap) {
  // (P_P (1 - P_X) psi_P)(x) = psi_P(x) - sum_{y in X} dt K(x - y) psi_P(y),
  // K(d) = dw sum_{p in band} exp(2 pi i p d), summed explicitly.
  const auto psi_p = packet(kGrid);
  const auto unnormalized = momentum_project(complement_gate(psi_p, kWindows.x_window), kWindows.p_band);
  const auto gap = kGrid.samples_in(kWindows.x_window);
  const auto bins = momentum_bins(kGrid, kWindows.p_band);
  std::vector<double> momenta;
  for (auto i = bins.first; i < bins.last; ++i) momenta.push_back(-kGrid.frequency(static_cast<std::size_t>(i)));
  for (auto a = gap.first; a < gap.last; ++a) {
    Complex conv{};
    for (auto b = gap.first; b < gap.last; ++b) {
      const double d = kGrid.time(static_cast<std::size_t>(a)) - kGrid.time(static_cast<std::size_t>(b));
      Complex k{};
      for (const double p : momenta) k += oracle::cis(p * d);
      conv += kGrid.dt() * kGrid.dw() * k * psi_p[static_cast<std::size_t>(b)];
    }
    const auto u = static_cast<std::size_t>(a);
    ASSERT_LT(std::abs(unnormalized[u] - (psi_p[u] - conv)), 1e-8);
  }
}

TEST(RecoverState, ReferenceConfiguration) {
  const auto psi_p = packet(kGrid);
  const auto smooth = momentum_smooth(gate_state(psi_p, kWindows).psi, kWindows);
  const auto out = recover_state(smooth.psi, kWindows, 1e-12);
  ASSERT_FALSE(out.refused) << out.refusal_reason;
  EXPECT_TRUE(out.converged);
  EXPECT_DOUBLE_EQ(out.px, 0.5);
  EXPECT_GE(fidelity(out.state->psi, psi_p), 1.0 - 1e-8);
}

TEST(RecoverState, EmptyWindowAndPhaseCovariance) {
  const auto psi = Complex{3.0} * packet(kGrid);
  const auto same = recover_state(psi, {Interval(0.0, 0.0), kWindows.p_band});
  ASSERT_TRUE(same.state);
  EXPECT_LT(oracle::max_abs_diff(same.state->psi.values(), normalize(psi).psi.values()), 1e-12);

  const auto smooth = momentum_smooth(gate_state(packet(kGrid), kWindows).psi, kWindows).psi;
  const Complex phase = std::polar(1.0, 0.77);
  const auto a = recover_state(smooth, kWindows);
  const auto b = recover_state(phase * smooth, kWindows);
  EXPECT_LT(oracle::max_abs_diff(b.state->psi.values(), (phase * a.state->psi).values()), 1e-12);
}

TEST(RecoverState, RefusesAtTheLimit) {
  const auto psi = packet(kGrid);
  for (const double x : {0.5, 1.0}) {
    const auto out = recover_state(psi, {Interval(0.0, x), kWindows.p_band});
    EXPECT_TRUE(out.refused);
    EXPECT_FALSE(out.state);
    EXPECT_FALSE(out.refusal_reason.empty());
  }
}

TEST(Density, BuildAndEvolve) {
  const auto psi = box_state(3);
  const auto rho = build_density(psi, kWindows.p_band);
  ASSERT_EQ(rho.dimension(), 8u);
  EXPECT_DOUBLE_EQ(rho.box_length, 4.0);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_DOUBLE_EQ(rho.p_grid[j], (static_cast<double>(j) - 4.0) / 4.0);
    for (std::size_t k = 0; k < 8; ++k) ASSERT_LT(std::abs(rho(j, k) - std::conj(rho(k, j))), 1e-15);
  }

  std::vector<double> xs;
  for (std::size_t k = 0; k < kBox.size(); ++k) xs.push_back(kBox.time(k));
  std::vector<double> ts;
  for (int n = 0; n <= 20; ++n) ts.push_back(0.5 * n);
  const auto ev = evolve_diagonal_series(rho, xs, ts);
  for (std::size_t k = 0; k < xs.size(); ++k) ASSERT_NEAR(ev.at(0, k), std::norm(psi[k]), 1e-12);
  for (std::size_t n = 0; n < ts.size(); ++n) {
    double total = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      total += ev.at(n, k) * kBox.dt();
      ASSERT_GE(ev.at(n, k), -1e-10);
    }
    EXPECT_NEAR(total, 1.0, 1e-8) << ts[n];
  }
}

TEST(Density, MomentumEigenstateIsStationary) {
  ComplexVector c(8);
  c[6] = 1.0;
  std::vector<double> p;
  for (int j = -4; j < 4; ++j) p.push_back(j / 4.0);
  const auto rho = build_density(synthesize_state(kBox, p, c), kWindows.p_band);
  const auto ev = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), {0.0, 1.0, 5.0, 17.0});
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t i = 0; i < 16; ++i) ASSERT_NEAR(ev.at(n, i), 0.25, 1e-12);
}

TEST(Density, RejectsOutOfBandStates) {
  EXPECT_THROW(build_density(oracle::random_signal(kBox, 2), kWindows.p_band), PreconditionError);
}

TEST(Tomography, RandomPureStateRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rho = build_density(box_state(seed), kWindows.p_band);
    const auto samples = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), tomography_t_points(16));
    const auto out = tomography_solve(samples, rho.p_grid, 1.0, 4.0);
    ASSERT_FALSE(out.refused) << out.refusal_reason;
    EXPECT_TRUE(out.populations_inferred);
    EXPECT_LE(out.condition_number, 1e10);
    EXPECT_LT(out.residual, 1e-10);
    EXPECT_LE(max_abs(*out.rho, rho), 1e-6);
  }
}

TEST(Tomography, FrequencyDegenerateInstance) {
  // p = -3/4 and 3/4 paired with 1/4 share w_j - w_k; their spatial
  // factors differ.
  std::vector<double> p;
  for (int j = -4; j < 4; ++j) p.push_back(j / 4.0);
  ComplexVector c(8);
  c[1] = {0.6, 0.0};
  c[5] = {0.0, 0.5};
  c[7] = {-0.3, 0.55};
  double norm = 0.0;
  for (const auto& v : c) norm += std::norm(v);
  for (auto& v : c) v /= std::sqrt(norm);
  const auto rho = build_density(synthesize_state(kBox, p, c), kWindows.p_band);
  const auto samples = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), tomography_t_points(16));
  const auto out = tomography_solve(samples, p, 1.0, 4.0);
  ASSERT_FALSE(out.refused) << out.refusal_reason;
  EXPECT_LE(max_abs(*out.rho, rho), 1e-6);

  // With every reading at one point the spatial factors no longer help.
  const auto blind = evolve_diagonal_series(rho, std::vector<double>(16, 0.0), tomography_t_points(16));
  const auto refused = tomography_solve(blind, p, 1.0, 4.0);
  EXPECT_TRUE(refused.refused);
  EXPECT_FALSE(refused.degenerate_pairs.empty());
}

TEST(Tomography, DiagonalTruth) {
  std::vector<double> p;
  for (int j = -4; j < 4; ++j) p.push_back(j / 4.0);
  DensityMatrix rho{p, ComplexVector(64), 1.0, 4.0};
  for (std::size_t j = 0; j < 8; ++j) rho(j, j) = (1.0 + static_cast<double>(j)) / 36.0;
  const auto samples = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), tomography_t_points(16));
  const auto out = tomography_solve(samples, p, 1.0, 4.0);
  ASSERT_TRUE(out.rho);
  EXPECT_FALSE(out.populations_inferred);
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t k = 0; k < 8; ++k)
      if (j != k) ASSERT_LE(std::abs((*out.rho)(j, k)), 1e-8);
  EXPECT_NEAR(out.rho->trace().real(), 1.0, 1e-10);
}

TEST(Tomography, TooFewSamplesRefused) {
  std::vector<double> p = {-0.25, 0.0, 0.25};
  const DensityMatrix rho{p, ComplexVector(9, Complex{1.0 / 3.0}), 1.0, 4.0};
  const auto samples = evolve_diagonal_series(rho, {0.0, 1.0}, {0.0, 1.0});
  EXPECT_TRUE(tomography_solve(samples, p, 1.0, 4.0).refused);
}

TEST(Tomography, Deterministic) {
  const auto rho = build_density(box_state(9), kWindows.p_band);
  const auto samples = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), tomography_t_points(16));
  const auto a = tomography_solve(samples, rho.p_grid, 1.0, 4.0);
  const auto b = tomography_solve(samples, rho.p_grid, 1.0, 4.0);
  EXPECT_EQ(a.rho->elements, b.rho->elements);
  std::stringstream sa, sb;
  write_density_csv(sa, *a.rho);
  write_density_csv(sb, *b.rho);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, 9), "j,k,re,im");
}

TEST(Rank1, ExactInput) {
  const auto psi = normalize(box_state(4)).psi;
  const auto out = rank1_extract(build_density(psi, kWindows.p_band), kBox);
  ASSERT_FALSE(out.refused);
  EXPECT_GE(fidelity(out.state->psi, psi), 1.0 - 1e-10);
  std::size_t largest = 0;
  for (std::size_t j = 1; j < out.coefficients.size(); ++j)
    if (std::abs(out.coefficients[j]) > std::abs(out.coefficients[largest])) largest = j;
  EXPECT_EQ(out.coefficients[largest].imag(), 0.0);
  EXPECT_GT(out.coefficients[largest].real(), 0.0);
  EXPECT_NEAR(out.eigenvalues[0], 1.0, 1e-12);
}

TEST(Rank1, MixedStateRefused) {
  const DensityMatrix mixed{{-0.25, 0.0}, {0.5, 0.0, 0.0, 0.5}, 1.0, 4.0};
  const auto out = rank1_extract(mixed, kBox);
  EXPECT_TRUE(out.refused);
  EXPECT_FALSE(out.state);
  EXPECT_EQ(out.eigenvalues.size(), 2u);
  EXPECT_THROW(rank1_extract(mixed, kGrid), PreconditionError);
}

TEST(Pipeline, EndToEnd) {
  const auto psi_p = normalize(box_state(21)).psi;
  const auto psi_m = gate_state(psi_p, kWindows);
  const auto smooth = momentum_smooth(psi_m.psi, kWindows);
  const auto rho = build_density(smooth.psi, kWindows.p_band);
  const auto samples = evolve_diagonal_series(rho, tomography_x_points(-2.0, 4.0, 16), tomography_t_points(16));
  const auto tomo = tomography_solve(samples, rho.p_grid, rho.mass, rho.box_length);
  ASSERT_FALSE(tomo.refused) << tomo.refusal_reason;
  const auto extracted = rank1_extract(*tomo.rho, kBox);
  ASSERT_FALSE(extracted.refused) << extracted.refusal_reason;
  const auto recovered = recover_state(extracted.state->psi, kWindows);
  ASSERT_FALSE(recovered.refused) << recovered.refusal_reason;
  EXPECT_GE(fidelity(recovered.state->psi, psi_p), 1.0 - 1e-6);
}
