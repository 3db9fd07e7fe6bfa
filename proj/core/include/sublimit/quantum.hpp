#ifndef SUBLIMIT_QUANTUM_HPP
#define SUBLIMIT_QUANTUM_HPP

// Coordinate/momentum analogue of the erasure problem, in units 2 pi hbar = 1.
//
// A TimeGrid doubles as the coordinate grid. With <x|p> = exp(2 pi i p x) the
// momentum amplitude at p is the grid spectrum at w = -p, so momentum bands
// are mapped onto mirrored frequency bins.
//
// The density-matrix pipeline works on a periodic box of length L whose
// in-band momentum bins p_j = j / L carry the state; the free evolution is
//   rho(x, t) = (1/L) sum_jk exp(2 pi i (p_j - p_k) x) exp(-i (w_j - w_k) t) rho_jk
// with w(p) = p^2 / (2 m).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sublimit/signal.hpp"

namespace sublimit {

struct WaveFunction {
  SampledSignal psi;
  bool normalized = false;
};

/// Normalized copy; throws on a zero state.
WaveFunction normalize(const SampledSignal& psi);

struct PhaseSpaceWindows {
  Interval x_window;  // [X]
  Interval p_band;    // [P]
};

/// Frequency bins of the grid that carry momenta in the half-open band.
IndexRange momentum_bins(const TimeGrid& grid, const Interval& p_band);
/// P_P and 1 - P_P.
SampledSignal momentum_project(const SampledSignal& psi, const Interval& p_band);
SampledSignal momentum_reject(const SampledSignal& psi, const Interval& p_band);

/// |<a|b>| / (||a|| ||b||).
double fidelity(const SampledSignal& a, const SampledSignal& b);

/// <psi|P_P P_X P_P|psi> / <psi|P_P|psi>. Throws on zero in-band energy.
double landau_pollak_ratio(const SampledSignal& psi, const PhaseSpaceWindows& windows);

/// (1 - P_X) psi_P, normalized. psi_P must be momentum-limited to 1e-10.
WaveFunction gate_state(const SampledSignal& psi_p, const PhaseSpaceWindows& windows);
/// P_P psi_M, normalized.
WaveFunction momentum_smooth(const SampledSignal& psi_m, const PhaseSpaceWindows& windows);

struct StateRecovery {
  std::optional<WaveFunction> state;
  double lambda0 = 0.0;
  double px = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool refused = false;
  std::string refusal_reason;
};

/// Neumann series sum_k (P_P P_X P_P)^k P_P psi, then normalization. Refuses
/// when PX >= 1 or lambda0 > 1 - 1e-6.
StateRecovery recover_state(const SampledSignal& psi, const PhaseSpaceWindows& windows, double tolerance = 1e-12);

struct DensityMatrix {
  std::vector<double> p_grid;
  /// Row-major, size p_grid.size()^2.
  ComplexVector elements;
  double mass = 1.0;
  double box_length = 0.0;

  std::size_t dimension() const { return p_grid.size(); }
  Complex& operator()(std::size_t j, std::size_t k) { return elements[j * dimension() + k]; }
  const Complex& operator()(std::size_t j, std::size_t k) const { return elements[j * dimension() + k]; }
  Complex trace() const;
};

/// Momentum coefficients c_j = psi_hat(-p_j) / sqrt(L) of a state on a box of
/// length L = grid span, for the in-band p_j.
ComplexVector momentum_coefficients(const SampledSignal& psi, const Interval& p_band);
/// |c><c| for a normalized state. Rejects states whose out-of-band weight
/// exceeds 1e-6.
DensityMatrix build_density(const SampledSignal& psi, const Interval& p_band, double mass = 1.0);

struct EvolutionSamples {
  std::vector<double> x_points;
  std::vector<double> t_points;
  /// values[n * x_points.size() + i] = rho(x_i, t_n).
  std::vector<double> values;

  double at(std::size_t t_index, std::size_t x_index) const { return values[t_index * x_points.size() + x_index]; }
};

EvolutionSamples evolve_diagonal_series(const DensityMatrix& rho, const std::vector<double>& x_points,
                                        const std::vector<double>& t_points);

struct TomographyResult {
  std::optional<DensityMatrix> rho;
  double condition_number = 0.0;
  double residual = 0.0;
  /// Populations completed from the off-diagonals (pure-state relation).
  bool populations_inferred = false;
  bool psd_projected = false;
  bool refused = false;
  std::string refusal_reason;
  /// Index pairs (j,k),(j',k') whose design columns coincide.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>> degenerate_pairs;
};

/// Least-squares fit of trace and off-diagonal elements to the diagonal
/// readings; populations follow from |rho_jj| = |rho_jk||rho_jl| / |rho_kl|.
TomographyResult tomography_solve(const EvolutionSamples& samples, const std::vector<double>& p_grid, double mass,
                                  double box_length);

struct Rank1Result {
  std::optional<WaveFunction> state;
  ComplexVector coefficients;
  /// Descending.
  std::vector<double> eigenvalues;
  bool refused = false;
  std::string refusal_reason;
};

/// Principal eigenvector, largest coefficient real positive, synthesized on
/// `box` (span must equal rho.box_length). Refuses when the second
/// eigenvalue exceeds 1e-6.
Rank1Result rank1_extract(const DensityMatrix& rho, const TimeGrid& box);

/// Wave function sum_j c_j exp(2 pi i p_j x) / sqrt(L) on the box grid.
SampledSignal synthesize_state(const TimeGrid& box, const std::vector<double>& p_grid, const ComplexVector& c);

/// Uniform coordinate points x_i = x0 + i L / count and times t_n = 2 pi n.
std::vector<double> tomography_x_points(double x0, double box_length, std::size_t count);
std::vector<double> tomography_t_points(std::size_t count);

/// Columns j,k,re,im.
void write_density_csv(std::ostream& out, const DensityMatrix& rho);

/// Fixed-seed random pure state with unit-norm momentum coefficients.
ComplexVector random_coefficients(std::size_t m, std::uint64_t seed);

}  // namespace sublimit

#endif  // SUBLIMIT_QUANTUM_HPP
