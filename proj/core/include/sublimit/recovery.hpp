#ifndef SUBLIMIT_RECOVERY_HPP
#define SUBLIMIT_RECOVERY_HPP

// Erasure channel r = (1 - P_T) s_W + n and its inversion.
//
// Two Neumann routes solve the same system:
//   s_W = sum_k (P_T P_W)^k r                 (time-domain form)
//   s_W = sum_k (P_W P_T)^k P_W r             (band-limited form)
// and a dense solve in the in-band spectral basis cross-checks both.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublimit/signal.hpp"

namespace sublimit {

struct ErasureModel {
  Interval window;       // unobserved interval [T]
  Interval source_band;  // [W]
  /// Observational noise; must vanish on the window.
  std::optional<SampledSignal> noise;
};

/// r = complement_gate(s_W) + noise. Rejects s_W that is not bandlimited to
/// model.source_band (relative leak > 1e-10) and noise that is nonzero on
/// the window.
SampledSignal erase(const SampledSignal& s_w, const ErasureModel& model);

struct InvertibilityReport {
  double lambda0 = 0.0;
  double wt = 0.0;
  bool wt_below_one = false;
  bool lambda_below_one = false;  // lambda0 <= 1 - 1e-6
  bool invertible = false;
  std::string reason;  // empty when invertible
};

InvertibilityReport invertibility_report(const TimeGrid& grid, const Interval& band, const Interval& window);

struct SolverOptions {
  double tolerance = 1e-10;  // relative update ||x_{k+1} - x_k|| / ||x_{k+1}||
  /// Defaults to ceil(log(tol)/log(sqrt(WT))) + 50.
  std::optional<std::size_t> max_iterations;
  /// Called with (iteration, iterate) after each update.
  std::function<void(std::size_t, const SampledSignal&)> on_iterate;
};

std::size_t default_max_iterations(double tolerance, double wt);

struct RecoveryReport {
  std::optional<SampledSignal> recovered;  // absent when refused
  std::size_t iterations = 0;
  std::vector<double> residual_history;
  /// Largest observed ratio of successive residuals.
  double contraction_estimate = 0.0;
  bool converged = false;
  /// Set when the residual stopped decreasing before reaching tolerance.
  bool stalled = false;
  bool refused = false;
  std::string refusal_reason;
  InvertibilityReport invertibility;
};

RecoveryReport recover_neumann(const SampledSignal& r, const Interval& band, const Interval& window,
                               const SolverOptions& options = {});
RecoveryReport recover_band_neumann(const SampledSignal& r, const Interval& band, const Interval& window,
                                    const SolverOptions& options = {});

struct DirectRecoveryResult {
  std::optional<SampledSignal> recovered;
  double condition_number = 0.0;
  std::size_t dimension = 0;
  bool refused = false;
  std::string refusal_reason;
};

/// Solves (I - B) c = (P_W r)_band with B the in-band concentration matrix.
/// Refuses when not invertible, when the in-band dimension exceeds 4096, or
/// when cond(I - B) > 1e12.
DirectRecoveryResult recover_direct(const SampledSignal& r, const Interval& band, const Interval& window);

struct StabilityRow {
  double sigma = 0.0;
  double error = 0.0;
  double amplification = 0.0;  // error / sigma; 0 for sigma = 0
  double bound = 0.0;          // 1.1 / (1 - sqrt(lambda0))
  bool pass = false;
};

struct StabilitySweep {
  std::vector<StabilityRow> rows;
  std::uint64_t seed = 0;
  bool refused = false;
  std::string refusal_reason;
};

/// White noise on the complement of the window, fixed seed, scaled to each L2
/// norm sigma; recovered with recover_neumann.
StabilitySweep noise_stability_sweep(const SampledSignal& s_w, const Interval& band, const Interval& window,
                                     std::span<const double> noise_levels, std::uint64_t seed,
                                     double tolerance = 1e-12);

/// Unit-norm white noise supported off the window, from a fixed seed.
SampledSignal white_noise_off_window(const TimeGrid& grid, const Interval& window, std::uint64_t seed);

/// Columns iter,residual.
void write_residual_csv(std::ostream& out, const RecoveryReport& report);
/// Columns sigma,err,amplification,bound.
void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows);

}  // namespace sublimit

#endif  // SUBLIMIT_RECOVERY_HPP
