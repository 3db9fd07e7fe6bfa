#ifndef SUBLIMIT_PROJECTIONS_HPP
#define SUBLIMIT_PROJECTIONS_HPP

// Band and time-gate projectors, the smearing kernel, concentration ratios
// and the operator norm of the concentration operator P_W P_T P_W.

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sublimit/signal.hpp"

namespace sublimit {

/// P_W: zero every spectrum bin whose center lies outside the band.
struct BandProjector {
  Interval band;

  SampledSignal operator()(const SampledSignal& s) const;
  Spectrum operator()(const Spectrum& s) const;
};

/// P_T: zero every sample outside the window.
struct GateProjector {
  Interval window;

  SampledSignal operator()(const SampledSignal& s) const;
};

SampledSignal band_project(const SampledSignal& s, const Interval& band);
Spectrum band_project(const Spectrum& s, const Interval& band);
/// Projection onto an explicit set of centered bins.
SampledSignal band_project(const SampledSignal& s, IndexRange bins);
/// Projection onto the complement of the band, 1 - P_W.
SampledSignal band_reject(const SampledSignal& s, const Interval& band);

SampledSignal time_gate(const SampledSignal& s, const Interval& window);
/// 1 - P_T: zero the samples inside the window.
SampledSignal complement_gate(const SampledSignal& s, const Interval& window);
SampledSignal time_gate(const SampledSignal& s, IndexRange samples);
SampledSignal complement_gate(const SampledSignal& s, IndexRange samples);

/// G(dt; W) = integral over [W] of exp(-2 pi i w dt) dw
///          = W exp(-2 pi i w0 dt) sinc(W dt).
Complex smear_response(const Interval& band, double delta_t);

/// Grid-exact gate kernel: dt * sum_{k in window} exp(2 pi i u t_k) for the
/// frequency offset u = bin_offset * dw. The discrete counterpart of
/// T sinc(T u) exp(2 pi i u t0).
Complex gate_kernel(const TimeGrid& grid, IndexRange samples, std::ptrdiff_t bin_offset);

/// <P_W s, P_T P_W s> / ||P_W s||^2. Throws PreconditionError on zero
/// in-band energy.
double concentration_ratio(const SampledSignal& s, const Interval& band, const Interval& window);
/// Roles interchanged: <P_T s, P_W P_T s> / ||P_T s||^2. Throws on zero
/// in-window energy.
double time_concentration_ratio(const SampledSignal& s, const Interval& band, const Interval& window);

/// <s_W|P_T (1 - P_W) P_T|s_W> / <s_W|P_T|s_W>, the out-of-band fraction of
/// the gated segment. Bounded below by 1 - WT.
double band_spill_ratio(const SampledSignal& s_w, const Interval& window, const Interval& band);

/// <r|P_Tc P_W P_Tc|r> / <r|P_Tc|r>. Equal to 1 only if the segment is
/// consistent with the band, which needs |T_c| W >= 1.
double segment_compatibility(const SampledSignal& r, const Interval& window, const Interval& band);

/// Conservative discretization slack for continuum bounds:
/// 10 dt (W + 1/T). Infinite for an empty window.
double grid_slack(const TimeGrid& grid, const Interval& band, const Interval& window);

/// P_W P_T P_W restricted to the in-band spectral coefficients. Hermitian
/// and positive semidefinite; its trace is (#bins)(#samples) dt dw.
class ConcentrationOperator {
 public:
  ConcentrationOperator(const TimeGrid& grid, IndexRange bins, IndexRange samples);
  ConcentrationOperator(const TimeGrid& grid, const Interval& band, const Interval& window);

  std::size_t dimension() const { return static_cast<std::size_t>(bins_.size()); }
  const TimeGrid& grid() const { return grid_; }
  IndexRange bins() const { return bins_; }
  IndexRange samples() const { return samples_; }

  /// out = B in, for in-band coefficient vectors of length dimension().
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  ComplexVector apply(std::span<const Complex> in) const;
  /// Row-major dense matrix, entries dt dw sum_k exp(2 pi i (w_a - w_b) t_k).
  ComplexVector dense() const;
  double trace() const;

  /// Embeds in-band coefficients into a full spectrum and back.
  Spectrum embed(std::span<const Complex> coefficients) const;
  ComplexVector restrict_to_band(const Spectrum& s) const;

 private:
  TimeGrid grid_;
  IndexRange bins_;
  IndexRange samples_;
};

struct PowerIterationOptions {
  double tolerance = 1e-12;  // relative change of the Rayleigh quotient
  std::size_t max_iterations = 10000;
};

struct PowerIterationResult {
  double lambda0 = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// lambda0 - lambda1 estimated from the observed convergence rate; NaN
  /// when too few iterations were taken to tell.
  double gap_estimate = 0.0;
  std::vector<double> rayleigh_history;
  /// Unit-norm in-band eigenvector estimate. Not meaningful when the top
  /// eigenvalue is degenerate.
  ComplexVector eigenvector;
};

/// Largest eigenvalue of P_W P_T P_W (= ||P_T P_W||^2) by power iteration from
/// the in-band-uniform start vector. Non-convergence is reported through
/// `converged`, with the last Rayleigh quotient and gap estimate kept.
PowerIterationResult operator_norm_sq(const TimeGrid& grid, const Interval& band, const Interval& window,
                                      const PowerIterationOptions& options = {});
PowerIterationResult power_iteration(const ConcentrationOperator& op, const PowerIterationOptions& options = {});

struct BoundsAuditRow {
  double band_width = 0.0;
  double window_width = 0.0;
  double wt = 0.0;
  double lambda0 = 0.0;
  double conc_ratio = 0.0;
  double spill_ratio = 0.0;
  double eps_grid = 0.0;
  bool pass = false;
};

/// Audits lambda0 <= WT + eps, concentration <= WT + eps and
/// spill >= 1 - WT - eps for each (W, T), using `probe` (band-projected onto
/// each W) as the test signal. Bands and windows are centered at 0.
std::vector<BoundsAuditRow> bounds_audit(const SampledSignal& probe,
                                         std::span<const std::pair<double, double>> band_window_pairs);

/// Columns W,T,WT,lambda0,conc_ratio,spill_ratio,eps_grid,pass.
void write_bounds_audit_csv(std::ostream& out, std::span<const BoundsAuditRow> rows);

}  // namespace sublimit

#endif  // SUBLIMIT_PROJECTIONS_HPP
