#ifndef SUBLIMIT_SAMPLING_HPP
#define SUBLIMIT_SAMPLING_HPP

// Comb sampling, sinc reconstruction, periodization and spectral-copy
// recovery of a bandlimited spectrum from a signal with an erased interval.
//
// The grid is treated as periodic throughout: a comb covers the whole grid,
// and its sinc series is the periodized one. Comb periods must be integer
// multiples of dt that divide the grid length, so every operation here is
// exact up to rounding.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublimit/signal.hpp"

namespace sublimit {

/// Samples c_k = s(origin + k period) for every comb instant on the grid.
struct CombSamples {
  TimeGrid grid;
  double period = 0.0;
  double origin = 0.0;
  /// Comb indices k covered, [first, last).
  IndexRange offsets;
  ComplexVector values;
  std::string source_label;

  double instant(std::ptrdiff_t k) const { return origin + static_cast<double>(k) * period; }
  /// Grid sample index of comb instant k.
  std::size_t sample_index(std::ptrdiff_t k) const;
};

/// Rejects periods that are not a multiple of dt or do not divide the grid
/// length, and origins off the grid.
CombSamples comb_sample(const SampledSignal& s, double period, double origin = 0.0, std::string source_label = "s");

/// The weighted comb sum_k period delta(t - t_k) c_k on the grid.
SampledSignal weighted_comb(const CombSamples& c);

/// Periodized sinc series sum_k c_k h_T(t - t_k), evaluated as P_{W'} of the
/// weighted comb with [W'] = [-1/(2T), 1/(2T)). Reproduces c exactly.
SampledSignal sinc_reconstruct(const CombSamples& c);
/// P_W of the sinc reconstruction. Rejects bands not contained in [W'].
SampledSignal band_interpolate(const CombSamples& c, const Interval& band);
/// sum_k T exp(2 pi i w t_k) c_k on the dense frequency grid.
Spectrum periodized_spectrum(const CombSamples& c);

struct SpectralCopyConfig {
  std::size_t k_max = 8;
  Interval band;
  double t_sn = 0.0;
  double t_ds = 0.0;
  /// The erased interval; no comb instant may fall inside it.
  Interval gate;
  double comb_origin = 0.0;
  /// Accept t_ds == t_sn when both are below 1/W.
  bool allow_equal_periods = false;
};

struct SpectralCopyResult {
  /// Truncated copy sum, zero outside the band.
  Spectrum spectrum;
  std::size_t k_max_requested = 0;
  std::size_t k_max_used = 0;
  /// Largest order whose shifted copies stay inside the Nyquist range.
  std::size_t k_max_limit = 0;
  bool clipped = false;
  /// In-band L2 norm of the k = k_max_used pair of terms.
  double last_term_norm = 0.0;
  /// In-band L2 norm of the terms k_max_used < k <= k_max_limit.
  double remaining_terms_norm = 0.0;
};

/// s_hat(w) = P_W sum_{|k| <= k_max} exp(2 pi i k origin / T_SN) r_hat(w - k/T_SN).
/// Valid for any r that agrees with s_W on the comb. Throws
/// PreconditionError when the configuration is inconsistent.
SpectralCopyResult spectral_copy_recover(const SampledSignal& r, const SpectralCopyConfig& cfg);

struct FirstOrderApprox {
  /// P_W r_hat.
  Spectrum approx;
  /// First-order model s_hat(w) ~ P_W r_hat(w) + offset exp(2 pi i w t0);
  /// offset = T_DS (P_W r)(t0) / (1 - W T_DS), i.e. W T_DS mean(s_hat) for t0 = 0.
  Complex predicted_offset;
  double wt = 0.0;
  /// W T_DS >= 1: P_W r_hat is no longer a perturbation of s_hat.
  bool distorted = false;
  std::optional<std::string> warning;  // set when W T_DS > 0.25
};

FirstOrderApprox band_approx_first_term(const SampledSignal& r, const Interval& band, const Interval& gate);

/// || r_hat - [s_hat - int_[W] K(w - w') s_hat(w') dw'] ||_[W], with K the
/// grid-exact gate kernel. Vanishes for r = erase(s_W).
double integral_equation_residual(const Spectrum& s_hat, const Spectrum& r_hat, const Interval& band,
                                  const Interval& gate);

struct Fig2Column {
  std::string name;
  Spectrum values;
};

/// Header `w,<name>,<name>_im,...`, one row per bin of the band.
void write_fig2_csv(std::ostream& out, const Interval& band, std::span<const Fig2Column> columns);

}  // namespace sublimit

#endif  // SUBLIMIT_SAMPLING_HPP
