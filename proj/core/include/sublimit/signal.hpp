#ifndef SUBLIMIT_SIGNAL_HPP
#define SUBLIMIT_SIGNAL_HPP

// Uniform-grid signals and spectra.
//
// Conventions: <t|w> = exp(-2 pi i w t), so the forward transform (t -> w)
// carries exp(+2 pi i w t).  Both transforms are Riemann sums with explicit
// dt / dw weights, which makes discrete L2 norms approximate continuum ones.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sublimit {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Contiguous half-open index range [first, last).
struct IndexRange {
  std::ptrdiff_t first = 0;
  std::ptrdiff_t last = 0;

  std::ptrdiff_t size() const { return last > first ? last - first : 0; }
  bool empty() const { return size() == 0; }
  bool contains(std::ptrdiff_t i) const { return i >= first && i < last; }
};

/// Interval [center - width/2, center + width/2), half-open at the right edge.
/// A zero width denotes the empty set.
class Interval {
 public:
  Interval() = default;
  Interval(double center, double width);

  double center() const { return center_; }
  double width() const { return width_; }
  double lower() const { return center_ - 0.5 * width_; }
  double upper() const { return center_ + 0.5 * width_; }
  bool empty() const { return width_ == 0.0; }

 private:
  double center_ = 0.0;
  double width_ = 0.0;
};

/// Uniform time (or coordinate) grid t_k = t_start + k dt, k = 0..n-1.
/// The dual frequency grid has spacing dw = 1/(n dt) and frequencies m dw
/// for m = -n/2 .. n/2-1, stored in that (centered) order.
class TimeGrid {
 public:
  TimeGrid(double t_start, double dt, std::size_t n);

  /// t in [-32, 32), n = 4096: dt = dw = 1/64.
  static TimeGrid desk_default();

  double t_start() const { return t_start_; }
  double dt() const { return dt_; }
  std::size_t size() const { return n_; }
  double span() const { return dt_ * static_cast<double>(n_); }
  double t_end() const { return t_start_ + span(); }
  double time(std::size_t k) const { return t_start_ + dt_ * static_cast<double>(k); }

  double dw() const { return 1.0 / span(); }
  /// Signed frequency index m of centered bin i.
  std::ptrdiff_t frequency_index(std::size_t i) const {
    return static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(n_ / 2);
  }
  double frequency(std::size_t i) const { return dw() * static_cast<double>(frequency_index(i)); }
  double nyquist() const { return 0.5 * static_cast<double>(n_) * dw(); }

  /// Samples whose time lies in the interval. Throws PreconditionError when
  /// the interval is not inside [t_start, t_end).
  IndexRange samples_in(const Interval& window) const;
  /// Centered frequency bins whose center lies in the interval. Throws
  /// PreconditionError when the band exceeds the Nyquist range.
  IndexRange bins_in(const Interval& band) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_start_;
  double dt_;
  std::size_t n_;
};

/// Complex amplitudes on a TimeGrid.
class SampledSignal {
 public:
  SampledSignal(TimeGrid grid, ComplexVector values);
  /// All-zero signal.
  explicit SampledSignal(TimeGrid grid);

  const TimeGrid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t k) const { return values_[k]; }

  ComplexVector release() && { return std::move(values_); }

 private:
  TimeGrid grid_;
  ComplexVector values_;
};

/// Complex amplitudes on the frequency grid dual to `grid`, centered order.
class Spectrum {
 public:
  Spectrum(TimeGrid grid, ComplexVector values);
  explicit Spectrum(TimeGrid grid);

  const TimeGrid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  double frequency(std::size_t i) const { return grid_.frequency(i); }

  ComplexVector release() && { return std::move(values_); }

 private:
  TimeGrid grid_;
  ComplexVector values_;
};

/// s_hat(w_m) = sum_k s(t_k) exp(2 pi i w_m t_k) dt on the dual grid.
Spectrum forward_spectrum(const SampledSignal& s);
/// s(t_k) = sum_m S(w_m) exp(-2 pi i w_m t_k) dw. Exact inverse of forward_spectrum.
SampledSignal inverse_signal(const Spectrum& spectrum);

/// Hermitian inner product <a, b> = sum conj(a_k) b_k dt.
Complex inner_product(const SampledSignal& a, const SampledSignal& b);
double l2_norm(const SampledSignal& s);
/// Same with dw weights.
Complex inner_product(const Spectrum& a, const Spectrum& b);
double l2_norm(const Spectrum& s);

/// dt-weighted L2 norm restricted to a sample range.
double l2_norm(const SampledSignal& s, IndexRange samples);
/// dw-weighted L2 norm restricted to a bin range.
double l2_norm(const Spectrum& s, IndexRange bins);

/// 2(1 - cos 2 pi t)/(2 pi t)^2 = sinc^2(t), with s(0) = 1. Its spectrum is the
/// triangle max(0, 1 - |w|). Requires the grid to cover [-16, 16].
SampledSignal make_demo_signal(const TimeGrid& grid);

// Pointwise helpers used across modules.
SampledSignal operator+(const SampledSignal& a, const SampledSignal& b);
SampledSignal operator-(const SampledSignal& a, const SampledSignal& b);
SampledSignal operator*(Complex scale, const SampledSignal& s);
Spectrum operator-(const Spectrum& a, const Spectrum& b);

/// Normalized sinc: sin(pi x)/(pi x), 1 at 0.
double sinc(double x);

}  // namespace sublimit

#endif  // SUBLIMIT_SIGNAL_HPP
