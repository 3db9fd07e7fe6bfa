#include "sublimit/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "sublimit/error.hpp"

namespace sublimit {
namespace {

// Bin-membership slack in units of one grid step.
constexpr double kEdgeSlack = 1e-9;

// exp(2 pi i cycles), with the argument reduced first so large products of
// index and offset keep full precision.
Complex unit_phase(double cycles) {
  return std::polar(1.0, 2.0 * std::numbers::pi * std::remainder(cycles, 1.0));
}

std::size_t wrap_index(std::ptrdiff_t m, std::size_t n) {
  const auto nn = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((m % nn) + nn) % nn);
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!(a == b)) throw ShapeError(std::string(what) + ": operands are on different grids");
}

}  // namespace

Interval::Interval(double center, double width) : center_(center), width_(width) {
  if (!std::isfinite(center) || !std::isfinite(width) || width < 0.0)
    throw PreconditionError("interval: width must be finite and >= 0");
}

TimeGrid::TimeGrid(double t_start, double dt, std::size_t n) : t_start_(t_start), dt_(dt), n_(n) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t_start))
    throw PreconditionError("time grid: dt must be positive and finite");
  if (n < 2 || n % 2 != 0) throw PreconditionError("time grid: n must be even and >= 2");
}

TimeGrid TimeGrid::desk_default() { return TimeGrid(-32.0, 1.0 / 64.0, 4096); }

IndexRange TimeGrid::samples_in(const Interval& window) const {
  const double tol = kEdgeSlack * dt_;
  if (window.lower() < t_start_ - tol || window.upper() > t_end() + tol)
    throw PreconditionError("time window [" + std::to_string(window.lower()) + ", " +
                            std::to_string(window.upper()) + ") lies outside the grid span");
  const auto first = static_cast<std::ptrdiff_t>(std::ceil((window.lower() - t_start_) / dt_ - kEdgeSlack));
  const auto last = static_cast<std::ptrdiff_t>(std::ceil((window.upper() - t_start_) / dt_ - kEdgeSlack));
  const auto n = static_cast<std::ptrdiff_t>(n_);
  return {std::clamp<std::ptrdiff_t>(first, 0, n), std::clamp<std::ptrdiff_t>(std::max(first, last), 0, n)};
}

IndexRange TimeGrid::bins_in(const Interval& band) const {
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  const auto m_first = static_cast<std::ptrdiff_t>(std::ceil(band.lower() / dw() - kEdgeSlack));
  const auto m_last = static_cast<std::ptrdiff_t>(std::ceil(band.upper() / dw() - kEdgeSlack));
  if (m_first < -half || m_last > half)
    throw PreconditionError("band [" + std::to_string(band.lower()) + ", " + std::to_string(band.upper()) +
                            ") exceeds the Nyquist range +-" + std::to_string(nyquist()));
  return {m_first + half, std::max(m_first, m_last) + half};
}

SampledSignal::SampledSignal(TimeGrid grid, ComplexVector values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ShapeError("sampled signal: " + std::to_string(values_.size()) + " values for a grid of " +
                     std::to_string(grid_.size()));
}

SampledSignal::SampledSignal(TimeGrid grid) : grid_(grid), values_(grid.size()) {}

Spectrum::Spectrum(TimeGrid grid, ComplexVector values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ShapeError("spectrum: " + std::to_string(values_.size()) + " values for a grid of " +
                     std::to_string(grid_.size()));
}

Spectrum::Spectrum(TimeGrid grid) : grid_(grid), values_(grid.size()) {}

Spectrum forward_spectrum(const SampledSignal& s) {
  const TimeGrid& grid = s.grid();
  const std::size_t n = grid.size();
  ComplexVector raw(n);
  detail::dft(s.values(), raw, detail::FftSign::kPositive);

  ComplexVector out(n);
  const double offset_cycles_per_bin = grid.t_start() * grid.dw();
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t m = grid.frequency_index(i);
    out[i] = grid.dt() * unit_phase(static_cast<double>(m) * offset_cycles_per_bin) * raw[wrap_index(m, n)];
  }
  return Spectrum(grid, std::move(out));
}

SampledSignal inverse_signal(const Spectrum& spectrum) {
  const TimeGrid& grid = spectrum.grid();
  const std::size_t n = grid.size();
  ComplexVector wrapped(n);
  const double offset_cycles_per_bin = grid.t_start() * grid.dw();
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t m = grid.frequency_index(i);
    wrapped[wrap_index(m, n)] = spectrum[i] * unit_phase(-static_cast<double>(m) * offset_cycles_per_bin);
  }
  ComplexVector out(n);
  detail::dft(wrapped, out, detail::FftSign::kNegative);
  for (auto& v : out) v *= grid.dw();
  return SampledSignal(grid, std::move(out));
}

Complex inner_product(const SampledSignal& a, const SampledSignal& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  Complex acc{};
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
  return acc * a.grid().dt();
}

double l2_norm(const SampledSignal& s) { return l2_norm(s, IndexRange{0, static_cast<std::ptrdiff_t>(s.size())}); }

double l2_norm(const SampledSignal& s, IndexRange samples) {
  double acc = 0.0;
  for (auto k = samples.first; k < samples.last; ++k) acc += std::norm(s[static_cast<std::size_t>(k)]);
  return std::sqrt(acc * s.grid().dt());
}

Complex inner_product(const Spectrum& a, const Spectrum& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  Complex acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc * a.grid().dw();
}

double l2_norm(const Spectrum& s) { return l2_norm(s, IndexRange{0, static_cast<std::ptrdiff_t>(s.size())}); }

double l2_norm(const Spectrum& s, IndexRange bins) {
  double acc = 0.0;
  for (auto i = bins.first; i < bins.last; ++i) acc += std::norm(s[static_cast<std::size_t>(i)]);
  return std::sqrt(acc * s.grid().dw());
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

SampledSignal make_demo_signal(const TimeGrid& grid) {
  // Tail energy beyond |t| = 16 is below 1e-6 of the total.
  if (grid.t_start() > -16.0 || grid.t_end() < 16.0)
    throw PreconditionError("demo signal: grid must span at least [-16, 16]");
  ComplexVector values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = sinc(grid.time(k));
    values[k] = s * s;
  }
  return SampledSignal(grid, std::move(values));
}

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b) {
  require_same_grid(a.grid(), b.grid(), "signal sum");
  ComplexVector out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return SampledSignal(a.grid(), std::move(out));
}

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
  require_same_grid(a.grid(), b.grid(), "signal difference");
  ComplexVector out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return SampledSignal(a.grid(), std::move(out));
}

SampledSignal operator*(Complex scale, const SampledSignal& s) {
  ComplexVector out(s.values().begin(), s.values().end());
  for (auto& v : out) v *= scale;
  return SampledSignal(s.grid(), std::move(out));
}

Spectrum operator-(const Spectrum& a, const Spectrum& b) {
  require_same_grid(a.grid(), b.grid(), "spectrum difference");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return Spectrum(a.grid(), std::move(out));
}

}  // namespace sublimit
