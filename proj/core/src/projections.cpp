#include "sublimit/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"

namespace sublimit {
namespace {

Complex unit_phase(double cycles) {
  return std::polar(1.0, 2.0 * std::numbers::pi * std::remainder(cycles, 1.0));
}

double energy(const SampledSignal& s) {
  const double norm = l2_norm(s);
  return norm * norm;
}

Spectrum keep_bins(const Spectrum& s, IndexRange bins) {
  ComplexVector out(s.size());
  for (auto i = bins.first; i < bins.last; ++i) out[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
  return Spectrum(s.grid(), std::move(out));
}

}  // namespace

SampledSignal BandProjector::operator()(const SampledSignal& s) const { return band_project(s, band); }
Spectrum BandProjector::operator()(const Spectrum& s) const { return band_project(s, band); }
SampledSignal GateProjector::operator()(const SampledSignal& s) const { return time_gate(s, window); }

SampledSignal band_project(const SampledSignal& s, IndexRange bins) {
  return inverse_signal(keep_bins(forward_spectrum(s), bins));
}

SampledSignal band_project(const SampledSignal& s, const Interval& band) {
  return band_project(s, s.grid().bins_in(band));
}

Spectrum band_project(const Spectrum& s, const Interval& band) { return keep_bins(s, s.grid().bins_in(band)); }

SampledSignal band_reject(const SampledSignal& s, const Interval& band) { return s - band_project(s, band); }

SampledSignal time_gate(const SampledSignal& s, IndexRange samples) {
  ComplexVector out(s.size());
  for (auto k = samples.first; k < samples.last; ++k) out[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)];
  return SampledSignal(s.grid(), std::move(out));
}

SampledSignal complement_gate(const SampledSignal& s, IndexRange samples) {
  ComplexVector out(s.values().begin(), s.values().end());
  for (auto k = samples.first; k < samples.last; ++k) out[static_cast<std::size_t>(k)] = Complex{};
  return SampledSignal(s.grid(), std::move(out));
}

SampledSignal time_gate(const SampledSignal& s, const Interval& window) {
  return time_gate(s, s.grid().samples_in(window));
}

SampledSignal complement_gate(const SampledSignal& s, const Interval& window) {
  return complement_gate(s, s.grid().samples_in(window));
}

Complex smear_response(const Interval& band, double delta_t) {
  return band.width() * unit_phase(-band.center() * delta_t) * sinc(band.width() * delta_t);
}

Complex gate_kernel(const TimeGrid& grid, IndexRange samples, std::ptrdiff_t bin_offset) {
  const auto count = samples.size();
  if (count == 0) return {};
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  const double first_time = grid.time(static_cast<std::size_t>(samples.first));
  const Complex lead = unit_phase(static_cast<double>(bin_offset) * grid.dw() * first_time);
  const std::ptrdiff_t reduced = ((bin_offset % n) + n) % n;
  if (reduced == 0) return grid.dt() * static_cast<double>(count) * lead;
  // Geometric sum of q^j, q = exp(2 pi i bin_offset / n), written in the
  // sin-ratio form to keep it accurate near q = 1.
  const double x = static_cast<double>(reduced) / static_cast<double>(n);
  const double c = static_cast<double>(count);
  const double ratio = std::sin(std::numbers::pi * x * c) / std::sin(std::numbers::pi * x);
  return grid.dt() * lead * unit_phase(0.5 * x * (c - 1.0)) * ratio;
}

double concentration_ratio(const SampledSignal& s, const Interval& band, const Interval& window) {
  const SampledSignal in_band = band_project(s, band);
  const double denom = energy(in_band);
  if (!(denom > 0.0)) throw PreconditionError("concentration_ratio: zero in-band energy");
  const double norm = l2_norm(in_band, s.grid().samples_in(window));
  return norm * norm / denom;
}

double time_concentration_ratio(const SampledSignal& s, const Interval& band, const Interval& window) {
  const SampledSignal gated = time_gate(s, window);
  const double denom = energy(gated);
  if (!(denom > 0.0)) throw PreconditionError("time_concentration_ratio: zero in-window energy");
  return energy(band_project(gated, band)) / denom;
}

double band_spill_ratio(const SampledSignal& s_w, const Interval& window, const Interval& band) {
  const double leak = l2_norm(band_reject(s_w, band));
  if (leak > 1e-8 * l2_norm(s_w)) throw PreconditionError("band_spill_ratio: input is not bandlimited to the band");
  const SampledSignal gated = time_gate(s_w, window);
  const double denom = energy(gated);
  if (!(denom > 0.0)) throw PreconditionError("band_spill_ratio: zero in-window energy");
  return energy(band_reject(gated, band)) / denom;
}

double segment_compatibility(const SampledSignal& r, const Interval& window, const Interval& band) {
  const SampledSignal gated = time_gate(r, window);
  const double denom = energy(gated);
  if (!(denom > 0.0)) throw PreconditionError("segment_compatibility: zero in-window energy");
  return energy(band_project(gated, band)) / denom;
}

double grid_slack(const TimeGrid& grid, const Interval& band, const Interval& window) {
  if (window.empty()) return std::numeric_limits<double>::infinity();
  return 10.0 * grid.dt() * (band.width() + 1.0 / window.width());
}

ConcentrationOperator::ConcentrationOperator(const TimeGrid& grid, IndexRange bins, IndexRange samples)
    : grid_(grid), bins_(bins), samples_(samples) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  if (bins.first < 0 || bins.last > n || samples.first < 0 || samples.last > n)
    throw PreconditionError("concentration operator: index ranges outside the grid");
}

ConcentrationOperator::ConcentrationOperator(const TimeGrid& grid, const Interval& band, const Interval& window)
    : ConcentrationOperator(grid, grid.bins_in(band), grid.samples_in(window)) {}

Spectrum ConcentrationOperator::embed(std::span<const Complex> coefficients) const {
  if (coefficients.size() != dimension()) throw ShapeError("concentration operator: wrong coefficient count");
  ComplexVector full(grid_.size());
  std::copy(coefficients.begin(), coefficients.end(), full.begin() + bins_.first);
  return Spectrum(grid_, std::move(full));
}

ComplexVector ConcentrationOperator::restrict_to_band(const Spectrum& s) const {
  return ComplexVector(s.values().begin() + bins_.first, s.values().begin() + bins_.last);
}

void ConcentrationOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (out.size() != dimension()) throw ShapeError("concentration operator: wrong output size");
  const SampledSignal gated = time_gate(inverse_signal(embed(in)), samples_);
  const Spectrum back = forward_spectrum(gated);
  std::copy(back.values().begin() + bins_.first, back.values().begin() + bins_.last, out.begin());
}

ComplexVector ConcentrationOperator::apply(std::span<const Complex> in) const {
  ComplexVector out(dimension());
  apply(in, out);
  return out;
}

ComplexVector ConcentrationOperator::dense() const {
  const std::size_t m = dimension();
  ComplexVector matrix(m * m);
  // Entries depend only on the bin offset a - b.
  ComplexVector by_offset(2 * m + 1);
  for (std::size_t d = 0; d < by_offset.size(); ++d)
    by_offset[d] = grid_.dw() * gate_kernel(grid_, samples_, static_cast<std::ptrdiff_t>(d) - static_cast<std::ptrdiff_t>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) matrix[a * m + b] = by_offset[a - b + m];
  return matrix;
}

double ConcentrationOperator::trace() const {
  return static_cast<double>(bins_.size()) * static_cast<double>(samples_.size()) * grid_.dt() * grid_.dw();
}

PowerIterationResult power_iteration(const ConcentrationOperator& op, const PowerIterationOptions& options) {
  PowerIterationResult result;
  const std::size_t m = op.dimension();
  result.gap_estimate = std::numeric_limits<double>::quiet_NaN();
  if (m == 0 || op.samples().empty()) {
    result.converged = true;
    result.eigenvector.assign(m, Complex{m > 0 ? 1.0 / std::sqrt(static_cast<double>(m)) : 0.0});
    return result;
  }

  ComplexVector v(m, Complex{1.0 / std::sqrt(static_cast<double>(m))});
  ComplexVector w(m);
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    op.apply(v, w);
    Complex rq{};
    double w_norm_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      rq += std::conj(v[i]) * w[i];
      w_norm_sq += std::norm(w[i]);
    }
    result.rayleigh_history.push_back(rq.real());
    result.lambda0 = rq.real();
    result.iterations = it;
    if (!(w_norm_sq > 0.0)) {
      result.converged = true;
      break;
    }
    const double scale = 1.0 / std::sqrt(w_norm_sq);
    for (std::size_t i = 0; i < m; ++i) v[i] = w[i] * scale;

    const auto& h = result.rayleigh_history;
    if (h.size() >= 2 && std::abs(h.back() - h[h.size() - 2]) <= options.tolerance * std::abs(h.back())) {
      result.converged = true;
      break;
    }
  }

  // Rayleigh quotients approach lambda0 like (lambda1/lambda0)^(2k).
  const auto& h = result.rayleigh_history;
  if (h.size() >= 3) {
    const double d1 = h[h.size() - 1] - h[h.size() - 2];
    const double d0 = h[h.size() - 2] - h[h.size() - 3];
    if (d0 != 0.0 && d1 / d0 > 0.0 && d1 / d0 < 1.0)
      result.gap_estimate = result.lambda0 * (1.0 - std::sqrt(d1 / d0));
  }
  result.eigenvector = std::move(v);
  return result;
}

PowerIterationResult operator_norm_sq(const TimeGrid& grid, const Interval& band, const Interval& window,
                                      const PowerIterationOptions& options) {
  return power_iteration(ConcentrationOperator(grid, band, window), options);
}

std::vector<BoundsAuditRow> bounds_audit(const SampledSignal& probe,
                                         std::span<const std::pair<double, double>> band_window_pairs) {
  std::vector<BoundsAuditRow> rows;
  rows.reserve(band_window_pairs.size());
  for (const auto& [w, t] : band_window_pairs) {
    const Interval band(0.0, w);
    const Interval window(0.0, t);
    BoundsAuditRow row;
    row.band_width = w;
    row.window_width = t;
    row.wt = w * t;
    row.eps_grid = grid_slack(probe.grid(), band, window);
    const auto power = operator_norm_sq(probe.grid(), band, window);
    row.lambda0 = power.lambda0;
    row.conc_ratio = concentration_ratio(probe, band, window);
    row.spill_ratio = band_spill_ratio(band_project(probe, band), window, band);
    const double upper = std::min(1.0, row.wt + row.eps_grid) + 1e-12;
    row.pass = power.converged && row.lambda0 <= upper && row.conc_ratio <= upper &&
               row.spill_ratio >= 1.0 - row.wt - row.eps_grid - 1e-12;
    rows.push_back(row);
  }
  return rows;
}

void write_bounds_audit_csv(std::ostream& out, std::span<const BoundsAuditRow> rows) {
  out << "W,T,WT,lambda0,conc_ratio,spill_ratio,eps_grid,pass\n";
  for (const auto& r : rows)
    out << format_number(r.band_width) << ',' << format_number(r.window_width) << ',' << format_number(r.wt) << ','
        << format_number(r.lambda0) << ',' << format_number(r.conc_ratio) << ',' << format_number(r.spill_ratio) << ','
        << format_number(r.eps_grid) << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace sublimit
