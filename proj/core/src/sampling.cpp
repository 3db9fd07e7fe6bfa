#include "sublimit/sampling.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"
#include "sublimit/projections.hpp"

namespace sublimit {
namespace {

constexpr double kSlack = 1e-9;

// x / step when it is an integer (to kSlack), otherwise nullopt.
std::optional<std::ptrdiff_t> integer_ratio(double x, double step) {
  const double ratio = x / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > kSlack * std::max(1.0, std::abs(ratio))) return std::nullopt;
  return static_cast<std::ptrdiff_t>(rounded);
}

std::ptrdiff_t ceil_div(std::ptrdiff_t a, std::ptrdiff_t b) {
  const std::ptrdiff_t q = a / b;
  return (a % b != 0 && ((a > 0) == (b > 0))) ? q + 1 : q;
}

Complex unit_phase(double cycles) {
  return std::polar(1.0, 2.0 * std::numbers::pi * std::remainder(cycles, 1.0));
}

double in_band_norm(std::span<const Complex> values, double dw) {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(sum * dw);
}

}  // namespace

std::size_t CombSamples::sample_index(std::ptrdiff_t k) const {
  return static_cast<std::size_t>(std::llround((instant(k) - grid.t_start()) / grid.dt()));
}

CombSamples comb_sample(const SampledSignal& s, double period, double origin, std::string source_label) {
  const TimeGrid& grid = s.grid();
  if (!(period > 0.0)) throw PreconditionError("comb_sample: period must be positive");
  const auto stride = integer_ratio(period, grid.dt());
  if (!stride || *stride < 1) throw PreconditionError("comb_sample: period is not an integer multiple of dt");
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  if (n % *stride != 0) throw PreconditionError("comb_sample: period does not divide the grid span");
  const auto origin_index = integer_ratio(origin - grid.t_start(), grid.dt());
  if (!origin_index) throw PreconditionError("comb_sample: comb origin is not a grid instant");

  CombSamples c{grid, period, origin, {}, {}, std::move(source_label)};
  c.offsets.first = ceil_div(-*origin_index, *stride);
  c.offsets.last = ceil_div(n - *origin_index, *stride);
  c.values.reserve(static_cast<std::size_t>(c.offsets.size()));
  for (auto k = c.offsets.first; k < c.offsets.last; ++k) c.values.push_back(s[c.sample_index(k)]);
  return c;
}

SampledSignal weighted_comb(const CombSamples& c) {
  if (c.values.size() != static_cast<std::size_t>(c.offsets.size()))
    throw ShapeError("comb samples: value count does not match the index range");
  ComplexVector out(c.grid.size());
  const double weight = c.period / c.grid.dt();
  for (auto k = c.offsets.first; k < c.offsets.last; ++k)
    out[c.sample_index(k)] = weight * c.values[static_cast<std::size_t>(k - c.offsets.first)];
  return SampledSignal(c.grid, std::move(out));
}

SampledSignal sinc_reconstruct(const CombSamples& c) {
  return band_project(weighted_comb(c), Interval(0.0, 1.0 / c.period));
}

SampledSignal band_interpolate(const CombSamples& c, const Interval& band) {
  const double half = 0.5 / c.period;
  const double tol = kSlack * c.grid.dw();
  if (band.lower() < -half - tol || band.upper() > half + tol)
    throw PreconditionError("band_interpolate: band exceeds [-1/(2T), 1/(2T)) of the comb");
  return band_project(sinc_reconstruct(c), band);
}

Spectrum periodized_spectrum(const CombSamples& c) { return forward_spectrum(weighted_comb(c)); }

SpectralCopyResult spectral_copy_recover(const SampledSignal& r, const SpectralCopyConfig& cfg) {
  const TimeGrid& grid = r.grid();
  const double w = cfg.band.width();
  if (!(w > 0.0)) throw PreconditionError("spectral_copy_recover: band width must be positive");
  if (!(cfg.t_sn > 0.0)) throw PreconditionError("spectral_copy_recover: t_sn must be positive");
  if (cfg.t_ds < 0.0) throw PreconditionError("spectral_copy_recover: t_ds must be non-negative");
  if (cfg.t_sn * w > 1.0 + kSlack) throw PreconditionError("spectral_copy_recover: t_sn exceeds 1/W");
  const bool equal = std::abs(cfg.t_ds - cfg.t_sn) <= kSlack * cfg.t_sn;
  if (equal) {
    if (!cfg.allow_equal_periods || cfg.t_sn * w >= 1.0 - kSlack)
      throw PreconditionError("spectral_copy_recover: t_ds == t_sn needs allow_equal_periods and t_sn < 1/W");
  } else if (cfg.t_ds > cfg.t_sn) {
    throw PreconditionError("spectral_copy_recover: t_ds must not exceed t_sn");
  }
  const auto shift = integer_ratio(1.0 / cfg.t_sn, grid.dw());
  if (!shift) throw PreconditionError("spectral_copy_recover: 1/t_sn is not a multiple of dw");

  const CombSamples comb = comb_sample(r, cfg.t_sn, cfg.comb_origin, "r");
  const IndexRange gap = grid.samples_in(cfg.gate);
  for (auto k = comb.offsets.first; k < comb.offsets.last; ++k)
    if (gap.contains(static_cast<std::ptrdiff_t>(comb.sample_index(k))))
      throw PreconditionError("spectral_copy_recover: comb instant t = " + format_number(comb.instant(k)) +
                              " lies inside the erased interval");

  const IndexRange bins = grid.bins_in(cfg.band);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  const Spectrum r_hat = forward_spectrum(r);

  SpectralCopyResult result{Spectrum(grid), cfg.k_max, 0, 0, false, 0.0, 0.0};
  result.k_max_limit = static_cast<std::size_t>(std::min(bins.first, n - bins.last) / *shift);
  result.k_max_used = std::min(cfg.k_max, result.k_max_limit);
  result.clipped = result.k_max_used < cfg.k_max;

  const auto m = static_cast<std::size_t>(bins.size());
  const auto term = [&](std::size_t k) {
    ComplexVector t(m);
    const auto off = static_cast<std::ptrdiff_t>(k) * *shift;
    if (k == 0) {
      for (std::size_t i = 0; i < m; ++i) t[i] = r_hat[static_cast<std::size_t>(bins.first) + i];
      return t;
    }
    const Complex phase = unit_phase(static_cast<double>(k) * cfg.comb_origin / cfg.t_sn);
    for (std::size_t i = 0; i < m; ++i) {
      const auto idx = bins.first + static_cast<std::ptrdiff_t>(i);
      t[i] = phase * r_hat[static_cast<std::size_t>(idx - off)] + std::conj(phase) * r_hat[static_cast<std::size_t>(idx + off)];
    }
    return t;
  };

  ComplexVector sum(m);
  for (std::size_t k = 0; k <= result.k_max_used; ++k) {
    const ComplexVector t = term(k);
    for (std::size_t i = 0; i < m; ++i) sum[i] += t[i];
    if (k == result.k_max_used) result.last_term_norm = in_band_norm(t, grid.dw());
  }
  ComplexVector rest(m);
  for (std::size_t k = result.k_max_used + 1; k <= result.k_max_limit; ++k) {
    const ComplexVector t = term(k);
    for (std::size_t i = 0; i < m; ++i) rest[i] += t[i];
  }
  result.remaining_terms_norm = in_band_norm(rest, grid.dw());

  ComplexVector full(grid.size());
  std::copy(sum.begin(), sum.end(), full.begin() + bins.first);
  result.spectrum = Spectrum(grid, std::move(full));
  return result;
}

FirstOrderApprox band_approx_first_term(const SampledSignal& r, const Interval& band, const Interval& gate) {
  const TimeGrid& grid = r.grid();
  FirstOrderApprox out{band_project(forward_spectrum(r), band), {}, band.width() * gate.width(), false, std::nullopt};
  out.distorted = out.wt >= 1.0;
  if (out.wt > 0.25)
    out.warning = "W T_DS = " + format_number(out.wt) + " > 0.25: first-order approximation not reliable";

  // (P_W r)(t0) from the in-band spectrum.
  Complex at_center{};
  const IndexRange bins = grid.bins_in(band);
  for (auto i = bins.first; i < bins.last; ++i) {
    const auto u = static_cast<std::size_t>(i);
    at_center += out.approx[u] * unit_phase(-grid.frequency(u) * gate.center());
  }
  at_center *= grid.dw();
  const double scale = out.distorted ? gate.width() : gate.width() / (1.0 - out.wt);
  out.predicted_offset = scale * at_center;
  return out;
}

double integral_equation_residual(const Spectrum& s_hat, const Spectrum& r_hat, const Interval& band,
                                  const Interval& gate) {
  if (!(s_hat.grid() == r_hat.grid())) throw ShapeError("integral_equation_residual: spectra on different grids");
  const TimeGrid& grid = s_hat.grid();
  const IndexRange bins = grid.bins_in(band);
  const IndexRange samples = grid.samples_in(gate);
  const auto m = bins.size();

  ComplexVector kernel(static_cast<std::size_t>(2 * m + 1));
  for (std::ptrdiff_t d = -m; d <= m; ++d)
    kernel[static_cast<std::size_t>(d + m)] = grid.dw() * gate_kernel(grid, samples, d);

  double sum = 0.0;
  for (auto a = bins.first; a < bins.last; ++a) {
    Complex conv{};
    for (auto b = bins.first; b < bins.last; ++b)
      conv += kernel[static_cast<std::size_t>(a - b + m)] * s_hat[static_cast<std::size_t>(b)];
    const auto u = static_cast<std::size_t>(a);
    sum += std::norm(r_hat[u] - (s_hat[u] - conv));
  }
  return std::sqrt(sum * grid.dw());
}

void write_fig2_csv(std::ostream& out, const Interval& band, std::span<const Fig2Column> columns) {
  if (columns.empty()) throw PreconditionError("write_fig2_csv: no columns");
  const TimeGrid& grid = columns.front().values.grid();
  for (const auto& c : columns)
    if (!(c.values.grid() == grid)) throw ShapeError("write_fig2_csv: columns on different grids");
  out << 'w';
  for (const auto& c : columns) out << ',' << c.name << ',' << c.name << "_im";
  out << '\n';
  const IndexRange bins = grid.bins_in(band);
  for (auto i = bins.first; i < bins.last; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out << format_number(grid.frequency(u));
    for (const auto& c : columns) out << ',' << format_number(c.values[u].real()) << ',' << format_number(c.values[u].imag());
    out << '\n';
  }
}

}  // namespace sublimit
