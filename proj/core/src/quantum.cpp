#include "sublimit/quantum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"
#include "sublimit/projections.hpp"
#include "sublimit/recovery.hpp"

namespace sublimit {
namespace {

constexpr double kEdgeSlack = 1e-9;
constexpr double kMaxDesignCondition = 1e10;
constexpr double kRankTolerance = 1e-6;
constexpr double kNegativityGuard = 1e-10;

double energy(const SampledSignal& s) {
  const double n = l2_norm(s);
  return n * n;
}

double omega(double p, double mass) { return p * p / (2.0 * mass); }

// Phase angle of exp(2 pi i dp x) exp(-i dw t).
double pair_phase(double dp, double domega, double x, double t) {
  return 2.0 * std::numbers::pi * dp * x - domega * t;
}

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

PairList upper_pairs(std::size_t m) {
  PairList pairs;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k) pairs.emplace_back(j, k);
  return pairs;
}

}  // namespace

WaveFunction normalize(const SampledSignal& psi) {
  const double norm = l2_norm(psi);
  if (!(norm > 0.0)) throw PreconditionError("normalize: zero state");
  return {Complex{1.0 / norm} * psi, true};
}

IndexRange momentum_bins(const TimeGrid& grid, const Interval& p_band) {
  const auto half = static_cast<std::ptrdiff_t>(grid.size() / 2);
  const auto j_first = static_cast<std::ptrdiff_t>(std::ceil(p_band.lower() / grid.dw() - kEdgeSlack));
  const auto j_last = std::max(j_first, static_cast<std::ptrdiff_t>(std::ceil(p_band.upper() / grid.dw() - kEdgeSlack)));
  // Momentum index j sits at frequency index -j.
  const IndexRange bins{half - j_last + 1, half - j_first + 1};
  if (!bins.empty() && (bins.first < 0 || bins.last > static_cast<std::ptrdiff_t>(grid.size())))
    throw PreconditionError("momentum band exceeds the grid's Nyquist range");
  return bins;
}

SampledSignal momentum_project(const SampledSignal& psi, const Interval& p_band) {
  return band_project(psi, momentum_bins(psi.grid(), p_band));
}

SampledSignal momentum_reject(const SampledSignal& psi, const Interval& p_band) {
  return psi - momentum_project(psi, p_band);
}

double fidelity(const SampledSignal& a, const SampledSignal& b) {
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (!(na > 0.0 && nb > 0.0)) throw PreconditionError("fidelity: zero state");
  return std::abs(inner_product(a, b)) / (na * nb);
}

double landau_pollak_ratio(const SampledSignal& psi, const PhaseSpaceWindows& windows) {
  const SampledSignal in_band = momentum_project(psi, windows.p_band);
  const double denom = energy(in_band);
  if (!(denom > 0.0)) throw PreconditionError("landau_pollak_ratio: zero in-band momentum energy");
  const double num = l2_norm(in_band, psi.grid().samples_in(windows.x_window));
  return num * num / denom;
}

WaveFunction gate_state(const SampledSignal& psi_p, const PhaseSpaceWindows& windows) {
  if (l2_norm(momentum_reject(psi_p, windows.p_band)) > 1e-10 * l2_norm(psi_p))
    throw PreconditionError("gate_state: state is not momentum-limited to the band");
  const SampledSignal gated = complement_gate(psi_p, windows.x_window);
  if (!(l2_norm(gated) > 0.0)) throw PreconditionError("gate_state: state vanishes outside the window");
  return normalize(gated);
}

WaveFunction momentum_smooth(const SampledSignal& psi_m, const PhaseSpaceWindows& windows) {
  return normalize(momentum_project(psi_m, windows.p_band));
}

StateRecovery recover_state(const SampledSignal& psi, const PhaseSpaceWindows& windows, double tolerance) {
  const TimeGrid& grid = psi.grid();
  const IndexRange bins = momentum_bins(grid, windows.p_band);
  const IndexRange samples = grid.samples_in(windows.x_window);

  StateRecovery out;
  out.px = windows.p_band.width() * windows.x_window.width();
  out.lambda0 = power_iteration(ConcentrationOperator(grid, bins, samples)).lambda0;
  if (out.px >= 1.0) {
    out.refused = true;
    out.refusal_reason = "PX = " + format_number(out.px) + " >= 1: 1 - P_P P_X P_P is not invertible";
    return out;
  }
  if (out.lambda0 > 1.0 - 1e-6) {
    out.refused = true;
    out.refusal_reason = "lambda0 = " + format_number(out.lambda0) + " within 1e-6 of 1";
    return out;
  }

  const SampledSignal y0 = band_project(psi, bins);
  SampledSignal y = y0;
  const std::size_t max_iterations = default_max_iterations(tolerance, out.px);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    SampledSignal next = y0 + band_project(time_gate(y, samples), bins);
    const double norm = l2_norm(next);
    const double update = l2_norm(next - y);
    y = std::move(next);
    out.iterations = it;
    if (update <= tolerance * norm) {
      out.converged = true;
      break;
    }
  }
  out.state = normalize(y);
  return out;
}

Complex DensityMatrix::trace() const {
  Complex t{};
  for (std::size_t j = 0; j < dimension(); ++j) t += (*this)(j, j);
  return t;
}

ComplexVector momentum_coefficients(const SampledSignal& psi, const Interval& p_band) {
  const TimeGrid& grid = psi.grid();
  const IndexRange bins = momentum_bins(grid, p_band);
  const Spectrum spectrum = forward_spectrum(psi);
  const double scale = 1.0 / std::sqrt(grid.span());
  ComplexVector c;
  c.reserve(static_cast<std::size_t>(bins.size()));
  // Ascending momentum = descending frequency bin.
  for (auto i = bins.last - 1; i >= bins.first; --i) c.push_back(scale * spectrum[static_cast<std::size_t>(i)]);
  return c;
}

DensityMatrix build_density(const SampledSignal& psi, const Interval& p_band, double mass) {
  if (!(mass > 0.0)) throw PreconditionError("build_density: mass must be positive");
  const TimeGrid& grid = psi.grid();
  ComplexVector c = momentum_coefficients(psi, p_band);
  double weight = 0.0;
  for (const auto& v : c) weight += std::norm(v);
  const double total = energy(psi);
  if (!(total > 0.0)) throw PreconditionError("build_density: zero state");
  if (1.0 - weight / total > 1e-6)
    throw PreconditionError("build_density: out-of-band weight " + format_number(1.0 - weight / total) +
                            " exceeds 1e-6");
  for (auto& v : c) v /= std::sqrt(weight);

  DensityMatrix rho;
  rho.mass = mass;
  rho.box_length = grid.span();
  const IndexRange bins = momentum_bins(grid, p_band);
  const auto half = static_cast<std::ptrdiff_t>(grid.size() / 2);
  for (auto i = bins.last - 1; i >= bins.first; --i)
    rho.p_grid.push_back(static_cast<double>(half - i) * grid.dw());
  const std::size_t m = c.size();
  rho.elements.resize(m * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) rho(j, k) = c[j] * std::conj(c[k]);
  return rho;
}

EvolutionSamples evolve_diagonal_series(const DensityMatrix& rho, const std::vector<double>& x_points,
                                        const std::vector<double>& t_points) {
  if (!(rho.box_length > 0.0)) throw PreconditionError("evolve_diagonal_series: box length must be positive");
  const std::size_t m = rho.dimension();
  EvolutionSamples out{x_points, t_points, {}};
  out.values.reserve(x_points.size() * t_points.size());
  ComplexVector a(m);
  for (const double t : t_points) {
    for (const double x : x_points) {
      for (std::size_t j = 0; j < m; ++j)
        a[j] = std::polar(1.0, pair_phase(rho.p_grid[j], omega(rho.p_grid[j], rho.mass), x, t));
      Complex sum{};
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) sum += a[j] * std::conj(a[k]) * rho(j, k);
      out.values.push_back(sum.real() / rho.box_length);
    }
  }
  return out;
}

TomographyResult tomography_solve(const EvolutionSamples& samples, const std::vector<double>& p_grid, double mass,
                                  double box_length) {
  TomographyResult out;
  const std::size_t m = p_grid.size();
  const std::size_t nx = samples.x_points.size();
  const std::size_t nt = samples.t_points.size();
  if (samples.values.size() != nx * nt) throw ShapeError("tomography_solve: sample matrix has the wrong size");
  if (m == 0) throw PreconditionError("tomography_solve: empty momentum grid");
  if (!(box_length > 0.0) || !(mass > 0.0)) throw PreconditionError("tomography_solve: box length and mass must be positive");

  const PairList pairs = upper_pairs(m);
  const auto rows = static_cast<Eigen::Index>(nx * nt);
  const auto cols = static_cast<Eigen::Index>(1 + 2 * pairs.size());
  if (rows < cols) {
    out.refused = true;
    out.refusal_reason = std::to_string(rows) + " samples for " + std::to_string(cols) + " real unknowns";
    return out;
  }

  // Unknowns: trace, then (Re, Im) of rho_jk for j < k.
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  Eigen::MatrixXcd phases(rows, static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t n = 0; n < nt; ++n) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto r = static_cast<Eigen::Index>(n * nx + i);
      rhs(r) = samples.at(n, i);
      design(r, 0) = 1.0 / box_length;
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [j, k] = pairs[q];
        const double theta = pair_phase(p_grid[j] - p_grid[k], omega(p_grid[j], mass) - omega(p_grid[k], mass),
                                        samples.x_points[i], samples.t_points[n]);
        design(r, static_cast<Eigen::Index>(1 + 2 * q)) = 2.0 * std::cos(theta) / box_length;
        design(r, static_cast<Eigen::Index>(2 + 2 * q)) = -2.0 * std::sin(theta) / box_length;
        phases(r, static_cast<Eigen::Index>(q)) = std::polar(1.0, theta);
      }
    }
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(out.condition_number <= kMaxDesignCondition)) {
    for (std::size_t a = 0; a < pairs.size(); ++a) {
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        const auto ca = phases.col(static_cast<Eigen::Index>(a));
        const auto cb = phases.col(static_cast<Eigen::Index>(b));
        const double overlap = std::abs(ca.dot(cb)) / (ca.norm() * cb.norm());
        if (overlap > 1.0 - 1e-9) out.degenerate_pairs.push_back({pairs[a], pairs[b]});
      }
    }
    out.refused = true;
    out.refusal_reason = "design condition number " + format_number(out.condition_number) + " exceeds 1e10 (" +
                         std::to_string(out.degenerate_pairs.size()) + " degenerate pair(s))";
    return out;
  }

  const Eigen::VectorXd x = svd.solve(rhs);
  out.residual = (design * x - rhs).norm();

  DensityMatrix rho;
  rho.p_grid = p_grid;
  rho.mass = mass;
  rho.box_length = box_length;
  rho.elements.assign(m * m, Complex{});
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [j, k] = pairs[q];
    rho(j, k) = {x(static_cast<Eigen::Index>(1 + 2 * q)), x(static_cast<Eigen::Index>(2 + 2 * q))};
    rho(k, j) = std::conj(rho(j, k));
  }

  // Populations: |rho_jj| = |rho_jk| |rho_jl| / |rho_kl| for the strongest
  // pair (k, l) not involving j.
  const double trace = x(0);
  std::vector<double> populations(m, 0.0);
  bool inferred = m >= 3;
  for (std::size_t j = 0; j < m && inferred; ++j) {
    double best = 0.0;
    std::size_t bk = 0, bl = 0;
    for (const auto& [k, l] : pairs) {
      if (k == j || l == j) continue;
      if (std::abs(rho(k, l)) > best) {
        best = std::abs(rho(k, l));
        bk = k;
        bl = l;
      }
    }
    if (best <= 1e-12) {
      inferred = false;
      break;
    }
    populations[j] = std::abs(rho(j, bk)) * std::abs(rho(j, bl)) / best;
  }
  double sum = 0.0;
  for (const double p : populations) sum += p;
  if (!inferred || !(sum > 0.0)) {
    inferred = false;
    std::fill(populations.begin(), populations.end(), trace / static_cast<double>(m));
  } else {
    for (auto& p : populations) p *= trace / sum;
  }
  out.populations_inferred = inferred;
  for (std::size_t j = 0; j < m; ++j) rho(j, j) = populations[j];

  const auto dim = static_cast<Eigen::Index>(m);
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
      rho.elements.data(), dim, dim);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(view);
  if (eig.eigenvalues().minCoeff() < -kNegativityGuard) {
    const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd fixed = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        rho(j, k) = fixed(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    out.psd_projected = true;
  }
  out.rho = std::move(rho);
  return out;
}

SampledSignal synthesize_state(const TimeGrid& box, const std::vector<double>& p_grid, const ComplexVector& c) {
  if (c.size() != p_grid.size()) throw ShapeError("synthesize_state: coefficient count does not match the grid");
  const double scale = 1.0 / std::sqrt(box.span());
  ComplexVector values(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) {
    Complex sum{};
    for (std::size_t j = 0; j < c.size(); ++j)
      sum += c[j] * std::polar(1.0, 2.0 * std::numbers::pi * std::remainder(p_grid[j] * box.time(k), 1.0));
    values[k] = scale * sum;
  }
  return SampledSignal(box, std::move(values));
}

Rank1Result rank1_extract(const DensityMatrix& rho, const TimeGrid& box) {
  const std::size_t m = rho.dimension();
  if (m == 0) throw PreconditionError("rank1_extract: empty density matrix");
  if (std::abs(box.span() - rho.box_length) > 1e-12 * rho.box_length)
    throw PreconditionError("rank1_extract: grid span does not match the density-matrix box");

  const auto dim = static_cast<Eigen::Index>(m);
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
      rho.elements.data(), dim, dim);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(view);

  Rank1Result out;
  for (Eigen::Index i = dim - 1; i >= 0; --i) out.eigenvalues.push_back(eig.eigenvalues()(i));
  if (m >= 2 && out.eigenvalues[1] > kRankTolerance) {
    out.refused = true;
    out.refusal_reason = "density matrix is not rank 1: second eigenvalue " + format_number(out.eigenvalues[1]);
    return out;
  }

  const Eigen::VectorXcd v = eig.eigenvectors().col(dim - 1);
  Eigen::Index largest = 0;
  v.cwiseAbs().maxCoeff(&largest);
  const Complex fix = std::conj(v(largest)) / std::abs(v(largest));
  out.coefficients.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.coefficients[j] = fix * v(static_cast<Eigen::Index>(j));
  out.coefficients[static_cast<std::size_t>(largest)] = std::abs(v(largest));
  out.state = normalize(synthesize_state(box, rho.p_grid, out.coefficients));
  return out;
}

std::vector<double> tomography_x_points(double x0, double box_length, std::size_t count) {
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = x0 + box_length * static_cast<double>(i) / static_cast<double>(count);
  return xs;
}

std::vector<double> tomography_t_points(std::size_t count) {
  std::vector<double> ts(count);
  for (std::size_t n = 0; n < count; ++n) ts[n] = 2.0 * std::numbers::pi * static_cast<double>(n);
  return ts;
}

void write_density_csv(std::ostream& out, const DensityMatrix& rho) {
  out << "j,k,re,im\n";
  for (std::size_t j = 0; j < rho.dimension(); ++j)
    for (std::size_t k = 0; k < rho.dimension(); ++k)
      out << j << ',' << k << ',' << format_number(rho(j, k).real()) << ',' << format_number(rho(j, k).imag()) << '\n';
}

ComplexVector random_coefficients(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector c(m);
  double norm = 0.0;
  for (auto& v : c) {
    const double re = normal(engine);
    const double im = normal(engine);
    v = {re, im};
    norm += std::norm(v);
  }
  for (auto& v : c) v /= std::sqrt(norm);
  return c;
}

}  // namespace sublimit
