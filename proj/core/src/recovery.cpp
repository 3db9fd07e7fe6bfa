#include "sublimit/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"
#include "sublimit/projections.hpp"

namespace sublimit {
namespace {

constexpr double kLambdaGuard = 1e-6;
constexpr double kMaxCondition = 1e12;
constexpr std::size_t kMaxDirectDimension = 4096;

enum class Route { kTime, kBand };

RecoveryReport refuse(const InvertibilityReport& inv) {
  RecoveryReport report;
  report.refused = true;
  report.refusal_reason = inv.reason;
  report.invertibility = inv;
  return report;
}

// x_{k+1} = y + A x_k with A = P_T P_W (time route) or P_W P_T (band route).
RecoveryReport neumann(const SampledSignal& r, const Interval& band, const Interval& window,
                       const SolverOptions& options, Route route) {
  const TimeGrid& grid = r.grid();
  const InvertibilityReport inv = invertibility_report(grid, band, window);
  if (!inv.invertible) return refuse(inv);

  const IndexRange bins = grid.bins_in(band);
  const IndexRange samples = grid.samples_in(window);
  const auto step = [&](const SampledSignal& x) {
    return route == Route::kTime ? time_gate(band_project(x, bins), samples)
                                 : band_project(time_gate(x, samples), bins);
  };

  RecoveryReport report;
  report.invertibility = inv;
  const std::size_t max_iterations =
      options.max_iterations.value_or(default_max_iterations(options.tolerance, inv.wt));

  const SampledSignal y = route == Route::kTime ? r : band_project(r, bins);
  SampledSignal x = y;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    SampledSignal next = y + step(x);
    const double next_norm = l2_norm(next);
    const double update = l2_norm(next - x);
    const double residual = next_norm > 0.0 ? update / next_norm : update;
    x = std::move(next);
    report.iterations = it;
    if (options.on_iterate) options.on_iterate(it, x);

    if (!report.residual_history.empty()) {
      const double prev = report.residual_history.back();
      if (residual >= prev && residual > 0.0) {
        report.residual_history.push_back(residual);
        report.stalled = true;
        break;
      }
      if (prev > 0.0) report.contraction_estimate = std::max(report.contraction_estimate, residual / prev);
    }
    report.residual_history.push_back(residual);
    if (residual < options.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.recovered = std::move(x);
  return report;
}

}  // namespace

SampledSignal erase(const SampledSignal& s_w, const ErasureModel& model) {
  const double leak = l2_norm(band_reject(s_w, model.source_band));
  if (leak > 1e-10 * l2_norm(s_w))
    throw PreconditionError("erase: source signal is not bandlimited to the source band");
  const IndexRange gap = s_w.grid().samples_in(model.window);
  SampledSignal r = complement_gate(s_w, gap);
  if (model.noise) {
    if (l2_norm(*model.noise, gap) != 0.0) throw PreconditionError("erase: noise must vanish on the erased window");
    r = r + *model.noise;
  }
  return r;
}

InvertibilityReport invertibility_report(const TimeGrid& grid, const Interval& band, const Interval& window) {
  InvertibilityReport report;
  report.wt = band.width() * window.width();
  report.lambda0 = operator_norm_sq(grid, band, window).lambda0;
  report.wt_below_one = report.wt < 1.0;
  report.lambda_below_one = report.lambda0 <= 1.0 - kLambdaGuard;
  report.invertible = report.wt_below_one && report.lambda_below_one;
  if (!report.wt_below_one)
    report.reason = "WT = " + format_number(report.wt) + " >= 1: 1 - P_W P_T is not invertible";
  else if (!report.lambda_below_one)
    report.reason = "lambda0 = " + format_number(report.lambda0) + " within 1e-6 of 1: operator numerically singular";
  return report;
}

std::size_t default_max_iterations(double tolerance, double wt) {
  if (!(wt > 0.0)) return 50;
  const double rate = std::sqrt(std::min(wt, 1.0 - 1e-12));
  return static_cast<std::size_t>(std::ceil(std::log(tolerance) / std::log(rate))) + 50;
}

RecoveryReport recover_neumann(const SampledSignal& r, const Interval& band, const Interval& window,
                               const SolverOptions& options) {
  return neumann(r, band, window, options, Route::kTime);
}

RecoveryReport recover_band_neumann(const SampledSignal& r, const Interval& band, const Interval& window,
                                    const SolverOptions& options) {
  return neumann(r, band, window, options, Route::kBand);
}

DirectRecoveryResult recover_direct(const SampledSignal& r, const Interval& band, const Interval& window) {
  DirectRecoveryResult result;
  const TimeGrid& grid = r.grid();
  const ConcentrationOperator op(grid, band, window);
  result.dimension = op.dimension();

  const InvertibilityReport inv = invertibility_report(grid, band, window);
  if (!inv.invertible) {
    result.refused = true;
    result.refusal_reason = inv.reason;
    return result;
  }
  if (result.dimension > kMaxDirectDimension) {
    result.refused = true;
    result.refusal_reason = "in-band dimension " + std::to_string(result.dimension) + " exceeds 4096";
    return result;
  }

  const auto m = static_cast<Eigen::Index>(op.dimension());
  const ComplexVector dense = op.dense();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) -= dense[static_cast<std::size_t>(i * m + j)];

  // I - B is Hermitian positive definite here; its eigenvalues give the
  // condition number directly.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  result.condition_number = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(result.condition_number <= kMaxCondition)) {
    result.refused = true;
    result.refusal_reason = "condition number " + format_number(result.condition_number) + " exceeds 1e12";
    return result;
  }

  const ComplexVector rhs_values = op.restrict_to_band(forward_spectrum(r));
  const Eigen::Map<const Eigen::VectorXcd> rhs(rhs_values.data(), m);
  const Eigen::VectorXcd solution = a.llt().solve(rhs);
  const ComplexVector coefficients(solution.data(), solution.data() + m);
  result.recovered = inverse_signal(op.embed(coefficients));
  return result;
}

SampledSignal white_noise_off_window(const TimeGrid& grid, const Interval& window, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector values(grid.size());
  for (auto& v : values) v = normal(engine);
  SampledSignal noise = complement_gate(SampledSignal(grid, std::move(values)), window);
  const double norm = l2_norm(noise);
  if (!(norm > 0.0)) throw PreconditionError("white_noise_off_window: window covers the whole grid");
  return Complex{1.0 / norm} * noise;
}

StabilitySweep noise_stability_sweep(const SampledSignal& s_w, const Interval& band, const Interval& window,
                                     std::span<const double> noise_levels, std::uint64_t seed, double tolerance) {
  StabilitySweep sweep;
  sweep.seed = seed;
  const InvertibilityReport inv = invertibility_report(s_w.grid(), band, window);
  if (!inv.invertible) {
    sweep.refused = true;
    sweep.refusal_reason = inv.reason;
    return sweep;
  }
  const double bound = 1.1 / (1.0 - std::sqrt(inv.lambda0));
  const SampledSignal unit_noise = white_noise_off_window(s_w.grid(), window, seed);
  const SampledSignal clean = erase(s_w, ErasureModel{window, band, std::nullopt});

  SolverOptions options;
  options.tolerance = tolerance;
  for (const double sigma : noise_levels) {
    if (sigma < 0.0) throw PreconditionError("noise_stability_sweep: negative noise level");
    const SampledSignal r = clean + Complex{sigma} * unit_noise;
    const RecoveryReport report = recover_neumann(r, band, window, options);
    StabilityRow row;
    row.sigma = sigma;
    row.bound = bound;
    row.error = l2_norm(*report.recovered - s_w);
    if (sigma > 0.0) {
      row.amplification = row.error / sigma;
      row.pass = row.amplification <= bound;
    } else {
      row.pass = row.error <= 1e-8 * l2_norm(s_w);
    }
    sweep.rows.push_back(row);
  }
  return sweep;
}

void write_residual_csv(std::ostream& out, const RecoveryReport& report) {
  out << "iter,residual\n";
  for (std::size_t i = 0; i < report.residual_history.size(); ++i)
    out << (i + 1) << ',' << format_number(report.residual_history[i]) << '\n';
}

void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows) {
  out << "sigma,err,amplification,bound\n";
  for (const auto& r : rows)
    out << format_number(r.sigma) << ',' << format_number(r.error) << ',' << format_number(r.amplification) << ','
        << format_number(r.bound) << '\n';
}

}  // namespace sublimit
