#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <random>

#include "svg.hpp"
#include "sublimit/csv.hpp"
#include "sublimit/error.hpp"
#include "sublimit/projections.hpp"
#include "sublimit/quantum.hpp"
#include "sublimit/recovery.hpp"
#include "sublimit/sampling.hpp"

namespace sublimit::runner {
namespace {

namespace fs = std::filesystem;

std::string param_label(const std::string& prefix, double v) {
  std::string s = format_number(v);
  s.erase(std::remove(s.begin(), s.end(), '.'), s.end());
  return prefix + s;
}

double l2_on(const Spectrum& a, const Spectrum& b, IndexRange bins) { return l2_norm(a - b, bins); }

double sup_on(const Spectrum& a, const Spectrum& b, IndexRange bins) {
  double m = 0.0;
  for (auto i = bins.first; i < bins.last; ++i)
    m = std::max(m, std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
  return m;
}

double relative_error(const SampledSignal& a, const SampledSignal& ref) { return l2_norm(a - ref) / l2_norm(ref); }

SampledSignal random_bandlimited(const TimeGrid& grid, const Interval& band, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector spectrum(grid.size());
  const IndexRange bins = grid.bins_in(band);
  for (auto i = bins.first; i < bins.last; ++i) {
    const double re = normal(engine);
    spectrum[static_cast<std::size_t>(i)] = {re, normal(engine)};
  }
  return inverse_signal(Spectrum(grid, std::move(spectrum)));
}

// ---------------------------------------------------------------- fig2

void run_fig2(const ExperimentConfig& c, const fs::path& dir, RunReport& report) {
  const TimeGrid& grid = c.grid;
  const Interval band(0.0, c.w);
  const IndexRange bins = grid.bins_in(band);
  const SampledSignal s_w = band_project(make_demo_signal(grid), band);
  const Spectrum s_hat = forward_spectrum(s_w);

  Complex integral{};
  for (auto i = bins.first; i < bins.last; ++i) integral += s_hat[static_cast<std::size_t>(i)];
  const double mean = std::abs(integral * grid.dw() / c.w);
  report.metrics["mean_s_hat"] = mean;

  std::vector<double> t_values = c.t_ds_list;
  std::sort(t_values.begin(), t_values.end(), std::greater<>());
  std::vector<Fig2Column> columns{{"s_hat", s_hat}};
  std::vector<double> errors;
  auto& per_t = report.metrics["P_W_r_hat"] = nlohmann::ordered_json::array();
  for (const double t : t_values) {
    const Interval gate(0.0, t);
    const SampledSignal r = complement_gate(s_w, gate);
    const FirstOrderApprox fo = band_approx_first_term(r, band, gate);
    const InvertibilityReport inv = invertibility_report(grid, band, gate);
    const double l2 = l2_on(fo.approx, s_hat, bins);
    const double sup = sup_on(fo.approx, s_hat, bins);
    errors.push_back(l2);
    columns.push_back({param_label("P_W_r_hat_T", t), fo.approx});
    per_t.push_back({{"T_DS", t},
                     {"WT", fo.wt},
                     {"lambda0", inv.lambda0},
                     {"invertible", inv.invertible},
                     {"distorted", fo.distorted},
                     {"l2_error", l2},
                     {"sup_error", sup},
                     {"warning", fo.warning.value_or("")}});

    const std::string tag = "T_DS=" + format_number(t);
    if (fo.wt >= 1.0) {
      report.holds(tag + ": flagged non-invertible and distorted", !inv.invertible && fo.distorted);
      report.refused("invertibility(" + tag + ")", inv.reason, true);
    } else {
      report.holds(tag + ": invertibility matches lambda0 <= 1 - 1e-6", inv.invertible == inv.lambda_below_one);
    }
    if (fo.wt <= 1.0 / 32.0)
      report.le(tag + ": sup|P_W r_hat - s_hat| <= 2 WT mean(s_hat)", sup, 2.0 * fo.wt * mean);
  }
  for (std::size_t i = 1; i < errors.size(); ++i)
    report.lt("l2 error T_DS=" + format_number(t_values[i]) + " < T_DS=" + format_number(t_values[i - 1]), errors[i],
              errors[i - 1]);

  // Spectral-copy recovery from the comb at T_SN, which avoids the gap.
  const double t_rec = c.recover_t_ds.value_or(c.t_sn);
  const bool equal = std::abs(t_rec - c.t_sn) <= 1e-12;
  SpectralCopyConfig cfg;
  cfg.band = band;
  cfg.t_sn = c.t_sn;
  cfg.t_ds = t_rec;
  cfg.comb_origin = c.t_sn / 2.0;
  cfg.gate = Interval(0.0, equal ? c.t_sn - grid.dt() : t_rec);
  cfg.allow_equal_periods = equal;
  const SampledSignal r_rec = complement_gate(s_w, cfg.gate);
  std::vector<double> copy_errors;
  auto& copies = report.metrics["spectral_copy"] = nlohmann::ordered_json::array();
  std::optional<SpectralCopyResult> last;
  for (std::size_t k = 0; k <= c.k_max; ++k) {
    cfg.k_max = k;
    last = spectral_copy_recover(r_rec, cfg);
    copy_errors.push_back(l2_on(last->spectrum, s_hat, bins));
    copies.push_back({{"k_max", k},
                      {"k_max_used", last->k_max_used},
                      {"clipped", last->clipped},
                      {"l2_error", copy_errors.back()},
                      {"last_term_norm", last->last_term_norm},
                      {"remaining_terms_norm", last->remaining_terms_norm}});
  }
  for (std::size_t k = 1; k < copy_errors.size(); ++k)
    report.lt("copy error k_max=" + std::to_string(k) + " < k_max=" + std::to_string(k - 1), copy_errors[k],
              copy_errors[k - 1]);
  if (c.k_max > 0)
    report.lt("copy error k_max=" + std::to_string(c.k_max) + " < k_max=0", copy_errors.back(), copy_errors.front());
  columns.push_back({"copy_k" + std::to_string(c.k_max), last->spectrum});

  write_artifact(report, dir, "fig2.csv", [&](std::ostream& out) { write_fig2_csv(out, band, columns); });
  write_artifact(report, dir, "fig2_errors.csv", [&](std::ostream& out) {
    out << "series,param,l2_error\n";
    for (std::size_t i = 0; i < t_values.size(); ++i)
      out << "P_W_r_hat,T_DS=" << format_number(t_values[i]) << ',' << format_number(errors[i]) << '\n';
    for (std::size_t k = 0; k < copy_errors.size(); ++k)
      out << "spectral_copy,k_max=" << k << ',' << format_number(copy_errors[k]) << '\n';
  });
  write_artifact(report, dir, "fig2.svg", [&](std::ostream& out) {
    std::vector<double> x;
    std::vector<Series> series;
    for (const auto& col : columns) series.push_back({col.name, {}});
    for (auto i = bins.first; i < bins.last; ++i) {
      const auto u = static_cast<std::size_t>(i);
      x.push_back(grid.frequency(u));
      for (std::size_t s = 0; s < columns.size(); ++s) series[s].y.push_back(columns[s].values[u].real());
    }
    write_line_chart(out, "Re spectra on [W], W = " + format_number(c.w), "w", x, series);
  });
}

// -------------------------------------------------------- bounds_audit

void run_bounds_audit(const ExperimentConfig& c, const fs::path& dir, RunReport& report) {
  const auto rows = bounds_audit(make_demo_signal(c.grid), c.sweep);
  std::size_t passing = 0;
  for (const auto& row : rows) {
    const std::string tag = "W=" + format_number(row.band_width) + ",T=" + format_number(row.window_width) + ": ";
    report.le(tag + "lambda0 <= WT + eps", row.lambda0, row.wt + row.eps_grid);
    report.le(tag + "concentration <= WT + eps", row.conc_ratio, row.wt + row.eps_grid);
    report.ge(tag + "spill >= 1 - WT - eps", row.spill_ratio, 1.0 - row.wt - row.eps_grid);
    passing += row.pass;
  }
  report.metrics["rows"] = rows.size();
  report.metrics["rows_passing"] = passing;
  write_artifact(report, dir, "bounds_audit.csv", [&](std::ostream& out) { write_bounds_audit_csv(out, rows); });
}

// ------------------------------------------------------------ recovery

void run_recovery(const ExperimentConfig& c, const fs::path& dir, RunReport& report) {
  const Interval band(0.0, c.w);
  const Interval window(0.0, c.t_ds);
  const SampledSignal s_w = c.signal == "random" ? random_bandlimited(c.grid, band, c.seed)
                                                 : band_project(make_demo_signal(c.grid), band);
  const SampledSignal r = erase(s_w, ErasureModel{window, band, std::nullopt});

  SolverOptions options;
  options.tolerance = c.tolerance;
  double worst_leak = 0.0;
  SolverOptions band_options = options;
  band_options.on_iterate = [&](std::size_t, const SampledSignal& x) {
    worst_leak = std::max(worst_leak, l2_norm(band_reject(x, band)) / l2_norm(x));
  };
  const RecoveryReport time_route = recover_neumann(r, band, window, options);
  const RecoveryReport band_route = recover_band_neumann(r, band, window, band_options);
  const DirectRecoveryResult direct = recover_direct(r, band, window);
  const InvertibilityReport& inv = time_route.invertibility;

  report.metrics["WT"] = inv.wt;
  report.metrics["lambda0"] = inv.lambda0;
  report.metrics["invertible"] = inv.invertible;
  write_artifact(report, dir, "observed.csv", [&](std::ostream& out) { write_signal_csv(out, r); });

  if (!inv.invertible) {
    report.refused("recover_neumann", time_route.refusal_reason, true);
    report.refused("recover_band_neumann", band_route.refusal_reason, true);
    report.refused("recover_direct", direct.refusal_reason, true);
    report.holds("all solvers refuse", time_route.refused && band_route.refused && direct.refused);
    report.holds("no recovered signal produced", !time_route.recovered && !band_route.recovered && !direct.recovered);
    return;
  }

  report.metrics["iterations"] = time_route.iterations;
  report.metrics["band_route_iterations"] = band_route.iterations;
  report.metrics["direct_condition_number"] = direct.condition_number;
  report.holds("time route converged", time_route.converged);
  report.holds("band route converged", band_route.converged);
  report.le("relative L2 recovery error", relative_error(*time_route.recovered, s_w), 1e-6);
  report.le("band route vs time route", relative_error(*band_route.recovered, *time_route.recovered), 1e-8);
  report.le("band-route iterates out-of-band fraction", worst_leak, 1e-12);
  report.le("contraction estimate <= sqrt(WT) + 0.02", time_route.contraction_estimate, std::sqrt(inv.wt) + 0.02);
  if (direct.refused) {
    report.refused("recover_direct", direct.refusal_reason, false);
  } else {
    report.le("direct vs Neumann", relative_error(*direct.recovered, *time_route.recovered), 1e-8);
    write_artifact(report, dir, "recovered_direct.csv", [&](std::ostream& out) { write_signal_csv(out, *direct.recovered); });
  }
  write_artifact(report, dir, "residuals.csv", [&](std::ostream& out) { write_residual_csv(out, time_route); });
  write_artifact(report, dir, "residuals_band.csv", [&](std::ostream& out) { write_residual_csv(out, band_route); });
  write_artifact(report, dir, "recovered.csv", [&](std::ostream& out) { write_signal_csv(out, *time_route.recovered); });
}

// ----------------------------------------------------------- stability

void run_stability(const ExperimentConfig& c, const fs::path& dir, RunReport& report) {
  const Interval band(0.0, c.w);
  const Interval window(0.0, c.t_ds);
  const SampledSignal s_w = band_project(make_demo_signal(c.grid), band);
  const StabilitySweep sweep = noise_stability_sweep(s_w, band, window, c.noise_levels, c.seed, c.tolerance);
  report.metrics["noise_seed"] = sweep.seed;
  if (sweep.refused) {
    report.refused("noise_stability_sweep", sweep.refusal_reason, true);
    report.holds("no rows produced after refusal", sweep.rows.empty());
    return;
  }
  for (const auto& row : sweep.rows) {
    const std::string tag = "sigma=" + format_number(row.sigma) + ": ";
    if (row.sigma > 0.0)
      report.le(tag + "amplification <= 1.1 / (1 - sqrt(lambda0))", row.amplification, row.bound);
    else
      report.le(tag + "noise-free error", row.error, 1e-8 * l2_norm(s_w));
  }
  write_artifact(report, dir, "stability.csv", [&](std::ostream& out) { write_stability_csv(out, sweep.rows); });
}

// ------------------------------------------------------------ sampling

void run_sampling(const ExperimentConfig& c, const fs::path& dir, RunReport& report) {
  const TimeGrid& grid = c.grid;
  const Interval band(0.0, c.w);
  const IndexRange bins = grid.bins_in(band);
  const SampledSignal s_w = band_project(make_demo_signal(grid), band);
  const Spectrum s_hat = forward_spectrum(s_w);

  const CombSamples comb = comb_sample(s_w, c.t_sn);
  const SampledSignal interpolated = band_interpolate(comb, band);
  const std::size_t quarter = grid.size() / 4;
  double interior = 0.0;
  for (std::size_t k = quarter; k < grid.size() - quarter; ++k)
    interior = std::max(interior, std::abs(interpolated[k] - s_w[k]));
  report.le("band interpolation sup error on the interior half", interior, 1e-6);

  const CombSamples again = comb_sample(sinc_reconstruct(comb), c.t_sn);
  double resample = 0.0;
  for (std::size_t k = 0; k < comb.values.size(); ++k) resample = std::max(resample, std::abs(again.values[k] - comb.values[k]));
  report.le("sinc reconstruction reproduces the samples", resample, 1e-9);

  const Spectrum periodized = periodized_spectrum(comb);
  report.le("periodized spectrum equals s_hat on [W]", sup_on(periodized, s_hat, bins), 1e-6);

  const CombSamples sparse = comb_sample(s_w, c.t_alias);
  const Spectrum aliased = periodized_spectrum(sparse);
  const double deviation = sup_on(aliased, s_hat, bins);
  report.ge("aliasing deviation on [W] at T_alias", deviation, 1e-2);
  report.metrics["interior_sup_error"] = interior;
  report.metrics["aliasing_sup_deviation"] = deviation;
  report.metrics["comb_samples"] = comb.values.size();

  write_artifact(report, dir, "interpolated.csv", [&](std::ostream& out) { write_signal_csv(out, interpolated); });
  write_artifact(report, dir, "periodized.csv", [&](std::ostream& out) { write_spectrum_csv(out, periodized); });
  write_artifact(report, dir, "aliased.csv", [&](std::ostream& out) { write_spectrum_csv(out, aliased); });
}

// ---------------------------------------------------- quantum_pipeline

void run_quantum(const ExperimentConfig& c, const fs::path& dir, RunReport& report) {
  const double box_length = static_cast<double>(c.m) / c.p;
  const double steps = box_length / c.box_dt;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-9 * steps || n < 2 || n % 2)
    throw PreconditionError("box length M/P = " + format_number(box_length) + " is not an even multiple of dt");
  const TimeGrid box(-box_length / 2.0, c.box_dt, n);
  const PhaseSpaceWindows windows{Interval(0.0, c.x), Interval(0.0, c.p)};
  report.metrics["box_length"] = box_length;
  report.metrics["PX"] = c.p * c.x;

  const IndexRange bins = momentum_bins(box, windows.p_band);
  std::vector<double> p_grid;
  for (auto i = bins.first; i < bins.last; ++i) p_grid.push_back(-box.frequency(static_cast<std::size_t>(i)));
  std::sort(p_grid.begin(), p_grid.end());
  if (p_grid.size() != c.m)
    throw PreconditionError("momentum band holds " + std::to_string(p_grid.size()) + " bins, expected M = " +
                            std::to_string(c.m));

  const SampledSignal psi_p = normalize(synthesize_state(box, p_grid, random_coefficients(c.m, c.seed))).psi;
  const WaveFunction psi_m = gate_state(psi_p, windows);
  const WaveFunction smooth = momentum_smooth(psi_m.psi, windows);
  const DensityMatrix rho = build_density(smooth.psi, windows.p_band);
  const auto samples = evolve_diagonal_series(rho, tomography_x_points(box.t_start(), box_length, c.nx),
                                              tomography_t_points(c.nt));
  const TomographyResult tomo = tomography_solve(samples, rho.p_grid, rho.mass, rho.box_length);
  write_artifact(report, dir, "density_true.csv", [&](std::ostream& out) { write_density_csv(out, rho); });
  if (tomo.refused) {
    report.refused("tomography_solve", tomo.refusal_reason, false);
    return;
  }
  double rho_error = 0.0;
  for (std::size_t i = 0; i < rho.elements.size(); ++i)
    rho_error = std::max(rho_error, std::abs(tomo.rho->elements[i] - rho.elements[i]));
  report.le("tomography max |rho - rho_true|", rho_error, 1e-6);
  report.le("tomography condition number", tomo.condition_number, 1e10);
  write_artifact(report, dir, "density.csv", [&](std::ostream& out) { write_density_csv(out, *tomo.rho); });

  const Rank1Result extracted = rank1_extract(*tomo.rho, box);
  const double rank_gap = extracted.eigenvalues.size() > 1 ? extracted.eigenvalues[0] - extracted.eigenvalues[1]
                                                           : extracted.eigenvalues.at(0);
  double fid = std::nan("");
  if (extracted.refused) {
    report.refused("rank1_extract", extracted.refusal_reason, false);
  } else {
    const StateRecovery pipeline = recover_state(extracted.state->psi, windows, c.tolerance);
    const StateRecovery exact = recover_state(smooth.psi, windows, c.tolerance);
    report.metrics["lambda0"] = exact.lambda0;
    if (c.p * c.x >= 1.0 || pipeline.refused) {
      const bool expected = c.p * c.x >= 1.0 || exact.lambda0 > 1.0 - 1e-6;
      report.refused("recover_state", pipeline.refusal_reason, expected);
      report.holds("recover_state refuses and returns no state", pipeline.refused && !pipeline.state && exact.refused);
    } else {
      fid = fidelity(pipeline.state->psi, psi_p);
      report.ge("end-to-end fidelity", fid, 1.0 - 1e-6);
      report.ge("direct recovery fidelity", fidelity(exact.state->psi, psi_p), 1.0 - 1e-8);
      report.le("coordinate concentration ratio <= PX", landau_pollak_ratio(psi_p, windows), c.p * c.x + 1e-9);
      write_artifact(report, dir, "recovered_state.csv",
                     [&](std::ostream& out) { write_signal_csv(out, pipeline.state->psi); });
    }
  }

  nlohmann::ordered_json t;
  t["condition_number"] = tomo.condition_number;
  t["residual"] = tomo.residual;
  t["rank_gap"] = rank_gap;
  if (std::isnan(fid))
    t["fidelity"] = nullptr;
  else
    t["fidelity"] = fid;
  t["populations_inferred"] = tomo.populations_inferred;
  t["psd_projected"] = tomo.psd_projected;
  t["max_abs_error"] = rho_error;
  report.metrics["tomography"] = t;
  write_artifact(report, dir, "tomography.json", [&](std::ostream& out) { out << t.dump(2) << '\n'; });
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
  RunReport report;
  report.kind = config.kind;
  report.config = config.echo;
  report.seed = config.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(out_dir);
    switch (config.kind) {
      case Experiment::kFig2: run_fig2(config, out_dir, report); break;
      case Experiment::kBoundsAudit: run_bounds_audit(config, out_dir, report); break;
      case Experiment::kRecovery: run_recovery(config, out_dir, report); break;
      case Experiment::kStability: run_stability(config, out_dir, report); break;
      case Experiment::kSampling: run_sampling(config, out_dir, report); break;
      case Experiment::kQuantumPipeline: run_quantum(config, out_dir, report); break;
    }
  } catch (const std::exception& e) {
    report.error = e.what();
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    std::ofstream out(out_dir / "report.json", std::ios::binary);
    out << report.to_json().dump(2) << '\n';
  } catch (const std::exception& e) {
    if (report.error.empty()) report.error = std::string("writing report.json: ") + e.what();
  }
  return report;
}

bool BatchResult::passed() const {
  return !reports.empty() && std::all_of(reports.begin(), reports.end(), [](const RunReport& r) { return r.passed(); });
}

BatchResult run_batch(std::vector<ExperimentConfig> configs, const fs::path& out_dir,
                      std::optional<std::uint64_t> seed_override) {
  BatchResult result;
  if (seed_override)
    for (auto& c : configs) c.seed = *seed_override;
  if (configs.size() == 1) {
    result.labels.push_back(to_string(configs.front().kind));
    result.reports.push_back(run_experiment(configs.front(), out_dir));
    return result;
  }
  std::vector<std::future<RunReport>> jobs;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%02zu_", i);
    result.labels.push_back(prefix + to_string(configs[i].kind));
    jobs.push_back(std::async(std::launch::async, [&configs, i, dir = out_dir / result.labels.back()] {
      return run_experiment(configs[i], dir);
    }));
  }
  for (auto& job : jobs) result.reports.push_back(job.get());

  nlohmann::ordered_json summary;
  summary["pass"] = result.passed();
  summary["runs"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < configs.size(); ++i)
    summary["runs"].push_back({{"directory", result.labels[i]}, {"pass", result.reports[i].passed()}});
  std::ofstream(out_dir / "batch_report.json", std::ios::binary) << summary.dump(2) << '\n';
  return result;
}

}  // namespace sublimit::runner
