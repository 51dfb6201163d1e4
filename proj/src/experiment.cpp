#include "gb2d/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gb2d/serialize.hpp"
#include "gb2d/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gb2d {

namespace {

constexpr const char* kSchemaVersion = "gb2d-output-1";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// MANIFEST lists every regular file in the directory with its checksum.
void write_manifest(const fs::path& dir, bool complete) {
  std::vector<std::string> names;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), dir).string();
    if (rel == "MANIFEST") continue;
    names.push_back(rel);
  }
  std::sort(names.begin(), names.end());
  std::ostringstream os;
  os << "schema = " << kSchemaVersion << "\n";
  os << "status = " << (complete ? "complete" : "incomplete") << "\n";
  for (const auto& rel : names) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file((dir / rel).string())));
    os << "fnv1a64 " << hex << " " << rel << "\n";
  }
  write_text(dir / "MANIFEST", os.str());
}

DensityState make_initial(const ExperimentConfig& cfg, int n, double eps) {
  TorusGrid grid(n, n);
  DensityState state = build_initial(grid, cfg.slope_L, cfg.perturbation, cfg.seed);
  if (eps > 0.0) state = mollify(state, eps);
  return state;
}

RunOptions make_run_options(const ExperimentConfig& cfg, const fs::path& dir) {
  RunOptions opts;
  opts.diag_every = cfg.diag_every;
  opts.store_states = cfg.store_states;
  opts.diag.lame = LameParams(cfg.lame_lambda, cfg.lame_mu);
  opts.checkpoint_dir = dir.string();
  opts.checkpoint_every = cfg.checkpoint_every;
  return opts;
}

json record_summary(const DiagnosticsRecord& r) {
  return json{{"time", r.time},
              {"entropy_N", r.entropy_N},
              {"dissipation_cum", r.dissipation_cum},
              {"energy_E", r.energy_E},
              {"elastic_E", r.elastic_E},
              {"l2_plus", r.l2_plus},
              {"l2_minus", r.l2_minus},
              {"llogl_plus", r.llogl_plus},
              {"llogl_minus", r.llogl_minus},
              {"h3_plus", r.h3_plus},
              {"h3_minus", r.h3_minus},
              {"velocity_w12", r.velocity_w12},
              {"clamp_count", r.clamp_count}};
}

// Single trajectory with outputs into `dir`; returns the run result.
RunResult run_one(const ExperimentConfig& cfg, int n, double eps, const fs::path& dir,
                  json& summary) {
  fs::create_directories(dir);
  write_text(dir / "config.echo", echo_config(cfg));
  DensityState state0 = make_initial(cfg, n, eps);
  RunResult res = run(state0, cfg.solver, make_run_options(cfg, dir));
  write_records_csv(res.records, (dir / "trajectory.csv").string());
  write_profiles_csv(res.records, n, (dir / "profiles.csv").string());
  save_state(res.final_state, (dir / "final.state").string());

  summary["initial"] = record_summary(res.records.front());
  summary["final"] = record_summary(res.records.back());
  const OscillationReport osc = verify_oscillation_bound(res.final_state);
  summary["verdicts"] = {
      {"oscillation_bound",
       {{"pass", osc.pass}, {"max_row_tv", osc.max_row_tv}, {"bound", osc.bound}}},
      {"monotonicity", {{"pass", std::min(res.records.back().h3_plus,
                                          res.records.back().h3_minus) >= 0.0}}}};
  if (res.records.size() >= 2) {
    const DiagnosticsOptions dopts{LameParams(cfg.lame_lambda, cfg.lame_mu), true, true};
    const EntropyReport ent = verify_entropy_inequality(res.records, n);
    const EnergyReport ene = verify_energy_inequality(res.records, n, dopts);
    summary["verdicts"]["entropy_inequality"] = {
        {"pass", ent.pass},
        {"max_margin", ent.max_margin},
        {"balance_residual_max", ent.balance_residual_max}};
    summary["verdicts"]["energy_inequality"] = {{"pass", ene.pass},
                                                {"max_margin", ene.max_margin},
                                                {"elastic_monotone", ene.elastic_monotone}};
  }
  return res;
}

double pair_distance(const DensityState& a, const DensityState& b) {
  RealField dp = a.rho_plus_per, dm = a.rho_minus_per;
  for (std::size_t i = 0; i < dp.values().size(); ++i) {
    dp.values()[i] -= b.rho_plus_per.values()[i];
    dm.values()[i] -= b.rho_minus_per.values()[i];
  }
  const double np = l2_norm(dp), nm = l2_norm(dm);
  return std::sqrt(np * np + nm * nm);
}

// Restriction of a fine-grid field to a coarser grid by spectral truncation.
RealField restrict_to(const RealField& fine, const TorusGrid& coarse) {
  const SpectralCoeffs cf = forward_transform(fine);
  SpectralCoeffs cc(coarse);
  for (int j2 = 0; j2 < coarse.n2(); ++j2) {
    const int k2 = coarse.k2(j2);
    for (int j1 = 0; j1 < coarse.n1(); ++j1) {
      const int k1 = coarse.k1(j1);
      if (coarse.nyquist1(j1) || coarse.nyquist2(j2)) continue;  // drop boundary modes
      cc(j1, j2) = cf.at_wavevector(k1, k2);
    }
  }
  return inverse_transform(cc);
}

int experiment_single(const ExperimentConfig& cfg, const fs::path& dir) {
  json summary;
  summary["mode"] = "single";
  summary["schema"] = kSchemaVersion;
  run_one(cfg, cfg.n1, cfg.eps, dir, summary);
  write_json(dir / "summary.json", summary);
  write_manifest(dir, true);
  return kExitPass;
}

int experiment_eps_sweep(const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.echo", echo_config(cfg));
  std::vector<DensityState> finals;
  json summary;
  summary["mode"] = "eps_sweep";
  summary["schema"] = kSchemaVersion;
  for (double eps : cfg.eps_list) {
    char name[64];
    std::snprintf(name, sizeof(name), "eps_%g", eps);
    json sub;
    RunResult res = run_one(cfg, cfg.n1, eps, dir / name, sub);
    summary["runs"][name] = sub;
    finals.push_back(res.final_state);
    write_manifest(dir / name, true);
  }
  // the vanishing-viscosity Cauchy table: consecutive pairwise distances
  std::FILE* f = std::fopen((dir / "eps_distances.csv").string().c_str(), "w");
  std::fprintf(f, "eps_a,eps_b,l2_distance\n");
  std::vector<double> dists;
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    const double d = pair_distance(finals[i], finals[i + 1]);
    dists.push_back(d);
    std::fprintf(f, "%.16e,%.16e,%.16e\n", cfg.eps_list[i], cfg.eps_list[i + 1], d);
  }
  std::fclose(f);
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < dists.size(); ++i)
    if (!(dists[i + 1] < dists[i])) decreasing = false;
  summary["distances"] = dists;
  summary["cauchy_decreasing"] = decreasing;
  write_json(dir / "summary.json", summary);
  write_manifest(dir, true);
  return decreasing ? kExitPass : kExitVerificationFailure;
}

int experiment_resolution_sweep(const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.echo", echo_config(cfg));
  std::vector<DensityState> finals;
  json summary;
  summary["mode"] = "resolution_sweep";
  summary["schema"] = kSchemaVersion;
  for (int n : cfg.n_list) {
    const std::string name = "n_" + std::to_string(n);
    json sub;
    RunResult res = run_one(cfg, n, cfg.eps, dir / name, sub);
    summary["runs"][name] = sub;
    finals.push_back(res.final_state);
    write_manifest(dir / name, true);
  }
  // successive differences measured on the coarser grid of each pair
  std::vector<double> dists;
  std::FILE* f = std::fopen((dir / "convergence.csv").string().c_str(), "w");
  std::fprintf(f, "n_a,n_b,l2_distance,order_vs_previous\n");
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    const TorusGrid coarse(cfg.n_list[i], cfg.n_list[i]);
    DensityState fine_on_coarse(restrict_to(finals[i + 1].rho_plus_per, coarse),
                                restrict_to(finals[i + 1].rho_minus_per, coarse),
                                finals[i + 1].slope_L, finals[i + 1].epsilon,
                                finals[i + 1].time);
    const double d = pair_distance(finals[i], fine_on_coarse);
    const double order = i > 0 && d > 0.0 ? std::log2(dists.back() / d) : 0.0;
    dists.push_back(d);
    std::fprintf(f, "%d,%d,%.16e,%.16e\n", cfg.n_list[i], cfg.n_list[i + 1], d, order);
  }
  std::fclose(f);
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < dists.size(); ++i)
    if (!(dists[i + 1] < dists[i])) decreasing = false;
  summary["distances"] = dists;
  summary["decreasing"] = decreasing;
  write_json(dir / "summary.json", summary);
  write_manifest(dir, true);
  return decreasing ? kExitPass : kExitVerificationFailure;
}

int experiment_picard_compare(const ExperimentConfig& cfg, const fs::path& dir) {
  if (!(cfg.eps > 0.0))
    throw ConfigError("picard_compare requires initial.eps > 0 (the mild form needs viscosity)");
  fs::create_directories(dir);
  write_text(dir / "config.echo", echo_config(cfg));
  const DensityState state0 = make_initial(cfg, cfg.n1, cfg.eps);

  PicardResult full = picard_mild_solve(state0, cfg.solver);
  SolverConfig half_cfg = cfg.solver;
  half_cfg.picard.quad_points = std::max(1, cfg.solver.picard.quad_points / 2);
  PicardResult half = picard_mild_solve(state0, half_cfg);
  const double quad_est = pair_distance(full.trajectory.back(), half.trajectory.back());

  SolverConfig imex_cfg = cfg.solver;
  imex_cfg.t_end = cfg.solver.picard.slab_T;
  RunOptions opts;
  opts.diag_every = 1 << 20;  // endpoints only
  opts.store_states = false;
  RunResult imex = run(state0, imex_cfg, opts);
  SolverConfig imex2 = imex_cfg;
  imex2.dt = imex_cfg.dt * 2.0;
  RunResult imex_coarse = run(state0, imex2, opts);
  const double step_est = pair_distance(imex.final_state, imex_coarse.final_state);

  const double discrepancy = pair_distance(full.trajectory.back(), imex.final_state);
  const double budget = 10.0 * (quad_est + step_est) + 1e-13;
  const bool pass = discrepancy <= budget;

  std::FILE* f = std::fopen((dir / "contraction_log.csv").string().c_str(), "w");
  std::fprintf(f, "iteration,distance,ratio\n");
  for (std::size_t i = 0; i < full.report.distance_history.size(); ++i)
    std::fprintf(f, "%zu,%.16e,%.16e\n", i + 1, full.report.distance_history[i],
                 i > 0 ? full.report.ratio_history[i - 1] : 0.0);
  std::fclose(f);

  json summary{{"mode", "picard_compare"},
               {"schema", kSchemaVersion},
               {"discrepancy", discrepancy},
               {"quadrature_estimate", quad_est},
               {"stepper_estimate", step_est},
               {"budget", budget},
               {"iterations", full.report.iterations},
               {"tstar_estimate", full.report.tstar_estimate},
               {"slab_exceeds_tstar", full.report.slab_exceeds_tstar},
               {"ratio_history", full.report.ratio_history},
               {"pass", pass}};
  write_json(dir / "summary.json", summary);
  write_manifest(dir, true);
  return pass ? kExitPass : kExitVerificationFailure;
}

int experiment_verify_suite(const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "config.echo", echo_config(cfg));
  const std::vector<CriterionResult> results = run_acceptance_suite();
  json verdicts = json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    verdicts.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all_pass = all_pass && r.pass;
  }
  write_json(dir / "verdicts.json",
             json{{"mode", "verify_suite"}, {"schema", kSchemaVersion},
                  {"all_pass", all_pass}, {"criteria", verdicts}});
  write_manifest(dir, true);
  return all_pass ? kExitPass : kExitVerificationFailure;
}

}  // namespace

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("fnv1a64_file: cannot open " + path);
  std::vector<unsigned char> buf(1 << 16);
  std::uint64_t h = 1469598103934665603ull;
  while (is) {
    is.read(reinterpret_cast<char*>(buf.data()), buf.size());
    const std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= buf[i];
      h *= 1099511628211ull;
    }
  }
  return h;
}

int run_experiment(const ExperimentConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  try {
    switch (cfg.mode) {
      case ExperimentConfig::Mode::Single: return experiment_single(cfg, dir);
      case ExperimentConfig::Mode::EpsSweep: return experiment_eps_sweep(cfg, dir);
      case ExperimentConfig::Mode::ResolutionSweep:
        return experiment_resolution_sweep(cfg, dir);
      case ExperimentConfig::Mode::VerifySuite: return experiment_verify_suite(cfg, dir);
      case ExperimentConfig::Mode::PicardCompare: return experiment_picard_compare(cfg, dir);
    }
    return kExitRuntimeError;
  } catch (const ConfigError&) {
    throw;  // caller maps to the config exit code
  } catch (const std::exception& e) {
    // keep partial outputs, mark the manifest incomplete, leave a report
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!ec) {
      write_json(dir / "error.json", json{{"error", e.what()}, {"schema", kSchemaVersion}});
      write_manifest(dir, false);
    }
    return kExitRuntimeError;
  }
}

}  // namespace gb2d
