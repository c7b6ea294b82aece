#include "csflock/runner.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "csflock/io.hpp"

namespace csflock {

namespace fs = std::filesystem;

RunConfig resolve(RunConfig cfg, const RunOptions& opt) {
  if (opt.out_dir) cfg.output.directory = *opt.out_dir;
  if (opt.seed) cfg.ic.seed = *opt.seed;
  validate_config(cfg);
  const auto& g = cfg.geometry;
  if (!opt.quiet && g.variant == GeometryKind::Interval && cfg.potential.ell > 0.5 * (g.b - g.a))
    std::cerr << "warning: wall layers overlap (ell > (b - a) / 2); no point of the interval is force-free\n";
  return cfg;
}

Trajectory simulate(const RunConfig& cfg) {
  return integrate_partial(cfg.model(), cfg.initial_state(), cfg.integrator.t_end, cfg.integrator.control,
                           cfg.integrator.sample_every);
}

TheoremReport verify(const Trajectory& traj, const Thresholds& th) {
  return traj.model.geometry.kind() == GeometryKind::Interval ? verify_interval(traj, th)
                                                              : verify_halfline(traj, th);
}

namespace {

fs::path prepare_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.output.directory);
  fs::create_directories(dir);
  write_text_file((dir / "config.json").string(), serialize_config(cfg));
  return dir;
}

template <class Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream ss;
  writer(ss);
  write_text_file(path.string(), ss.str());
}

void write_trajectory_files(const fs::path& dir, const Trajectory& traj, bool csv, bool plot) {
  if (csv) {
    write_with(dir / "diagnostics.csv", [&](std::ostream& o) { write_diagnostics_csv(o, traj); });
    write_with(dir / "final_state.csv", [&](std::ostream& o) { write_state_csv(o, traj.final_state()); });
  }
  if (plot) {
    write_with(dir / "plot.dat", [&](std::ostream& o) { write_plot_series(o, traj); });
    write_with(dir / "positions.dat", [&](std::ostream& o) { write_position_traces(o, traj); });
  }
}

void report_failure(const Trajectory& traj) {
  if (!traj.failure) return;
  std::cerr << "integration failed at t=" << format_double(traj.failure->time) << " ("
            << to_string(traj.failure->kind) << "): " << traj.failure->message << '\n';
}

bool hard_failure(const Trajectory& traj) {
  return traj.failure && traj.failure->kind != FailureKind::WallContact;
}

}  // namespace

int run_simulate(const RunConfig& cfg, const RunOptions& opt) {
  const RunConfig c = resolve(cfg, opt);
  const auto dir = prepare_dir(c);
  const Trajectory traj = simulate(c);
  write_trajectory_files(dir, traj, c.output.wants("csv"), c.output.wants("plot"));
  const auto& last = traj.records.back();
  if (!opt.quiet) {
    std::cout << "t=" << format_double(last.t) << " A=" << format_double(last.A) << " E=" << format_double(last.E)
              << " min_wall_distance=" << format_double(check_no_collision(traj).min_wall_distance) << '\n';
  }
  report_failure(traj);
  return traj.complete() ? kExitOk : kExitIntegrationError;
}

int run_verify(const RunConfig& cfg, const RunOptions& opt) {
  const RunConfig c = resolve(cfg, opt);
  const auto dir = prepare_dir(c);
  const Trajectory traj = simulate(c);
  write_trajectory_files(dir, traj, c.output.wants("csv"), c.output.wants("plot"));
  const TheoremReport report = verify(traj, c.thresholds);
  write_text_file((dir / "report.json").string(), report_to_json(report));
  if (!opt.quiet) {
    for (const auto& claim : report.claims) {
      std::cout << to_string(claim.status) << ' ' << claim.name << " value=" << format_double(claim.value) << ' '
                << claim.relation << ' ' << format_double(claim.threshold) << '\n';
    }
  }
  report_failure(traj);
  if (hard_failure(traj)) return kExitIntegrationError;
  return report.all_pass() ? kExitOk : kExitClaimFailed;
}

int run_plot_data(const RunConfig& cfg, const RunOptions& opt) {
  const RunConfig c = resolve(cfg, opt);
  const auto dir = prepare_dir(c);
  const Trajectory traj = simulate(c);
  write_trajectory_files(dir, traj, false, true);
  if (!opt.quiet) std::cout << "wrote " << (dir / "plot.dat").string() << " and " << (dir / "positions.dat").string() << '\n';
  report_failure(traj);
  return traj.complete() ? kExitOk : kExitIntegrationError;
}

namespace {

struct SweepRow {
  std::string text;
  bool pass = false;
};

std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

SweepRow sweep_row(const SweepRun& run) {
  std::string outcome, final_a, delta, r2, min_wall, escape, failed, message;
  bool pass = false;
  if (!run.error.empty()) {
    outcome = "config_error";
    message = run.error;
  } else {
    try {
      const Trajectory traj = simulate(run.config);
      const TheoremReport rep = verify(traj, run.config.thresholds);
      pass = rep.all_pass() && !hard_failure(traj);
      outcome = hard_failure(traj) ? "integration_error" : (pass ? "pass" : "fail");
      final_a = format_double(rep.final_A);
      if (rep.fit) {
        delta = format_double(rep.fit->delta);
        r2 = format_double(rep.fit->r_squared);
      }
      min_wall = format_double(rep.min_wall_distance);
      escape = optional_number(rep.escape_time);
      for (const auto& c : rep.claims) {
        if (c.status != ClaimStatus::Fail) continue;
        if (!failed.empty()) failed += ';';
        failed += c.name;
      }
      if (traj.failure) message = traj.failure->message;
    } catch (const std::exception& e) {
      outcome = "error";
      message = e.what();
    }
  }
  std::string line = std::to_string(run.index);
  for (const auto& v : run.values) line += "," + csv_field(v);
  for (const auto& f : {std::to_string(run.seed), outcome, final_a, delta, r2, min_wall, escape, failed, message})
    line += "," + csv_field(f);
  return SweepRow{line + "\n", pass};
}

std::vector<SweepRow> sweep_rows(const std::vector<SweepRun>& runs, unsigned parallelism) {
  std::vector<SweepRow> rows(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < runs.size(); k = next++) rows[k] = sweep_row(runs[k]);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(runs.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_header(const SweepConfig& sweep) {
  std::string h = "run";
  for (const auto& a : sweep.axes) h += "," + csv_field(a.key);
  return h + ",seed,outcome,final_A,delta,r_squared,min_wall_distance,escape_time,failed_claims,message\n";
}

}  // namespace

std::string sweep_table(const SweepConfig& sweep, unsigned parallelism) {
  std::string out = sweep_header(sweep);
  for (const auto& row : sweep_rows(sweep.expand(), parallelism)) out += row.text;
  return out;
}

int run_sweep(const SweepConfig& sweep_in, const RunOptions& opt) {
  SweepConfig sweep = sweep_in;
  if (opt.seed) sweep.seeds = {*opt.seed};
  const RunConfig base = resolve(parse_config(sweep.base_text), RunOptions{opt.out_dir, std::nullopt, opt.quiet});
  const fs::path dir(base.output.directory);
  fs::create_directories(dir);
  write_text_file((dir / "config.json").string(), serialize_config(base));

  const auto runs = sweep.expand();
  const auto rows = sweep_rows(runs, sweep.parallelism);
  std::string table = sweep_header(sweep);
  std::size_t passed = 0;
  for (const auto& r : rows) {
    table += r.text;
    passed += r.pass ? 1 : 0;
  }
  write_text_file((dir / "sweep.csv").string(), table);
  if (!opt.quiet) std::cout << passed << "/" << rows.size() << " runs passed\n";
  return passed == rows.size() ? kExitOk : kExitClaimFailed;
}

}  // namespace csflock
