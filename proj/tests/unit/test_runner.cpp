#include <sstream>
#include <string>
#include <vector>

#include "csflock/io.hpp"
#include "csflock/runner.hpp"
#include "doctest.h"

using namespace csflock;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("a one-run sweep matches verify") {
  const auto sweep = parse_sweep_config(R"({"base": {"integrator": {"t_end": 40}, "ic": {"n_agents": 8}}})");
  const auto rows = lines(sweep_table(sweep, 1));
  REQUIRE(rows.size() == 2);
  const auto header = split_csv_line(rows[0]);
  const auto row = split_csv_line(rows[1]);
  REQUIRE(header.size() == row.size());

  const RunConfig cfg = parse_config(R"({"integrator": {"t_end": 40}, "ic": {"n_agents": 8}})");
  const auto rep = verify(simulate(cfg), cfg.thresholds);
  auto field = [&](const std::string& name) {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return row[k];
    FAIL("missing column " << name);
    return std::string();
  };
  CHECK(field("seed") == "42");
  CHECK(field("outcome") == (rep.all_pass() ? "pass" : "fail"));
  CHECK(field("final_A") == format_double(rep.final_A));
  CHECK(field("min_wall_distance") == format_double(rep.min_wall_distance));
  REQUIRE(rep.fit.has_value());
  CHECK(field("delta") == format_double(rep.fit->delta));
}

TEST_CASE("beta axis times five seeds gives fifteen rows in order") {
  const auto sweep = parse_sweep_config(R"({"base": {"integrator": {"t_end": 5}, "ic": {"n_agents": 4}},
    "axes": [{"key": "kernel.beta", "values": [0.5, 0.1, 0.25]}], "seeds": [5, 4, 3, 2, 1], "parallelism": 3})");
  const auto rows = lines(sweep_table(sweep, sweep.parallelism));
  REQUIRE(rows.size() == 16);
  CHECK(rows[0].rfind("run,kernel.beta,seed,", 0) == 0);
  const char* betas[] = {"0.1", "0.25", "0.5"};
  for (std::size_t k = 0; k < 15; ++k) {
    const auto f = split_csv_line(rows[k + 1]);
    CHECK(f[0] == std::to_string(k));
    CHECK(f[1] == betas[k / 5]);
    CHECK(f[2] == std::to_string(k % 5 + 1));
  }
}

TEST_CASE("a resting flock outside the wall layer emits constant rows") {
  const RunConfig cfg = parse_config(R"({"integrator": {"t_end": 3},
    "ic": {"n_agents": 4, "x_low": 2, "x_high": 2, "v_low": 0, "v_high": 0}})");
  const auto tr = simulate(cfg);
  REQUIRE(tr.complete());
  for (const auto& r : tr.records) {
    auto a = as_row(r), b = as_row(tr.records.front());
    a[0] = b[0] = 0.0;
    CHECK(a == b);
  }
}

TEST_CASE("plot columns equal the diagnostics to full precision") {
  const RunConfig cfg = parse_config(R"({"integrator": {"t_end": 4}, "ic": {"n_agents": 5}})");
  const auto tr = simulate(cfg);
  std::ostringstream plot;
  write_plot_series(plot, tr);
  std::size_t k = 0;
  for (const auto& l : lines(plot.str())) {
    if (l.front() == '#') continue;
    std::istringstream in(l);
    double t, A, E, K, p, D, F;
    in >> t >> A >> E >> K >> p >> D >> F;
    const auto& r = tr.records.at(k++);
    CHECK(t == r.t);
    CHECK(A == r.A);
    CHECK(E == r.E);
    CHECK(K == r.K);
    CHECK(p == r.p);
    CHECK(D == r.D);
    CHECK(F == r.F_max);
  }
  CHECK(k == tr.records.size());
}

TEST_CASE("overrides are applied and re-validated") {
  const RunConfig cfg = parse_config("");
  RunOptions opt;
  opt.seed = 99;
  opt.out_dir = "elsewhere";
  const auto r = resolve(cfg, opt);
  CHECK(r.ic.seed == 99);
  CHECK(r.output.directory == "elsewhere");
  opt.out_dir = "";
  CHECK_THROWS_AS(resolve(cfg, opt), ConfigError);
}
