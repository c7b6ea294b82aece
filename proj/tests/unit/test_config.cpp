#include <string>

#include "csflock/config.hpp"
#include "csflock/error.hpp"
#include "doctest.h"

using namespace csflock;

namespace {

std::string key_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("empty document gives the defaults") {
  for (const char* text : {"", "  \n", "{}"}) {
    const auto c = parse_config(text);
    CHECK(c.kernel.family == KernelFamily::PowerLaw);
    CHECK(c.kernel.H == 1.0);
    CHECK(c.kernel.beta == 0.25);
    CHECK(c.potential.ell == 1.0);
    CHECK(c.potential.theta == 1.0);
    CHECK(c.geometry.variant == GeometryKind::HalfLine);
    CHECK(c.integrator.control.abs_tol == 1e-8);
    CHECK(c.integrator.control.rel_tol == 1e-8);
    CHECK(c.integrator.control.dt_init == 1e-3);
    CHECK(c.integrator.control.dt_min == 1e-12);
    CHECK(c.integrator.control.dt_max == 0.1);
    CHECK(c.integrator.control.wall_safety == 0.25);
    CHECK(c.integrator.sample_every == 0.1);
    CHECK(c.integrator.t_end == 200.0);
    CHECK(c.ic.n_agents == 16);
    CHECK(c.ic.seed == 42);
    CHECK(c.output.formats == std::vector<std::string>{"csv"});
  }
}

TEST_CASE("unknown sections and keys are rejected by name") {
  CHECK(key_of(R"({"kernal": {}})") == "kernal");
  CHECK(key_of(R"({"kernel": {"betta": 1}})") == "kernel.betta");
  CHECK(key_of(R"({"kernel": {"beta": "big"}})") == "kernel.beta");
  CHECK(key_of(R"({"kernel": {"family": "gauss"}})") == "kernel.family");
  CHECK(key_of("[1, 2]").empty());
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("geometry endpoints") {
  CHECK(key_of(R"({"geometry": {"variant": "interval"}})") == "geometry.a");
  CHECK(key_of(R"({"geometry": {"variant": "interval", "a": 0}})") == "geometry.b");
  CHECK(key_of(R"({"geometry": {"variant": "halfline", "a": 0}})") == "geometry.a");
  CHECK(key_of(R"({"geometry": {"variant": "interval", "a": 4, "b": 1}})") == "geometry.b");
  const auto c = parse_config(R"({"geometry": {"variant": "interval", "a": 0, "b": 6}, "ic": {"x_high": 5}})");
  CHECK(c.geometry.variant == GeometryKind::Interval);
  CHECK(c.model().geometry.right() == 6.0);
}

TEST_CASE("value invariants") {
  CHECK(key_of(R"({"potential": {"ell": 0}})") == "potential.ell");
  CHECK(key_of(R"({"potential": {"theta": -1}})") == "potential.theta");
  CHECK(key_of(R"({"potential": {"theta": 0}})") == "<accepted>");
  CHECK(key_of(R"({"ic": {"n_agents": 0}})") == "ic.n_agents");
  CHECK(key_of(R"({"ic": {"n_agents": 4097}})") == "ic.n_agents");
  CHECK(key_of(R"({"ic": {"n_agents": 2.5}})") == "ic.n_agents");
  CHECK(key_of(R"({"integrator": {"wall_safety": 1}})") == "integrator.wall_safety");
  CHECK(key_of(R"({"integrator": {"dt_init": 1}})") == "integrator.dt_init");
  CHECK(key_of(R"({"thresholds": {"tail_fraction": 0}})") == "thresholds.tail_fraction");
  CHECK(key_of(R"({"output": {"formats": ["csv", "png"]}})") == "output.formats");
}

TEST_CASE("sampling box keeps a margin from the walls") {
  CHECK(key_of(R"({"ic": {"x_low": 0.04}})") == "ic.x_low");
  CHECK(key_of(R"({"ic": {"x_low": 0.05}})") == "<accepted>");
  CHECK(key_of(R"({"geometry": {"variant": "interval", "a": 0, "b": 3}})") == "ic.x_high");
  CHECK(key_of(R"({"geometry": {"variant": "interval", "a": 0, "b": 3.05}})") == "<accepted>");
}

TEST_CASE("serialize then parse reproduces the config") {
  const auto c = parse_config(R"({"kernel": {"beta": 0.125, "H": 2.5}, "ic": {"seed": 18446744073709551615},
    "geometry": {"variant": "interval", "a": -1, "b": 7.5}, "output": {"formats": ["plot", "csv"]}})");
  const std::string text = serialize_config(c);
  const auto back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.kernel.beta == 0.125);
  CHECK(back.ic.seed == 18446744073709551615ull);
  CHECK(back.geometry.a == -1.0);
  CHECK(back.output.wants("plot"));
  CHECK(text.back() == '\n');
}

TEST_CASE("sweep expansion order") {
  const auto sw = parse_sweep_config(R"({
    "base": {"integrator": {"t_end": 5}},
    "axes": [{"key": "kernel.beta", "values": [0.5, 0.1, 0.25]},
             {"key": "kernel.family", "values": ["powerlaw", "constant"]}],
    "seeds": [9, 3],
    "parallelism": 4})");
  CHECK(sw.parallelism == 4);
  REQUIRE(sw.axes.size() == 2);
  CHECK(sw.axes[0].values == std::vector<std::string>{"0.1", "0.25", "0.5"});
  CHECK(sw.axes[1].values == std::vector<std::string>{"\"constant\"", "\"powerlaw\""});
  const auto runs = sw.expand();
  REQUIRE(runs.size() == 12);
  CHECK(runs[0].values == std::vector<std::string>{"0.1", "\"constant\""});
  CHECK(runs[0].seed == 3);
  CHECK(runs[1].seed == 9);
  CHECK(runs[2].values == std::vector<std::string>{"0.1", "\"powerlaw\""});
  CHECK(runs[4].values[0] == "0.25");
  CHECK(runs[11].values == std::vector<std::string>{"0.5", "\"powerlaw\""});
  for (std::size_t k = 0; k < runs.size(); ++k) {
    CHECK(runs[k].index == k);
    CHECK(runs[k].error.empty());
    CHECK(runs[k].config.integrator.t_end == 5.0);
    CHECK(runs[k].config.ic.seed == runs[k].seed);
  }
  CHECK(runs[0].config.kernel.family == KernelFamily::Constant);
}

TEST_CASE("sweep validation") {
  CHECK_THROWS_AS(parse_sweep_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"axes": [{"key": "kernel.nope", "values": [1]}]})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"axes": [{"key": "output.directory", "values": ["x"]}]})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"axes": [{"key": "kernel.beta", "values": []}]})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"parallelism": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"seeds": [-1]})"), ConfigError);

  std::string seeds = "[";
  for (int i = 0; i < 101; ++i) seeds += (i ? "," : "") + std::to_string(i);
  seeds += "]";
  std::string values = "[";
  for (int i = 0; i < 100; ++i) values += (i ? "," : "") + std::to_string(0.01 * i);
  values += "]";
  const std::string at_limit = R"({"axes": [{"key": "kernel.beta", "values": )" + values + R"(}], "seeds": )" +
                               seeds.substr(0, seeds.rfind(',')) + "]}";
  CHECK(parse_sweep_config(at_limit).expand().size() == kMaxSweepRuns);
  const std::string over = R"({"axes": [{"key": "kernel.beta", "values": )" + values + R"(}], "seeds": )" + seeds + "}";
  CHECK_THROWS_AS(parse_sweep_config(over), ConfigError);
}

TEST_CASE("an invalid combination is reported on its run only") {
  const auto sw = parse_sweep_config(R"({"axes": [{"key": "potential.ell", "values": [1, -1]}]})");
  const auto runs = sw.expand();
  REQUIRE(runs.size() == 2);
  CHECK_FALSE(runs[0].error.empty());
  CHECK(runs[0].error.find("potential.ell") != std::string::npos);
  CHECK(runs[1].error.empty());
}

TEST_CASE("shipped example configurations parse") {
  const std::string dir = CSFLOCK_CONFIG_DIR;
  for (const char* name : {"halfline.json", "interval.json", "no_wall.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(dir + "/" + name));
  }
  const auto sw = load_sweep_config(dir + "/sweep.json");
  CHECK(sw.expand().size() == 45);
  const auto iv = load_config(dir + "/interval.json");
  CHECK(iv.geometry.variant == GeometryKind::Interval);
  CHECK(iv.ic.seed == 7);
}
