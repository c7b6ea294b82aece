#include "csflock/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace csflock {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_diagnostics_csv(std::ostream& out, const Trajectory& traj) {
  for (std::size_t c = 0; c < kDiagnosticsColumns.size(); ++c) out << (c ? "," : "") << kDiagnosticsColumns[c];
  out << '\n';
  for (const auto& r : traj.records) {
    const auto row = as_row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void write_state_csv(std::ostream& out, const FlockState& state) {
  out << "i,x,v\n";
  for (std::size_t i = 0; i < state.size(); ++i)
    out << i << ',' << format_double(state.x[i]) << ',' << format_double(state.v[i]) << '\n';
}

void write_plot_series(std::ostream& out, const Trajectory& traj) {
  out << "# t A E K p D F_max\n";
  for (const auto& r : traj.records) {
    out << format_double(r.t) << ' ' << format_double(r.A) << ' ' << format_double(r.E) << ' ' << format_double(r.K)
        << ' ' << format_double(r.p) << ' ' << format_double(r.D) << ' ' << format_double(r.F_max) << '\n';
  }
}

void write_position_traces(std::ostream& out, const Trajectory& traj) {
  out << "# t";
  for (std::size_t i = 0; i < traj.model.n_agents; ++i) out << " x" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << format_double(traj.sample_times[k]);
    for (double xi : traj.states[k].x) out << ' ' << format_double(xi);
    out << '\n';
  }
}

namespace {

// JSON has no NaN or infinities; spell them as strings so nothing is lost.
Json num(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

double num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("report: expected a number, got " + j.dump());
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> nums(const Json& j) {
  std::vector<double> out;
  for (const auto& e : j) out.push_back(num(e));
  return out;
}

ClaimStatus status_from(const std::string& s) {
  if (s == "pass") return ClaimStatus::Pass;
  if (s == "fail") return ClaimStatus::Fail;
  if (s == "not_applicable") return ClaimStatus::NotApplicable;
  throw std::invalid_argument("report: unknown claim status " + s);
}

FailureKind failure_from(const std::string& s) {
  for (auto k : {FailureKind::WallContact, FailureKind::StepUnderflow, FailureKind::NonFinite})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("report: unknown failure kind " + s);
}

}  // namespace

std::string report_to_json(const TheoremReport& r) {
  Json j;
  j["geometry"] = r.geometry;
  j["all_pass"] = r.all_pass();
  Json claims = Json::array();
  for (const auto& c : r.claims) {
    claims.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"status", to_string(c.status)},
                      {"value", num(c.value)},
                      {"threshold", num(c.threshold)},
                      {"relation", c.relation}});
  }
  j["claims"] = claims;
  j["min_wall_distance"] = num(r.min_wall_distance);
  j["final_time"] = num(r.final_time);
  j["final_A"] = num(r.final_A);
  j["final_D"] = num(r.final_D);
  if (r.fit) {
    j["fit"] = {{"C", num(r.fit->C)},
                {"delta", num(r.fit->delta)},
                {"r_squared", num(r.fit->r_squared)},
                {"t_start", num(r.fit->t_start)},
                {"t_end", num(r.fit->t_end)},
                {"points", r.fit->points}};
  } else {
    j["fit"] = nullptr;
  }
  j["settled_positions"] = nums(r.settled_positions);
  j["pairwise_limits"] = nums(r.pairwise_limits);
  j["escape_time"] = r.escape_time ? num(*r.escape_time) : Json(nullptr);
  j["regime"] = r.regime ? Json(*r.regime) : Json(nullptr);
  j["kinetic_integral"] = num(r.kinetic_integral);
  j["force_sq_integral"] = num(r.force_sq_integral);
  j["max_abs_work"] = num(r.max_abs_work);
  if (r.failure) {
    j["failure"] = {{"kind", to_string(r.failure->kind)}, {"time", num(r.failure->time)}, {"message", r.failure->message}};
  } else {
    j["failure"] = nullptr;
  }
  return j.dump(2) + "\n";
}

TheoremReport report_from_json(std::string_view text) {
  const Json j = Json::parse(text.begin(), text.end());
  TheoremReport r;
  r.geometry = j.at("geometry").get<std::string>();
  for (const auto& c : j.at("claims")) {
    r.claims.push_back(Claim{c.at("name").get<std::string>(), c.at("anchor").get<std::string>(),
                             status_from(c.at("status").get<std::string>()), num(c.at("value")),
                             num(c.at("threshold")), c.at("relation").get<std::string>()});
  }
  r.min_wall_distance = num(j.at("min_wall_distance"));
  r.final_time = num(j.at("final_time"));
  r.final_A = num(j.at("final_A"));
  r.final_D = num(j.at("final_D"));
  if (!j.at("fit").is_null()) {
    const auto& f = j.at("fit");
    r.fit = FitResult{num(f.at("C")),       num(f.at("delta")), num(f.at("r_squared")),
                      num(f.at("t_start")), num(f.at("t_end")), f.at("points").get<int>()};
  }
  r.settled_positions = nums(j.at("settled_positions"));
  r.pairwise_limits = nums(j.at("pairwise_limits"));
  if (!j.at("escape_time").is_null()) r.escape_time = num(j.at("escape_time"));
  if (!j.at("regime").is_null()) r.regime = j.at("regime").get<std::string>();
  r.kinetic_integral = num(j.at("kinetic_integral"));
  r.force_sq_integral = num(j.at("force_sq_integral"));
  r.max_abs_work = num(j.at("max_abs_work"));
  if (!j.at("failure").is_null()) {
    const auto& f = j.at("failure");
    r.failure = IntegrationFailure{failure_from(f.at("kind").get<std::string>()), num(f.at("time")),
                                   f.at("message").get<std::string>()};
  }
  return r;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace csflock
