#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "csflock/integrator.hpp"
#include "csflock/verification.hpp"

namespace csflock {

/// %.17g, so every double survives a text round trip.
std::string format_double(double v);

/// RFC 4180 field: quoted (with doubled quotes) only when it holds a comma,
/// a quote or a line break.
std::string csv_field(std::string_view s);

// Header plus one row per sample, columns in DiagnosticsRecord order.
void write_diagnostics_csv(std::ostream& out, const Trajectory& traj);
// Header "i,x,v" then one row per agent.
void write_state_csv(std::ostream& out, const FlockState& state);

// Whitespace columns "t A E K p D F_max" under a '#' header line.
void write_plot_series(std::ostream& out, const Trajectory& traj);
// One line per sample: t followed by every position.
void write_position_traces(std::ostream& out, const Trajectory& traj);

std::string report_to_json(const TheoremReport& report);
TheoremReport report_from_json(std::string_view text);

void write_text_file(const std::string& path, std::string_view content);

}  // namespace csflock
