#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sar/analysis.hpp"
#include "sar/control.hpp"
#include "sar/dynamics.hpp"

namespace sar::io {

/// Header of the trace CSV; node and edge numbers are 1-based.
std::vector<std::string> trace_columns(const SarModel& model, bool with_tracking);

/**
 * One row per sample: t, Q, Qdot, Q_e (all row-major), lambda, |e_c,j| (when
 * tracking), then the diagnostics columns. 17 significant digits.
 */
void write_trace_csv(std::ostream& out, const SarModel& model, const SimTrace& trace,
                     const std::vector<DiagnosticsRow>& diagnostics);

void write_summary_text(std::ostream& out, const std::string& scenario, const Summary& summary);

/// `key=value` lines for scripts.
void write_summary_kv(std::ostream& out, const std::string& scenario, const Summary& summary);

} // namespace sar::io
