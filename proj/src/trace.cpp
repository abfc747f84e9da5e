#include "undernewton/trace.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "undernewton/error.hpp"

namespace undernewton {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SolveOutcome& outcome) {
  out << kTraceHeader << '\n';
  int inner = 0;
  for (const auto& rec : outcome.trace) {
    inner += rec.inner_reductions;
    out << rec.k << ',' << format_real(rec.u) << ',' << format_real(rec.alpha) << ','
        << format_real(rec.beta) << ',' << to_string(rec.stage) << ',' << format_real(rec.step_norm)
        << ',' << inner << '\n';
  }
}

void write_trace_csv(const std::string& path, const SolveOutcome& outcome) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write trace file '" + path + "'");
  write_trace_csv(out, outcome);
}

}  // namespace undernewton
