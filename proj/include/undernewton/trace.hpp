#pragma once

#include <iosfwd>
#include <string>

#include "undernewton/newton.hpp"

namespace undernewton {

inline constexpr const char* kTraceHeader = "k,u,alpha,beta,stage,step_norm,inner";

/// printf %.17g, enough digits to round-trip a double.
std::string format_real(double v);

/// One row per accepted iteration; the last column is the cumulative count of
/// rejected trials.
void write_trace_csv(std::ostream& out, const SolveOutcome& outcome);
void write_trace_csv(const std::string& path, const SolveOutcome& outcome);

}  // namespace undernewton
