#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bregman/algorithms.hpp"

namespace bregman {

/// "[v0,v1,...]" with every entry printed as %.17g (round-trips exactly).
std::string format_vector(const Vector& v);
std::string format_number(double v);

inline constexpr const char* kTraceHeader = "n,alpha,beta,x,z,y,Df_to_witness,fp_residual,step_norm,resolvent_iters";

/// One line per iteration under kTraceHeader. Vector columns are JSON
/// arrays inside quoted fields. Output depends only on the trace rows.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Final status, iteration count, wall time, final point, warnings, and the
/// distances to the witness / target when the instance has them.
nlohmann::json trace_summary(const Trace& trace, const ProblemInstance& inst);

}  // namespace bregman
