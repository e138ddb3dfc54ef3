#include "bregman/trace_io.hpp"

#include <cstdio>
#include <ostream>

namespace bregman {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_vector(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += format_number(v[i]);
  }
  s += ']';
  return s;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.n << ',' << format_number(r.alpha) << ',' << format_number(r.beta) << ",\"" << format_vector(r.x.coords())
        << "\",\"" << format_vector(r.z.coords()) << "\",\"" << format_vector(r.y.coords()) << "\","
        << format_number(r.df_to_witness) << ',' << format_number(r.fp_residual) << ','
        << format_number(r.step_norm) << ',' << r.resolvent_iters << '\n';
  }
}

namespace {

nlohmann::json to_array(const PrimalPoint& p) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

}  // namespace

nlohmann::json trace_summary(const Trace& trace, const ProblemInstance& inst) {
  nlohmann::json j;
  j["algorithm"] = std::string(to_string(trace.algorithm));
  j["status"] = std::string(to_string(trace.status));
  j["iterations"] = trace.iterations();
  j["wall_seconds"] = trace.wall_seconds;
  if (trace.error_kind) {
    j["error"] = {{"kind", std::string(to_string(*trace.error_kind))}, {"message", trace.error_message}};
  }
  j["warnings"] = trace.warnings;
  if (trace.final_x) {
    j["final_x"] = to_array(*trace.final_x);
    if (inst.witness()) {
      j["final_distance_to_witness"] = max_abs_diff(*trace.final_x, *inst.witness());
      j["final_Df_to_witness"] = bregman_distance(inst.geometry(), *inst.witness(), *trace.final_x);
    }
    if (inst.target()) j["final_distance_to_target"] = max_abs_diff(*trace.final_x, *inst.target());
  }
  return j;
}

}  // namespace bregman
