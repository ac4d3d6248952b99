#include "potlab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace potlab {

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

}  // namespace

std::string to_json_line(const InequalityReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["p"] = r.p ? number(*r.p) : nlohmann::json(nullptr);
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["slack"] = number(r.slack);
  j["tolerance"] = number(r.tolerance);
  j["satisfied"] = r.satisfied;
  j["equality"] = r.equality;
  j["informational"] = r.informational;
  j["shape"] = r.context.shape;
  j["t"] = r.context.t ? number(*r.context.t) : nlohmann::json(nullptr);
  j["discretization"] = r.context.discretization;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.details) details[k] = number(v);
  j["details"] = details;
  return j.dump();
}

void write_jsonl(std::ostream& out, std::span<const InequalityReport> reports) {
  for (const auto& r : reports) out << to_json_line(r) << '\n';
}

void write_table(std::ostream& out, std::span<const InequalityReport> reports) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "name" << std::setw(6) << "p" << std::setw(6) << "t" << std::right
     << std::setw(16) << "lhs" << std::setw(16) << "rhs" << std::setw(16) << "slack" << "  status\n";
  for (const auto& r : reports) {
    std::ostringstream p, t;
    if (r.p) p << *r.p;
    if (r.context.t) t << *r.context.t;
    const char* status = !r.satisfied ? "VIOLATED" : (r.equality ? "equality" : "ok");
    os << std::left << std::setw(20) << r.name << std::setw(6) << p.str() << std::setw(6) << t.str() << std::right
       << std::setprecision(8) << std::setw(16) << r.lhs << std::setw(16) << r.rhs << std::setw(16) << r.slack
       << "  " << status << (r.informational ? " (informational)" : "") << '\n';
  }
  out << os.str();
}

}  // namespace potlab
