#include "ptheory/report.hpp"

#include <sstream>

namespace ptheory {

bool Report::passed() const {
  for (const CheckResult& c : checks)
    if (c.failed()) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json jchecks = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json jc = {{"name", c.name},
                         {"law", c.law},
                         {"status", c.status},
                         {"cases", c.cases},
                         {"max_residual", c.max_residual}};
    if (c.failed()) jc["counterexample"] = c.counterexample;
    jchecks.push_back(std::move(jc));
  }
  return {{"suite", suite},
          {"instance", instance},
          {"seed", seed},
          {"tolerance", {{"absolute", tol.absolute}, {"relative", tol.relative}}},
          {"passed", passed()},
          {"checks", jchecks}};
}

std::string Report::to_markdown() const {
  std::ostringstream out;
  out << "## Suite `" << suite << "` on `" << instance << "` (seed " << seed << ")\n\n";
  out << "| check | law | status | cases | max residual |\n";
  out << "|---|---|---|---:|---:|\n";
  for (const CheckResult& c : checks) {
    out << "| " << c.name << " | " << c.law << " | " << c.status << " | " << c.cases << " | "
        << c.max_residual << " |\n";
  }
  out << "\n";
  return out.str();
}

nlohmann::json reports_to_json(const std::vector<Report>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const Report& r : reports) out.push_back(r.to_json());
  return out;
}

std::string reports_to_json_string(const std::vector<Report>& reports) {
  return reports_to_json(reports).dump(2) + "\n";
}

std::string reports_to_markdown(const std::vector<Report>& reports) {
  std::string out = "# Verification report\n\n";
  for (const Report& r : reports) out += r.to_markdown();
  return out;
}

}  // namespace ptheory
