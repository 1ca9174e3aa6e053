#include <algorithm>

#include "wmlab/theoremlab.hpp"

namespace wmlab {

void VerificationReport::check(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerificationReport::status() const {
  if (!passed()) return "fail";
  return conditions_met ? "pass" : "conditions not met";
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["claim"] = claim;
  j["parameters"] = parameters;
  j["measured"] = measured;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["checks"].push_back(std::move(cj));
  }
  if (!notes.empty()) j["notes"] = notes;
  j["status"] = status();
  return j;
}

CubeBijection example_c_bijection() {
  return CubeBijection::from_components(std::vector<TruthTable>{
      TruthTable::parity(3, 0b001), TruthTable::parity(3, 0b011), TruthTable::parity(3, 0b101)});
}

}  // namespace wmlab
