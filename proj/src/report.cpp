#include "minklab/report.hpp"

#include <json.hpp>

#include <cmath>

namespace minklab {

double ResidualReport::relative() const {
  return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

std::string ResidualReport::to_jsonl() const {
  nlohmann::json j;
  j["name"] = name;
  j["value"] = value;
  j["scale"] = scale;
  j["resolution"] = resolution;
  if (order)
    j["order"] = *order;
  else
    j["order"] = nullptr;
  if (condition) j["condition"] = *condition;
  return j.dump();
}

}  // namespace minklab
