#pragma once

#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "suffopt/measures.hpp"
#include "suffopt/types.hpp"

namespace suffopt {

struct CarrierSplit {
  Carrier carrier = Carrier::Electricity;
  double fraction = 1.0;
};

// Which carriers serve each (sector, subsector) slice of final demand.
class CarrierMap {
 public:
  CarrierMap() = default;
  explicit CarrierMap(std::map<SliceKey, std::vector<CarrierSplit>> splits);

  // Heat and road/rail on electricity, aviation on hydrogen, process heat
  // split by temperature level across hydrogen, synthetic gas and electricity.
  static CarrierMap defaults();
  static CarrierMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<CarrierSplit>& splits(Sector s, const std::string& subsector) const;
  const std::map<SliceKey, std::vector<CarrierSplit>>& all() const { return splits_; }

 private:
  std::map<SliceKey, std::vector<CarrierSplit>> splits_;
};

}  // namespace suffopt
