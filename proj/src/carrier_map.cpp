#include "suffopt/carrier_map.hpp"

#include <cmath>
#include <set>

namespace suffopt {

CarrierMap::CarrierMap(std::map<SliceKey, std::vector<CarrierSplit>> splits)
    : splits_(std::move(splits)) {
  for (const auto& [key, list] : splits_) {
    const std::string name = std::string(to_string(key.first)) + "/" + key.second;
    if (list.empty()) throw ConfigError("carrier map entry " + name + " is empty");
    std::set<Carrier> seen;
    double sum = 0.0;
    for (const auto& s : list) {
      if (!(s.fraction > 0.0 && s.fraction <= 1.0)) {
        throw ConfigError("carrier split for " + name + " must lie in (0,1]");
      }
      if (!seen.insert(s.carrier).second) {
        throw ConfigError("carrier listed twice for " + name);
      }
      sum += s.fraction;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("carrier splits for " + name + " sum to " + std::to_string(sum));
    }
  }
}

CarrierMap CarrierMap::defaults() {
  using C = Carrier;
  using S = Sector;
  return CarrierMap({
      {{S::Heat, kResidentialHeat}, {{C::Electricity, 1.0}}},
      {{S::Heat, "process_low"}, {{C::Hydrogen, 0.5}, {C::Electricity, 0.5}}},
      {{S::Heat, "process_mid"}, {{C::SyntheticGas, 0.6}, {C::Electricity, 0.4}}},
      {{S::Heat, "process_high"}, {{C::SyntheticGas, 1.0}}},
      {{S::Mobility, "air"}, {{C::Hydrogen, 1.0}}},
      {{S::Mobility, "road"}, {{C::Electricity, 1.0}}},
      {{S::Mobility, "rail"}, {{C::Electricity, 1.0}}},
      {{S::Electricity, "residential"}, {{C::Electricity, 1.0}}},
      {{S::Electricity, "commercial"}, {{C::Electricity, 1.0}}},
      {{S::Electricity, "industrial"}, {{C::Electricity, 1.0}}},
  });
}

const std::vector<CarrierSplit>& CarrierMap::splits(Sector s, const std::string& subsector) const {
  auto it = splits_.find({s, subsector});
  if (it == splits_.end()) {
    throw ConfigError("no carrier assignment for " + std::string(to_string(s)) + "/" + subsector);
  }
  return it->second;
}

nlohmann::json CarrierMap::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [key, list] : splits_) {
    nlohmann::json entry{{"sector", to_string(key.first)}, {"subsector", key.second}};
    for (const auto& s : list) entry["carriers"][std::string(to_string(s.carrier))] = s.fraction;
    arr.push_back(entry);
  }
  return arr;
}

CarrierMap CarrierMap::from_json(const nlohmann::json& j) {
  try {
    std::map<SliceKey, std::vector<CarrierSplit>> splits;
    for (const auto& entry : j) {
      SliceKey key{parse_sector(entry.at("sector").get<std::string>()), entry.at("subsector")};
      auto& list = splits[key];
      for (const auto& [name, f] : entry.at("carriers").items()) {
        list.push_back({parse_carrier(name), f.get<double>()});
      }
    }
    return CarrierMap(std::move(splits));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("carrier map: ") + e.what());
  }
}

}  // namespace suffopt
