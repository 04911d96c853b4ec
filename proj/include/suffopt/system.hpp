#pragma once

// Technology and storage catalog, cost annualisation, renewable availability
// series and system validation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "suffopt/carrier_map.hpp"
#include "suffopt/demand.hpp"
#include "suffopt/types.hpp"

namespace suffopt {

enum class AvailabilityKind { Constant, Solar, Wind };

std::string_view to_string(AvailabilityKind k);
AvailabilityKind parse_availability_kind(std::string_view text);

struct AvailabilitySpec {
  AvailabilityKind kind = AvailabilityKind::Constant;
  double target_cf = 1.0;
  std::uint64_t stream = 0;  // mixed into the system seed so each tech gets its own weather
};

struct Technology {
  std::string name;
  std::optional<Carrier> input;  // absent for primary renewables
  Carrier output = Carrier::Electricity;
  double efficiency = 1.0;       // output energy / input energy
  double invest_cost = 0.0;      // EUR/kW of output capacity
  double fixed_op_cost = 0.0;    // EUR/kW/a
  double lifetime = 1.0;         // years
  std::optional<double> potential_gw;
  AvailabilitySpec availability_spec;
  std::vector<double> availability;  // hourly capacity factor, empty = always 1

  bool renewable() const { return !input.has_value(); }
  void validate() const;
};

struct StorageTechnology {
  std::string name;
  Carrier carrier = Carrier::Electricity;
  double energy_cost = 0.0;  // EUR/kWh
  double power_cost = 0.0;   // EUR/kW
  double lifetime = 1.0;
  double charge_eff = 1.0;
  double discharge_eff = 1.0;
  std::optional<double> energy_to_power_limit;  // hours
  std::optional<double> energy_potential_gwh;

  void validate() const;
};

struct SystemConfig {
  std::vector<Technology> technologies;
  std::vector<StorageTechnology> storages;
  CarrierMap carrier_map = CarrierMap::defaults();
  double discount_rate = 0.05;
  int horizon_hours = kHoursPerYear;
  std::uint64_t seed = 7;

  // Solar and wind techs, gas and hydrogen turbines, electrolysis and
  // methanation, batteries, pumped hydro, gas storage and CAES with 2035 costs.
  static SystemConfig defaults(int hours = kHoursPerYear, std::uint64_t seed = 7);

  // Accepts a full description or {"base": "default", ...overrides}.
  static SystemConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // (Re)generates availability series for every tech from its spec.
  void synthesize_availability();

  const Technology* find_technology(const std::string& name) const;
  Technology* find_technology(const std::string& name);
  void remove_technology(const std::string& name);
  void validate() const;
};

// Annuity of an up-front cost. rate == 0 reduces to cost / lifetime.
double annualize(double invest_cost, double lifetime, double rate);

// Deterministic hourly capacity factors in [0,1] with the requested mean.
std::vector<double> build_availability(AvailabilityKind kind, double target_cf,
                                       std::uint64_t seed, int hours = kHoursPerYear);

void write_availability_csv(std::ostream& out, const SystemConfig& system);
// Replaces the availability series of the named techs; header `tech,hour,cf`.
void read_availability_csv(std::istream& in, SystemConfig& system);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

ValidationReport validate_system(const SystemConfig& system, const ProfileSet& profiles);

}  // namespace suffopt
