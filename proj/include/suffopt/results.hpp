#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "suffopt/lp/builder.hpp"
#include "suffopt/lp/instance.hpp"

namespace suffopt {

struct Flow {
  std::string from;
  std::string to;
  double twh = 0.0;  // per year
};

struct CapacityEntry {
  std::string name;
  bool renewable = false;
  double gw = 0.0;
};

struct StorageEntry {
  std::string name;
  Carrier carrier = Carrier::Electricity;
  double energy_gwh = 0.0;
  double power_gw = 0.0;
};

struct ScenarioResult {
  std::string name;
  double total_cost = 0.0;  // MEUR/a
  double demand_twh = 0.0;
  std::vector<CapacityEntry> capacities;
  std::vector<StorageEntry> storage;
  std::vector<Flow> flows;

  // max over balance rows of |activity - demand| / (1 + demand), and the
  // absolute value in GWh.
  double max_balance_residual = 0.0;
  double max_balance_residual_gwh = 0.0;
  double max_cyclic_residual = 0.0;  // GWh
  lp::DualityReport duality;
  long iterations = 0;

  double renewable_capacity_gw() const;
  double storage_energy_gwh() const;
  double storage_power_gw() const;
  double capacity_of(const std::string& tech) const;  // 0 when absent
  double renewable_generation_twh() const;
  double losses_twh() const;
};

inline constexpr const char* kLossNode = "losses";
std::string demand_node(Carrier c);

// Throws ConfigError for non-optimal solutions.
ScenarioResult extract_results(const lp::EnergyModel& model, const lp::LpSolution& solution,
                               const std::string& name = "");

// Node-link form: {"name", "units", "nodes": [{"id"}], "links": [{"source", "target", "value"}]}
// with source/target as node indices in order of first appearance.
nlohmann::json sankey_json(const ScenarioResult& result);

}  // namespace suffopt
