#pragma once

// Greenfield capacity expansion and dispatch model as a linear program.
//
// Units: capacities in GW, storage energy in GWh, energy per timestep in GWh,
// objective in MEUR/a (EUR/kW times GW gives MEUR).

#include <array>
#include <string>
#include <vector>

#include "suffopt/demand.hpp"
#include "suffopt/lp/instance.hpp"
#include "suffopt/system.hpp"

namespace suffopt::lp {

struct EnergyModel {
  LpInstance lp;
  Horizon horizon{1, 1};
  SystemConfig system;

  // Indexed like system.technologies / system.storages.
  std::vector<int> cap;
  std::vector<std::vector<int>> gen;  // [tech][step]
  std::vector<int> storage_energy;
  std::vector<int> storage_power;
  std::vector<std::vector<int>> level;      // [storage][0..T], level[s][0] is the initial state
  std::vector<std::vector<int>> charge;     // [storage][step]
  std::vector<std::vector<int>> discharge;  // [storage][step]

  // Indexed by static_cast<int>(Carrier).
  std::array<std::vector<int>, 3> balance;          // [carrier][step]
  std::array<std::vector<double>, 3> demand;        // GWh per step
  std::vector<int> cyclic;                          // per storage

  double total_demand_gwh() const;
};

// Hourly profiles must all have horizon.hours() values. Demand is summed and
// availability averaged inside each horizon block.
EnergyModel build_lp(const SystemConfig& system, const ProfileSet& hourly_profiles,
                     const Horizon& horizon);

// Names of technologies and storages whose potential is exhausted at x.
std::vector<std::string> binding_potentials(const EnergyModel& model, const std::vector<double>& x,
                                            double rel_tol = 1e-6);

}  // namespace suffopt::lp
