#pragma once

// Studies: one set of shared inputs (catalog, system, demand profiles, horizon)
// and a list of scenarios solved against it. Comparisons are only allowed
// between results of the same shared inputs.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "suffopt/demand.hpp"
#include "suffopt/lp/simplex.hpp"
#include "suffopt/measures.hpp"
#include "suffopt/results.hpp"
#include "suffopt/system.hpp"

namespace suffopt {

enum class ScenarioKind {
  Reference,    // no reduction
  Ambition,     // full Low or High reduction set
  Sensitivity,  // High (or Low) values on the listed slices of one sector only
  Uniform,      // the same fraction on every slice
};

std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view text);

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Reference;
  Ambition ambition = Ambition::High;
  std::vector<SliceKey> slices;  // Sensitivity
  double rate = 0.0;             // Uniform

  static Scenario reference(std::string name = "reference");
  static Scenario with_ambition(Ambition a, std::string name = "");
  static Scenario sensitivity(std::string name, Sector sector, std::vector<std::string> subsectors);
  static Scenario uniform(double r, std::string name = "");

  // Sensitivity scenarios must name at least one slice, all from one sector.
  void validate(const Catalog& catalog) const;
  ReductionSet reductions(const Catalog& catalog) const;

  // {"name", "kind", "ambition", "sector", "subsectors", "rate"}; for
  // sensitivity, missing "subsectors" selects the whole sector.
  static Scenario from_json(const nlohmann::json& j, const Catalog& catalog);
  nlohmann::json to_json() const;
};

// Electricity, mobility, residential+commercial heat, process heat and both
// heat groups together, each at High Ambition.
std::vector<Scenario> sensitivity_scenarios(const Catalog& catalog);

struct Study {
  std::string name = "study";
  int timesteps = 336;
  std::string catalog_path;  // empty = built-in catalog
  double total_twh = kReferenceDemandTwh;
  std::string demand_csv;    // hourly profiles instead of synthetic ones
  ShapeConfig shapes;
  nlohmann::json system = {{"base", "default"}};
  std::vector<Scenario> scenarios;

  static Study defaults();
  // Relative paths inside the study are resolved against base_dir.
  static Study from_json(const nlohmann::json& j, const std::string& base_dir = ".");
  static Study load(const std::string& path);
  nlohmann::json to_json() const;

  const Scenario& scenario(const std::string& name) const;
};

struct SharedInputs {
  Catalog catalog;
  SystemConfig system;
  ProfileSet hourly;  // reference demand
  Horizon horizon{1, 1};
  std::uint64_t fingerprint = 0;
};

// Loads the catalog, builds the system and the demand profiles, validates
// them and fingerprints everything that a comparison depends on.
SharedInputs prepare(const Study& study);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& scenario, std::vector<std::string> binding);
  const std::vector<std::string>& binding() const { return binding_; }

 private:
  std::vector<std::string> binding_;
};

struct RunResult {
  ScenarioResult result;
  std::uint64_t fingerprint = 0;
  ReductionSet reductions;
  std::map<Sector, double> sector_demand_twh;
  double solve_seconds = 0.0;
};

RunResult run_scenario(const Scenario& scenario, const SharedInputs& inputs,
                       const lp::SimplexOptions& options = {});

// Scenarios are independent; up to `threads` run at once. Output order
// follows the input order.
std::vector<RunResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                     const SharedInputs& inputs, int threads = 1,
                                     const lp::SimplexOptions& options = {});

std::vector<RunResult> run_sensitivity(const SharedInputs& inputs, int threads = 1,
                                       const lp::SimplexOptions& options = {});

struct ComparisonRow {
  std::string name;
  double cost = 0.0;          // MEUR/a
  double demand_twh = 0.0;
  double renewable_gw = 0.0;
  double storage_gwh = 0.0;
  double cost_reduction_pct = 0.0;
  double demand_reduction_pct = 0.0;
  double capacity_reduction_pct = 0.0;  // renewable capacity
  double storage_reduction_pct = 0.0;   // storage energy
  double cost_to_demand_ratio = 0.0;    // 0 when demand is unchanged
};

struct ComparisonReport {
  std::string reference;
  std::vector<ComparisonRow> rows;  // reference first

  const ComparisonRow& row(const std::string& name) const;
};

// Throws ConfigError when any result comes from different shared inputs.
ComparisonReport compare(const std::vector<RunResult>& results, const RunResult& reference);

// comparison.csv, demand.csv, capacities.csv, storage.csv and one
// sankey_<scenario>.json per result.
void export_report(const ComparisonReport& report, const std::vector<RunResult>& results,
                   const std::string& directory);

void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace suffopt
