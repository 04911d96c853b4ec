#pragma once

// Sufficiency-measure catalog and the share-weighted arithmetic that turns
// literature reductions into subsector, sector and total demand reductions.
// All fractions are dimensionless decimals (0.342, not 34.2).

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "suffopt/types.hpp"

namespace suffopt {

struct Measure {
  std::string id;
  Sector sector = Sector::Heat;
  std::string subsector;
  double reduction_low = 0.0;
  double reduction_high = 0.0;
  double applicability = 1.0;  // fraction of the subsector demand the measure touches
  std::string source_tag;

  double reduction(Ambition ambition) const {
    return ambition == Ambition::Low ? reduction_low : reduction_high;
  }
};

// Throws ConfigError unless 0 <= low <= high <= 1 and 0 < applicability <= 1.
void validate_measure(const Measure& m);

struct ShareEntry {
  std::string name;
  double fraction = 0.0;
};

// Split of one sector's demand over its subsectors. Entry order is preserved
// and used for reporting.
class SubsectorShares {
 public:
  SubsectorShares() = default;
  SubsectorShares(Sector sector, std::vector<ShareEntry> entries);

  Sector sector() const { return sector_; }
  const std::vector<ShareEntry>& entries() const { return entries_; }
  bool contains(const std::string& subsector) const;
  double share(const std::string& subsector) const;

 private:
  Sector sector_ = Sector::Heat;
  std::vector<ShareEntry> entries_;
};

class SectorShares {
 public:
  SectorShares() = default;
  explicit SectorShares(std::map<Sector, double> entries);

  const std::map<Sector, double>& entries() const { return entries_; }
  double share(Sector s) const;

 private:
  std::map<Sector, double> entries_;
};

using SliceKey = std::pair<Sector, std::string>;

struct ReductionSet {
  Ambition ambition = Ambition::Low;
  std::map<SliceKey, double> subsector;
  std::map<Sector, double> sector;
  double total = 0.0;

  // Throws ConfigError if the slice has no entry.
  double at(Sector s, const std::string& subsector) const;
};

// 1 - prod(1 - r_i * a_i). All measures must share sector and subsector.
double combine_measures(std::span<const Measure> measures, Ambition ambition);

// sum_s share_s * reduction_s over every subsector of `shares`.
double sector_reduction(const std::map<std::string, double>& sub_reductions,
                        const SubsectorShares& shares);

double total_reduction(const std::map<Sector, double>& sector_reductions,
                       const SectorShares& shares);

// ---------------------------------------------------------------------------
// Process heat: industry-branch shares per temperature level.

enum class TemperatureLevel { Low, Mid, High };
inline constexpr std::array<TemperatureLevel, 3> kTemperatureLevels = {
    TemperatureLevel::Low, TemperatureLevel::Mid, TemperatureLevel::High};

std::string_view to_string(TemperatureLevel level);
TemperatureLevel parse_temperature_level(std::string_view text);

// Printed branch shares carry rounding (the mid row sums to 100.01%), so rows
// are accepted within this tolerance.
inline constexpr double kBranchRowTolerance = 5e-4;

struct BranchShareTable {
  std::vector<std::string> branches;
  std::array<std::vector<double>, 3> shares;  // indexed by TemperatureLevel

  void validate() const;
  double share(TemperatureLevel level, const std::string& branch) const;
};

// Reduction of one branch's demand at one temperature level.
struct BranchReduction {
  TemperatureLevel level = TemperatureLevel::Low;
  std::string branch;
  double low = 0.0;
  double high = 0.0;
  std::string note;

  double reduction(Ambition a) const { return a == Ambition::Low ? low : high; }
};

// Level reduction = sum over branches of share * branch reduction.
std::array<double, 3> level_reductions(const BranchShareTable& table,
                                       std::span<const BranchReduction> reductions,
                                       Ambition ambition);

// Temperature weights are the level shares of total heat; the result is the
// reduction of process heat as a whole.
double process_heat_reduction(const std::array<double, 3>& level_reductions,
                              const std::array<double, 3>& temperature_shares);

double process_heat_reduction(const BranchShareTable& table,
                              std::span<const BranchReduction> reductions,
                              const std::array<double, 3>& temperature_shares,
                              Ambition ambition);

// ---------------------------------------------------------------------------

struct PinnedReduction {
  Sector sector = Sector::Heat;
  std::string subsector;
  double low = 0.0;
  double high = 0.0;
  std::string source_tag;
};

// Heat subsector names used for the process-heat temperature levels.
inline const std::array<std::string, 3> kProcessHeatSubsectors = {"process_low", "process_mid",
                                                                   "process_high"};
inline const std::string kResidentialHeat = "residential_commercial";

class Catalog {
 public:
  // Literature records, tabulated subsector values and share tables for Germany.
  static Catalog builtin();
  static Catalog from_json(const nlohmann::json& j);
  static Catalog load(const std::string& path);
  nlohmann::json to_json() const;

  const std::vector<Measure>& measures() const { return measures_; }
  const SectorShares& sector_shares() const { return sector_shares_; }
  const SubsectorShares& subsector_shares(Sector s) const;
  const std::vector<PinnedReduction>& pinned() const { return pinned_; }
  const BranchShareTable& branch_table() const { return branch_table_; }
  const std::vector<BranchReduction>& branch_reductions() const { return branch_reductions_; }

  // Temperature-level shares of total heat (low, mid, high).
  std::array<double, 3> temperature_shares() const;

  // Pinned value if present, else the branch chain for process-heat levels,
  // else combine_measures over the catalog's measures for that subsector.
  double subsector_reduction(Sector s, const std::string& subsector, Ambition a) const;

  ReductionSet reduction_set(Ambition a) const;

  // Reduction set where only the selected slices keep their values; all other
  // subsectors are zero and aggregates are recomputed.
  ReductionSet restricted_set(Ambition a, const std::vector<SliceKey>& active) const;

  // Aggregates from explicit subsector values.
  ReductionSet assemble(Ambition a, std::map<SliceKey, double> subsector) const;

  // Applies the same per-slice value everywhere.
  ReductionSet uniform_set(double r) const;

  void validate() const;

 private:
  std::vector<Measure> measures_;
  std::map<Sector, SubsectorShares> subsector_shares_;
  SectorShares sector_shares_;
  std::vector<PinnedReduction> pinned_;
  BranchShareTable branch_table_;
  std::vector<BranchReduction> branch_reductions_;
};

// Solves for the mobility and electricity shares of total demand that make two
// share-weighted totals come out right, given the heat share.
struct InferredShares {
  double mobility = 0.0;
  double electricity = 0.0;
};
InferredShares infer_sector_shares(double heat_share, std::array<double, 2> heat,
                                   std::array<double, 2> mobility,
                                   std::array<double, 2> electricity,
                                   std::array<double, 2> totals);

struct PotentialRow {
  std::string table;
  std::string category;
  std::optional<double> share;  // fraction of the table's base demand
  double reduction = 0.0;       // fraction
};

// Subsector and aggregate rows for the heat, mobility, electricity and summary tables.
std::vector<PotentialRow> potential_tables(const Catalog& catalog, Ambition a);

// CSV with header `table,category,share_pct,reduction_pct`; percentages
// printed to one decimal, reductions negative.
std::string potential_csv(const std::vector<PotentialRow>& rows);

}  // namespace suffopt
