#pragma once

// Hourly final-energy demand per (sector, subsector, carrier) slice.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "suffopt/carrier_map.hpp"
#include "suffopt/measures.hpp"
#include "suffopt/types.hpp"

namespace suffopt {

inline constexpr int kHoursPerYear = 8760;
inline constexpr double kReferenceDemandTwh = 1465.0;

struct DemandProfile {
  Sector sector = Sector::Electricity;
  std::string subsector;
  Carrier carrier = Carrier::Electricity;
  std::vector<double> values;  // GWh per hour (or per timestep once downsampled)
  int year_label = 2050;

  double annual_sum() const;  // GWh
};

using ProfileSet = std::vector<DemandProfile>;

struct DemandBudget {
  double total_twh = kReferenceDemandTwh;
  SectorShares sector_shares;
  std::map<Sector, SubsectorShares> subsector_shares;

  static DemandBudget from_catalog(const Catalog& catalog, double total_twh);
  void validate() const;
  double slice_twh(Sector s, const std::string& subsector) const;
};

enum class ShapeKind { Default, Flat };

// Parameters of the synthetic demand shapes. These are illustrative defaults,
// not fitted to any measured data set.
struct ShapeConfig {
  std::uint64_t seed = 42;
  int hours = kHoursPerYear;
  double heat_seasonal_amplitude = 0.6;     // relative to the mean, peak mid-January
  double process_seasonal_amplitude = 0.15;
  double heat_diurnal_amplitude = 0.3;
  double electricity_daily_amplitude = 0.25;
  double electricity_weekend_drop = 0.10;
  double commute_peak = 0.5;                // extra load during commuting hours
  int morning_peak_start = 7, morning_peak_end = 9;
  int evening_peak_start = 17, evening_peak_end = 19;
  double noise = 0.03;                      // multiplicative uniform noise amplitude
  std::map<Sector, ShapeKind> kinds;        // per-sector override, absent = Default

  ShapeKind kind(Sector s) const;
  static ShapeConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// One profile per (slice, carrier); each scaled so its sum equals
// budget slice * carrier fraction (converted to GWh).
ProfileSet synthesize_profiles(const DemandBudget& budget, const ShapeConfig& shapes,
                               const CarrierMap& carriers = CarrierMap::defaults());

// CSV header: sector,subsector,carrier,hour,value_gwh. Hours are 1-based.
ProfileSet ingest_profiles(std::istream& in, int hours = kHoursPerYear);
ProfileSet ingest_profiles_file(const std::string& path, int hours = kHoursPerYear);
void write_profiles_csv(std::ostream& out, const ProfileSet& profiles);

// Budget recomputed from profile sums, with shares taken from the data.
DemandBudget budget_from_profiles(const ProfileSet& profiles);

// Scales every value of each profile by (1 - r) for its slice.
ProfileSet apply_reduction(const ProfileSet& profiles, const ReductionSet& reductions);

std::vector<double> load_duration_curve(std::span<const double> values);

// Hour-by-hour sum over all given profiles (optionally one carrier only).
std::vector<double> aggregate(const ProfileSet& profiles);
std::vector<double> aggregate(const ProfileSet& profiles, Carrier carrier);

double total_twh(const ProfileSet& profiles);
double sector_twh(const ProfileSet& profiles, Sector s);

// Consecutive blocks of hours used as model timesteps. Block k covers hours
// [start[k], start[k+1]); energy inside a block is summed so totals are kept.
class Horizon {
 public:
  Horizon(int hours, int steps);

  int hours() const { return hours_; }
  int steps() const { return static_cast<int>(start_.size()) - 1; }
  double duration(int step) const { return static_cast<double>(start_[step + 1] - start_[step]); }
  int begin(int step) const { return start_[step]; }
  int end(int step) const { return start_[step + 1]; }

  std::vector<double> block_sum(std::span<const double> hourly) const;
  std::vector<double> block_mean(std::span<const double> hourly) const;

 private:
  int hours_;
  std::vector<int> start_;
};

ProfileSet downsample(const ProfileSet& profiles, const Horizon& horizon);

}  // namespace suffopt
