#include "suffopt/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "suffopt/text.hpp"

namespace suffopt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform in [-1, 1) from the raw engine output, independent of the
// standard library's distribution implementations.
double signed_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::string slice_label(const DemandProfile& p) {
  return std::string(to_string(p.sector)) + "/" + p.subsector + "/" +
         std::string(to_string(p.carrier));
}

bool in_window(int hour_of_day, int start, int end) {
  return hour_of_day >= start && hour_of_day <= end;
}

// Relative hourly shape, positive everywhere; rescaled to the budget afterwards.
std::vector<double> raw_shape(Sector sector, const std::string& subsector,
                              const ShapeConfig& cfg, std::uint64_t stream) {
  std::vector<double> v(static_cast<std::size_t>(cfg.hours), 1.0);
  if (cfg.kind(sector) == ShapeKind::Flat) return v;

  std::mt19937_64 engine(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  const bool process = sector == Sector::Heat && subsector != kResidentialHeat;
  for (int h = 0; h < cfg.hours; ++h) {
    const int day = h / 24;
    const int hour_of_day = h % 24;
    const bool weekend = day % 7 >= 5;
    // Daily cycle with its minimum at 04:00.
    const double daily = -std::cos(kTwoPi * (hour_of_day - 4) / 24.0);
    double value = 1.0;
    switch (sector) {
      case Sector::Heat: {
        const double amp = process ? cfg.process_seasonal_amplitude : cfg.heat_seasonal_amplitude;
        const double seasonal = 1.0 + amp * std::cos(kTwoPi * (day - 15) / 365.0);
        const double diurnal_amp = process ? 0.25 * cfg.heat_diurnal_amplitude
                                           : cfg.heat_diurnal_amplitude;
        value = seasonal * (1.0 + diurnal_amp * daily);
        if (process && weekend) value *= 0.85;
        break;
      }
      case Sector::Electricity:
        value = (1.0 + cfg.electricity_daily_amplitude * daily) *
                (weekend ? 1.0 - cfg.electricity_weekend_drop : 1.0);
        break;
      case Sector::Mobility:
        if (!weekend && (in_window(hour_of_day, cfg.morning_peak_start, cfg.morning_peak_end) ||
                         in_window(hour_of_day, cfg.evening_peak_start, cfg.evening_peak_end))) {
          value += cfg.commute_peak;
        }
        break;
    }
    value *= 1.0 + cfg.noise * signed_unit(engine);
    v[static_cast<std::size_t>(h)] = std::max(value, 0.0);
  }
  return v;
}

}  // namespace

double DemandProfile::annual_sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

DemandBudget DemandBudget::from_catalog(const Catalog& catalog, double total_twh) {
  DemandBudget b;
  b.total_twh = total_twh;
  b.sector_shares = catalog.sector_shares();
  for (auto s : kAllSectors) b.subsector_shares[s] = catalog.subsector_shares(s);
  b.validate();
  return b;
}

void DemandBudget::validate() const {
  if (!(total_twh > 0.0) || !std::isfinite(total_twh)) {
    throw ConfigError("demand budget must be positive, got " + std::to_string(total_twh) + " TWh");
  }
  for (auto s : kAllSectors) {
    sector_shares.share(s);
    if (!subsector_shares.count(s)) {
      throw ConfigError("demand budget lacks subsector shares for " + std::string(to_string(s)));
    }
  }
}

double DemandBudget::slice_twh(Sector s, const std::string& subsector) const {
  return total_twh * sector_shares.share(s) * subsector_shares.at(s).share(subsector);
}

ShapeKind ShapeConfig::kind(Sector s) const {
  auto it = kinds.find(s);
  return it == kinds.end() ? ShapeKind::Default : it->second;
}

ShapeConfig ShapeConfig::from_json(const nlohmann::json& j) {
  ShapeConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    c.hours = j.value("hours", c.hours);
    c.heat_seasonal_amplitude = j.value("heat_seasonal_amplitude", c.heat_seasonal_amplitude);
    c.process_seasonal_amplitude = j.value("process_seasonal_amplitude", c.process_seasonal_amplitude);
    c.heat_diurnal_amplitude = j.value("heat_diurnal_amplitude", c.heat_diurnal_amplitude);
    c.electricity_daily_amplitude = j.value("electricity_daily_amplitude", c.electricity_daily_amplitude);
    c.electricity_weekend_drop = j.value("electricity_weekend_drop", c.electricity_weekend_drop);
    c.commute_peak = j.value("commute_peak", c.commute_peak);
    c.noise = j.value("noise", c.noise);
    if (j.contains("morning_peak")) {
      c.morning_peak_start = j["morning_peak"].at(0);
      c.morning_peak_end = j["morning_peak"].at(1);
    }
    if (j.contains("evening_peak")) {
      c.evening_peak_start = j["evening_peak"].at(0);
      c.evening_peak_end = j["evening_peak"].at(1);
    }
    const auto flat = j.value("flat", nlohmann::json::object());
    for (const auto& [k, v] : flat.items()) {
      if (v.get<bool>()) c.kinds[parse_sector(k)] = ShapeKind::Flat;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("shape config: ") + e.what());
  }
  if (c.hours <= 0) throw ConfigError("shape config: hours must be positive");
  if (c.heat_seasonal_amplitude < 0 || c.heat_seasonal_amplitude >= 1 || c.noise < 0 || c.noise >= 1 ||
      c.heat_diurnal_amplitude < 0 || c.heat_diurnal_amplitude >= 1) {
    throw ConfigError("shape config: amplitudes must lie in [0,1)");
  }
  return c;
}

nlohmann::json ShapeConfig::to_json() const {
  nlohmann::json j{{"seed", seed},
                   {"hours", hours},
                   {"heat_seasonal_amplitude", heat_seasonal_amplitude},
                   {"process_seasonal_amplitude", process_seasonal_amplitude},
                   {"heat_diurnal_amplitude", heat_diurnal_amplitude},
                   {"electricity_daily_amplitude", electricity_daily_amplitude},
                   {"electricity_weekend_drop", electricity_weekend_drop},
                   {"commute_peak", commute_peak},
                   {"morning_peak", {morning_peak_start, morning_peak_end}},
                   {"evening_peak", {evening_peak_start, evening_peak_end}},
                   {"noise", noise}};
  j["flat"] = nlohmann::json::object();
  for (const auto& [s, k] : kinds) j["flat"][std::string(to_string(s))] = k == ShapeKind::Flat;
  return j;
}

ProfileSet synthesize_profiles(const DemandBudget& budget, const ShapeConfig& shapes,
                               const CarrierMap& carriers) {
  budget.validate();
  if (shapes.hours <= 0) throw ConfigError("profile horizon must be positive");
  ProfileSet out;
  std::uint64_t stream = 0;
  for (auto s : kAllSectors) {
    for (const auto& e : budget.subsector_shares.at(s).entries()) {
      const auto shape = raw_shape(s, e.name, shapes, stream++);
      const double shape_sum = std::accumulate(shape.begin(), shape.end(), 0.0);
      const double slice_gwh = budget.slice_twh(s, e.name) * 1000.0;
      for (const auto& split : carriers.splits(s, e.name)) {
        DemandProfile p;
        p.sector = s;
        p.subsector = e.name;
        p.carrier = split.carrier;
        const double scale = slice_gwh * split.fraction / shape_sum;
        p.values.resize(shape.size());
        std::transform(shape.begin(), shape.end(), p.values.begin(),
                       [scale](double x) { return x * scale; });
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

ProfileSet ingest_profiles(std::istream& in, int hours) {
  static constexpr std::string_view kHeader = "sector,subsector,carrier,hour,value_gwh";
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader) {
    throw ConfigError("profile CSV row 1: expected header '" + std::string(kHeader) + "'");
  }
  using Key = std::tuple<Sector, std::string, Carrier>;
  std::map<Key, std::size_t> index;
  ProfileSet out;
  std::vector<std::vector<bool>> seen;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    const std::string where = "profile CSV row " + std::to_string(row) + ": ";
    if (fields.size() != 5) throw ConfigError(where + "expected 5 fields");
    Sector sector;
    Carrier carrier;
    long hour = 0;
    double value = 0.0;
    try {
      sector = parse_sector(trim(fields[0]));
      carrier = parse_carrier(trim(fields[2]));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    try {
      hour = parse_long(fields[3]);
      value = parse_double(fields[4]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + e.what());
    }
    const std::string subsector(trim(fields[1]));
    if (subsector.empty()) throw ConfigError(where + "empty subsector");
    if (hour < 1 || hour > hours) {
      throw ConfigError(where + "hour " + std::to_string(hour) + " outside 1.." +
                        std::to_string(hours));
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ConfigError(where + "negative or non-finite value");
    }
    Key key{sector, subsector, carrier};
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      DemandProfile p;
      p.sector = sector;
      p.subsector = subsector;
      p.carrier = carrier;
      p.values.assign(static_cast<std::size_t>(hours), 0.0);
      out.push_back(std::move(p));
      seen.emplace_back(static_cast<std::size_t>(hours), false);
    }
    const auto h = static_cast<std::size_t>(hour - 1);
    if (seen[it->second][h]) {
      throw ConfigError(where + "duplicate hour " + std::to_string(hour) + " for " +
                        slice_label(out[it->second]));
    }
    seen[it->second][h] = true;
    out[it->second].values[h] = value;
  }
  if (out.empty()) throw ConfigError("profile CSV contains no data rows");
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto missing = std::find(seen[i].begin(), seen[i].end(), false);
    if (missing != seen[i].end()) {
      throw ConfigError("profile CSV: series " + slice_label(out[i]) + " is missing hour " +
                        std::to_string(missing - seen[i].begin() + 1));
    }
  }
  return out;
}

ProfileSet ingest_profiles_file(const std::string& path, int hours) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile CSV " + path);
  try {
    return ingest_profiles(in, hours);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_profiles_csv(std::ostream& out, const ProfileSet& profiles) {
  out << "sector,subsector,carrier,hour,value_gwh\n";
  for (const auto& p : profiles) {
    for (std::size_t h = 0; h < p.values.size(); ++h) {
      out << to_string(p.sector) << ',' << p.subsector << ',' << to_string(p.carrier) << ','
          << h + 1 << ',' << format_double(p.values[h]) << '\n';
    }
  }
}

DemandBudget budget_from_profiles(const ProfileSet& profiles) {
  if (profiles.empty()) throw ConfigError("no profiles");
  std::map<Sector, std::map<std::string, double>> gwh;
  double total = 0.0;
  for (const auto& p : profiles) {
    const double s = p.annual_sum();
    gwh[p.sector][p.subsector] += s;
    total += s;
  }
  if (!(total > 0.0)) throw ConfigError("profiles carry no energy");
  DemandBudget b;
  b.total_twh = total / 1000.0;
  std::map<Sector, double> sector_shares;
  for (auto s : kAllSectors) {
    double sector_total = 0.0;
    for (const auto& [sub, v] : gwh[s]) sector_total += v;
    sector_shares[s] = sector_total / total;
    std::vector<ShareEntry> entries;
    for (const auto& [sub, v] : gwh[s]) {
      if (v > 0.0) entries.push_back({sub, v / sector_total});
    }
    if (!entries.empty()) {
      // Renormalise against summation round-off before validation.
      double sum = 0.0;
      for (const auto& e : entries) sum += e.fraction;
      for (auto& e : entries) e.fraction /= sum;
      b.subsector_shares[s] = SubsectorShares(s, std::move(entries));
    }
  }
  double share_sum = 0.0;
  for (const auto& [s, f] : sector_shares) share_sum += f;
  for (auto& [s, f] : sector_shares) f /= share_sum;
  b.sector_shares = SectorShares(std::move(sector_shares));
  return b;
}

ProfileSet apply_reduction(const ProfileSet& profiles, const ReductionSet& reductions) {
  ProfileSet out = profiles;
  for (auto& p : out) {
    const double r = reductions.at(p.sector, p.subsector);
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ConfigError("reduction for " + slice_label(p) + " outside [0,1]");
    }
    const double factor = 1.0 - r;
    for (auto& v : p.values) v *= factor;
  }
  return out;
}

std::vector<double> load_duration_curve(std::span<const double> values) {
  if (values.empty()) throw ConfigError("load duration curve of an empty profile");
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

namespace {

std::vector<double> aggregate_if(const ProfileSet& profiles,
                                 const std::function<bool(const DemandProfile&)>& pick) {
  std::vector<double> out;
  for (const auto& p : profiles) {
    if (!pick(p)) continue;
    if (out.empty()) out.assign(p.values.size(), 0.0);
    if (p.values.size() != out.size()) throw ConfigError("profiles have different lengths");
    for (std::size_t h = 0; h < out.size(); ++h) out[h] += p.values[h];
  }
  return out;
}

}  // namespace

std::vector<double> aggregate(const ProfileSet& profiles) {
  return aggregate_if(profiles, [](const DemandProfile&) { return true; });
}

std::vector<double> aggregate(const ProfileSet& profiles, Carrier carrier) {
  return aggregate_if(profiles, [carrier](const DemandProfile& p) { return p.carrier == carrier; });
}

double total_twh(const ProfileSet& profiles) {
  double sum = 0.0;
  for (const auto& p : profiles) sum += p.annual_sum();
  return sum / 1000.0;
}

double sector_twh(const ProfileSet& profiles, Sector s) {
  double sum = 0.0;
  for (const auto& p : profiles) {
    if (p.sector == s) sum += p.annual_sum();
  }
  return sum / 1000.0;
}

Horizon::Horizon(int hours, int steps) : hours_(hours) {
  if (hours <= 0 || steps <= 0) throw ConfigError("horizon must have positive length");
  if (steps > hours) throw ConfigError("cannot split " + std::to_string(hours) + " hours into " +
                                       std::to_string(steps) + " timesteps");
  start_.resize(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    start_[k] = static_cast<int>(static_cast<long long>(k) * hours / steps);
  }
}

std::vector<double> Horizon::block_sum(std::span<const double> hourly) const {
  if (static_cast<int>(hourly.size()) != hours_) {
    throw ConfigError("series has " + std::to_string(hourly.size()) + " values, horizon expects " +
                      std::to_string(hours_));
  }
  std::vector<double> out(static_cast<std::size_t>(steps()), 0.0);
  for (int k = 0; k < steps(); ++k) {
    for (int h = start_[k]; h < start_[k + 1]; ++h) out[k] += hourly[h];
  }
  return out;
}

std::vector<double> Horizon::block_mean(std::span<const double> hourly) const {
  auto out = block_sum(hourly);
  for (int k = 0; k < steps(); ++k) out[k] /= duration(k);
  return out;
}

ProfileSet downsample(const ProfileSet& profiles, const Horizon& horizon) {
  ProfileSet out = profiles;
  for (auto& p : out) p.values = horizon.block_sum(p.values);
  return out;
}

}  // namespace suffopt
