#include "suffopt/measures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace suffopt {

namespace {

constexpr double kShareSumTolerance = 1e-9;

void require_fraction(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(what + " must lie in [0,1], got " + std::to_string(v));
  }
}

std::string slice_name(Sector s, const std::string& sub) {
  return std::string(to_string(s)) + "/" + sub;
}

}  // namespace

void validate_measure(const Measure& m) {
  if (!(m.reduction_low >= 0.0 && m.reduction_low <= m.reduction_high && m.reduction_high <= 1.0)) {
    throw ConfigError("measure '" + m.id + "': need 0 <= reduction_low <= reduction_high <= 1");
  }
  if (!(m.applicability > 0.0 && m.applicability <= 1.0)) {
    throw ConfigError("measure '" + m.id + "': applicability must lie in (0,1]");
  }
}

SubsectorShares::SubsectorShares(Sector sector, std::vector<ShareEntry> entries)
    : sector_(sector), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw ConfigError("subsector shares for " + std::string(to_string(sector)) + " are empty");
  }
  std::set<std::string> seen;
  double sum = 0.0;
  for (const auto& e : entries_) {
    if (!(e.fraction > 0.0 && e.fraction <= 1.0)) {
      throw ConfigError("subsector share " + slice_name(sector, e.name) + " must lie in (0,1]");
    }
    if (!seen.insert(e.name).second) {
      throw ConfigError("duplicate subsector " + slice_name(sector, e.name));
    }
    sum += e.fraction;
  }
  if (std::abs(sum - 1.0) > kShareSumTolerance) {
    throw ConfigError("subsector shares for " + std::string(to_string(sector)) +
                      " sum to " + std::to_string(sum) + ", expected 1");
  }
}

bool SubsectorShares::contains(const std::string& subsector) const {
  for (const auto& e : entries_) {
    if (e.name == subsector) return true;
  }
  return false;
}

double SubsectorShares::share(const std::string& subsector) const {
  for (const auto& e : entries_) {
    if (e.name == subsector) return e.fraction;
  }
  throw ConfigError("unknown subsector " + slice_name(sector_, subsector));
}

SectorShares::SectorShares(std::map<Sector, double> entries) : entries_(std::move(entries)) {
  double sum = 0.0;
  for (const auto& [s, f] : entries_) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ConfigError("sector share for " + std::string(to_string(s)) + " out of range");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > kShareSumTolerance) {
    throw ConfigError("sector shares sum to " + std::to_string(sum) + ", expected 1");
  }
}

double SectorShares::share(Sector s) const {
  auto it = entries_.find(s);
  if (it == entries_.end()) {
    throw ConfigError("no share for sector " + std::string(to_string(s)));
  }
  return it->second;
}

double ReductionSet::at(Sector s, const std::string& sub) const {
  auto it = subsector.find({s, sub});
  if (it == subsector.end()) {
    throw ConfigError("reduction set has no value for " + slice_name(s, sub));
  }
  return it->second;
}

double combine_measures(std::span<const Measure> measures, Ambition ambition) {
  if (measures.empty()) return 0.0;
  const auto& first = measures.front();
  double remaining = 1.0;
  for (const auto& m : measures) {
    if (m.sector != first.sector || m.subsector != first.subsector) {
      throw ConfigError("combine_measures: measure '" + m.id + "' targets " +
                        slice_name(m.sector, m.subsector) + " but '" + first.id + "' targets " +
                        slice_name(first.sector, first.subsector));
    }
    validate_measure(m);
    remaining *= 1.0 - m.reduction(ambition) * m.applicability;
  }
  return 1.0 - remaining;
}

double sector_reduction(const std::map<std::string, double>& sub_reductions,
                        const SubsectorShares& shares) {
  double sum = 0.0;
  for (const auto& e : shares.entries()) {
    auto it = sub_reductions.find(e.name);
    if (it == sub_reductions.end()) {
      throw ConfigError("missing reduction for subsector " + slice_name(shares.sector(), e.name));
    }
    require_fraction(it->second, "reduction for " + slice_name(shares.sector(), e.name));
    sum += e.fraction * it->second;
  }
  for (const auto& [name, value] : sub_reductions) {
    if (!shares.contains(name)) {
      throw ConfigError("reduction given for unknown subsector " +
                        slice_name(shares.sector(), name));
    }
  }
  return sum;
}

double total_reduction(const std::map<Sector, double>& sector_reductions,
                       const SectorShares& shares) {
  double sum = 0.0;
  for (const auto& [s, f] : shares.entries()) {
    auto it = sector_reductions.find(s);
    if (it == sector_reductions.end()) {
      throw ConfigError("missing reduction for sector " + std::string(to_string(s)));
    }
    require_fraction(it->second, "reduction for sector " + std::string(to_string(s)));
    sum += f * it->second;
  }
  return sum;
}

// ---------------------------------------------------------------------------

std::string_view to_string(TemperatureLevel level) {
  switch (level) {
    case TemperatureLevel::Low: return "low";
    case TemperatureLevel::Mid: return "mid";
    case TemperatureLevel::High: return "high";
  }
  return "?";
}

TemperatureLevel parse_temperature_level(std::string_view text) {
  if (text == "low") return TemperatureLevel::Low;
  if (text == "mid") return TemperatureLevel::Mid;
  if (text == "high") return TemperatureLevel::High;
  throw ConfigError("unknown temperature level '" + std::string(text) + "'");
}

void BranchShareTable::validate() const {
  for (auto level : kTemperatureLevels) {
    const auto& row = shares[static_cast<int>(level)];
    if (row.size() != branches.size()) {
      throw ConfigError("branch share row '" + std::string(to_string(level)) + "' has " +
                        std::to_string(row.size()) + " entries for " +
                        std::to_string(branches.size()) + " branches");
    }
    double sum = 0.0;
    for (double v : row) {
      require_fraction(v, "branch share");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kBranchRowTolerance) {
      throw ConfigError("branch share row '" + std::string(to_string(level)) + "' sums to " +
                        std::to_string(sum) + ", expected 1");
    }
  }
}

double BranchShareTable::share(TemperatureLevel level, const std::string& branch) const {
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (branches[i] == branch) return shares[static_cast<int>(level)].at(i);
  }
  throw ConfigError("unknown industry branch '" + branch + "'");
}

std::array<double, 3> level_reductions(const BranchShareTable& table,
                                       std::span<const BranchReduction> reductions,
                                       Ambition ambition) {
  table.validate();
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (const auto& r : reductions) {
    const double v = r.reduction(ambition);
    require_fraction(v, "branch reduction " + r.branch);
    out[static_cast<int>(r.level)] += table.share(r.level, r.branch) * v;
  }
  return out;
}

double process_heat_reduction(const std::array<double, 3>& levels,
                              const std::array<double, 3>& weights) {
  double weighted = 0.0;
  double norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    require_fraction(levels[i], "process heat level reduction");
    if (!(weights[i] >= 0.0)) throw ConfigError("negative temperature share");
    weighted += weights[i] * levels[i];
    norm += weights[i];
  }
  if (!(norm > 0.0)) throw ConfigError("temperature shares sum to zero");
  return weighted / norm;
}

double process_heat_reduction(const BranchShareTable& table,
                              std::span<const BranchReduction> reductions,
                              const std::array<double, 3>& temperature_shares,
                              Ambition ambition) {
  return process_heat_reduction(level_reductions(table, reductions, ambition),
                                temperature_shares);
}

// ---------------------------------------------------------------------------

namespace {

Measure measure(std::string id, Sector s, std::string sub, double lo, double hi,
                std::string source, double applicability = 1.0) {
  return Measure{std::move(id), s, std::move(sub), lo, hi, applicability, std::move(source)};
}

}  // namespace

Catalog Catalog::builtin() {
  Catalog c;
  using S = Sector;

  c.sector_shares_ = SectorShares({{S::Heat, 0.540}, {S::Mobility, 0.254}, {S::Electricity, 0.206}});
  c.subsector_shares_[S::Heat] = SubsectorShares(
      S::Heat, {{kResidentialHeat, 0.209}, {"process_low", 0.097}, {"process_mid", 0.478},
                {"process_high", 0.216}});
  c.subsector_shares_[S::Mobility] =
      SubsectorShares(S::Mobility, {{"air", 0.71}, {"road", 0.19}, {"rail", 0.10}});
  c.subsector_shares_[S::Electricity] = SubsectorShares(
      S::Electricity, {{"residential", 0.253}, {"commercial", 0.289}, {"industrial", 0.458}});

  c.pinned_ = {
      {S::Heat, kResidentialHeat, 0.050, 0.342, "heat reduction potential table"},
      {S::Heat, "process_low", 0.086, 0.132, "heat reduction potential table"},
      {S::Heat, "process_mid", 0.051, 0.120, "heat reduction potential table"},
      {S::Heat, "process_high", 0.030, 0.076, "heat reduction potential table"},
      {S::Mobility, "air", 0.216, 0.319, "mobility reduction potential table"},
      {S::Mobility, "road", 0.177, 0.213, "mobility reduction potential table"},
      {S::Mobility, "rail", 0.302, 0.419, "mobility reduction potential table"},
      {S::Electricity, "residential", 0.040, 0.200, "electricity reduction potential table"},
      {S::Electricity, "commercial", 0.055, 0.234, "electricity reduction potential table"},
      {S::Electricity, "industrial", 0.070, 0.175, "electricity reduction potential table"},
  };

  c.branch_table_.branches = {"food",       "paper", "chemical",          "engineering_manufacturing",
                              "refineries", "other", "non_metallic_minerals", "iron_steel",
                              "non_ferrous_metals"};
  c.branch_table_.shares[0] = {0.490, 0.510, 0, 0, 0, 0, 0, 0, 0};
  c.branch_table_.shares[1] = {0, 0, 0.413, 0.206, 0.124, 0.123, 0.1341, 0, 0};
  c.branch_table_.shares[2] = {0, 0, 0, 0, 0, 0, 0, 0.859, 0.141};

  // Branch-level values where the literature states them per branch (food,
  // manufacturing); otherwise the level contribution divided by the branch share.
  using L = TemperatureLevel;
  c.branch_reductions_ = {
      {L::Low, "food", 0.175, 0.27, "food waste halved / capped food intake"},
      {L::Mid, "chemical", 0.014 / 0.413, 0.021 / 0.413, "plastic recycling"},
      {L::Mid, "engineering_manufacturing", 0.148, 0.40, "product lifetime / sharing economy"},
      {L::Mid, "non_metallic_minerals", 0.007 / 0.1341, 0.017 / 0.1341,
       "reduced construction material (cement)"},
      {L::High, "iron_steel", 0.030 / 0.859, 0.076 / 0.859,
       "wood construction and reduced floor space (steel)"},
  };

  using E = S;
  c.measures_ = {
      measure("el_res_direct_feedback", E::Electricity, "residential", 0.05, 0.15, "martiskainen_affecting_2007"),
      measure("el_res_direct_feedback_apps", E::Electricity, "residential", 0.09, 0.09, "en12193788"),
      measure("el_res_indirect_feedback_apps", E::Electricity, "residential", 0.04, 0.04, "en12193788"),
      measure("el_res_goal_setting", E::Electricity, "residential", 0.045, 0.045, "martiskainen_affecting_2007"),
      measure("el_res_goal_setting_feedback", E::Electricity, "residential", 0.151, 0.151, "martiskainen_affecting_2007"),
      measure("el_res_smart_meter_tariffs", E::Electricity, "residential", 0.018, 0.018, "CARROLL2014234"),
      measure("el_res_behavior_change", E::Electricity, "residential", 0.20, 0.20, "burger2009identifikation"),
      measure("el_res_lighting_appliances", E::Electricity, "residential", 0.15, 0.20, "umweltbundesamt_konzept_2015"),
      measure("el_com_group_feedback", E::Electricity, "commercial", 0.07, 0.07, "CARRICO20111"),
      measure("el_com_goal_setting", E::Electricity, "commercial", 0.129, 0.129, "nilsson2015energy"),
      measure("el_com_goal_setting_feedback", E::Electricity, "commercial", 0.055, 0.06, "nilsson2015energy"),
      measure("el_com_social_marketing", E::Electricity, "commercial", 0.12, 0.12, "owen2010employee"),
      measure("el_com_shorter_working_time", E::Electricity, "commercial", 0.105, 0.105, "hansen_working4utah_2009"),
      measure("el_ind_energy_audits", E::Electricity, "industrial", 0.07, 0.20, "larsen2006effect"),
      measure("el_ind_social_marketing", E::Electricity, "industrial", 0.12, 0.12, "owen2010employee"),
      measure("el_ind_shorter_working_time", E::Electricity, "industrial", 0.105, 0.105, "hansen_working4utah_2009"),
      measure("mob_bike_modal_shift", E::Mobility, "road", 0.035, 0.10, "umweltbundesamt_konzept_2015; van2018potential"),
      measure("mob_telemeetings", E::Mobility, "road", 0.40, 0.60, "umweltbundesamt_konzept_2015", 0.19),
      measure("mob_smaller_cars", E::Mobility, "road", 0.075, 0.075, "umweltbundesamt_konzept_2015"),
      measure("mob_less_motorized_individual", E::Mobility, "road", 0.30, 0.30, "Fraunhofer2020"),
      measure("mob_teleworking", E::Mobility, "road", 0.01, 0.20, "van2018potential; VENTURINIb", 0.18),
      measure("mob_public_transport_time", E::Mobility, "rail", 0.01, 0.10, "VENTURINIb"),
      measure("mob_less_aviation", E::Mobility, "air", 0.55, 0.55, "Fraunhofer2020"),
      measure("mob_less_private_aviation", E::Mobility, "air", 0.50, 0.50, "umweltbundesamt_konzept_2015"),
      measure("mob_avoid_short_flights", E::Mobility, "air", 0.25, 0.25, "van2018potential"),
      measure("mob_intra_eu_leisure", E::Mobility, "air", 0.50, 0.50, "van2018potential"),
      measure("heat_room_temperature", E::Heat, kResidentialHeat, 0.044, 0.09, "umweltbundesamt_konzept_2015; marshall_combining_2016"),
      measure("heat_thermostat", E::Heat, kResidentialHeat, 0.13, 0.13, "palmer2012much"),
      measure("heat_living_space", E::Heat, kResidentialHeat, 0.249, 0.357, "BierwirthThomas2019"),
      measure("heat_shower_heads", E::Heat, kResidentialHeat, 0.50, 0.50, "palmer2012much"),
      measure("heat_shower_feedback", E::Heat, kResidentialHeat, 0.05, 0.10, "toulouse_2018_products"),
      measure("heat_shorter_showers", E::Heat, kResidentialHeat, 0.20, 0.30, "palmer2012much"),
      measure("heat_water_consumption", E::Heat, kResidentialHeat, 0.70, 0.70, "lehmann2015stromeinspareffekte"),
      measure("heat_food_waste", E::Heat, "process_low", 0.086, 0.132, "lebensmittel2019; vita2019environmental"),
      measure("heat_plastic_recycling", E::Heat, "process_mid", 0.014, 0.021, "negawatt; uba_kunststoffe; chemiewirtschaft"),
      measure("heat_product_lifetime", E::Heat, "process_mid", 0.030, 0.082, "obsolescenceUBA; vita2019environmental"),
      measure("heat_construction_mid", E::Heat, "process_mid", 0.007, 0.017, "hertwich2019material"),
      measure("heat_construction_high", E::Heat, "process_high", 0.030, 0.076, "hertwich2019material"),
  };

  c.validate();
  return c;
}

void Catalog::validate() const {
  for (auto s : kAllSectors) {
    if (!subsector_shares_.count(s)) {
      throw ConfigError("catalog lacks subsector shares for " + std::string(to_string(s)));
    }
    sector_shares_.share(s);
  }
  for (const auto& m : measures_) {
    validate_measure(m);
    if (!subsector_shares(m.sector).contains(m.subsector)) {
      throw ConfigError("measure '" + m.id + "' targets unknown subsector " +
                        slice_name(m.sector, m.subsector));
    }
  }
  for (const auto& p : pinned_) {
    if (!subsector_shares(p.sector).contains(p.subsector)) {
      throw ConfigError("pinned value for unknown subsector " + slice_name(p.sector, p.subsector));
    }
    require_fraction(p.low, "pinned low value");
    require_fraction(p.high, "pinned high value");
  }
  for (const auto& sub : kProcessHeatSubsectors) {
    if (!subsector_shares(Sector::Heat).contains(sub)) {
      throw ConfigError("heat shares must contain " + sub);
    }
  }
  branch_table_.validate();
  for (const auto& r : branch_reductions_) {
    branch_table_.share(r.level, r.branch);
    require_fraction(r.low, "branch reduction");
    require_fraction(r.high, "branch reduction");
  }
}

const SubsectorShares& Catalog::subsector_shares(Sector s) const {
  auto it = subsector_shares_.find(s);
  if (it == subsector_shares_.end()) {
    throw ConfigError("no subsector shares for " + std::string(to_string(s)));
  }
  return it->second;
}

std::array<double, 3> Catalog::temperature_shares() const {
  const auto& heat = subsector_shares(Sector::Heat);
  return {heat.share(kProcessHeatSubsectors[0]), heat.share(kProcessHeatSubsectors[1]),
          heat.share(kProcessHeatSubsectors[2])};
}

double Catalog::subsector_reduction(Sector s, const std::string& sub, Ambition a) const {
  for (const auto& p : pinned_) {
    if (p.sector == s && p.subsector == sub) return a == Ambition::Low ? p.low : p.high;
  }
  if (s == Sector::Heat) {
    for (int i = 0; i < 3; ++i) {
      if (sub == kProcessHeatSubsectors[i] && !branch_reductions_.empty()) {
        return level_reductions(branch_table_, branch_reductions_, a)[i];
      }
    }
  }
  std::vector<Measure> selected;
  for (const auto& m : measures_) {
    if (m.sector == s && m.subsector == sub) selected.push_back(m);
  }
  return combine_measures(selected, a);
}

ReductionSet Catalog::assemble(Ambition a, std::map<SliceKey, double> subsector) const {
  ReductionSet set;
  set.ambition = a;
  for (auto s : kAllSectors) {
    std::map<std::string, double> subs;
    for (const auto& e : subsector_shares(s).entries()) {
      auto it = subsector.find({s, e.name});
      subs[e.name] = it == subsector.end() ? 0.0 : it->second;
      set.subsector[{s, e.name}] = subs[e.name];
    }
    set.sector[s] = sector_reduction(subs, subsector_shares(s));
  }
  for (const auto& [key, v] : subsector) {
    if (!set.subsector.count(key)) {
      throw ConfigError("reduction given for unknown subsector " +
                        slice_name(key.first, key.second));
    }
  }
  set.total = total_reduction(set.sector, sector_shares_);
  return set;
}

ReductionSet Catalog::reduction_set(Ambition a) const {
  std::map<SliceKey, double> subs;
  for (auto s : kAllSectors) {
    for (const auto& e : subsector_shares(s).entries()) {
      subs[{s, e.name}] = subsector_reduction(s, e.name, a);
    }
  }
  return assemble(a, std::move(subs));
}

ReductionSet Catalog::restricted_set(Ambition a, const std::vector<SliceKey>& active) const {
  if (active.empty()) throw ConfigError("restricted reduction set needs at least one slice");
  std::map<SliceKey, double> subs;
  for (const auto& key : active) {
    if (!subsector_shares(key.first).contains(key.second)) {
      throw ConfigError("unknown slice " + slice_name(key.first, key.second));
    }
    subs[key] = subsector_reduction(key.first, key.second, a);
  }
  return assemble(a, std::move(subs));
}

ReductionSet Catalog::uniform_set(double r) const {
  require_fraction(r, "uniform reduction");
  std::map<SliceKey, double> subs;
  for (auto s : kAllSectors) {
    for (const auto& e : subsector_shares(s).entries()) subs[{s, e.name}] = r;
  }
  return assemble(Ambition::High, std::move(subs));
}

// ---------------------------------------------------------------------------

nlohmann::json Catalog::to_json() const {
  nlohmann::json j;
  for (const auto& [s, f] : sector_shares_.entries()) j["sector_shares"][std::string(to_string(s))] = f;
  for (const auto& [s, shares] : subsector_shares_) {
    auto& arr = j["subsector_shares"][std::string(to_string(s))];
    arr = nlohmann::json::array();
    for (const auto& e : shares.entries()) arr.push_back({{"name", e.name}, {"share", e.fraction}});
  }
  j["pinned"] = nlohmann::json::array();
  for (const auto& p : pinned_) {
    j["pinned"].push_back({{"sector", to_string(p.sector)},
                           {"subsector", p.subsector},
                           {"low", p.low},
                           {"high", p.high},
                           {"source", p.source_tag}});
  }
  auto& ph = j["process_heat"];
  ph["branches"] = branch_table_.branches;
  for (auto level : kTemperatureLevels) {
    ph["shares"][std::string(to_string(level))] = branch_table_.shares[static_cast<int>(level)];
  }
  ph["reductions"] = nlohmann::json::array();
  for (const auto& r : branch_reductions_) {
    ph["reductions"].push_back({{"level", to_string(r.level)},
                                {"branch", r.branch},
                                {"low", r.low},
                                {"high", r.high},
                                {"note", r.note}});
  }
  j["measures"] = nlohmann::json::array();
  for (const auto& m : measures_) {
    j["measures"].push_back({{"id", m.id},
                             {"sector", to_string(m.sector)},
                             {"subsector", m.subsector},
                             {"reduction_low", m.reduction_low},
                             {"reduction_high", m.reduction_high},
                             {"applicability", m.applicability},
                             {"source", m.source_tag}});
  }
  return j;
}

Catalog Catalog::from_json(const nlohmann::json& j) {
  try {
    Catalog c;
    std::map<Sector, double> sector;
    for (const auto& [k, v] : j.at("sector_shares").items()) sector[parse_sector(k)] = v.get<double>();
    c.sector_shares_ = SectorShares(std::move(sector));
    for (const auto& [k, arr] : j.at("subsector_shares").items()) {
      std::vector<ShareEntry> entries;
      for (const auto& e : arr) entries.push_back({e.at("name"), e.at("share")});
      const auto s = parse_sector(k);
      c.subsector_shares_[s] = SubsectorShares(s, std::move(entries));
    }
    for (const auto& p : j.value("pinned", nlohmann::json::array())) {
      c.pinned_.push_back({parse_sector(p.at("sector").get<std::string>()), p.at("subsector"),
                           p.at("low"), p.at("high"), p.value("source", "")});
    }
    if (j.contains("process_heat")) {
      const auto& ph = j["process_heat"];
      c.branch_table_.branches = ph.at("branches").get<std::vector<std::string>>();
      for (auto level : kTemperatureLevels) {
        c.branch_table_.shares[static_cast<int>(level)] =
            ph.at("shares").at(std::string(to_string(level))).get<std::vector<double>>();
      }
      for (const auto& r : ph.value("reductions", nlohmann::json::array())) {
        c.branch_reductions_.push_back({parse_temperature_level(r.at("level").get<std::string>()),
                                        r.at("branch"), r.at("low"), r.at("high"),
                                        r.value("note", "")});
      }
    }
    for (const auto& m : j.value("measures", nlohmann::json::array())) {
      c.measures_.push_back({m.at("id"), parse_sector(m.at("sector").get<std::string>()),
                             m.at("subsector"), m.at("reduction_low"), m.at("reduction_high"),
                             m.value("applicability", 1.0), m.value("source", "")});
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("catalog: ") + e.what());
  }
}

Catalog Catalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("catalog " + path + ": " + e.what());
  }
  return from_json(j);
}

// ---------------------------------------------------------------------------

InferredShares infer_sector_shares(double heat_share, std::array<double, 2> heat,
                                   std::array<double, 2> mobility,
                                   std::array<double, 2> electricity,
                                   std::array<double, 2> totals) {
  // mobility_share * m_k + electricity_share * e_k = total_k - heat_share * h_k
  const double r0 = totals[0] - heat_share * heat[0];
  const double r1 = totals[1] - heat_share * heat[1];
  const double det = mobility[0] * electricity[1] - electricity[0] * mobility[1];
  if (std::abs(det) < 1e-15) throw ConfigError("sector share system is singular");
  return {(r0 * electricity[1] - electricity[0] * r1) / det,
          (mobility[0] * r1 - r0 * mobility[1]) / det};
}

std::vector<PotentialRow> potential_tables(const Catalog& catalog, Ambition a) {
  std::vector<PotentialRow> rows;
  const auto set = catalog.reduction_set(a);
  const std::array<std::pair<Sector, const char*>, 3> tables = {
      std::pair{Sector::Heat, "heat"}, std::pair{Sector::Mobility, "mobility"},
      std::pair{Sector::Electricity, "electricity"}};
  for (const auto& [s, name] : tables) {
    for (const auto& e : catalog.subsector_shares(s).entries()) {
      rows.push_back({name, e.name, e.fraction, set.at(s, e.name)});
    }
    rows.push_back({name, "total", 1.0, set.sector.at(s)});
  }

  const auto temp = catalog.temperature_shares();
  const auto levels = level_reductions(catalog.branch_table(), catalog.branch_reductions(), a);
  for (int i = 0; i < 3; ++i) {
    rows.push_back({"process_heat_levels", std::string(to_string(kTemperatureLevels[i])), temp[i],
                    levels[i]});
  }
  const double process_sum = temp[0] + temp[1] + temp[2];
  rows.push_back({"process_heat_levels", "process_heat", process_sum,
                  process_heat_reduction(levels, temp)});

  const std::array<double, 3> pinned_levels = {set.at(Sector::Heat, kProcessHeatSubsectors[0]),
                                               set.at(Sector::Heat, kProcessHeatSubsectors[1]),
                                               set.at(Sector::Heat, kProcessHeatSubsectors[2])};
  const auto& shares = catalog.sector_shares();
  rows.push_back({"summary", "electricity", shares.share(Sector::Electricity),
                  set.sector.at(Sector::Electricity)});
  rows.push_back({"summary", "mobility", shares.share(Sector::Mobility),
                  set.sector.at(Sector::Mobility)});
  rows.push_back({"summary", "residential_commercial_heat", std::nullopt,
                  set.at(Sector::Heat, kResidentialHeat)});
  rows.push_back({"summary", "process_heat", std::nullopt,
                  process_heat_reduction(pinned_levels, temp)});
  rows.push_back({"summary", "heat", shares.share(Sector::Heat), set.sector.at(Sector::Heat)});
  rows.push_back({"summary", "total", 1.0, set.total});
  return rows;
}

namespace {

std::string pct(double fraction, bool negate) {
  double v = fraction * 100.0 * (negate ? -1.0 : 1.0);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  std::string s(buf);
  return s == "-0.0" ? "0.0" : s;
}

}  // namespace

std::string potential_csv(const std::vector<PotentialRow>& rows) {
  std::ostringstream out;
  out << "table,category,share_pct,reduction_pct\n";
  for (const auto& r : rows) {
    out << r.table << ',' << r.category << ',' << (r.share ? pct(*r.share, false) : "") << ','
        << pct(r.reduction, true) << '\n';
  }
  return out.str();
}

}  // namespace suffopt
