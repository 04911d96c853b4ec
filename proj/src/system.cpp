#include "suffopt/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "suffopt/text.hpp"

namespace suffopt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLatitudeRad = 51.0 * std::numbers::pi / 180.0;

double unit(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& engine) {
  // Box-Muller on the raw engine output.
  const double u1 = std::max(unit(engine), 0x1.0p-60);
  const double u2 = unit(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Finds x in [lo, hi] with f(x) = target for increasing f.
template <typename F>
double bisect(F f, double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> solar_series(double target_cf, std::uint64_t seed, int hours) {
  std::mt19937_64 engine(seed);
  std::vector<double> base(static_cast<std::size_t>(hours), 0.0);
  double cloud = 0.7;
  for (int h = 0; h < hours; ++h) {
    const int day = h / 24;
    const int hour_of_day = h % 24;
    if (hour_of_day == 0) cloud = 0.6 * cloud + 0.4 * (0.3 + 0.7 * unit(engine));
    const double declination = 0.409 * std::sin(kTwoPi * (284 + day) / 365.0);
    const double hour_angle = kTwoPi * (hour_of_day + 0.5 - 12.0) / 24.0;
    const double elevation = std::sin(kLatitudeRad) * std::sin(declination) +
                             std::cos(kLatitudeRad) * std::cos(declination) * std::cos(hour_angle);
    base[h] = std::max(0.0, elevation) * cloud;
  }
  const double daylight = static_cast<double>(std::count_if(
                              base.begin(), base.end(), [](double v) { return v > 0.0; })) /
                          hours;
  if (target_cf >= daylight) {
    throw ConfigError("solar capacity factor " + std::to_string(target_cf) +
                      " exceeds the daylight fraction");
  }
  auto realized = [&](double k) {
    double s = 0.0;
    for (double b : base) s += std::min(1.0, k * b);
    return s / hours;
  };
  const double k = bisect(realized, target_cf, 0.0, 1e3);
  std::vector<double> out(base.size());
  std::transform(base.begin(), base.end(), out.begin(),
                 [k](double b) { return std::min(1.0, k * b); });
  return out;
}

std::vector<double> wind_series(double target_cf, std::uint64_t seed, int hours) {
  std::mt19937_64 engine(seed);
  constexpr double kPersistence = 0.985;
  const double innovation = std::sqrt(1.0 - kPersistence * kPersistence);
  std::vector<double> driver(static_cast<std::size_t>(hours));
  double z = standard_normal(engine);
  for (int h = 0; h < hours; ++h) {
    z = kPersistence * z + innovation * standard_normal(engine);
    const double seasonal = 0.35 * std::cos(kTwoPi * (h / 24 - 15) / 365.0);
    driver[h] = 1.3 * z + seasonal;
  }
  auto logistic = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  auto realized = [&](double offset) {
    double s = 0.0;
    for (double d : driver) s += logistic(offset + d);
    return s / hours;
  };
  const double offset = bisect(realized, target_cf, -40.0, 40.0);
  std::vector<double> out(driver.size());
  std::transform(driver.begin(), driver.end(), out.begin(),
                 [&](double d) { return logistic(offset + d); });
  return out;
}

Technology tech(std::string name, std::optional<Carrier> in, Carrier out, double eff, double invest,
                double fixed, double life, std::optional<double> potential = std::nullopt,
                AvailabilitySpec avail = {}) {
  Technology t;
  t.name = std::move(name);
  t.input = in;
  t.output = out;
  t.efficiency = eff;
  t.invest_cost = invest;
  t.fixed_op_cost = fixed;
  t.lifetime = life;
  t.potential_gw = potential;
  t.availability_spec = avail;
  return t;
}

StorageTechnology storage(std::string name, Carrier c, double energy, double power, double life,
                          double eta_c, double eta_d,
                          std::optional<double> energy_potential = std::nullopt) {
  StorageTechnology s;
  s.name = std::move(name);
  s.carrier = c;
  s.energy_cost = energy;
  s.power_cost = power;
  s.lifetime = life;
  s.charge_eff = eta_c;
  s.discharge_eff = eta_d;
  s.energy_potential_gwh = energy_potential;
  return s;
}

std::optional<double> optional_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json tech_json(const Technology& t) {
  return {{"name", t.name},
          {"input", t.input ? nlohmann::json(to_string(*t.input)) : nlohmann::json(nullptr)},
          {"output", to_string(t.output)},
          {"efficiency", t.efficiency},
          {"invest_cost", t.invest_cost},
          {"fixed_op_cost", t.fixed_op_cost},
          {"lifetime", t.lifetime},
          {"potential_gw", optional_json(t.potential_gw)},
          {"availability",
           {{"kind", to_string(t.availability_spec.kind)},
            {"target_cf", t.availability_spec.target_cf},
            {"stream", t.availability_spec.stream}}}};
}

Technology tech_from_json(const nlohmann::json& j) {
  Technology t;
  t.name = j.at("name");
  if (j.contains("input") && !j["input"].is_null()) t.input = parse_carrier(j["input"].get<std::string>());
  t.output = parse_carrier(j.at("output").get<std::string>());
  t.efficiency = j.value("efficiency", 1.0);
  t.invest_cost = j.at("invest_cost");
  t.fixed_op_cost = j.value("fixed_op_cost", 0.0);
  t.lifetime = j.at("lifetime");
  t.potential_gw = optional_number(j, "potential_gw");
  if (j.contains("availability")) {
    const auto& a = j["availability"];
    t.availability_spec.kind = parse_availability_kind(a.value("kind", std::string("constant")));
    t.availability_spec.target_cf = a.value("target_cf", 1.0);
    t.availability_spec.stream = a.value("stream", std::uint64_t{0});
  }
  return t;
}

nlohmann::json storage_json(const StorageTechnology& s) {
  return {{"name", s.name},
          {"carrier", to_string(s.carrier)},
          {"energy_cost", s.energy_cost},
          {"power_cost", s.power_cost},
          {"lifetime", s.lifetime},
          {"charge_eff", s.charge_eff},
          {"discharge_eff", s.discharge_eff},
          {"energy_to_power_limit", optional_json(s.energy_to_power_limit)},
          {"energy_potential_gwh", optional_json(s.energy_potential_gwh)}};
}

StorageTechnology storage_from_json(const nlohmann::json& j) {
  StorageTechnology s;
  s.name = j.at("name");
  s.carrier = parse_carrier(j.at("carrier").get<std::string>());
  s.energy_cost = j.at("energy_cost");
  s.power_cost = j.at("power_cost");
  s.lifetime = j.at("lifetime");
  s.charge_eff = j.value("charge_eff", 1.0);
  s.discharge_eff = j.value("discharge_eff", 1.0);
  s.energy_to_power_limit = optional_number(j, "energy_to_power_limit");
  s.energy_potential_gwh = optional_number(j, "energy_potential_gwh");
  return s;
}

}  // namespace

std::string_view to_string(AvailabilityKind k) {
  switch (k) {
    case AvailabilityKind::Constant: return "constant";
    case AvailabilityKind::Solar: return "solar";
    case AvailabilityKind::Wind: return "wind";
  }
  return "?";
}

AvailabilityKind parse_availability_kind(std::string_view text) {
  if (text == "constant") return AvailabilityKind::Constant;
  if (text == "solar") return AvailabilityKind::Solar;
  if (text == "wind") return AvailabilityKind::Wind;
  throw ConfigError("unknown availability kind '" + std::string(text) + "'");
}

void Technology::validate() const {
  if (name.empty()) throw ConfigError("technology without a name");
  if (!(efficiency > 0.0 && efficiency <= 1.5)) {
    throw ConfigError("technology '" + name + "': efficiency must lie in (0, 1.5]");
  }
  if (!(lifetime > 0.0)) throw ConfigError("technology '" + name + "': lifetime must be positive");
  if (!(invest_cost >= 0.0) || !(fixed_op_cost >= 0.0)) {
    throw ConfigError("technology '" + name + "': costs must be non-negative");
  }
  if (potential_gw && !(*potential_gw >= 0.0)) {
    throw ConfigError("technology '" + name + "': potential must be non-negative");
  }
  if (input && *input == output) {
    throw ConfigError("technology '" + name + "': input and output carrier coincide");
  }
  for (double v : availability) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("technology '" + name + "': availability outside [0,1]");
    }
  }
}

void StorageTechnology::validate() const {
  if (name.empty()) throw ConfigError("storage without a name");
  if (!(charge_eff > 0.0 && charge_eff <= 1.0 && discharge_eff > 0.0 && discharge_eff <= 1.0)) {
    throw ConfigError("storage '" + name + "': efficiencies must lie in (0,1]");
  }
  if (!(energy_cost >= 0.0 && power_cost >= 0.0)) {
    throw ConfigError("storage '" + name + "': costs must be non-negative");
  }
  if (!(lifetime > 0.0)) throw ConfigError("storage '" + name + "': lifetime must be positive");
  if (energy_to_power_limit && !(*energy_to_power_limit > 0.0)) {
    throw ConfigError("storage '" + name + "': energy-to-power limit must be positive");
  }
  if (energy_potential_gwh && !(*energy_potential_gwh >= 0.0)) {
    throw ConfigError("storage '" + name + "': energy potential must be non-negative");
  }
}

double annualize(double invest_cost, double lifetime, double rate) {
  if (!(lifetime > 0.0)) throw ConfigError("annualize: lifetime must be positive");
  if (!(rate >= 0.0)) throw ConfigError("annualize: rate must be non-negative");
  if (rate == 0.0) return invest_cost / lifetime;
  const double growth = std::pow(1.0 + rate, lifetime);
  return invest_cost * rate * growth / (growth - 1.0);
}

std::vector<double> build_availability(AvailabilityKind kind, double target_cf,
                                       std::uint64_t seed, int hours) {
  if (hours <= 0) throw ConfigError("availability horizon must be positive");
  if (kind == AvailabilityKind::Constant) {
    if (!(target_cf > 0.0 && target_cf <= 1.0)) {
      throw ConfigError("constant availability must lie in (0,1]");
    }
    return std::vector<double>(static_cast<std::size_t>(hours), target_cf);
  }
  if (!(target_cf > 0.0 && target_cf < 1.0)) {
    throw ConfigError("target capacity factor must lie in (0,1), got " + std::to_string(target_cf));
  }
  return kind == AvailabilityKind::Solar ? solar_series(target_cf, seed, hours)
                                         : wind_series(target_cf, seed, hours);
}

SystemConfig SystemConfig::defaults(int hours, std::uint64_t seed) {
  using C = Carrier;
  SystemConfig s;
  s.horizon_hours = hours;
  s.seed = seed;
  const AvailabilitySpec pv{AvailabilityKind::Solar, 0.11, 1};
  const AvailabilitySpec rooftop{AvailabilityKind::Solar, 0.10, 2};
  const AvailabilitySpec agri{AvailabilityKind::Solar, 0.11, 3};
  const AvailabilitySpec onshore{AvailabilityKind::Wind, 0.30, 4};
  const AvailabilitySpec offshore{AvailabilityKind::Wind, 0.45, 5};
  s.technologies = {
      tech("ccgtGas", C::SyntheticGas, C::Electricity, 0.60, 345, 8.6, 30),
      tech("ccgtHydrogen", C::Hydrogen, C::Electricity, 0.60, 185, 3.3, 30),
      tech("Methanation", C::Hydrogen, C::SyntheticGas, 0.80, 865, 18, 30),
      tech("Electrolyzer", C::Electricity, C::Hydrogen, 0.70, 543, 14.6, 30),
      tech("PV", std::nullopt, C::Electricity, 1.0, 407, 7.9, 25, 400.0, pv),
      tech("PV Rooftop", std::nullopt, C::Electricity, 1.0, 594, 11.5, 25, 250.0, rooftop),
      tech("PV Agriculture", std::nullopt, C::Electricity, 1.0, 814, 7.9, 25, 200.0, agri),
      tech("Wind Onshore", std::nullopt, C::Electricity, 1.0, 1200, 30, 25, 450.0, onshore),
      tech("Wind Offshore", std::nullopt, C::Electricity, 1.0, 3111, 100, 25, 100.0, offshore),
  };
  s.storages = {
      storage("Li-Ion Battery", C::Electricity, 218, 84.2, 18, 0.96, 0.96),
      storage("Pumped Hydro", C::Electricity, 10, 745, 60, 0.89, 0.89, 40.0),
      storage("Gas Storage Hydrogen", C::Hydrogen, 0.1, 0.1, 30, 1.0, 1.0),
      storage("Gas Storage Synthetic Gas", C::SyntheticGas, 0.1, 0.1, 30, 1.0, 1.0),
      storage("CAES", C::Electricity, 26.4, 455, 30, 0.85, 0.82),
  };
  s.synthesize_availability();
  s.validate();
  return s;
}

void SystemConfig::synthesize_availability() {
  for (auto& t : technologies) {
    if (t.availability_spec.kind == AvailabilityKind::Constant &&
        t.availability_spec.target_cf == 1.0) {
      t.availability.clear();
      continue;
    }
    t.availability = build_availability(t.availability_spec.kind, t.availability_spec.target_cf,
                                        seed ^ (0xD1B54A32D192ED03ULL * (t.availability_spec.stream + 1)),
                                        horizon_hours);
  }
}

const Technology* SystemConfig::find_technology(const std::string& name) const {
  for (const auto& t : technologies) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

Technology* SystemConfig::find_technology(const std::string& name) {
  for (auto& t : technologies) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void SystemConfig::remove_technology(const std::string& name) {
  auto it = std::remove_if(technologies.begin(), technologies.end(),
                           [&](const Technology& t) { return t.name == name; });
  if (it == technologies.end()) throw ConfigError("no technology named '" + name + "'");
  technologies.erase(it, technologies.end());
}

void SystemConfig::validate() const {
  if (!(discount_rate >= 0.0 && discount_rate <= 0.2)) {
    throw ConfigError("discount rate must lie in [0, 0.2]");
  }
  if (horizon_hours <= 0) throw ConfigError("system horizon must be positive");
  std::set<std::string> names;
  for (const auto& t : technologies) {
    t.validate();
    if (!names.insert(t.name).second) throw ConfigError("duplicate technology '" + t.name + "'");
    if (!t.availability.empty() && static_cast<int>(t.availability.size()) != horizon_hours) {
      throw ConfigError("technology '" + t.name + "': availability has " +
                        std::to_string(t.availability.size()) + " values, horizon is " +
                        std::to_string(horizon_hours));
    }
  }
  for (const auto& s : storages) {
    s.validate();
    if (!names.insert(s.name).second) throw ConfigError("duplicate technology '" + s.name + "'");
  }
}

nlohmann::json SystemConfig::to_json() const {
  nlohmann::json j;
  j["discount_rate"] = discount_rate;
  j["hours"] = horizon_hours;
  j["seed"] = seed;
  j["technologies"] = nlohmann::json::array();
  for (const auto& t : technologies) j["technologies"].push_back(tech_json(t));
  j["storages"] = nlohmann::json::array();
  for (const auto& s : storages) j["storages"].push_back(storage_json(s));
  j["carrier_map"] = carrier_map.to_json();
  return j;
}

SystemConfig SystemConfig::from_json(const nlohmann::json& j) {
  try {
    SystemConfig s;
    const int hours = j.value("hours", kHoursPerYear);
    const std::uint64_t seed = j.value("seed", std::uint64_t{7});
    if (j.value("base", std::string()) == "default") {
      s = defaults(hours, seed);
      for (const auto& name : j.value("remove", std::vector<std::string>{})) {
        if (s.find_technology(name)) {
          s.remove_technology(name);
        } else {
          auto it = std::remove_if(s.storages.begin(), s.storages.end(),
                                   [&](const StorageTechnology& st) { return st.name == name; });
          if (it == s.storages.end()) throw ConfigError("cannot remove unknown technology '" + name + "'");
          s.storages.erase(it, s.storages.end());
        }
      }
      const auto potentials = j.value("potential_gw", nlohmann::json::object());
      for (const auto& [name, v] : potentials.items()) {
        auto* t = s.find_technology(name);
        if (!t) throw ConfigError("potential override for unknown technology '" + name + "'");
        t->potential_gw = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      }
      const auto factors = j.value("target_cf", nlohmann::json::object());
      for (const auto& [name, v] : factors.items()) {
        auto* t = s.find_technology(name);
        if (!t) throw ConfigError("capacity factor override for unknown technology '" + name + "'");
        t->availability_spec.target_cf = v.get<double>();
      }
    } else {
      s.horizon_hours = hours;
      s.seed = seed;
      for (const auto& t : j.at("technologies")) s.technologies.push_back(tech_from_json(t));
      for (const auto& st : j.value("storages", nlohmann::json::array())) {
        s.storages.push_back(storage_from_json(st));
      }
    }
    if (j.contains("carrier_map")) s.carrier_map = CarrierMap::from_json(j["carrier_map"]);
    s.discount_rate = j.value("discount_rate", s.discount_rate);
    s.synthesize_availability();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  }
}

void write_availability_csv(std::ostream& out, const SystemConfig& system) {
  out << "tech,hour,cf\n";
  for (const auto& t : system.technologies) {
    for (std::size_t h = 0; h < t.availability.size(); ++h) {
      out << t.name << ',' << h + 1 << ',' << format_double(t.availability[h]) << '\n';
    }
  }
}

void read_availability_csv(std::istream& in, SystemConfig& system) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "tech,hour,cf") {
    throw ConfigError("availability CSV row 1: expected header 'tech,hour,cf'");
  }
  const int hours = system.horizon_hours;
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, std::vector<bool>> seen;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::string where = "availability CSV row " + std::to_string(row) + ": ";
    const auto f = split(trim(line), ',');
    if (f.size() != 3) throw ConfigError(where + "expected 3 fields");
    const std::string name(trim(f[0]));
    if (!system.find_technology(name)) throw ConfigError(where + "unknown technology '" + name + "'");
    long hour = 0;
    double cf = 0.0;
    try {
      hour = parse_long(f[1]);
      cf = parse_double(f[2]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + e.what());
    }
    if (hour < 1 || hour > hours) throw ConfigError(where + "hour out of range");
    if (!(cf >= 0.0 && cf <= 1.0)) throw ConfigError(where + "capacity factor outside [0,1]");
    auto& s = series.try_emplace(name, static_cast<std::size_t>(hours), 0.0).first->second;
    auto& mark = seen.try_emplace(name, static_cast<std::size_t>(hours), false).first->second;
    if (mark[hour - 1]) throw ConfigError(where + "duplicate hour");
    mark[hour - 1] = true;
    s[hour - 1] = cf;
  }
  for (auto& [name, values] : series) {
    const auto& mark = seen[name];
    if (std::find(mark.begin(), mark.end(), false) != mark.end()) {
      throw ConfigError("availability CSV: series '" + name + "' is incomplete");
    }
    system.find_technology(name)->availability = std::move(values);
  }
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& e : errors) out << "error: " << e << '\n';
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  return out.str();
}

ValidationReport validate_system(const SystemConfig& system, const ProfileSet& profiles) {
  ValidationReport report;
  try {
    system.validate();
  } catch (const ConfigError& e) {
    report.errors.push_back(e.what());
    return report;
  }

  for (const auto& t : system.technologies) {
    if (t.potential_gw && *t.potential_gw == 0.0) {
      report.warnings.push_back("technology '" + t.name + "' has zero potential");
    }
  }

  // Cheapest primary energy (in renewable output units) needed per unit of
  // each carrier; infinity marks a carrier without a producing chain.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::map<Carrier, double> factor;
  for (auto c : kAllCarriers) factor[c] = kInf;
  for (const auto& t : system.technologies) {
    if (t.renewable() && t.potential_gw.value_or(1.0) > 0.0) factor[t.output] = 1.0;
  }
  for (std::size_t pass = 0; pass < kAllCarriers.size() + 1; ++pass) {
    for (const auto& t : system.technologies) {
      if (t.renewable() || t.potential_gw.value_or(1.0) <= 0.0) continue;
      factor[t.output] = std::min(factor[t.output], factor[*t.input] / t.efficiency);
    }
  }

  std::map<Carrier, double> demand_gwh;
  for (const auto& p : profiles) {
    if (p.annual_sum() > 0.0) demand_gwh[p.carrier] += p.annual_sum();
  }
  for (const auto& [c, e] : demand_gwh) {
    if (factor[c] != kInf) continue;
    std::ostringstream msg;
    msg << to_string(c) << " unreachable:";
    bool any = false;
    for (const auto& t : system.technologies) {
      if (t.output != c) continue;
      any = true;
      msg << " '" << t.name << "' needs "
          << (t.input ? std::string(to_string(*t.input)) : std::string("potential"));
      if (t.input) msg << " (" << (factor[*t.input] == kInf ? "unreachable" : "reachable") << ")";
      if (t.potential_gw && *t.potential_gw == 0.0) msg << " but has zero potential";
      msg << ';';
    }
    if (!any) msg << " no technology produces it";
    report.errors.push_back(msg.str());
  }
  if (!report.ok()) return report;

  // Upper bound: primary renewable energy at full potential versus the demand
  // converted back along the most efficient chains (storage losses ignored).
  double required = 0.0;
  for (const auto& [c, e] : demand_gwh) required += e * factor[c];
  double available = 0.0;
  for (const auto& t : system.technologies) {
    if (!t.renewable()) continue;
    if (!t.potential_gw) {
      available = kInf;
      break;
    }
    const double cf_sum = t.availability.empty()
                              ? static_cast<double>(system.horizon_hours)
                              : std::accumulate(t.availability.begin(), t.availability.end(), 0.0);
    available += *t.potential_gw * cf_sum;
  }
  if (required > available) {
    std::ostringstream msg;
    msg << "renewable potential insufficient: at most " << available / 1000.0
        << " TWh primary energy, demand needs at least " << required / 1000.0 << " TWh";
    report.errors.push_back(msg.str());
  }
  return report;
}

}  // namespace suffopt
