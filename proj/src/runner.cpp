#include "suffopt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "suffopt/lp/builder.hpp"
#include "suffopt/text.hpp"

namespace suffopt {

namespace fs = std::filesystem;

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Reference: return "reference";
    case ScenarioKind::Ambition: return "ambition";
    case ScenarioKind::Sensitivity: return "sensitivity";
    case ScenarioKind::Uniform: return "uniform";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "reference") return ScenarioKind::Reference;
  if (text == "ambition") return ScenarioKind::Ambition;
  if (text == "sensitivity") return ScenarioKind::Sensitivity;
  if (text == "uniform") return ScenarioKind::Uniform;
  throw ConfigError("unknown scenario kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------- Scenario

Scenario Scenario::reference(std::string name) {
  Scenario s;
  s.name = std::move(name);
  return s;
}

Scenario Scenario::with_ambition(Ambition a, std::string name) {
  Scenario s;
  s.name = name.empty() ? std::string(to_string(a)) : std::move(name);
  s.kind = ScenarioKind::Ambition;
  s.ambition = a;
  return s;
}

Scenario Scenario::sensitivity(std::string name, Sector sector, std::vector<std::string> subsectors) {
  Scenario s;
  s.name = std::move(name);
  s.kind = ScenarioKind::Sensitivity;
  for (auto& sub : subsectors) s.slices.emplace_back(sector, std::move(sub));
  return s;
}

Scenario Scenario::uniform(double r, std::string name) {
  Scenario s;
  s.name = name.empty() ? "uniform_" + format_fixed(100.0 * r, 1) : std::move(name);
  s.kind = ScenarioKind::Uniform;
  s.rate = r;
  return s;
}

void Scenario::validate(const Catalog& catalog) const {
  if (name.empty()) throw ConfigError("scenario without a name");
  switch (kind) {
    case ScenarioKind::Sensitivity: {
      if (slices.empty()) throw ConfigError("sensitivity scenario '" + name + "' has no active sector");
      const Sector sector = slices.front().first;
      for (const auto& [s, sub] : slices) {
        if (s != sector) {
          throw ConfigError("sensitivity scenario '" + name + "' mixes sectors " +
                            std::string(to_string(sector)) + " and " + std::string(to_string(s)));
        }
        if (!catalog.subsector_shares(s).contains(sub)) {
          throw ConfigError("sensitivity scenario '" + name + "': unknown subsector " +
                            std::string(to_string(s)) + "/" + sub);
        }
      }
      break;
    }
    case ScenarioKind::Uniform:
      if (!(rate >= 0.0 && rate <= 1.0)) {
        throw ConfigError("uniform scenario '" + name + "': rate must lie in [0,1]");
      }
      break;
    default:
      break;
  }
}

ReductionSet Scenario::reductions(const Catalog& catalog) const {
  validate(catalog);
  switch (kind) {
    case ScenarioKind::Reference: return catalog.uniform_set(0.0);
    case ScenarioKind::Ambition: return catalog.reduction_set(ambition);
    case ScenarioKind::Sensitivity: return catalog.restricted_set(ambition, slices);
    case ScenarioKind::Uniform: return catalog.uniform_set(rate);
  }
  return catalog.uniform_set(0.0);
}

Scenario Scenario::from_json(const nlohmann::json& j, const Catalog& catalog) {
  try {
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.kind = parse_scenario_kind(j.value("kind", std::string("reference")));
    if (j.contains("ambition")) s.ambition = parse_ambition(j["ambition"].get<std::string>());
    s.rate = j.value("rate", 0.0);
    if (s.kind == ScenarioKind::Sensitivity) {
      if (!j.contains("sector")) throw ConfigError("sensitivity scenario '" + s.name + "' has no active sector");
      const Sector sector = parse_sector(j["sector"].get<std::string>());
      std::vector<std::string> subs;
      if (j.contains("subsectors")) {
        subs = j["subsectors"].get<std::vector<std::string>>();
      } else {
        for (const auto& e : catalog.subsector_shares(sector).entries()) subs.push_back(e.name);
      }
      for (auto& sub : subs) s.slices.emplace_back(sector, std::move(sub));
    }
    s.validate(catalog);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json j{{"name", name}, {"kind", to_string(kind)}};
  if (kind == ScenarioKind::Ambition || kind == ScenarioKind::Sensitivity) {
    j["ambition"] = to_string(ambition);
  }
  if (kind == ScenarioKind::Sensitivity && !slices.empty()) {
    j["sector"] = to_string(slices.front().first);
    std::vector<std::string> subs;
    for (const auto& [s, sub] : slices) subs.push_back(sub);
    j["subsectors"] = subs;
  }
  if (kind == ScenarioKind::Uniform) j["rate"] = rate;
  return j;
}

std::vector<Scenario> sensitivity_scenarios(const Catalog& catalog) {
  auto all = [&](Sector s) {
    std::vector<std::string> out;
    for (const auto& e : catalog.subsector_shares(s).entries()) out.push_back(e.name);
    return out;
  };
  std::vector<std::string> process(kProcessHeatSubsectors.begin(), kProcessHeatSubsectors.end());
  std::vector<Scenario> out = {
      Scenario::sensitivity("sens_electricity", Sector::Electricity, all(Sector::Electricity)),
      Scenario::sensitivity("sens_mobility", Sector::Mobility, all(Sector::Mobility)),
      Scenario::sensitivity("sens_heat_residential", Sector::Heat, {std::string(kResidentialHeat)}),
      Scenario::sensitivity("sens_heat_process", Sector::Heat, process),
      Scenario::sensitivity("sens_heat", Sector::Heat, all(Sector::Heat)),
  };
  for (const auto& s : out) s.validate(catalog);
  return out;
}

// ---------------------------------------------------------------- Study

Study Study::defaults() {
  Study s;
  s.name = "default";
  s.scenarios = {Scenario::reference(), Scenario::with_ambition(Ambition::Low),
                 Scenario::with_ambition(Ambition::High)};
  return s;
}

Study Study::from_json(const nlohmann::json& j, const std::string& base_dir) {
  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
  };
  try {
    Study s;
    s.name = j.value("name", s.name);
    s.timesteps = j.value("timesteps", s.timesteps);
    if (s.timesteps <= 0) throw ConfigError("study: timesteps must be positive");
    const auto catalog = j.value("catalog", std::string());
    s.catalog_path = catalog == "builtin" ? std::string() : resolve(catalog);
    if (j.contains("demand")) {
      const auto& d = j["demand"];
      s.total_twh = d.value("total_twh", s.total_twh);
      s.demand_csv = resolve(d.value("csv", std::string()));
      if (d.contains("shapes")) s.shapes = ShapeConfig::from_json(d["shapes"]);
    }
    if (j.contains("system")) s.system = j["system"];
    const Catalog cat = s.catalog_path.empty() ? Catalog::builtin() : Catalog::load(s.catalog_path);
    for (const auto& sj : j.value("scenarios", nlohmann::json::array())) {
      s.scenarios.push_back(Scenario::from_json(sj, cat));
    }
    if (s.scenarios.empty()) s.scenarios = defaults().scenarios;
    std::set<std::string> names;
    for (const auto& sc : s.scenarios) {
      if (!names.insert(sc.name).second) throw ConfigError("duplicate scenario name '" + sc.name + "'");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("study: ") + e.what());
  }
}

Study Study::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open study file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("study " + path + ": " + e.what());
  }
  return from_json(j, fs::path(path).parent_path().string());
}

nlohmann::json Study::to_json() const {
  nlohmann::json d{{"total_twh", total_twh}, {"shapes", shapes.to_json()}};
  if (!demand_csv.empty()) d["csv"] = demand_csv;
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& s : scenarios) sc.push_back(s.to_json());
  return {{"name", name},
          {"timesteps", timesteps},
          {"catalog", catalog_path.empty() ? std::string("builtin") : catalog_path},
          {"demand", d},
          {"system", system},
          {"scenarios", sc}};
}

const Scenario& Study::scenario(const std::string& scenario_name) const {
  for (const auto& s : scenarios) {
    if (s.name == scenario_name) return s;
  }
  throw ConfigError("study '" + name + "' has no scenario '" + scenario_name + "'");
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SharedInputs prepare(const Study& study) {
  SharedInputs in;
  in.catalog = study.catalog_path.empty() ? Catalog::builtin() : Catalog::load(study.catalog_path);
  in.catalog.validate();

  nlohmann::json sys = study.system;
  if (!sys.contains("hours")) sys["hours"] = study.shapes.hours;
  in.system = SystemConfig::from_json(sys);
  if (in.system.horizon_hours != study.shapes.hours) {
    throw ConfigError("system horizon (" + std::to_string(in.system.horizon_hours) +
                      " h) differs from the demand horizon (" + std::to_string(study.shapes.hours) + " h)");
  }

  std::uint64_t fp = fnv1a(in.catalog.to_json().dump());
  fp = fnv1a(in.system.to_json().dump(), fp);
  fp = fnv1a("timesteps=" + std::to_string(study.timesteps), fp);
  if (study.demand_csv.empty()) {
    const auto budget = DemandBudget::from_catalog(in.catalog, study.total_twh);
    in.hourly = synthesize_profiles(budget, study.shapes, in.system.carrier_map);
    fp = fnv1a(study.shapes.to_json().dump(), fp);
    fp = fnv1a("total_twh=" + format_double(study.total_twh), fp);
  } else {
    std::ifstream f(study.demand_csv, std::ios::binary);
    if (!f) throw ConfigError("cannot open demand file " + study.demand_csv);
    std::stringstream buf;
    buf << f.rdbuf();
    fp = fnv1a(buf.str(), fp);
    in.hourly = ingest_profiles(buf, study.shapes.hours);
  }
  in.horizon = Horizon(study.shapes.hours, study.timesteps);
  in.fingerprint = fp;

  const auto report = validate_system(in.system, in.hourly);
  if (!report.ok()) throw ConfigError("system validation failed: " + report.summary());
  return in;
}

// ---------------------------------------------------------------- runs

InfeasibleError::InfeasibleError(const std::string& scenario, std::vector<std::string> binding)
    : std::runtime_error([&] {
        std::string msg = "scenario '" + scenario + "' is infeasible";
        if (!binding.empty()) {
          msg += "; potential limits binding:";
          for (const auto& b : binding) msg += " " + b + ";";
          msg.pop_back();
        }
        return msg;
      }()),
      binding_(std::move(binding)) {}

RunResult run_scenario(const Scenario& scenario, const SharedInputs& inputs,
                       const lp::SimplexOptions& options) {
  RunResult out;
  out.fingerprint = inputs.fingerprint;
  out.reductions = scenario.reductions(inputs.catalog);
  const auto profiles = scenario.kind == ScenarioKind::Reference
                            ? inputs.hourly
                            : apply_reduction(inputs.hourly, out.reductions);
  for (auto s : kAllSectors) out.sector_demand_twh[s] = sector_twh(profiles, s);

  const auto start = std::chrono::steady_clock::now();
  const auto model = lp::build_lp(inputs.system, profiles, inputs.horizon);
  const auto sol = lp::solve(model.lp, options);
  out.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (sol.status == lp::SolveStatus::Infeasible) {
    throw InfeasibleError(scenario.name, lp::binding_potentials(model, sol.x));
  }
  if (sol.status == lp::SolveStatus::Unbounded) {
    throw ConfigError("scenario '" + scenario.name + "' is unbounded; check for negative costs");
  }
  out.result = extract_results(model, sol, scenario.name);
  return out;
}

std::vector<RunResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                     const SharedInputs& inputs, int threads,
                                     const lp::SimplexOptions& options) {
  std::vector<RunResult> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        out[i] = run_scenario(scenarios[i], inputs, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(1, scenarios.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RunResult> run_sensitivity(const SharedInputs& inputs, int threads,
                                       const lp::SimplexOptions& options) {
  return run_scenarios(sensitivity_scenarios(inputs.catalog), inputs, threads, options);
}

// ---------------------------------------------------------------- comparison

const ComparisonRow& ComparisonReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw ConfigError("comparison has no row '" + name + "'");
}

ComparisonReport compare(const std::vector<RunResult>& results, const RunResult& reference) {
  auto pct = [](double value, double ref) { return ref == 0.0 ? 0.0 : 100.0 * (1.0 - value / ref); };
  auto make_row = [&](const RunResult& r) {
    if (r.fingerprint != reference.fingerprint) {
      throw ConfigError("cannot compare '" + r.result.name + "' with '" + reference.result.name +
                        "': results come from different study inputs");
    }
    const auto& res = r.result;
    const auto& ref = reference.result;
    ComparisonRow row;
    row.name = res.name;
    row.cost = res.total_cost;
    row.demand_twh = res.demand_twh;
    row.renewable_gw = res.renewable_capacity_gw();
    row.storage_gwh = res.storage_energy_gwh();
    row.cost_reduction_pct = pct(res.total_cost, ref.total_cost);
    row.demand_reduction_pct = pct(res.demand_twh, ref.demand_twh);
    row.capacity_reduction_pct = pct(row.renewable_gw, ref.renewable_capacity_gw());
    row.storage_reduction_pct = pct(row.storage_gwh, ref.storage_energy_gwh());
    row.cost_to_demand_ratio =
        row.demand_reduction_pct == 0.0 ? 0.0 : row.cost_reduction_pct / row.demand_reduction_pct;
    return row;
  };
  ComparisonReport report;
  report.reference = reference.result.name;
  report.rows.push_back(make_row(reference));
  for (const auto& r : results) {
    if (&r == &reference || r.result.name == reference.result.name) continue;
    report.rows.push_back(make_row(r));
  }
  return report;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "scenario,total_cost_meur,demand_twh,renewable_capacity_gw,storage_energy_gwh,"
         "cost_reduction_pct,demand_reduction_pct,capacity_reduction_pct,storage_reduction_pct,"
         "cost_to_demand_ratio\n";
  for (const auto& r : report.rows) {
    out << r.name << ',' << format_fixed(r.cost, 3) << ',' << format_fixed(r.demand_twh, 3) << ','
        << format_fixed(r.renewable_gw, 3) << ',' << format_fixed(r.storage_gwh, 3) << ','
        << format_fixed(r.cost_reduction_pct, 1) << ',' << format_fixed(r.demand_reduction_pct, 1) << ','
        << format_fixed(r.capacity_reduction_pct, 1) << ',' << format_fixed(r.storage_reduction_pct, 1)
        << ',' << format_fixed(r.cost_to_demand_ratio, 2) << '\n';
  }
}

namespace {

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& p) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + p.string() + "' failed");
}

}  // namespace

void export_report(const ComparisonReport& report, const std::vector<RunResult>& results,
                   const std::string& directory) {
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + directory + "': " + ec.message());

  {
    const auto p = dir / "comparison.csv";
    auto out = open_output(p);
    write_comparison_csv(out, report);
    finish(out, p);
  }
  {
    const auto p = dir / "demand.csv";
    auto out = open_output(p);
    out << "scenario,sector,reduction_pct,demand_twh\n";
    for (const auto& r : results) {
      for (auto s : kAllSectors) {
        out << r.result.name << ',' << to_string(s) << ','
            << format_fixed(-100.0 * r.reductions.sector.at(s), 1) << ','
            << format_fixed(r.sector_demand_twh.at(s), 3) << '\n';
      }
      out << r.result.name << ",total," << format_fixed(-100.0 * r.reductions.total, 1) << ','
          << format_fixed(r.result.demand_twh, 3) << '\n';
    }
    finish(out, p);
  }
  {
    const auto p = dir / "capacities.csv";
    auto out = open_output(p);
    out << "scenario,technology,renewable,capacity_gw\n";
    for (const auto& r : results) {
      for (const auto& c : r.result.capacities) {
        out << r.result.name << ',' << c.name << ',' << (c.renewable ? 1 : 0) << ','
            << format_fixed(c.gw, 3) << '\n';
      }
    }
    finish(out, p);
  }
  {
    const auto p = dir / "storage.csv";
    auto out = open_output(p);
    out << "scenario,storage,carrier,energy_gwh,power_gw\n";
    for (const auto& r : results) {
      for (const auto& s : r.result.storage) {
        out << r.result.name << ',' << s.name << ',' << to_string(s.carrier) << ','
            << format_fixed(s.energy_gwh, 3) << ',' << format_fixed(s.power_gw, 3) << '\n';
      }
    }
    finish(out, p);
  }
  for (const auto& r : results) {
    const auto p = dir / ("sankey_" + r.result.name + ".json");
    auto out = open_output(p);
    out << sankey_json(r.result).dump(2) << '\n';
    finish(out, p);
  }
}

}  // namespace suffopt
