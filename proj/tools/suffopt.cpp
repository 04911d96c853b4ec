// suffopt command line: reduction tables, demand profiles, scenario runs,
// sensitivity sweeps and LP export.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "suffopt/lp/builder.hpp"
#include "suffopt/lp/io.hpp"
#include "suffopt/lp/simplex.hpp"
#include "suffopt/runner.hpp"
#include "suffopt/text.hpp"

namespace {

using namespace suffopt;

constexpr int kExitOptimal = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;

Catalog load_catalog(const std::string& path) {
  return path.empty() ? Catalog::builtin() : Catalog::load(path);
}

Study load_study(const std::string& path, int timesteps) {
  Study s = Study::load(path);
  if (timesteps > 0) s.timesteps = timesteps;
  return s;
}

void print_report(const ComparisonReport& report) {
  std::printf("%-24s %12s %10s %10s %8s %8s %8s %8s %6s\n", "scenario", "cost MEUR/a", "demand TWh",
              "RE GW", "cost %", "demand %", "cap %", "stor %", "ratio");
  for (const auto& r : report.rows) {
    std::printf("%-24s %12.1f %10.1f %10.1f %8s %8s %8s %8s %6s\n", r.name.c_str(), r.cost, r.demand_twh,
                r.renewable_gw, format_fixed(-r.cost_reduction_pct, 1).c_str(),
                format_fixed(-r.demand_reduction_pct, 1).c_str(),
                format_fixed(-r.capacity_reduction_pct, 1).c_str(),
                format_fixed(-r.storage_reduction_pct, 1).c_str(),
                format_fixed(r.cost_to_demand_ratio, 2).c_str());
  }
}

int cmd_potential(const std::string& ambition, const std::string& catalog_path) {
  const auto catalog = load_catalog(catalog_path);
  std::cout << potential_csv(potential_tables(catalog, parse_ambition(ambition)));
  return kExitOptimal;
}

int cmd_demand(bool synthesize, const std::string& ingest, int hours, double budget_twh,
               const std::string& catalog_path, const std::string& out_path, bool summary_only) {
  ProfileSet profiles;
  if (!ingest.empty()) {
    profiles = ingest_profiles_file(ingest, hours);
  } else if (synthesize) {
    ShapeConfig shapes;
    shapes.hours = hours;
    profiles = synthesize_profiles(DemandBudget::from_catalog(load_catalog(catalog_path), budget_twh), shapes);
  } else {
    throw ConfigError("demand: pass --synthesize or --ingest PATH");
  }
  if (!summary_only) {
    if (out_path.empty()) {
      write_profiles_csv(std::cout, profiles);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
      write_profiles_csv(out, profiles);
    }
  }
  if (summary_only || !out_path.empty()) {
    std::printf("sector,demand_twh,peak_gw\n");
    for (auto s : kAllSectors) {
      ProfileSet part;
      for (const auto& p : profiles) {
        if (p.sector == s) part.push_back(p);
      }
      const double peak = part.empty() ? 0.0 : load_duration_curve(aggregate(part)).front();
      std::printf("%s,%s,%s\n", std::string(to_string(s)).c_str(),
                  format_fixed(sector_twh(profiles, s), 3).c_str(), format_fixed(peak, 3).c_str());
    }
    std::printf("total,%s,%s\n", format_fixed(total_twh(profiles), 3).c_str(),
                format_fixed(load_duration_curve(aggregate(profiles)).front(), 3).c_str());
  }
  return kExitOptimal;
}

int cmd_run(const std::string& study_path, const std::string& scenario, int timesteps,
            const std::string& out_dir, int threads) {
  const auto study = load_study(study_path, timesteps);
  const auto inputs = prepare(study);
  std::vector<Scenario> selected;
  const Scenario* reference = nullptr;
  for (const auto& s : study.scenarios) {
    if (s.kind == ScenarioKind::Reference && !reference) reference = &s;
  }
  if (scenario.empty()) {
    selected = study.scenarios;
  } else {
    selected.push_back(study.scenario(scenario));
  }
  // The reference is always solved so the report has a baseline.
  if (reference && std::none_of(selected.begin(), selected.end(),
                                [&](const Scenario& s) { return s.name == reference->name; })) {
    selected.insert(selected.begin(), *reference);
  }
  const auto results = run_scenarios(selected, inputs, threads);
  const RunResult* ref = nullptr;
  for (const auto& r : results) {
    if (reference && r.result.name == reference->name) ref = &r;
  }
  const auto report = compare(results, ref ? *ref : results.front());
  print_report(report);
  export_report(report, results, out_dir);
  std::fprintf(stderr, "wrote %s\n", out_dir.c_str());
  return kExitOptimal;
}

int cmd_sensitivity(const std::string& study_path, int timesteps, const std::string& out_dir,
                    int threads) {
  const auto study = load_study(study_path, timesteps);
  const auto inputs = prepare(study);
  auto scenarios = sensitivity_scenarios(inputs.catalog);
  scenarios.insert(scenarios.begin(), Scenario::reference());
  scenarios.push_back(Scenario::with_ambition(Ambition::High));
  const auto results = run_scenarios(scenarios, inputs, threads);
  const auto report = compare(results, results.front());
  print_report(report);
  export_report(report, results, out_dir);
  std::fprintf(stderr, "wrote %s\n", out_dir.c_str());
  return kExitOptimal;
}

int cmd_export_lp(const std::string& study_path, const std::string& scenario_name, int timesteps,
                  std::string out_path, const std::string& format) {
  const auto study = load_study(study_path, timesteps);
  const auto inputs = prepare(study);
  const auto& scenario = study.scenario(scenario_name);
  const auto profiles = apply_reduction(inputs.hourly, scenario.reductions(inputs.catalog));
  auto model = lp::build_lp(inputs.system, profiles, inputs.horizon);
  model.lp.name = study.name + "_" + scenario.name;
  const auto fmt = format.empty() ? (out_path.empty() ? lp::LpFormat::Mps : lp::format_from_path(out_path))
                                  : lp::parse_lp_format(format);
  if (out_path.empty()) out_path = scenario.name + (fmt == lp::LpFormat::Mps ? ".mps" : ".lp");
  lp::export_lp(model.lp, out_path, fmt);
  std::printf("%s: %d variables, %d rows, %zu nonzeros\n", out_path.c_str(), model.lp.num_variables(),
              model.lp.num_rows(), model.lp.num_nonzeros());
  return kExitOptimal;
}

int cmd_solve_lp(const std::string& path, const std::string& solution_path) {
  const auto instance = lp::import_lp(path, lp::format_from_path(path));
  const auto sol = lp::solve(instance);
  std::printf("status %s\n", std::string(lp::to_string(sol.status)).c_str());
  if (sol.status != lp::SolveStatus::Optimal) {
    return sol.status == lp::SolveStatus::Infeasible ? kExitInfeasible : kExitFailure;
  }
  std::printf("objective %s\niterations %ld\n", format_double(sol.objective).c_str(), sol.iterations);
  if (!solution_path.empty()) {
    std::ofstream out(solution_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + solution_path + "' for writing");
    lp::write_solution_csv(out, instance, sol);
  }
  return kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sufficiency scenarios on a greenfield energy system model"};
  app.require_subcommand(1);

  std::string ambition = "high";
  std::string catalog_path;
  auto* potential = app.add_subcommand("potential", "Print the demand reduction tables");
  potential->add_option("--ambition", ambition, "low or high")->check(CLI::IsMember({"low", "high"}));
  potential->add_option("--catalog", catalog_path, "Measure catalog JSON (default: built-in)");

  bool synthesize = false;
  bool summary_only = false;
  std::string ingest;
  std::string demand_out;
  int hours = kHoursPerYear;
  double total = kReferenceDemandTwh;
  auto* demand = app.add_subcommand("demand", "Synthesize or ingest hourly demand profiles");
  demand->add_flag("--synthesize", synthesize, "Generate synthetic profiles");
  demand->add_option("--ingest", ingest, "Profile CSV (sector,subsector,carrier,hour,value_gwh)");
  demand->add_option("--hours", hours, "Hours per profile")->check(CLI::PositiveNumber);
  demand->add_option("--total-twh", total, "Annual demand for synthesis")->check(CLI::PositiveNumber);
  demand->add_option("--catalog", catalog_path, "Measure catalog JSON (default: built-in)");
  demand->add_option("--out", demand_out, "Write profiles here instead of stdout");
  demand->add_flag("--summary", summary_only, "Only print per-sector totals and peaks");

  std::string study_path;
  std::string scenario;
  std::string out_dir = "results";
  int timesteps = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* run = app.add_subcommand("run", "Solve the scenarios of a study and write reports");
  run->add_option("--study", study_path, "Study JSON")->required();
  run->add_option("--scenario", scenario, "Only this scenario (plus the reference)");
  run->add_option("--hours", timesteps, "Number of model timesteps (overrides the study)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Parallel scenario solves")->check(CLI::PositiveNumber);

  std::string sens_out = "results/sensitivity";
  auto* sens = app.add_subcommand("sensitivity", "High Ambition applied to one sector at a time");
  sens->add_option("--study", study_path, "Study JSON")->required();
  sens->add_option("--hours", timesteps, "Number of model timesteps (overrides the study)")
      ->check(CLI::PositiveNumber);
  sens->add_option("--out", sens_out, "Output directory");
  sens->add_option("--threads", threads, "Parallel scenario solves")->check(CLI::PositiveNumber);

  std::string lp_out;
  std::string lp_format;
  auto* export_cmd = app.add_subcommand("export-lp", "Write the LP of one scenario as MPS or LP text");
  export_cmd->add_option("--study", study_path, "Study JSON")->required();
  export_cmd->add_option("--scenario", scenario, "Scenario name")->required();
  export_cmd->add_option("--hours", timesteps, "Number of model timesteps (overrides the study)")
      ->check(CLI::PositiveNumber);
  export_cmd->add_option("--out", lp_out, "Output file (default <scenario>.mps)");
  export_cmd->add_option("--format", lp_format, "mps or lp (default: from the file extension)");

  std::string lp_path;
  std::string solution_out;
  auto* solve_cmd = app.add_subcommand("solve-lp", "Solve an MPS or LP file with the built-in simplex");
  solve_cmd->add_option("file", lp_path, "MPS or .lp file")->required();
  solve_cmd->add_option("--solution", solution_out, "Write variable,value,reduced_cost CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*potential) return cmd_potential(ambition, catalog_path);
    if (*demand) return cmd_demand(synthesize, ingest, hours, total, catalog_path, demand_out, summary_only);
    if (*run) return cmd_run(study_path, scenario, timesteps, out_dir, threads);
    if (*sens) return cmd_sensitivity(study_path, timesteps, sens_out, threads);
    if (*export_cmd) return cmd_export_lp(study_path, scenario, timesteps, lp_out, lp_format);
    if (*solve_cmd) return cmd_solve_lp(lp_path, solution_out);
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const lp::IterationLimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
