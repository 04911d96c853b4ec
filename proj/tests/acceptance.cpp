// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--quick]
//
// --quick replaces the 336-step year with 48 steps (for development only; the
// registered test runs the full horizon).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "suffopt/lp/io.hpp"
#include "suffopt/runner.hpp"
#include "suffopt/text.hpp"

using namespace suffopt;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "" : "FAILED ") + what);
  }
};

std::string fmt(double v, int decimals) { return format_fixed(v, decimals); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Worst duality gap over every LP solved here.
double g_worst_gap = 0.0;
void record_gap(double gap) { g_worst_gap = std::max(g_worst_gap, gap); }

std::string run_command(const std::string& cmd, int* status) {
  std::string out;
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *status = -1;
    return out;
  }
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int rc = pclose(pipe);
  *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

// ---------------------------------------------------------------------------

Outcome criterion_tables() {
  Outcome o;
  const auto t0 = Clock::now();
  int status = 0;
  const std::string low_csv = run_command(std::string(SUFFOPT_CLI) + " potential --ambition low", &status);
  const int status_low = status;
  const std::string high_csv = run_command(std::string(SUFFOPT_CLI) + " potential --ambition high", &status);
  const double elapsed = seconds_since(t0);
  o.require(status_low == 0 && status == 0, "potential exits 0");

  // Independent restatement of the subsector values and shares.
  struct Slice {
    double share, low, high;
  };
  auto weighted = [](const std::vector<Slice>& v, bool high) {
    double s = 0.0;
    for (const auto& x : v) s += x.share * (high ? x.high : x.low);
    return s;
  };
  const std::vector<Slice> heat = {{0.209, 0.050, 0.342}, {0.097, 0.086, 0.132}, {0.478, 0.051, 0.120}, {0.216, 0.030, 0.076}};
  const std::vector<Slice> mob = {{0.71, 0.216, 0.319}, {0.19, 0.177, 0.213}, {0.10, 0.302, 0.419}};
  const std::vector<Slice> el = {{0.253, 0.040, 0.200}, {0.289, 0.055, 0.234}, {0.458, 0.070, 0.175}};

  const auto cat = Catalog::builtin();
  struct Target {
    const char* table;
    Ambition a;
    double target;
    double oracle;
    double got;
  };
  std::vector<Target> targets;
  for (Ambition a : {Ambition::Low, Ambition::High}) {
    const bool hi = a == Ambition::High;
    const auto set = cat.reduction_set(a);
    const double h = weighted(heat, hi), m = weighted(mob, hi), e = weighted(el, hi);
    targets.push_back({"heat", a, hi ? 15.8 : 5.0, h, set.sector.at(Sector::Heat)});
    targets.push_back({"mobility", a, hi ? 30.9 : 21.7, m, set.sector.at(Sector::Mobility)});
    targets.push_back({"electricity", a, hi ? 19.9 : 5.8, e, set.sector.at(Sector::Electricity)});
    targets.push_back({"summary", a, hi ? 20.5 : 9.4, 0.54 * h + 0.254 * m + 0.206 * e, set.total});
  }
  for (const auto& t : targets) {
    const double pct = 100.0 * t.got;
    const std::string label = std::string(t.table) + (t.a == Ambition::High ? " high " : " low ") + fmt(pct, 2);
    o.require(std::abs(t.got - t.oracle) <= 1e-12 && std::abs(pct - t.target) <= 0.1,
              label + " vs " + fmt(t.target, 1));
    const std::string row = std::string(t.table) + ",total,100.0," + fmt(-pct, 1) + "\n";
    const auto& csv = t.a == Ambition::High ? high_csv : low_csv;
    o.require(csv.find(row) != std::string::npos, "CLI row " + row.substr(0, row.size() - 1));
  }
  o.require(elapsed < 1.0, "runtime " + fmt(elapsed, 3) + " s < 1 s");
  return o;
}

Outcome criterion_twh() {
  Outcome o;
  const auto cat = Catalog::builtin();
  const auto profiles = synthesize_profiles(DemandBudget::from_catalog(cat, 1465.0), ShapeConfig{});
  const auto low = apply_reduction(profiles, cat.reduction_set(Ambition::Low));
  const auto high = apply_reduction(profiles, cat.reduction_set(Ambition::High));
  o.require(std::abs(total_twh(profiles) - 1465.0) <= 1.465, "reference " + fmt(total_twh(profiles), 1) + " TWh");
  o.require(std::abs(total_twh(low) - 1327.0) <= 2.0, "low " + fmt(total_twh(low), 1) + " TWh vs 1327");
  o.require(std::abs(total_twh(high) - 1165.0) <= 2.0, "high " + fmt(total_twh(high), 1) + " TWh vs 1165");
  const std::pair<Sector, double> sectors[] = {
      {Sector::Heat, 125.0}, {Sector::Mobility, 115.0}, {Sector::Electricity, 60.0}};
  for (const auto& [s, target] : sectors) {
    const double d = sector_twh(profiles, s) - sector_twh(high, s);
    o.require(std::abs(d - target) <= 2.0,
              std::string(to_string(s)) + " -" + fmt(d, 1) + " TWh vs " + fmt(target, 0));
  }
  return o;
}

Outcome criterion_process_heat() {
  Outcome o;
  const auto cat = Catalog::builtin();
  const double target[2][3] = {{8.6, 5.1, 3.0}, {13.2, 12.0, 7.6}};
  const double process[2] = {4.9, 10.9};
  // Share-weighted branch oracle: share * reduction per branch.
  const double oracle[2][3] = {{0.490 * 0.175, 0.014 + 0.206 * 0.148 + 0.007, 0.030},
                               {0.490 * 0.27, 0.021 + 0.206 * 0.40 + 0.017, 0.076}};
  const double w[3] = {0.097, 0.478, 0.216};
  for (int a = 0; a < 2; ++a) {
    const Ambition amb = a == 0 ? Ambition::Low : Ambition::High;
    const auto levels = level_reductions(cat.branch_table(), cat.branch_reductions(), amb);
    for (int k = 0; k < 3; ++k) {
      o.require(std::abs(levels[k] - oracle[a][k]) <= 1e-12 && std::abs(100.0 * levels[k] - target[a][k]) <= 0.1,
                std::string(to_string(kTemperatureLevels[k])) + (a ? " high " : " low ") +
                    fmt(100.0 * levels[k], 2) + " vs " + fmt(target[a][k], 1));
    }
    double ph = 0.0;
    for (const auto& row : potential_tables(cat, amb)) {
      if (row.table == "summary" && row.category == "process_heat") ph = 100.0 * row.reduction;
    }
    const double chain = 100.0 * process_heat_reduction(levels, cat.temperature_shares());
    const double chain_oracle = 100.0 * (w[0] * oracle[a][0] + w[1] * oracle[a][1] + w[2] * oracle[a][2]) /
                                (w[0] + w[1] + w[2]);
    o.require(std::abs(ph - process[a]) <= 0.1 && std::abs(chain - chain_oracle) <= 1e-10 &&
                  std::abs(chain - process[a]) <= 0.1,
              std::string("process heat") + (a ? " high " : " low ") + fmt(ph, 2) + " (chain " +
                  fmt(chain, 2) + ") vs " + fmt(process[a], 1));
  }
  return o;
}

Outcome criterion_simplex() {
  Outcome o;
  const auto t0 = Clock::now();
  int compared = 0, infeasible = 0;
  double worst_rel = 0.0, worst_gap = 0.0;
  bool status_ok = true;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto lp = oracle::random_boxed_instance(seed, 8, 6);
    const auto ref = oracle::enumerate_bases(lp);
    const auto sol = lp::solve(lp);
    if (!ref.feasible) {
      status_ok &= sol.status == lp::SolveStatus::Infeasible;
      ++infeasible;
      continue;
    }
    if (sol.status != lp::SolveStatus::Optimal) {
      status_ok = false;
      continue;
    }
    ++compared;
    worst_rel = std::max(worst_rel, std::abs(sol.objective - ref.objective) / std::max(1.0, std::abs(ref.objective)));
    const double gap = lp::check_duality(lp, sol).relative_gap;
    worst_gap = std::max(worst_gap, gap);
    record_gap(gap);
  }
  const double elapsed = seconds_since(t0);
  o.require(compared >= 100, std::to_string(compared) + " optimal instances compared (" +
                                 std::to_string(infeasible) + " infeasible)");
  o.require(status_ok, "statuses agree with enumeration");
  o.require(worst_rel <= 1e-8, "worst objective error " + sci(worst_rel) + " <= 1e-8");
  o.require(worst_gap <= 1e-6, "worst duality gap " + sci(worst_gap));
  o.require(elapsed < 30.0, "runtime " + fmt(elapsed, 2) + " s < 30 s");
  return o;
}

struct StudyRuns {
  SharedInputs inputs;
  std::vector<RunResult> results;
  ComparisonReport report;
  std::map<double, double> cost_by_rate;
  double reference_seconds = 0.0;
};

StudyRuns run_default_study(int timesteps) {
  StudyRuns r;
  Study study = Study::load(std::string(SUFFOPT_SOURCE_DIR) + "/data/study_default.json");
  study.timesteps = timesteps;
  r.inputs = prepare(study);
  std::vector<Scenario> scenarios = study.scenarios;
  const double rates[] = {0.05, 0.094, 0.205};
  for (double rate : rates) scenarios.push_back(Scenario::uniform(rate));
  for (const auto& sc : scenarios) {
    const auto t0 = Clock::now();
    r.results.push_back(run_scenario(sc, r.inputs));
    const double dt = seconds_since(t0);
    if (sc.kind == ScenarioKind::Reference) r.reference_seconds = dt;
    std::printf("  solved %-22s %8.1f s  cost %.2f MEUR/a  %ld iterations\n", sc.name.c_str(), dt,
                r.results.back().result.total_cost, r.results.back().result.iterations);
    std::fflush(stdout);
    record_gap(r.results.back().result.duality.relative_gap);
  }
  r.cost_by_rate[0.0] = r.results.front().result.total_cost;
  for (std::size_t i = 0; i < 3; ++i) {
    r.cost_by_rate[rates[i]] = r.results[study.scenarios.size() + i].result.total_cost;
  }
  r.report = compare(r.results, r.results.front());
  return r;
}

Outcome criterion_system(const StudyRuns& runs, int timesteps) {
  Outcome o;
  double residual = 0.0, residual_gwh = 0.0, cyclic = 0.0, gap = 0.0;
  for (const auto& r : runs.results) {
    residual = std::max(residual, r.result.max_balance_residual);
    residual_gwh = std::max(residual_gwh, r.result.max_balance_residual_gwh);
    cyclic = std::max(cyclic, r.result.max_cyclic_residual);
    gap = std::max(gap, r.result.duality.relative_gap);
  }
  o.require(timesteps == 336, "N = " + std::to_string(timesteps) + " timesteps");
  o.require(residual <= 1e-6, "balance residual " + sci(residual) + " relative (" + sci(residual_gwh) +
                                  " GWh) <= 1e-6");
  o.require(cyclic <= 1e-9, "cyclic residual " + sci(cyclic) + " GWh");
  o.require(gap <= 1e-6, "duality gap " + sci(gap));
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  std::string costs;
  for (const auto& [rate, cost] : runs.cost_by_rate) {
    monotone &= cost <= prev;
    prev = cost;
    costs += (costs.empty() ? "" : ", ") + fmt(rate, 3) + ":" + fmt(cost, 1);
  }
  o.require(monotone, "cost non-increasing in r (" + costs + ")");
  o.require(runs.reference_seconds < 300.0, "reference solve " + fmt(runs.reference_seconds, 1) + " s < 300 s");
  return o;
}

Outcome criterion_directional(const StudyRuns& runs) {
  Outcome o;
  const auto& high = runs.report.row("high");
  o.require(high.cost_to_demand_ratio > 1.0,
            "high: cost -" + fmt(high.cost_reduction_pct, 1) + "% vs demand -" + fmt(high.demand_reduction_pct, 1) +
                "%, ratio " + fmt(high.cost_to_demand_ratio, 2) + " > 1");
  const auto& heat = runs.report.row("sens_heat");
  const auto& el = runs.report.row("sens_electricity");
  o.require(heat.cost_to_demand_ratio > el.cost_to_demand_ratio,
            "heat ratio " + fmt(heat.cost_to_demand_ratio, 2) + " > electricity ratio " +
                fmt(el.cost_to_demand_ratio, 2));
  for (const auto& row : runs.report.rows) {
    if (row.name == runs.report.reference) continue;
    o.require(row.storage_reduction_pct >= 0.0,
              row.name + " storage -" + fmt(row.storage_reduction_pct, 1) + "%");
  }
  return o;
}

Outcome criterion_export(const StudyRuns& runs) {
  Outcome o;
  const auto model = lp::build_lp(runs.inputs.system, runs.inputs.hourly, runs.inputs.horizon);
  std::stringstream buf;
  lp::write_mps(buf, model.lp);
  const auto back = lp::read_mps(buf);
  bool exact = back.num_variables() == model.lp.num_variables() && back.num_rows() == model.lp.num_rows();
  for (int j = 0; exact && j < model.lp.num_variables(); ++j) {
    const auto &a = model.lp.variables()[j], &b = back.variables()[j];
    exact = a.name == b.name && a.lower == b.lower && a.upper == b.upper && a.cost == b.cost;
  }
  for (int i = 0; exact && i < model.lp.num_rows(); ++i) {
    const auto &a = model.lp.rows()[i], &b = back.rows()[i];
    std::vector<std::pair<int, double>> ea, eb;
    for (std::size_t k = 0; k < a.columns.size(); ++k) ea.emplace_back(a.columns[k], a.values[k]);
    for (std::size_t k = 0; k < b.columns.size(); ++k) eb.emplace_back(b.columns[k], b.values[k]);
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    exact = a.name == b.name && a.sense == b.sense && a.rhs == b.rhs && ea == eb;
  }
  o.require(exact, "MPS round trip coefficient-exact (" + std::to_string(model.lp.num_variables()) + " columns, " +
                       std::to_string(model.lp.num_rows()) + " rows, " + std::to_string(model.lp.num_nonzeros()) +
                       " nonzeros)");

  const auto path = fs::temp_directory_path() / "suffopt_acceptance_reference.mps";
  lp::export_lp(model.lp, path.string(), lp::LpFormat::Mps);
  int status = 0;
  const std::string out = run_command(
      "python3 " SUFFOPT_SOURCE_DIR "/tools/external_solve.py " + path.string() + " 2>&1", &status);
  fs::remove(path);
  std::istringstream line(out);
  std::string word;
  double external = std::nan("");
  line >> word >> external;
  const double internal = runs.results.front().result.total_cost;
  const double rel = std::abs(internal - external) / std::abs(external);
  o.require(status == 0 && word == "optimal" && rel <= 1e-6,
            "external objective " + fmt(external, 4) + " vs internal " + fmt(internal, 4) + ", rel " + sci(rel) +
                (status == 0 ? "" : " [" + out.substr(0, out.find('\n')) + "]"));
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  const auto base = fs::temp_directory_path() / "suffopt_acceptance_determinism";
  fs::remove_all(base);
  std::map<std::string, std::string> trees[2];
  for (int pass = 0; pass < 2; ++pass) {
    const auto dir = base / std::to_string(pass);
    int status = 0;
    run_command(std::string(SUFFOPT_CLI) + " run --study " SUFFOPT_SOURCE_DIR "/data/study_small.json --out " +
                    dir.string() + " --threads " + std::to_string(pass + 1) + " > /dev/null 2>&1",
                &status);
    o.require(status == 0, "run " + std::to_string(pass + 1) + " exits 0");
    if (status == 0) trees[pass] = read_tree(dir);
  }
  o.require(!trees[0].empty() && trees[0] == trees[1],
            std::to_string(trees[0].size()) + " output files byte-identical across runs");
  fs::remove_all(base);
  return o;
}

void report(int id, const char* title, const Outcome& o, bool& all) {
  all &= o.pass;
  std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, title);
  for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.require(false, std::string("exception: ") + e.what());
    return o;
  }
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int timesteps = quick ? 48 : 336;
  bool all = true;
  const auto t0 = Clock::now();

  report(1, "reduction tables", guarded(criterion_tables), all);
  report(2, "TWh arithmetic", guarded(criterion_twh), all);
  report(3, "process-heat chain", guarded(criterion_process_heat), all);
  const Outcome simplex = guarded(criterion_simplex);

  std::printf("solving the default study at N = %d\n", timesteps);
  std::fflush(stdout);
  StudyRuns runs;
  std::string failure;
  try {
    runs = run_default_study(timesteps);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  auto needs_runs = [&](const std::function<Outcome()>& f) {
    if (!failure.empty()) {
      Outcome o;
      o.require(false, "study failed: " + failure);
      return o;
    }
    return guarded(f);
  };
  const Outcome system = needs_runs([&] { return criterion_system(runs, timesteps); });
  const Outcome directional = needs_runs([&] { return criterion_directional(runs); });
  const Outcome exported = needs_runs([&] { return criterion_export(runs); });

  // Criterion 4 also covers every solve above.
  Outcome lp_check = simplex;
  lp_check.require(g_worst_gap <= 1e-6, "worst duality gap over all acceptance solves " + sci(g_worst_gap));
  report(4, "LP correctness", lp_check, all);
  report(5, "system-solve invariants", system, all);
  report(6, "directional scenario effects", directional, all);
  report(7, "export fidelity", exported, all);
  report(8, "determinism", guarded(criterion_determinism), all);

  std::printf("%s: acceptance finished in %.1f s\n", all ? "PASS" : "FAIL", seconds_since(t0));
  return all ? 0 : 1;
}
