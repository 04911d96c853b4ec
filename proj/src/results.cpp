#include "suffopt/results.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace suffopt {

namespace {

constexpr double kGwhPerTwh = 1000.0;
constexpr double kDropBelowTwh = 1e-9;

int idx(Carrier c) { return static_cast<int>(c); }

}  // namespace

std::string demand_node(Carrier c) { return "demand:" + std::string(to_string(c)); }

double ScenarioResult::renewable_capacity_gw() const {
  double s = 0.0;
  for (const auto& c : capacities) {
    if (c.renewable) s += c.gw;
  }
  return s;
}

double ScenarioResult::storage_energy_gwh() const {
  double s = 0.0;
  for (const auto& e : storage) s += e.energy_gwh;
  return s;
}

double ScenarioResult::storage_power_gw() const {
  double s = 0.0;
  for (const auto& e : storage) s += e.power_gw;
  return s;
}

double ScenarioResult::capacity_of(const std::string& tech) const {
  for (const auto& c : capacities) {
    if (c.name == tech) return c.gw;
  }
  return 0.0;
}

double ScenarioResult::renewable_generation_twh() const {
  double s = 0.0;
  for (const auto& c : capacities) {
    if (!c.renewable) continue;
    for (const auto& f : flows) {
      if (f.from == c.name) s += f.twh;
    }
  }
  return s;
}

double ScenarioResult::losses_twh() const {
  double s = 0.0;
  for (const auto& f : flows) {
    if (f.to == kLossNode) s += f.twh;
  }
  return s;
}

ScenarioResult extract_results(const lp::EnergyModel& model, const lp::LpSolution& sol,
                               const std::string& name) {
  if (sol.status != lp::SolveStatus::Optimal) {
    throw ConfigError("cannot extract results from a " + std::string(lp::to_string(sol.status)) +
                      " solution");
  }
  const auto& x = sol.x;
  const auto& sys = model.system;
  const int steps = model.horizon.steps();

  ScenarioResult r;
  r.name = name;
  r.total_cost = sol.objective;
  r.demand_twh = model.total_demand_gwh() / kGwhPerTwh;
  r.iterations = sol.iterations;
  r.duality = lp::check_duality(model.lp, sol);

  auto add_flow = [&](const std::string& from, const std::string& to, double gwh) {
    const double twh = gwh / kGwhPerTwh;
    if (std::abs(twh) < kDropBelowTwh) return;
    r.flows.push_back({from, to, twh});
  };

  for (std::size_t t = 0; t < sys.technologies.size(); ++t) {
    const auto& tech = sys.technologies[t];
    r.capacities.push_back({tech.name, tech.renewable(), std::max(0.0, x[model.cap[t]])});
    double out = 0.0;
    for (int k = 0; k < steps; ++k) out += x[model.gen[t][k]];
    const std::string carrier(to_string(tech.output));
    if (tech.renewable()) {
      add_flow(tech.name, carrier, out);
    } else {
      const double in = out / tech.efficiency;
      add_flow(std::string(to_string(*tech.input)), tech.name, in);
      add_flow(tech.name, carrier, out);
      add_flow(tech.name, kLossNode, in - out);
    }
  }
  for (std::size_t s = 0; s < sys.storages.size(); ++s) {
    const auto& st = sys.storages[s];
    r.storage.push_back({st.name, st.carrier, std::max(0.0, x[model.storage_energy[s]]),
                         std::max(0.0, x[model.storage_power[s]])});
    double charged = 0.0, delivered = 0.0;
    for (int k = 0; k < steps; ++k) {
      charged += x[model.charge[s][k]];
      delivered += st.discharge_eff * x[model.discharge[s][k]];
    }
    const std::string carrier(to_string(st.carrier));
    add_flow(carrier, st.name, charged);
    add_flow(st.name, carrier, delivered);
    add_flow(st.name, kLossNode, charged - delivered);
    r.max_cyclic_residual = std::max(
        r.max_cyclic_residual, std::abs(x[model.level[s][0]] - x[model.level[s][steps]]));
  }
  for (Carrier c : kAllCarriers) {
    double d = 0.0;
    for (double v : model.demand[idx(c)]) d += v;
    add_flow(std::string(to_string(c)), demand_node(c), d);
  }

  const auto act = model.lp.row_activity(x);
  for (Carrier c : kAllCarriers) {
    for (int k = 0; k < steps; ++k) {
      const int row = model.balance[idx(c)][k];
      const double rhs = model.lp.rows()[row].rhs;
      const double res = std::abs(act[row] - rhs);
      r.max_balance_residual_gwh = std::max(r.max_balance_residual_gwh, res);
      r.max_balance_residual = std::max(r.max_balance_residual, res / (1.0 + std::abs(rhs)));
    }
  }
  return r;
}

nlohmann::json sankey_json(const ScenarioResult& result) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json links = nlohmann::json::array();
  std::map<std::string, int> index;
  auto node = [&](const std::string& id) {
    auto [it, fresh] = index.emplace(id, static_cast<int>(index.size()));
    if (fresh) nodes.push_back(nlohmann::json{{"id", id}});
    return it->second;
  };
  for (const auto& f : result.flows) {
    const int a = node(f.from);
    const int b = node(f.to);
    links.push_back(nlohmann::json{{"source", a}, {"target", b}, {"value", f.twh}});
  }
  return nlohmann::json{{"name", result.name}, {"units", "TWh/a"}, {"nodes", nodes}, {"links", links}};
}

}  // namespace suffopt
