#include "suffopt/lp/builder.hpp"

#include <cmath>
#include <string>

namespace suffopt::lp {

namespace {

int idx(Carrier c) { return static_cast<int>(c); }

std::string step_name(const std::string& base, const std::string& entity, int step) {
  return base + "[" + entity + "," + std::to_string(step) + "]";
}

}  // namespace

double EnergyModel::total_demand_gwh() const {
  double sum = 0.0;
  for (const auto& d : demand) {
    for (double v : d) sum += v;
  }
  return sum;
}

EnergyModel build_lp(const SystemConfig& system, const ProfileSet& hourly, const Horizon& horizon) {
  system.validate();
  if (hourly.empty()) throw ConfigError("build_lp: no demand profiles");
  const int steps = horizon.steps();
  const int hours = horizon.hours();

  EnergyModel m;
  m.horizon = horizon;
  m.system = system;
  for (auto& d : m.demand) d.assign(steps, 0.0);
  for (const auto& p : hourly) {
    if (static_cast<int>(p.values.size()) != hours) {
      throw ConfigError("build_lp: profile " + std::string(to_string(p.sector)) + "/" + p.subsector +
                        "/" + std::string(to_string(p.carrier)) + " has " +
                        std::to_string(p.values.size()) + " values, horizon has " +
                        std::to_string(hours) + " hours");
    }
    const auto blocks = horizon.block_sum(p.values);
    for (int k = 0; k < steps; ++k) m.demand[idx(p.carrier)][k] += blocks[k];
  }

  LpInstance& lp = m.lp;
  const auto& techs = system.technologies;
  const auto& stores = system.storages;
  const double rate = system.discount_rate;

  // Variables.
  m.cap.resize(techs.size());
  m.gen.resize(techs.size());
  for (std::size_t t = 0; t < techs.size(); ++t) {
    const auto& tech = techs[t];
    Variable v;
    v.name = "cap[" + tech.name + "]";
    v.upper = tech.potential_gw.value_or(kInf);
    v.cost = annualize(tech.invest_cost, tech.lifetime, rate) + tech.fixed_op_cost;
    m.cap[t] = lp.add_variable(v, {VarKind::Capacity, static_cast<int>(t), -1});
  }
  for (std::size_t t = 0; t < techs.size(); ++t) {
    m.gen[t].resize(steps);
    for (int k = 0; k < steps; ++k) {
      Variable v;
      v.name = step_name("gen", techs[t].name, k);
      m.gen[t][k] = lp.add_variable(v, {VarKind::Generation, static_cast<int>(t), k});
    }
  }
  const auto ns = stores.size();
  m.storage_energy.resize(ns);
  m.storage_power.resize(ns);
  m.level.resize(ns);
  m.charge.resize(ns);
  m.discharge.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& st = stores[s];
    const int e = static_cast<int>(s);
    Variable ve;
    ve.name = "energy_cap[" + st.name + "]";
    ve.upper = st.energy_potential_gwh.value_or(kInf);
    ve.cost = annualize(st.energy_cost, st.lifetime, rate);
    m.storage_energy[s] = lp.add_variable(ve, {VarKind::StorageEnergyCapacity, e, -1});
    Variable vp;
    vp.name = "power_cap[" + st.name + "]";
    vp.cost = annualize(st.power_cost, st.lifetime, rate);
    m.storage_power[s] = lp.add_variable(vp, {VarKind::StoragePowerCapacity, e, -1});
    m.level[s].resize(steps + 1);
    for (int k = 0; k <= steps; ++k) {
      m.level[s][k] = lp.add_variable({step_name("level", st.name, k), 0.0, kInf, 0.0},
                                      {VarKind::StorageLevel, e, k});
    }
    m.charge[s].resize(steps);
    m.discharge[s].resize(steps);
    for (int k = 0; k < steps; ++k) {
      m.charge[s][k] = lp.add_variable({step_name("charge", st.name, k), 0.0, kInf, 0.0},
                                       {VarKind::StorageCharge, e, k});
      m.discharge[s][k] = lp.add_variable({step_name("discharge", st.name, k), 0.0, kInf, 0.0},
                                          {VarKind::StorageDischarge, e, k});
    }
  }

  // Carrier balances.
  for (Carrier c : kAllCarriers) {
    auto& rows = m.balance[idx(c)];
    rows.resize(steps);
    for (int k = 0; k < steps; ++k) {
      Row r;
      r.name = step_name("balance", std::string(to_string(c)), k);
      r.sense = Sense::Equal;
      r.rhs = m.demand[idx(c)][k];
      for (std::size_t t = 0; t < techs.size(); ++t) {
        const auto& tech = techs[t];
        // A tech converting a carrier into itself nets out to one coefficient.
        double coef = 0.0;
        if (tech.output == c) coef += 1.0;
        if (tech.input && *tech.input == c) coef -= 1.0 / tech.efficiency;
        if (coef != 0.0) {
          r.columns.push_back(m.gen[t][k]);
          r.values.push_back(coef);
        }
      }
      for (std::size_t s = 0; s < ns; ++s) {
        if (stores[s].carrier != c) continue;
        r.columns.push_back(m.discharge[s][k]);
        r.values.push_back(stores[s].discharge_eff);
        r.columns.push_back(m.charge[s][k]);
        r.values.push_back(-1.0);
      }
      rows[k] = lp.add_row(std::move(r), {RowKind::Balance, idx(c), k});
    }
  }

  // Dispatch limits.
  for (std::size_t t = 0; t < techs.size(); ++t) {
    const auto& tech = techs[t];
    std::vector<double> avail;
    if (!tech.availability.empty()) {
      if (static_cast<int>(tech.availability.size()) != hours) {
        throw ConfigError("build_lp: availability of " + tech.name + " has " +
                          std::to_string(tech.availability.size()) + " values, horizon has " +
                          std::to_string(hours) + " hours");
      }
      avail = horizon.block_mean(tech.availability);
    }
    for (int k = 0; k < steps; ++k) {
      const double factor = (avail.empty() ? 1.0 : avail[k]) * horizon.duration(k);
      if (factor <= 0.0) {
        lp.variable(m.gen[t][k]).upper = 0.0;
        continue;
      }
      Row r;
      r.name = step_name("dispatch", tech.name, k);
      r.sense = Sense::LessEqual;
      r.columns = {m.gen[t][k], m.cap[t]};
      r.values = {1.0, -factor};
      lp.add_row(std::move(r), {RowKind::Dispatch, static_cast<int>(t), k});
    }
  }

  // Storage.
  m.cyclic.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto& st = stores[s];
    const int e = static_cast<int>(s);
    for (int k = 0; k < steps; ++k) {
      Row dyn;
      dyn.name = step_name("storage_dynamics", st.name, k);
      dyn.columns = {m.level[s][k + 1], m.level[s][k], m.charge[s][k], m.discharge[s][k]};
      dyn.values = {1.0, -1.0, -st.charge_eff, 1.0};
      lp.add_row(std::move(dyn), {RowKind::StorageDynamics, e, k});
    }
    Row cyc;
    cyc.name = "storage_cyclic[" + st.name + "]";
    cyc.columns = {m.level[s][0], m.level[s][steps]};
    cyc.values = {1.0, -1.0};
    m.cyclic[s] = lp.add_row(std::move(cyc), {RowKind::StorageCyclic, e, -1});
    for (int k = 1; k <= steps; ++k) {
      Row lim;
      lim.name = step_name("storage_level_limit", st.name, k);
      lim.sense = Sense::LessEqual;
      lim.columns = {m.level[s][k], m.storage_energy[s]};
      lim.values = {1.0, -1.0};
      lp.add_row(std::move(lim), {RowKind::StorageLevelLimit, e, k});
    }
    for (int k = 0; k < steps; ++k) {
      const double dt = horizon.duration(k);
      Row ch;
      ch.name = step_name("storage_charge_limit", st.name, k);
      ch.sense = Sense::LessEqual;
      ch.columns = {m.charge[s][k], m.storage_power[s]};
      ch.values = {1.0, -dt};
      lp.add_row(std::move(ch), {RowKind::StorageChargeLimit, e, k});
      Row dis;
      dis.name = step_name("storage_discharge_limit", st.name, k);
      dis.sense = Sense::LessEqual;
      dis.columns = {m.discharge[s][k], m.storage_power[s]};
      dis.values = {1.0, -dt};
      lp.add_row(std::move(dis), {RowKind::StorageDischargeLimit, e, k});
    }
    if (st.energy_to_power_limit) {
      Row ep;
      ep.name = "energy_to_power[" + st.name + "]";
      ep.sense = Sense::LessEqual;
      ep.columns = {m.storage_energy[s], m.storage_power[s]};
      ep.values = {1.0, -*st.energy_to_power_limit};
      lp.add_row(std::move(ep), {RowKind::EnergyToPower, e, -1});
    }
  }
  lp.validate();
  return m;
}

std::vector<std::string> binding_potentials(const EnergyModel& model, const std::vector<double>& x,
                                            double rel_tol) {
  std::vector<std::string> out;
  const auto at_limit = [&](int var) {
    const double ub = model.lp.variables()[var].upper;
    return std::isfinite(ub) && x.at(var) >= ub - rel_tol * (1.0 + std::abs(ub));
  };
  for (std::size_t t = 0; t < model.system.technologies.size(); ++t) {
    if (at_limit(model.cap[t])) out.push_back(model.system.technologies[t].name);
  }
  for (std::size_t s = 0; s < model.system.storages.size(); ++s) {
    if (at_limit(model.storage_energy[s])) out.push_back(model.system.storages[s].name);
  }
  return out;
}

}  // namespace suffopt::lp
