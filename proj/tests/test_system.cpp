#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "suffopt/system.hpp"

using namespace suffopt;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

ProfileSet default_profiles(int hours = 8760) {
  ShapeConfig shapes;
  shapes.hours = hours;
  return synthesize_profiles(DemandBudget::from_catalog(Catalog::builtin(), 1465.0), shapes);
}

bool any_contains(const std::vector<std::string>& lines, const std::string& needle) {
  return std::any_of(lines.begin(), lines.end(),
                     [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("annuity against the present-value series") {
  const double pv = oracle::annuity_by_series(407.0, 25, 0.05);
  const double li = oracle::annuity_by_series(218.0, 18, 0.05);
  CHECK(annualize(407.0, 25, 0.05) == doctest::Approx(pv).epsilon(1e-12));
  CHECK(annualize(218.0, 18, 0.05) == doctest::Approx(li).epsilon(1e-12));
  CHECK(std::abs(pv - 28.88) <= 0.01);
  CHECK(std::abs(li - 18.65) <= 0.01);
  CHECK(annualize(1000.0, 25, 0.0) == doctest::Approx(40.0));
  CHECK_THROWS_AS(annualize(100.0, 0.0, 0.05), ConfigError);
  CHECK_THROWS_AS(annualize(100.0, 10.0, -0.01), ConfigError);
}

TEST_CASE("annuity is monotone in rate and lifetime") {
  double prev = annualize(500.0, 20, 0.0);
  for (double r = 0.01; r <= 0.2; r += 0.01) {
    const double a = annualize(500.0, 20, r);
    CHECK(a > prev);
    prev = a;
  }
  for (double r : {0.02, 0.05, 0.1}) {
    prev = annualize(500.0, 5, r);
    for (int life = 6; life <= 60; ++life) {
      const double a = annualize(500.0, life, r);
      CHECK(a < prev);
      prev = a;
    }
  }
}

TEST_CASE("default technology data") {
  const auto sys = SystemConfig::defaults();
  struct Row {
    const char* name;
    double invest, fixed, life;
  };
  const Row rows[] = {{"ccgtGas", 345, 8.6, 30},       {"ccgtHydrogen", 185, 3.3, 30},
                      {"Methanation", 865, 18, 30},    {"Electrolyzer", 543, 14.6, 30},
                      {"PV", 407, 7.9, 25},            {"PV Rooftop", 594, 11.5, 25},
                      {"PV Agriculture", 814, 7.9, 25}, {"Wind Onshore", 1200, 30, 25},
                      {"Wind Offshore", 3111, 100, 25}};
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const auto* t = sys.find_technology(r.name);
    REQUIRE(t);
    CHECK(t->invest_cost == r.invest);
    CHECK(t->fixed_op_cost == r.fixed);
    CHECK(t->lifetime == r.life);
  }
  CHECK(sys.technologies.size() == 9);
  auto storage = [&](const std::string& name) {
    auto it = std::find_if(sys.storages.begin(), sys.storages.end(),
                           [&](const StorageTechnology& s) { return s.name == name; });
    REQUIRE(it != sys.storages.end());
    return *it;
  };
  CHECK(storage("Li-Ion Battery").energy_cost == 218);
  CHECK(storage("Li-Ion Battery").power_cost == 84.2);
  CHECK(storage("Li-Ion Battery").lifetime == 18);
  CHECK(storage("Pumped Hydro").power_cost == 745);
  CHECK(storage("CAES").energy_cost == 26.4);
  CHECK(storage("Gas Storage Hydrogen").energy_cost == 0.1);
}

TEST_CASE("availability series") {
  const auto wind = build_availability(AvailabilityKind::Wind, 0.35, 11);
  CHECK(wind.size() == 8760);
  CHECK(std::abs(mean(wind) - 0.35) <= 0.01);
  const auto solar = build_availability(AvailabilityKind::Solar, 0.11, 11);
  CHECK(std::abs(mean(solar) - 0.11) <= 0.01);
  for (int day = 0; day < 365; ++day) CHECK(solar[day * 24] == 0.0);
  for (const auto* s : {&wind, &solar}) {
    CHECK(*std::min_element(s->begin(), s->end()) >= 0.0);
    CHECK(*std::max_element(s->begin(), s->end()) <= 1.0);
  }
  CHECK(build_availability(AvailabilityKind::Wind, 0.35, 11) == wind);
  CHECK(build_availability(AvailabilityKind::Wind, 0.35, 12) != wind);

  CHECK_THROWS_AS(build_availability(AvailabilityKind::Wind, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(build_availability(AvailabilityKind::Wind, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(build_availability(AvailabilityKind::Solar, 1.2, 1), ConfigError);
}

TEST_CASE("default system availability stays in range") {
  const auto sys = SystemConfig::defaults();
  for (const auto& t : sys.technologies) {
    if (!t.renewable()) continue;
    CAPTURE(t.name);
    REQUIRE(t.availability.size() == 8760);
    CHECK(*std::min_element(t.availability.begin(), t.availability.end()) >= 0.0);
    CHECK(*std::max_element(t.availability.begin(), t.availability.end()) <= 1.0);
    CHECK(std::abs(mean(t.availability) - t.availability_spec.target_cf) <= 0.01);
  }
}

TEST_CASE("system validation") {
  const auto profiles = default_profiles();
  const auto ok = validate_system(SystemConfig::defaults(), profiles);
  CHECK(ok.errors.empty());

  auto cut = SystemConfig::defaults();
  cut.remove_technology("Electrolyzer");
  const auto broken = validate_system(cut, profiles);
  CHECK_FALSE(broken.ok());
  CHECK(any_contains(broken.errors, "hydrogen unreachable"));

  auto no_pv = SystemConfig::defaults();
  no_pv.find_technology("PV")->potential_gw = 0.0;
  const auto warned = validate_system(no_pv, profiles);
  CHECK(warned.ok());
  CHECK(any_contains(warned.warnings, "PV"));

  auto tiny = SystemConfig::defaults();
  for (auto& t : tiny.technologies) {
    if (t.renewable()) t.potential_gw = 1.0;
  }
  CHECK(any_contains(validate_system(tiny, profiles).errors, "insufficient"));

  auto bad_rate = SystemConfig::defaults();
  bad_rate.discount_rate = 0.3;
  CHECK_THROWS_AS(bad_rate.validate(), ConfigError);
  CHECK_FALSE(validate_system(bad_rate, profiles).ok());
}

TEST_CASE("system JSON overrides and round trip") {
  const nlohmann::json j = {{"base", "default"},
                            {"remove", {"CAES"}},
                            {"potential_gw", {{"PV", 123.0}}},
                            {"target_cf", {{"Wind Onshore", 0.25}}}};
  const auto sys = SystemConfig::from_json(j);
  CHECK(sys.find_technology("PV")->potential_gw == 123.0);
  CHECK(std::abs(mean(sys.find_technology("Wind Onshore")->availability) - 0.25) <= 0.01);
  CHECK(std::none_of(sys.storages.begin(), sys.storages.end(),
                     [](const StorageTechnology& s) { return s.name == "CAES"; }));

  const auto again = SystemConfig::from_json(sys.to_json());
  CHECK(again.to_json() == sys.to_json());
  CHECK(again.find_technology("Wind Onshore")->availability ==
        sys.find_technology("Wind Onshore")->availability);

  CHECK_THROWS_AS(SystemConfig::from_json({{"base", "default"}, {"potential_gw", {{"Fusion", 1.0}}}}),
                  ConfigError);
}

TEST_CASE("availability CSV round trip") {
  auto sys = SystemConfig::defaults(48);
  std::stringstream buf;
  write_availability_csv(buf, sys);
  auto other = SystemConfig::defaults(48, 99);
  REQUIRE(other.find_technology("PV")->availability != sys.find_technology("PV")->availability);
  read_availability_csv(buf, other);
  for (const auto& t : sys.technologies) {
    CHECK(other.find_technology(t.name)->availability == t.availability);
  }

  std::istringstream bad("tech,hour,cf\nPV,1,1.5\n");
  CHECK_THROWS_AS(read_availability_csv(bad, other), ConfigError);
  std::istringstream unknown("tech,hour,cf\nFusion,1,0.5\n");
  CHECK_THROWS_AS(read_availability_csv(unknown, other), ConfigError);
}
