#include <doctest.h>

#include <cmath>
#include <vector>

#include "suffopt/measures.hpp"

using namespace suffopt;

namespace {

// Subsector reductions and demand shares restated here so the aggregation is
// checked against plain arithmetic rather than the catalog.
struct Slice {
  double share, low, high;
};

const std::vector<Slice> kHeat = {{0.209, 0.050, 0.342}, {0.097, 0.086, 0.132}, {0.478, 0.051, 0.120}, {0.216, 0.030, 0.076}};
const std::vector<Slice> kMobility = {{0.71, 0.216, 0.319}, {0.19, 0.177, 0.213}, {0.10, 0.302, 0.419}};
const std::vector<Slice> kElectricity = {{0.253, 0.040, 0.200}, {0.289, 0.055, 0.234}, {0.458, 0.070, 0.175}};

double weighted(const std::vector<Slice>& slices, bool high) {
  double s = 0.0;
  for (const auto& x : slices) s += x.share * (high ? x.high : x.low);
  return s;
}

double pct(double fraction) { return 100.0 * fraction; }

}  // namespace

TEST_CASE("sector totals follow from subsector values and shares") {
  const auto cat = Catalog::builtin();
  const auto low = cat.reduction_set(Ambition::Low);
  const auto high = cat.reduction_set(Ambition::High);

  const double heat_low = weighted(kHeat, false), heat_high = weighted(kHeat, true);
  const double mob_low = weighted(kMobility, false), mob_high = weighted(kMobility, true);
  const double el_low = weighted(kElectricity, false), el_high = weighted(kElectricity, true);

  struct Case {
    const char* what;
    double oracle, target, got;
  };
  const Case cases[] = {
      {"heat low", heat_low, 5.0, low.sector.at(Sector::Heat)},
      {"heat high", heat_high, 15.8, high.sector.at(Sector::Heat)},
      {"mobility low", mob_low, 21.7, low.sector.at(Sector::Mobility)},
      {"mobility high", mob_high, 30.9, high.sector.at(Sector::Mobility)},
      {"electricity low", el_low, 5.8, low.sector.at(Sector::Electricity)},
      {"electricity high", el_high, 19.9, high.sector.at(Sector::Electricity)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.what);
    CHECK(c.got == doctest::Approx(c.oracle).epsilon(1e-12));
    CHECK(std::abs(pct(c.got) - c.target) <= 0.1);
  }

  const double total_low = 0.54 * heat_low + 0.254 * mob_low + 0.206 * el_low;
  const double total_high = 0.54 * heat_high + 0.254 * mob_high + 0.206 * el_high;
  CHECK(low.total == doctest::Approx(total_low).epsilon(1e-12));
  CHECK(high.total == doctest::Approx(total_high).epsilon(1e-12));
  CHECK(std::abs(pct(low.total) - 9.4) <= 0.1);
  CHECK(std::abs(pct(high.total) - 20.5) <= 0.1);
}

TEST_CASE("swapped road and rail shares miss the mobility total") {
  // Road 9.8% and rail 19.4% instead of the tabulated weights.
  const std::vector<Slice> swapped = {{0.708, 0.216, 0.319}, {0.098, 0.177, 0.213}, {0.194, 0.302, 0.419}};
  CHECK(std::abs(pct(weighted(swapped, false)) - 21.7) > 0.1);
  CHECK(std::abs(pct(weighted(kMobility, false)) - 21.7) <= 0.1);
}

TEST_CASE("process heat branch chain") {
  const auto cat = Catalog::builtin();
  // Branch share * branch reduction, summed per temperature level.
  const double low_low = 0.490 * 0.175;
  const double low_high = 0.490 * 0.27;
  const double mid_low = 0.413 * (0.014 / 0.413) + 0.206 * 0.148 + 0.1341 * (0.007 / 0.1341);
  const double mid_high = 0.413 * (0.021 / 0.413) + 0.206 * 0.40 + 0.1341 * (0.017 / 0.1341);
  const double high_low = 0.030, high_high = 0.076;

  const auto lv_low = level_reductions(cat.branch_table(), cat.branch_reductions(), Ambition::Low);
  const auto lv_high = level_reductions(cat.branch_table(), cat.branch_reductions(), Ambition::High);
  CHECK(lv_low[0] == doctest::Approx(low_low));
  CHECK(lv_low[1] == doctest::Approx(mid_low));
  CHECK(lv_low[2] == doctest::Approx(high_low));
  CHECK(lv_high[0] == doctest::Approx(low_high));
  CHECK(lv_high[1] == doctest::Approx(mid_high));
  CHECK(lv_high[2] == doctest::Approx(high_high));

  const double target_low[] = {8.6, 5.1, 3.0};
  const double target_high[] = {13.2, 12.0, 7.6};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(pct(lv_low[k]) - target_low[k]) <= 0.1);
    CHECK(std::abs(pct(lv_high[k]) - target_high[k]) <= 0.1);
  }

  // Process heat as a whole: weights are level shares of heat, renormalised.
  const double w[] = {0.097, 0.478, 0.216};
  const double wsum = w[0] + w[1] + w[2];
  const double ph_low = (w[0] * lv_low[0] + w[1] * lv_low[1] + w[2] * lv_low[2]) / wsum;
  const double ph_high = (w[0] * lv_high[0] + w[1] * lv_high[1] + w[2] * lv_high[2]) / wsum;
  CHECK(process_heat_reduction(lv_low, cat.temperature_shares()) == doctest::Approx(ph_low));
  CHECK(std::abs(pct(ph_low) - 4.9) <= 0.1);
  CHECK(std::abs(pct(ph_high) - 10.9) <= 0.1);
}

TEST_CASE("combining measures is multiplicative") {
  std::vector<Measure> ms = {{"a", Sector::Electricity, "residential", 0.1, 0.2, 1.0, ""},
                             {"b", Sector::Electricity, "residential", 0.3, 0.5, 0.5, ""}};
  // 1 - (1 - 0.1)(1 - 0.3 * 0.5)
  CHECK(combine_measures(ms, Ambition::Low) == doctest::Approx(1.0 - 0.9 * 0.85));
  CHECK(combine_measures(ms, Ambition::High) == doctest::Approx(1.0 - 0.8 * 0.75));
  CHECK(combine_measures(std::vector<Measure>{}, Ambition::Low) == 0.0);

  ms[1].sector = Sector::Heat;
  CHECK_THROWS_AS(combine_measures(ms, Ambition::Low), ConfigError);
}

TEST_CASE("measure validation") {
  Measure m{"m", Sector::Heat, "residential_commercial", 0.2, 0.1, 1.0, ""};
  CHECK_THROWS_AS(validate_measure(m), ConfigError);
  m.reduction_high = 0.3;
  CHECK_NOTHROW(validate_measure(m));
  m.applicability = 0.0;
  CHECK_THROWS_AS(validate_measure(m), ConfigError);
  m.applicability = 1.0;
  m.reduction_high = 1.2;
  CHECK_THROWS_AS(validate_measure(m), ConfigError);
}

TEST_CASE("share tables must sum to one") {
  CHECK_THROWS_AS(SubsectorShares(Sector::Mobility, {{"air", 0.7}, {"road", 0.2}}), ConfigError);
  CHECK_NOTHROW(SubsectorShares(Sector::Mobility, {{"air", 0.7}, {"road", 0.3}}));
  CHECK_THROWS_AS(SectorShares({{Sector::Heat, 0.5}, {Sector::Mobility, 0.3}}), ConfigError);

  BranchShareTable t = Catalog::builtin().branch_table();
  CHECK_NOTHROW(t.validate());
  t.shares[1][0] = 0.01;  // mid row now sums to ~1.0101
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("sector shares implied by the two totals") {
  const auto s = infer_sector_shares(0.54, {0.04965, 0.15806}, {0.21719, 0.30886}, {0.058075, 0.198376},
                                     {0.094, 0.205});
  CHECK(s.mobility == doctest::Approx(0.254).epsilon(0.02));
  CHECK(s.electricity == doctest::Approx(0.206).epsilon(0.02));
  CHECK(std::abs(s.mobility - 0.254) <= 0.005);
  CHECK(std::abs(s.electricity - 0.206) <= 0.005);
}

TEST_CASE("restricted and uniform sets") {
  const auto cat = Catalog::builtin();
  const auto el = cat.restricted_set(Ambition::High, {{Sector::Electricity, "residential"},
                                                      {Sector::Electricity, "commercial"},
                                                      {Sector::Electricity, "industrial"}});
  CHECK(el.sector.at(Sector::Heat) == 0.0);
  CHECK(el.sector.at(Sector::Mobility) == 0.0);
  CHECK(el.total == doctest::Approx(0.206 * weighted(kElectricity, true)));
  CHECK(std::abs(pct(el.total) - 4.1) <= 0.2);

  const auto u = cat.uniform_set(0.1);
  CHECK(u.total == doctest::Approx(0.1));
  for (const auto& [key, r] : u.subsector) CHECK(r == 0.1);

  CHECK_THROWS_AS(cat.restricted_set(Ambition::High, {}), ConfigError);
  CHECK_THROWS_AS(cat.restricted_set(Ambition::High, {{Sector::Heat, "nonexistent"}}), ConfigError);
  CHECK_THROWS_AS(cat.uniform_set(1.5), ConfigError);
}

TEST_CASE("catalog JSON round trip") {
  const auto cat = Catalog::builtin();
  const auto again = Catalog::from_json(cat.to_json());
  CHECK(again.to_json() == cat.to_json());
  CHECK(again.reduction_set(Ambition::High).total == cat.reduction_set(Ambition::High).total);
}

TEST_CASE("literature measures fill in when no value is pinned") {
  const auto cat = Catalog::builtin();
  auto j = cat.to_json();
  j["pinned"] = nlohmann::json::array();
  const auto unpinned = Catalog::from_json(j);
  std::vector<Measure> res;
  for (const auto& m : unpinned.measures()) {
    if (m.sector == Sector::Electricity && m.subsector == "residential") res.push_back(m);
  }
  REQUIRE_FALSE(res.empty());
  CHECK(unpinned.subsector_reduction(Sector::Electricity, "residential", Ambition::Low) ==
        doctest::Approx(combine_measures(res, Ambition::Low)));
}

TEST_CASE("potential CSV") {
  const auto csv = potential_csv(potential_tables(Catalog::builtin(), Ambition::High));
  CHECK(csv.rfind("table,category,share_pct,reduction_pct\n", 0) == 0);
  CHECK(csv.find("heat,total,100.0,-15.8\n") != std::string::npos);
  CHECK(csv.find("mobility,total,100.0,-30.9\n") != std::string::npos);
  CHECK(csv.find("summary,total,100.0,-20.5\n") != std::string::npos);
}
