#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "artin/experiments.hpp"

using namespace artin;

namespace {

bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 brute_order(const ResidueElement& r) {
  ResidueElement acc = r;
  u64 k = 1;
  while (!acc.is_one()) {
    acc = acc * r;
    ++k;
  }
  return k;
}

std::vector<u64> trial_prime_divisors(u64 n) {
  std::vector<u64> out;
  for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

double li_series(double x) {
  const double lx = std::log(x);
  long double term = 1.0L, sum = 0.0L;
  for (int k = 1; k < 400; ++k) {
    term *= lx / k;
    sum += term / k;
    if (term / k < 1e-22L * sum) break;
  }
  return static_cast<double>(0.57721566490153286061L + std::log(lx) + sum);
}

RunConfig config(std::vector<std::int64_t> deltas, u64 x, unsigned workers = 1) {
  RunConfig cfg;
  cfg.deltas = std::move(deltas);
  cfg.x = x;
  cfg.workers = workers;
  return cfg;
}

}  // namespace

TEST_CASE("RunConfig validation and JSON") {
  RunConfig cfg = config({5, 8}, 1000);
  CHECK_NOTHROW(cfg.validate());
  cfg.delta = 0.3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.delta = 0.05;
  cfg.x = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(config({12}, 100).validate(), std::invalid_argument);

  RunConfig full = config({5, 28}, 5000, 3);
  full.unit_overrides = {{"0", "1"}, {"127", "24"}};
  full.format = OutputFormat::json;
  full.literal_v = true;
  const RunConfig back = run_config_from_json(nlohmann::json::parse(to_json(full).dump()));
  CHECK(back.deltas == full.deltas);
  CHECK(back.x == full.x);
  CHECK(back.workers == full.workers);
  CHECK(back.format == OutputFormat::json);
  CHECK(back.literal_v);
  REQUIRE(back.unit_overrides.size() == 2);
  CHECK(back.unit_overrides[1].a == "127");
  CHECK(run_config_from_json(nlohmann::json::parse(R"({"deltas":[5]})")).x == RunConfig{}.x);
}

TEST_CASE("make_unit_info") {
  const UnitInfo d8 = make_unit_info(8);
  CHECK(d8.squared);
  CHECK(d8.unit.element.a() == 3);
  CHECK(d8.unit.element.b() == 2);
  const UnitInfo d12 = make_unit_info(12);
  CHECK_FALSE(d12.squared);
  const UnitInfo over = make_unit_info(8, UnitOverride{"3", "2"});
  CHECK_FALSE(over.squared);
  CHECK(over.unit.element == d8.unit.element);
  CHECK_THROWS_AS(make_unit_info(8, UnitOverride{"2", "1"}), std::invalid_argument);
}

TEST_CASE("joint_subsets") {
  CHECK(joint_subsets(1).empty());
  CHECK(joint_subsets(2) == std::vector<std::vector<int>>{{0, 1}});
  const auto four = joint_subsets(4);
  CHECK(four.size() == 11);
  CHECK(four.front() == std::vector<int>{0, 1});
  CHECK(four[6] == std::vector<int>{0, 1, 2});
  CHECK(four.back() == std::vector<int>{0, 1, 2, 3});
  CHECK(joint_subsets(7) == four);
}

TEST_CASE("scan rows satisfy the order and sign invariants") {
  const RunConfig cfg = config({5, 8, 13}, 200'000);
  const ScanReport rep = scan(cfg);
  const ResidueSpec& spec = *rep.summary.spec;

  std::vector<u64> expected;
  for (u64 p = spec.u; p <= cfg.x; p += spec.v)
    if (trial_prime(p)) expected.push_back(p);
  REQUIRE(rep.rows.size() == expected.size());

  const auto& layout = rep.summary.layout;
  CHECK(layout.units.size() == 3);
  CHECK(layout.subsets.size() == 4);
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const ScanRow& row = rep.rows[k];
    CHECK(row.p == expected[k]);
    REQUIRE(row.label.has_value());
    bool any = false;
    for (std::size_t i = 0; i < row.units.size(); ++i) {
      const UnitResult& u = row.units[i];
      CHECK((row.p + 1) % u.order == 0);
      CHECK(u.primitive == (u.order == row.p + 1));
      const ContextPtr ctx = InertContext::make(layout.units[i].field, row.p);
      ResidueElement r = reduce(layout.units[i].unit.element, ctx);
      if (u.sign < 0) r = -r;
      CHECK(r.pow((row.p + 1) / 2).is_minus_one());
      any = any || u.primitive;
    }
    CHECK(row.any_primitive == any);
    for (std::size_t s = 0; s < layout.subsets.size(); ++s) {
      u64 l = 1;
      for (int i : layout.subsets[s]) l = std::lcm(l, row.units[static_cast<std::size_t>(i)].order);
      CHECK(row.joint[s] == l);
    }
  }

  const ScanAggregates& agg = rep.summary.aggregates;
  CHECK(agg.rows == rep.rows.size());
  CHECK(agg.per_case[0] + agg.per_case[1] + agg.per_case[2] + agg.per_case[3] + agg.per_case[4] == agg.rows);
  CHECK(agg.any_primitive + agg.none_primitive == agg.rows);
  for (u64 c : agg.primitive_per_unit) CHECK(c <= agg.rows);
}

TEST_CASE("scan orders match brute-force cycle lengths") {
  const ScanReport rep = scan(config({8, 5}, 20'000));
  const auto& layout = rep.summary.layout;
  for (const ScanRow& row : rep.rows)
    for (std::size_t i = 0; i < row.units.size(); ++i) {
      const ContextPtr ctx = InertContext::make(layout.units[i].field, row.p);
      ResidueElement r = reduce(layout.units[i].unit.element, ctx);
      if (row.units[i].sign < 0) r = -r;
      CHECK(row.units[i].order == brute_order(r));
    }
}

TEST_CASE("scan for deltas [8] includes p = 5 with order 6") {
  RunConfig cfg = config({8}, 100);
  cfg.unit_overrides = {{"3", "2"}};
  const ScanReport rep = scan(cfg);
  REQUIRE_FALSE(rep.rows.empty());
  CHECK(rep.rows.front().p == 5);
  CHECK(rep.rows.front().units.front().order == 6);
  CHECK(rep.rows.front().units.front().primitive);

  const ScanReport empty = scan(config({8}, 4));
  CHECK(empty.rows.empty());
  CHECK(empty.summary.aggregates.rows == 0);
}

TEST_CASE("scan is worker-invariant") {
  const ScanReport one = scan(config({5, 8}, 300'000, 1));
  const ScanReport many = scan(config({5, 8}, 300'000, 6));
  REQUIRE(one.rows.size() == many.rows.size());
  for (std::size_t k = 0; k < one.rows.size(); ++k) {
    CHECK(one.rows[k].p == many.rows[k].p);
    CHECK(one.rows[k].joint == many.rows[k].joint);
  }
  CHECK(one.summary.aggregates.to_json(300'000) == many.summary.aggregates.to_json(300'000));
}

TEST_CASE("direct_context_scan") {
  const ScanReport rep = direct_context_scan(8, UnitOverride{"3", "2"}, 100);
  std::vector<u64> ps;
  for (const auto& row : rep.rows) {
    ps.push_back(row.p);
    CHECK((row.p + 1) % row.units.front().order == 0);
    CHECK(row.label.has_value() == (row.p % 4 == 1));
  }
  CHECK(ps == std::vector<u64>{3, 5, 11, 13, 19, 29, 37, 43, 53, 59, 61, 67, 83});
  CHECK(rep.rows[1].units.front().order == 6);
  CHECK(direct_context_scan(8, std::nullopt, 2).rows.empty());
}

TEST_CASE("RowWriter") {
  RunConfig cfg = config({5, 8}, 100);
  const ScanLayout layout = scan_layout(cfg);
  std::ostringstream csv, json;
  RowWriter wc(csv, OutputFormat::csv, layout), wj(json, OutputFormat::json, layout);
  const ScanSummary s = scan(cfg, [&](const ScanRow& r) {
    wc.write(r);
    wj.write(r);
  });
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  CHECK(header == "p,case,u1_c,u1_order,u1_primitive,u2_c,u2_order,u2_primitive,joint_1_2");
  std::getline(lines, first);
  CHECK(first.rfind("13,Case1,", 0) == 0);
  const auto j = nlohmann::json::parse(json.str().substr(0, json.str().find('\n')));
  CHECK(j["p"] == 13);
  CHECK(j["case"] == "Case1");
  CHECK(j["units"].size() == 2);

  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("obs_small_order_census") {
  CHECK(obs_small_order_census(2, 3).count() == 1);
  CHECK(obs_small_order_census(2, 3).primes == std::vector<u64>{3});
  CHECK(obs_small_order_census(2, 2).count() == 0);
  CHECK_THROWS_AS(obs_small_order_census(1, 10), std::invalid_argument);

  for (auto [a, y] : {std::pair<std::int64_t, u64>{2, 50}, {3, 25}, {-2, 30}, {10, 12}}) {
    const SmallOrderCensus c = obs_small_order_census(a, y);
    CHECK(c.count() <= y * y);
    // Oracle: trial-factor a^m - 1 directly.
    std::set<u64> oracle;
    for (u64 m = 1; m < y; ++m) {
      __int128 pw = 1;
      for (u64 i = 0; i < m; ++i) pw *= a;
      __int128 n = pw - 1;
      if (n < 0) n = -n;
      if (n <= 1) continue;
      for (u64 q : trial_prime_divisors(static_cast<u64>(n))) oracle.insert(q);
    }
    CHECK(c.primes == std::vector<u64>(oracle.begin(), oracle.end()));
  }
}

TEST_CASE("narkiewicz_census") {
  const std::vector<u64> grid{2, 10, 100, 1000, 10'000, 100'002};
  const NarkiewiczCensus c = narkiewicz_census({8}, 100'000, grid);
  CHECK(c.reference_exponent == 2.0);
  REQUIRE(c.table.size() == grid.size());
  for (std::size_t i = 1; i < c.table.size(); ++i) CHECK(c.table[i].second >= c.table[i - 1].second);
  CHECK(c.table.front().second == 0);
  CHECK(c.table.back().second == c.scanned);

  // Oracle: joint order by brute-force cycle length with the explicit sign.
  const std::vector<u64> small_grid{5, 50, 500, 5000};
  const NarkiewiczCensus two = narkiewicz_census({5, 8}, 20'000, small_grid);
  const ResidueSpec spec = build_residue_spec(std::vector<std::int64_t>{5, 8}, 13);
  std::vector<u64> joints;
  for (u64 p = spec.u; p <= 20'000; p += spec.v) {
    if (!trial_prime(p)) continue;
    u64 j = 1;
    for (std::int64_t d : {5, 8}) {
      const UnitInfo info = make_unit_info(d);
      const ContextPtr ctx = InertContext::make(info.field, p);
      ResidueElement r = reduce(info.unit.element, ctx);
      if (!r.pow((p + 1) / 2).is_minus_one()) r = -r;
      j = std::lcm(j, brute_order(r));
    }
    joints.push_back(j);
  }
  CHECK(two.scanned == joints.size());
  for (const auto& [y, n] : two.table) {
    u64 count = 0;
    for (u64 j : joints) count += j < y;
    CHECK(n == count);
  }
}

TEST_CASE("bv_error_table matches a direct recount") {
  const u64 x = 100'000;
  std::vector<u64> moduli(50);
  std::iota(moduli.begin(), moduli.end(), 1);
  const auto table = bv_error_table(x, moduli);
  REQUIRE(table.size() == 50);
  std::vector<u64> primes;
  for (u64 n = 2; n <= x; ++n)
    if (trial_prime(n)) primes.push_back(n);
  const double li2 = li_series(2.0);
  for (u64 m : {1, 4, 7, 12, 30, 50}) {
    u64 phi = 0;
    for (u64 s = 1; s <= m; ++s) phi += std::gcd(s, m) == 1;
    std::vector<u64> counts(m, 0);
    double best = 0.0;
    auto measure = [&](double y) {
      const double main = (li_series(y) - li2) / static_cast<double>(phi);
      for (u64 s = 0; s < m; ++s)
        if (std::gcd(s, m) == 1) best = std::max(best, std::abs(static_cast<double>(counts[s]) - main));
    };
    for (u64 p : primes) {
      ++counts[p % m];
      measure(static_cast<double>(p));
    }
    measure(static_cast<double>(x));
    CAPTURE(m);
    CHECK(table[m - 1].m == m);
    CHECK(table[m - 1].e_max == doctest::Approx(best).epsilon(1e-9));
  }
}
