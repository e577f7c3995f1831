#include "artin/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace artin {

namespace {

constexpr u64 kScanWindow = u64{1} << 16;

u64 isqrt_u64(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

using WindowWork = std::function<std::vector<ScanRow>(const std::vector<u64>& primes)>;

// Sieves [0, x] in windows of 2^16, runs `work` on each window's primes and
// hands the rows to `sink` in window order.
void run_windows(u64 x, unsigned workers, const WindowWork& work, const std::function<void(ScanRow&&)>& sink) {
  if (x < 2) return;
  const std::vector<u64> base = primes_up_to(isqrt_u64(x) + 1);
  const u64 windows = x / kScanWindow + 1;
  auto window_primes = [&](u64 w) {
    const u64 lo = w * kScanWindow;
    return primes_in_window(lo, std::min(x + 1, lo + kScanWindow), base);
  };

  if (workers <= 1) {
    for (u64 w = 0; w < windows; ++w)
      for (auto& row : work(window_primes(w))) sink(std::move(row));
    return;
  }

  std::mutex mu;
  std::condition_variable ready;
  std::vector<std::optional<std::vector<ScanRow>>> slots(windows);
  std::atomic<u64> next{0};
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (u64 w = next++; w < windows; w = next++) {
          std::vector<ScanRow> rows;
          try {
            rows = work(window_primes(w));
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            next = windows;
          }
          std::lock_guard lock(mu);
          slots[w] = std::move(rows);
          ready.notify_all();
        }
      });

    for (u64 w = 0; w < windows; ++w) {
      std::vector<ScanRow> rows;
      {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return slots[w].has_value() || failure; });
        if (failure) break;
        rows = std::move(*slots[w]);
        slots[w].reset();
      }
      for (auto& row : rows) sink(std::move(row));
    }
    if (failure) next = windows;
  }
  if (failure) std::rethrow_exception(failure);
}

void finalize_joint(ScanRow& row, const std::vector<std::vector<int>>& subsets) {
  for (const auto& subset : subsets) {
    u64 j = 1;
    for (int i : subset) j = lcm(j, row.units[static_cast<std::size_t>(i)].order);
    row.joint.push_back(j);
  }
  row.any_primitive = false;
  for (const auto& u : row.units) row.any_primitive = row.any_primitive || u.primitive;
}

ScanLayout make_layout(const std::vector<std::int64_t>& deltas, const std::vector<UnitOverride>& overrides) {
  if (!overrides.empty() && overrides.size() != deltas.size())
    throw std::invalid_argument("unit overrides must match the number of discriminants");
  ScanLayout layout;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    layout.units.push_back(make_unit_info(
        deltas[i], overrides.empty() ? std::nullopt : std::optional<UnitOverride>(overrides[i])));
  layout.subsets = joint_subsets(layout.units.size());
  return layout;
}

ScanAggregates empty_aggregates(const ScanLayout& layout) {
  ScanAggregates agg;
  agg.primitive_per_unit.assign(layout.units.size(), 0);
  for (const auto& u : layout.units) agg.squared_unit.push_back(u.squared ? 1 : 0);
  return agg;
}

mpz_class ipow(std::int64_t a, u64 e) {
  mpz_class r;
  mpz_class base = static_cast<long>(a);
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace

void RunConfig::validate() const {
  if (!(delta > 0.0 && delta < 0.25)) throw std::invalid_argument("delta must lie in (0, 1/4)");
  if (x < 2) throw std::invalid_argument("x must be >= 2");
  if (deltas.empty()) throw std::invalid_argument("at least one discriminant is required");
  if (!unit_overrides.empty() && unit_overrides.size() != deltas.size())
    throw std::invalid_argument("unit overrides must match the number of discriminants");
  if (workers == 0) throw std::invalid_argument("workers must be >= 1");
  for (std::int64_t d : deltas) FieldSpec::from_discriminant(d);
  if (!force) {
    const HypothesisCheck hyp = theorem_hypothesis_check(deltas);
    if (!hyp.holds)
      throw std::invalid_argument("discriminants violate the square-product hypothesis (use --force): " +
                                  hyp.witness->product.get_str() + " is a square");
  }
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.deltas = j.value("deltas", cfg.deltas);
  cfg.x = j.value("x", cfg.x);
  cfg.delta = j.value("delta", cfg.delta);
  if (j.contains("units"))
    for (const auto& u : j.at("units")) {
      auto coord = [](const nlohmann::json& c) { return c.is_string() ? c.get<std::string>() : c.dump(); };
      cfg.unit_overrides.push_back({coord(u.at(0)), coord(u.at(1))});
    }
  cfg.out = j.value("out", cfg.out);
  const std::string fmt = j.value("format", std::string("csv"));
  if (fmt != "csv" && fmt != "json") throw std::invalid_argument("format must be csv or json");
  cfg.format = fmt == "json" ? OutputFormat::json : OutputFormat::csv;
  cfg.workers = j.value("workers", cfg.workers);
  cfg.literal_v = j.value("literal_v", cfg.literal_v);
  cfg.p0_bound = j.value("p0_bound", cfg.p0_bound);
  cfg.sample_x = j.value("sample_x", cfg.sample_x);
  cfg.force = j.value("force", cfg.force);
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : cfg.unit_overrides) units.push_back({u.a, u.b});
  return {{"deltas", cfg.deltas},
          {"x", cfg.x},
          {"delta", cfg.delta},
          {"units", units},
          {"out", cfg.out},
          {"format", cfg.format == OutputFormat::json ? "json" : "csv"},
          {"workers", cfg.workers},
          {"literal_v", cfg.literal_v},
          {"p0_bound", cfg.p0_bound},
          {"sample_x", cfg.sample_x},
          {"force", cfg.force}};
}

UnitInfo make_unit_info(std::int64_t delta, const std::optional<UnitOverride>& override_unit) {
  UnitInfo info;
  info.delta = delta;
  info.field = FieldSpec::from_discriminant(delta);
  if (override_unit) {
    RingElement e(info.field, mpz_class(override_unit->a), mpz_class(override_unit->b));
    info.original = UnitElement::from_element(std::move(e));
  } else {
    info.original = fundamental_unit(info.field.d);
  }
  info.unit = to_norm_plus_one(info.original);
  info.squared = info.original.norm == -1;
  return info;
}

UnitResult evaluate_unit(const UnitElement& unit, const ContextPtr& ctx) {
  const u64 p = ctx->p;
  if (p % 4 == 1) {
    const PrimitivityResult r = is_primitive(unit, ctx);
    return {r.sign, r.order, r.primitive};
  }
  const ResidueElement r = reduce(unit.element, ctx);
  const u64 plus = kernel_order(r), minus = kernel_order(-r);
  if (minus > plus) return {-1, minus, minus == p + 1};
  return {1, plus, plus == p + 1};
}

std::vector<std::vector<int>> joint_subsets(std::size_t unit_count) {
  const int n = static_cast<int>(std::min<std::size_t>(unit_count, 4));
  std::vector<std::vector<int>> out;
  for (int size = 2; size <= n; ++size)
    for (int mask = 0; mask < (1 << n); ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) != size) continue;
      std::vector<int> s;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      out.push_back(std::move(s));
    }
  for (std::size_t lo = 0; lo < out.size();) {
    std::size_t hi = lo;
    while (hi < out.size() && out[hi].size() == out[lo].size()) ++hi;
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(lo), out.begin() + static_cast<std::ptrdiff_t>(hi));
    lo = hi;
  }
  return out;
}

void ScanAggregates::add(const ScanRow& row) {
  ++rows;
  per_case[row.label ? static_cast<std::size_t>(row.label->tag) : 4]++;
  for (std::size_t i = 0; i < row.units.size(); ++i)
    if (row.units[i].primitive) ++primitive_per_unit[i];
  if (row.any_primitive)
    ++any_primitive;
  else
    ++none_primitive;
}

nlohmann::json ScanAggregates::to_json(u64 x) const {
  auto density = [&](u64 n) { return rows ? static_cast<double>(n) / static_cast<double>(rows) : 0.0; };
  nlohmann::json units = nlohmann::json::array();
  for (std::size_t i = 0; i < primitive_per_unit.size(); ++i)
    units.push_back({{"index", i + 1},
                     {"primitive", primitive_per_unit[i]},
                     {"density", density(primitive_per_unit[i])},
                     {"squared", squared_unit[i] != 0}});
  return {{"x", x},
          {"rows", rows},
          {"cases",
           {{"Case1", per_case[0]}, {"Case2", per_case[1]}, {"Case3", per_case[2]}, {"Fail", per_case[3]},
            {"NA", per_case[4]}}},
          {"units", units},
          {"any_primitive", any_primitive},
          {"none_primitive", none_primitive}};
}

ScanLayout scan_layout(const RunConfig& cfg) { return make_layout(cfg.deltas, cfg.unit_overrides); }

ResidueSpec construct(const RunConfig& cfg) {
  const u64 p0 = find_p0(cfg.deltas, cfg.p0_bound, cfg.force);
  return build_residue_spec(cfg.deltas, p0, cfg.literal_v);
}

ScanSummary scan(const RunConfig& cfg, const RowSink& sink) {
  cfg.validate();
  ScanSummary summary;
  summary.spec = construct(cfg);
  summary.layout = scan_layout(cfg);
  summary.aggregates = empty_aggregates(summary.layout);
  const ResidueSpec& spec = *summary.spec;
  const ScanLayout& layout = summary.layout;

  auto work = [&](const std::vector<u64>& primes) {
    std::vector<ScanRow> rows;
    for (u64 p : primes) {
      if (p % spec.v != spec.u) continue;
      ScanRow row;
      row.p = p;
      row.label = classify(p, cfg.x, cfg.delta);
      const Factorization pf = factorize(p + 1);
      for (const auto& info : layout.units) {
        const ContextPtr ctx = InertContext::make(info.field, p, pf);
        row.units.push_back(evaluate_unit(info.unit, ctx));
      }
      finalize_joint(row, layout.subsets);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  run_windows(cfg.x, cfg.workers, work, [&](ScanRow&& row) {
    summary.aggregates.add(row);
    sink(row);
  });
  return summary;
}

ScanSummary direct_context_scan(std::int64_t delta, const std::optional<UnitOverride>& unit, u64 x,
                                double case_delta, const RowSink& sink, unsigned workers) {
  ScanSummary summary;
  summary.layout.units.push_back(make_unit_info(delta, unit));
  summary.aggregates = empty_aggregates(summary.layout);
  const UnitInfo& info = summary.layout.units.front();

  auto work = [&](const std::vector<u64>& primes) {
    std::vector<ScanRow> rows;
    for (u64 p : primes) {
      if (p == 2 || splitting_type(info.field.delta, p) != Splitting::inert) continue;
      ScanRow row;
      row.p = p;
      if (p % 4 == 1) row.label = classify(p, x, case_delta);
      row.units.push_back(evaluate_unit(info.unit, InertContext::make(info.field, p)));
      finalize_joint(row, summary.layout.subsets);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  run_windows(x, workers, work, [&](ScanRow&& row) {
    summary.aggregates.add(row);
    sink(row);
  });
  return summary;
}

ScanReport scan(const RunConfig& cfg) {
  ScanReport rep;
  rep.summary = scan(cfg, [&](const ScanRow& row) { rep.rows.push_back(row); });
  return rep;
}

ScanReport direct_context_scan(std::int64_t delta, const std::optional<UnitOverride>& unit, u64 x,
                               double case_delta) {
  ScanReport rep;
  rep.summary = direct_context_scan(delta, unit, x, case_delta, [&](const ScanRow& row) { rep.rows.push_back(row); });
  return rep;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

RowWriter::RowWriter(std::ostream& os, OutputFormat format, const ScanLayout& layout)
    : os_(os), format_(format), layout_(layout) {
  if (format_ != OutputFormat::csv) return;
  os_ << "p,case";
  for (std::size_t i = 1; i <= layout_.units.size(); ++i)
    os_ << ",u" << i << "_c,u" << i << "_order,u" << i << "_primitive";
  for (const auto& subset : layout_.subsets) {
    os_ << ",joint";
    for (int i : subset) os_ << '_' << i + 1;
  }
  os_ << '\n';
}

void RowWriter::write(const ScanRow& row) {
  const std::string label = row.label ? std::string(to_string(row.label->tag)) : "NA";
  if (format_ == OutputFormat::csv) {
    os_ << row.p << ',' << csv_field(label);
    for (const auto& u : row.units) os_ << ',' << u.sign << ',' << u.order << ',' << (u.primitive ? 1 : 0);
    for (u64 j : row.joint) os_ << ',' << j;
    os_ << '\n';
    return;
  }
  nlohmann::json units = nlohmann::json::array();
  for (std::size_t i = 0; i < row.units.size(); ++i)
    units.push_back({{"c", row.units[i].sign},
                     {"order", row.units[i].order},
                     {"primitive", row.units[i].primitive},
                     {"squared", layout_.units[i].squared}});
  nlohmann::json joint = nlohmann::json::object();
  for (std::size_t k = 0; k < layout_.subsets.size(); ++k) {
    std::string key;
    for (int i : layout_.subsets[k]) key += (key.empty() ? "" : "_") + std::to_string(i + 1);
    joint[key] = row.joint[k];
  }
  nlohmann::json j = {{"p", row.p}, {"case", label}, {"units", units}, {"joint", joint},
                      {"any_primitive", row.any_primitive}};
  if (row.label && !row.label->witnesses.empty()) j["factors"] = row.label->witnesses;
  if (row.label && row.label->tag == CaseTag::fail) j["failure"] = row.label->failure;
  os_ << j.dump() << '\n';
}

SmallOrderCensus obs_small_order_census(std::int64_t a, u64 y) {
  if (a >= -1 && a <= 1) throw std::invalid_argument("obs_small_order_census: need |a| >= 2");
  if (y < 2) throw std::invalid_argument("obs_small_order_census: need y >= 2");
  SmallOrderCensus census{a, y, {}};
  std::set<u64> primes;
  const mpz_class limit = mpz_class(std::numeric_limits<u64>::max());
  for (u64 k = 1; k < y; ++k) {
    // Phi_k(a) = prod over e | k of (a^e - 1)^mu(k/e)
    mpz_class num = 1, den = 1;
    for (u64 e = 1; e <= k; ++e) {
      if (k % e != 0) continue;
      const int mu = moebius(factorize(k / e));
      if (mu == 1) num *= ipow(a, e) - 1;
      if (mu == -1) den *= ipow(a, e) - 1;
    }
    mpz_class phi = num / den;
    phi = abs(phi);
    if (phi > limit) throw std::domain_error("obs_small_order_census: Phi_" + std::to_string(k) + "(a) exceeds 64 bits");
    if (phi <= 1) continue;
    for (const auto& pk : factorize(phi.get_ui()).factors) primes.insert(pk.prime);
  }
  census.primes.assign(primes.begin(), primes.end());
  return census;
}

NarkiewiczCensus narkiewicz_census(const std::vector<std::int64_t>& deltas, u64 x, const std::vector<u64>& y_grid,
                                   u64 p0_bound, bool literal_v) {
  NarkiewiczCensus census;
  census.deltas = deltas;
  census.x = x;
  census.reference_exponent = 1.0 + 1.0 / static_cast<double>(deltas.size());
  const ResidueSpec spec = build_residue_spec(deltas, find_p0(deltas, p0_bound), literal_v);
  std::vector<UnitInfo> units;
  for (std::int64_t d : deltas) units.push_back(make_unit_info(d));

  std::vector<u64> joints;
  for (u64 p : primes_in_progression(x, spec.u, spec.v)) {
    const Factorization pf = factorize(p + 1);
    u64 j = 1;
    for (const auto& info : units) j = lcm(j, evaluate_unit(info.unit, InertContext::make(info.field, p, pf)).order);
    joints.push_back(j);
  }
  census.scanned = joints.size();
  std::sort(joints.begin(), joints.end());

  std::vector<double> lx, ly;
  for (u64 y : y_grid) {
    const auto n = static_cast<u64>(std::lower_bound(joints.begin(), joints.end(), y) - joints.begin());
    census.table.emplace_back(y, n);
    if (n > 0 && y > 1) {
      lx.push_back(std::log(static_cast<double>(y)));
      ly.push_back(std::log(static_cast<double>(n)));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    census.slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  return census;
}

std::vector<BvRow> bv_error_table(u64 x, const std::vector<u64>& moduli) {
  std::vector<BvRow> rows;
  for (u64 m : moduli) rows.push_back({m, e_max(x, m)});
  return rows;
}

nlohmann::json SieveReport::to_json() const {
  return {{"spec", artin::to_json(spec)},
          {"members", members},
          {"X", X},
          {"remainder_sum",
           {{"d_limit", remainder.d_limit},
            {"terms", remainder.terms},
            {"sum", remainder.sum},
            {"comparison", remainder.comparison}}},
          {"lower_bound",
           {{"z", lower.z},
            {"t", lower.t},
            {"t_used", lower.t_used},
            {"t_clamped", lower.t_clamped},
            {"in_sieve_range", lower.in_sieve_range},
            {"euler_product", lower.euler_product},
            {"max_density", lower.max_density},
            {"f", lower.f_value},
            {"main_term", lower.main_term},
            {"caveat", lower.caveat}}},
          {"s_direct", sifted},
          {"ratio", ratio},
          {"selberg_product", selberg_product},
          {"almost_prime",
           {{"total", census.total},
            {"four_large", census.four_large},
            {"cases_1_to_3", census.cases_1_to_3},
            {"Case1", census.per_case[0]},
            {"Case2", census.per_case[1]},
            {"Case3", census.per_case[2]},
            {"Fail", census.per_case[3]}}}};
}

SieveReport sieve_report(const RunConfig& cfg, double z_exponent, double c2, double a_exp, u64 selberg_truncation) {
  cfg.validate();
  SieveReport rep;
  rep.spec = construct(cfg);
  const Ensemble ens = build_ensemble(cfg.x, rep.spec.u, rep.spec.v, cfg.workers);
  rep.members = ens.members.size();
  rep.X = ens.X;
  rep.remainder = remainder_sum(ens, c2, a_exp);
  const double z = std::pow(ens.X, z_exponent);
  rep.lower = sieve_lower_main_term(ens, z, cfg.force);
  rep.sifted = s_direct(ens, z);
  rep.ratio = rep.lower.main_term > 0 ? static_cast<double>(rep.sifted) / rep.lower.main_term : 0.0;
  rep.selberg_product = selberg_constant_product(selberg_truncation);
  rep.census = almost_prime_census(ens, cfg.delta);
  return rep;
}

}  // namespace artin
