// Scans over admissible primes, censuses and report emission.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "artin/construction.hpp"
#include "artin/modfield.hpp"
#include "artin/quadratic.hpp"
#include "artin/sievelab.hpp"

namespace artin {

enum class OutputFormat { csv, json };

/// Explicit unit given by its integral-basis coordinates a + b*w.
struct UnitOverride {
  std::string a;
  std::string b;
};

struct RunConfig {
  std::vector<std::int64_t> deltas;
  u64 x = 100'000;
  double delta = 0.05;
  std::vector<UnitOverride> unit_overrides;  // empty, or one per delta
  std::string out;
  OutputFormat format = OutputFormat::csv;
  unsigned workers = 1;
  bool literal_v = false;
  u64 p0_bound = 10'000'000;
  u64 sample_x = 1'000'000;
  bool force = false;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Reads the keys of RunConfig (deltas, x, delta, units, out, format, workers,
/// literal_v, p0_bound, sample_x, force); absent keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

struct UnitInfo {
  std::int64_t delta = 0;
  FieldSpec field;
  UnitElement original;
  UnitElement unit;  // norm +1
  bool squared = false;
};

/// Default unit is to_norm_plus_one(fundamental_unit(d)); an override replaces
/// the fundamental unit before the norm adjustment.
UnitInfo make_unit_info(std::int64_t delta, const std::optional<UnitOverride>& override_unit = std::nullopt);

struct UnitResult {
  int sign = 1;
  u64 order = 0;
  bool primitive = false;
};

/// Sign, order and primitivity of a unit at an inert prime. For p = 1 (mod 4)
/// the sign comes from sign_choice; otherwise the sign giving the larger
/// order is used, +1 on ties.
UnitResult evaluate_unit(const UnitElement& unit, const ContextPtr& ctx);

struct ScanRow {
  u64 p = 0;
  std::optional<CaseLabel> label;  // absent when (p+1)/2 is even
  std::vector<UnitResult> units;
  std::vector<u64> joint;  // one per subset in ScanLayout::subsets
  bool any_primitive = false;
};

struct ScanLayout {
  std::vector<UnitInfo> units;
  std::vector<std::vector<int>> subsets;  // 0-based unit indices
};

/// All subsets of size 2..4 of the first min(4, n) units, by size then lexicographically.
std::vector<std::vector<int>> joint_subsets(std::size_t unit_count);

struct ScanAggregates {
  u64 rows = 0;
  std::array<u64, 5> per_case{};  // Case1, Case2, Case3, Fail, n/a
  std::vector<u64> primitive_per_unit;
  std::vector<u64> squared_unit;   // 1 when the unit was squared to reach norm +1
  u64 any_primitive = 0;
  u64 none_primitive = 0;

  void add(const ScanRow& row);
  nlohmann::json to_json(u64 x) const;
};

/// Units and joint-order subsets a scan of `cfg` will report, in column order.
ScanLayout scan_layout(const RunConfig& cfg);

using RowSink = std::function<void(const ScanRow&)>;

struct ScanSummary {
  std::optional<ResidueSpec> spec;
  ScanLayout layout;
  ScanAggregates aggregates;
};

/// Every prime p = u (mod v), p <= x, for the constructed spec. Rows reach
/// `sink` in ascending p regardless of the worker count.
ScanSummary scan(const RunConfig& cfg, const RowSink& sink);

/// Every prime 3 <= p <= x inert in Q(sqrt delta), with no progression restriction.
ScanSummary direct_context_scan(std::int64_t delta, const std::optional<UnitOverride>& unit, u64 x,
                                double case_delta, const RowSink& sink, unsigned workers = 1);

struct ScanReport {
  ScanSummary summary;
  std::vector<ScanRow> rows;
};
ScanReport scan(const RunConfig& cfg);
ScanReport direct_context_scan(std::int64_t delta, const std::optional<UnitOverride>& unit, u64 x,
                               double case_delta = 0.05);

/// Streams rows as CSV (header mandatory) or JSON lines.
class RowWriter {
 public:
  RowWriter(std::ostream& os, OutputFormat format, const ScanLayout& layout);
  void write(const ScanRow& row);

 private:
  std::ostream& os_;
  OutputFormat format_;
  const ScanLayout& layout_;
};

std::string csv_field(const std::string& s);

struct SmallOrderCensus {
  std::int64_t a = 0;
  u64 y = 0;
  std::vector<u64> primes;  // ascending, each prime once
  u64 count() const { return primes.size(); }
};

/// Primes p with ord_p(a) < y: the prime divisors of a^m - 1 for m < y,
/// collected through the cyclotomic values Phi_k(a), k < y. Throws
/// std::domain_error when a value exceeds 64 bits.
SmallOrderCensus obs_small_order_census(std::int64_t a, u64 y);

struct NarkiewiczCensus {
  std::vector<std::int64_t> deltas;
  u64 x = 0;
  u64 scanned = 0;
  std::vector<std::pair<u64, u64>> table;  // (y, N(y))
  double slope = 0.0;                      // least-squares log N against log y
  double reference_exponent = 0.0;         // 1 + 1/k
};

NarkiewiczCensus narkiewicz_census(const std::vector<std::int64_t>& deltas, u64 x, const std::vector<u64>& y_grid,
                                   u64 p0_bound = 10'000'000, bool literal_v = false);

struct BvRow {
  u64 m = 1;
  double e_max = 0.0;
};
std::vector<BvRow> bv_error_table(u64 x, const std::vector<u64>& moduli);

struct SieveReport {
  ResidueSpec spec;
  u64 members = 0;
  double X = 0.0;
  RemainderSumReport remainder;
  LowerBoundReport lower;
  u64 sifted = 0;
  double ratio = 0.0;
  double selberg_product = 0.0;
  AlmostPrimeCensus census;

  nlohmann::json to_json() const;
};

/// Sieve quantities for the spec built from cfg: z = X^{z_exponent}.
SieveReport sieve_report(const RunConfig& cfg, double z_exponent, double c2, double a_exp,
                         u64 selberg_truncation = 1'000'000);

/// Resolves cfg into a residue spec (find_p0 + build_residue_spec).
ResidueSpec construct(const RunConfig& cfg);

}  // namespace artin
