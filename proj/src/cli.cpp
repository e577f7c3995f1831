#include "artin/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "artin/experiments.hpp"

namespace artin {

namespace {

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = nullptr;

  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os = &fallback;
      return;
    }
    file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file) throw std::runtime_error("cannot open output file " + path);
    os = file.get();
  }
};

UnitOverride parse_unit(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("unit must be given as a,b");
  return {s.substr(0, comma), s.substr(comma + 1)};
}

nlohmann::json label_json(u64 p, const CaseLabel& label) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : label.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"ok", c.ok}});
  nlohmann::json j = {{"p", p},
                      {"half", label.half},
                      {"case", std::string(to_string(label.tag))},
                      {"factors", label.witnesses},
                      {"checks", checks},
                      {"above_x_threshold", label.above_x_threshold}};
  if (label.tag == CaseTag::fail) j["failure"] = label.failure;
  return j;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unit orders at inert primes of real quadratic fields", "artin"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, format = "csv";
  std::vector<std::string> units;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* opt_x = app.add_option("--x", cfg.x, "upper bound for primes");
  auto* opt_delta = app.add_option("--delta", cfg.delta, "window parameter in (0, 1/4)");
  auto* opt_deltas = app.add_option("--deltas", cfg.deltas, "discriminants")->delimiter(',');
  auto* opt_out = app.add_option("--out", cfg.out, "output file (default stdout)");
  auto* opt_format = app.add_option("--format", format, "row format")->check(CLI::IsMember({"csv", "json"}));
  auto* opt_workers = app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  auto* opt_literal = app.add_flag("--literal-v", cfg.literal_v, "use v = 8 * prod(delta_i)");
  auto* opt_p0 = app.add_option("--p0-bound", cfg.p0_bound, "search bound for p0");
  auto* opt_force = app.add_flag("--force", cfg.force, "skip hypothesis and range guards");
  auto* opt_sample = app.add_option("--sample-x", cfg.sample_x, "validation sample bound");
  auto* opt_units = app.add_option("--unit", units, "explicit unit a,b in the integral basis (one per delta)");

  auto* construct_cmd = app.add_subcommand("construct", "build the residue spec (u, v)");
  bool validate = false;
  construct_cmd->add_flag("--validate", validate, "also validate up to --sample-x");

  auto* scan_cmd = app.add_subcommand("scan", "orders of the units over the admissible primes");
  std::string summary_path;
  scan_cmd->add_option("--summary", summary_path, "write aggregates JSON here");

  auto* direct_cmd = app.add_subcommand("direct-scan", "orders over every inert prime of one field");

  auto* classify_cmd = app.add_subcommand("classify", "case of (p+1)/2 for a single prime");
  u64 p = 0;
  classify_cmd->add_option("--p", p, "prime p = 1 (mod 4)")->required();

  auto* sieve_cmd = app.add_subcommand("sieve-report", "remainder sum, linear-sieve bound and Selberg constant");
  double z_exp = 0.2, c2 = 1.0, a_exp = 1.0;
  u64 selberg_trunc = 1'000'000;
  sieve_cmd->add_option("--z-exp", z_exp, "z = X^z_exp");
  sieve_cmd->add_option("--c2", c2, "remainder-sum range exponent");
  sieve_cmd->add_option("--A", a_exp, "comparison exponent");
  sieve_cmd->add_option("--selberg-truncation", selberg_trunc, "truncation of the Selberg product");

  auto* census_cmd = app.add_subcommand("census", "small-order, Narkiewicz and error-term censuses");
  std::string kind;
  std::int64_t a = 2;
  u64 y = 50;
  std::vector<u64> y_grid, moduli;
  census_cmd->add_option("--kind", kind, "obs | narkiewicz | bv")->required()->check(
      CLI::IsMember({"obs", "narkiewicz", "bv"}));
  census_cmd->add_option("--a", a, "base for the small-order census");
  census_cmd->add_option("--y", y, "order bound for the small-order census");
  census_cmd->add_option("--y-grid", y_grid, "order bounds")->delimiter(',');
  census_cmd->add_option("--moduli", moduli, "moduli")->delimiter(',');

  auto* mertens_cmd = app.add_subcommand("mertens", "sum of 1/p over x^beta < p < x^alpha");
  double beta = 0.5, alpha = 0.9;
  mertens_cmd->add_option("--beta", beta);
  mertens_cmd->add_option("--alpha", alpha);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      RunConfig file_cfg = run_config_from_json(nlohmann::json::parse(in));
      // Explicit flags override the file.
      if (opt_x->count()) file_cfg.x = cfg.x;
      if (opt_delta->count()) file_cfg.delta = cfg.delta;
      if (opt_deltas->count()) file_cfg.deltas = cfg.deltas;
      if (opt_out->count()) file_cfg.out = cfg.out;
      if (opt_workers->count()) file_cfg.workers = cfg.workers;
      if (opt_literal->count()) file_cfg.literal_v = cfg.literal_v;
      if (opt_p0->count()) file_cfg.p0_bound = cfg.p0_bound;
      if (opt_force->count()) file_cfg.force = cfg.force;
      if (opt_sample->count()) file_cfg.sample_x = cfg.sample_x;
      if (opt_format->count()) file_cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
      cfg = std::move(file_cfg);
    } else {
      cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    }
    if (opt_units->count()) {
      cfg.unit_overrides.clear();
      for (const auto& u : units) cfg.unit_overrides.push_back(parse_unit(u));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*construct_cmd) {
      cfg.validate();
      const ResidueSpec spec = construct(cfg);
      nlohmann::json j = to_json(spec);
      bool ok = true;
      if (validate) {
        const ValidationReport rep = validate_spec(spec, cfg.sample_x);
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : rep.checks)
          checks.push_back({{"name", c.name}, {"ok", c.ok}, {"counterexample", c.counterexample}});
        j["validation"] = {{"checks", checks}, {"witnesses", rep.witnesses}, {"vacuous", rep.vacuous},
                           {"sample_x", cfg.sample_x}};
        ok = rep.passed();
      }
      OutputTarget target(cfg.out, out);
      *target.os << j.dump(2) << "\n";
      return ok ? 0 : 1;
    }

    if (*scan_cmd) {
      cfg.validate();
      OutputTarget target(cfg.out, out);
      const ScanLayout layout = scan_layout(cfg);
      RowWriter writer(*target.os, cfg.format, layout);
      const ScanSummary summary = scan(cfg, [&](const ScanRow& row) { writer.write(row); });
      nlohmann::json j = summary.aggregates.to_json(cfg.x);
      j["spec"] = to_json(*summary.spec);
      if (!summary_path.empty()) {
        std::ofstream s(summary_path, std::ios::binary);
        s << j.dump(2) << "\n";
      } else if (!cfg.out.empty()) {
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (*direct_cmd) {
      if (cfg.deltas.size() != 1) throw std::invalid_argument("direct-scan takes exactly one discriminant");
      std::optional<UnitOverride> unit;
      if (!cfg.unit_overrides.empty()) unit = cfg.unit_overrides.front();
      OutputTarget target(cfg.out, out);
      ScanLayout layout;
      layout.units.push_back(make_unit_info(cfg.deltas.front(), unit));
      RowWriter writer(*target.os, cfg.format, layout);
      const ScanSummary summary = direct_context_scan(
          cfg.deltas.front(), unit, cfg.x, cfg.delta, [&](const ScanRow& row) { writer.write(row); }, cfg.workers);
      if (!cfg.out.empty()) out << summary.aggregates.to_json(cfg.x).dump(2) << "\n";
      return 0;
    }

    if (*classify_cmd) {
      out << label_json(p, classify(p, cfg.x, cfg.delta)).dump(2) << "\n";
      return 0;
    }

    if (*sieve_cmd) {
      const SieveReport rep = sieve_report(cfg, z_exp, c2, a_exp, selberg_trunc);
      OutputTarget target(cfg.out, out);
      *target.os << rep.to_json().dump(2) << "\n";
      return 0;
    }

    if (*census_cmd) {
      nlohmann::json j;
      if (kind == "obs") {
        const SmallOrderCensus c = obs_small_order_census(a, y);
        j = {{"a", a}, {"y", y}, {"count", c.count()}, {"y_squared", y * y}, {"primes", c.primes}};
      } else if (kind == "narkiewicz") {
        if (y_grid.empty()) throw std::invalid_argument("--y-grid is required");
        const NarkiewiczCensus c = narkiewicz_census(cfg.deltas, cfg.x, y_grid, cfg.p0_bound, cfg.literal_v);
        nlohmann::json table = nlohmann::json::array();
        for (const auto& [yy, n] : c.table) table.push_back({{"y", yy}, {"N", n}});
        j = {{"deltas", c.deltas}, {"x", c.x}, {"scanned", c.scanned}, {"table", table},
             {"slope", c.slope}, {"reference_exponent", c.reference_exponent}};
      } else {
        if (moduli.empty()) throw std::invalid_argument("--moduli is required");
        nlohmann::json table = nlohmann::json::array();
        for (const auto& row : bv_error_table(cfg.x, moduli)) table.push_back({{"m", row.m}, {"e_max", row.e_max}});
        j = {{"x", cfg.x}, {"li", li(static_cast<double>(cfg.x))}, {"table", table}};
      }
      OutputTarget target(cfg.out, out);
      *target.os << j.dump(2) << "\n";
      return 0;
    }

    if (*mertens_cmd) {
      const double sum = mertens_window_sum(cfg.x, beta, alpha);
      out << nlohmann::json{{"x", cfg.x}, {"beta", beta}, {"alpha", alpha}, {"sum", sum},
                            {"log_ratio", std::log(alpha / beta)}}
                 .dump(2)
          << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace artin
