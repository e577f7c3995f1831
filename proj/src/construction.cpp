#include "artin/construction.hpp"

#include <algorithm>
#include <limits>

#include "artin/modfield.hpp"
#include "artin/quadratic.hpp"

namespace artin {

namespace {

u64 checked_mul(u64 a, u64 b) {
  if (a != 0 && b > std::numeric_limits<u64>::max() / a)
    throw std::overflow_error("modulus exceeds 64 bits");
  return a * b;
}

// Least non-negative x with x = r1 (mod m1) and x = r2 (mod m2), m1 and m2 coprime.
std::pair<u64, u64> crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
  const u64 m = checked_mul(m1, m2);
  const u64 diff = (r2 % m2 + m2 - r1 % m2) % m2;
  const u64 k = mulmod(diff, invmod(m1 % m2, m2), m2);
  return {static_cast<u64>((static_cast<u128>(k) * m1 + r1) % m), m};
}

std::string str(u64 n) { return std::to_string(n); }

}  // namespace

bool satisfies_p0_conditions(std::span<const std::int64_t> deltas, u64 p) {
  if (p < 5 || !is_prime(p)) return false;
  if (kronecker(-1, p) != 1 || kronecker(3, p) != 1) return false;
  return std::all_of(deltas.begin(), deltas.end(), [p](std::int64_t d) { return kronecker(d, p) == -1; });
}

u64 find_p0(std::span<const std::int64_t> deltas, u64 search_bound, bool force) {
  if (deltas.empty()) throw std::invalid_argument("find_p0: no discriminants");
  for (std::int64_t d : deltas) FieldSpec::from_discriminant(d);
  const HypothesisCheck hyp = theorem_hypothesis_check(deltas);
  if (!hyp.holds && !force)
    throw HypothesisViolated("square-product hypothesis fails: " + hyp.witness->product.get_str() + " = " +
                             hyp.witness->root.get_str() + "^2");
  for (u64 p : primes_up_to(search_bound))
    if (satisfies_p0_conditions(deltas, p)) return p;
  throw NoSolutionWithinBound("no prime p0 <= " + str(search_bound) + " satisfies the Legendre conditions");
}

std::vector<u64> odd_prime_support(std::span<const std::int64_t> deltas) {
  std::vector<u64> ls;
  for (std::int64_t d : deltas) {
    if (d <= 0) throw std::invalid_argument("discriminants must be positive");
    for (const auto& pk : factorize(static_cast<u64>(d)).factors)
      if (pk.prime != 2) ls.push_back(pk.prime);
  }
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  return ls;
}

ResidueSpec build_residue_spec(std::span<const std::int64_t> deltas, u64 p0, bool literal_v) {
  if (!satisfies_p0_conditions(deltas, p0))
    throw ConstructionError("p0 = " + str(p0) + " does not satisfy the Legendre conditions");
  ResidueSpec spec;
  spec.deltas.assign(deltas.begin(), deltas.end());
  spec.p0 = p0;
  spec.literal_v = literal_v;

  u64 u = p0 % 8, m = 8;
  for (u64 l : odd_prime_support(deltas)) {
    const u64 u_l = (p0 + 1) % l != 0 ? p0 % l : mulmod(4, p0, l);
    spec.per_l.push_back({l, u_l});
    std::tie(u, m) = crt_pair(u, m, u_l, l);
  }
  spec.u = u;
  spec.v = m;
  if (literal_v) {
    spec.v = 8;
    for (std::int64_t d : deltas) spec.v = checked_mul(spec.v, static_cast<u64>(d));
  }

  const ValidationReport structural = validate_spec(spec, 0);
  for (const auto& c : structural.checks)
    if (!c.ok) throw ConstructionError("residue spec invariant failed: " + c.name + " " + c.counterexample);
  return spec;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.ok; });
}

const PropertyCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate_spec(const ResidueSpec& spec, u64 sample_x) {
  ValidationReport rep;
  auto check = [&](std::string name, bool ok, std::string counterexample = {}) {
    rep.checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(counterexample)});
  };
  const u64 u = spec.u, v = spec.v;
  check("8 | v", v % 8 == 0, "v = " + str(v));
  check("u < v", u < v, "u = " + str(u));
  check("u = 1 (mod 4)", u % 4 == 1, "u mod 4 = " + str(u % 4));
  check("u = p0 (mod 8)", u % 8 == spec.p0 % 8, "u mod 8 = " + str(u % 8) + ", p0 mod 8 = " + str(spec.p0 % 8));
  check("gcd(u, v) = 1", gcd(u, v) == 1, "gcd = " + str(gcd(u, v)));
  check("gcd((u+1)/2, v) = 1", gcd((u + 1) / 2, v) == 1, "gcd = " + str(gcd((u + 1) / 2, v)));

  bool residues_ok = true, claim_ok = true, l_divides_ok = true;
  std::string residues_cx, claim_cx, l_cx;
  for (const auto& [l, u_l] : spec.per_l) {
    if (v % l != 0 && l_divides_ok) {
      l_divides_ok = false;
      l_cx = "l = " + str(l);
    }
    if (u % l != u_l && residues_ok) {
      residues_ok = false;
      residues_cx = "l = " + str(l) + ": u mod l = " + str(u % l) + ", u_l = " + str(u_l);
    }
    if ((u_l + 1) % l == 0 && claim_ok) {
      claim_ok = false;
      claim_cx = "l = " + str(l) + " divides u_l + 1";
    }
  }
  check("l | v for every recorded l", l_divides_ok, l_cx);
  check("u = u_l (mod l)", residues_ok, residues_cx);
  check("l does not divide u_l + 1", claim_ok, claim_cx);
  if (v % 8 != 0 || u >= v) return rep;

  bool inert_ok = true, odd_ok = true, coprime_ok = true;
  std::string inert_cx, odd_cx, coprime_cx;
  for (u64 p : primes_in_progression(sample_x, u, v)) {
    ++rep.witnesses;
    for (std::int64_t d : spec.deltas)
      if (inert_ok && splitting_type(d, p) != Splitting::inert) {
        inert_ok = false;
        inert_cx = "p = " + str(p) + ", delta = " + std::to_string(d);
      }
    const u64 half = (p + 1) / 2;
    if (odd_ok && half % 2 == 0) {
      odd_ok = false;
      odd_cx = "p = " + str(p);
    }
    if (coprime_ok && gcd(half, v) != 1) {
      coprime_ok = false;
      coprime_cx = "p = " + str(p);
    }
  }
  check("every delta inert at sampled p", inert_ok, inert_cx);
  check("(p+1)/2 odd at sampled p", odd_ok, odd_cx);
  check("gcd((p+1)/2, v) = 1 at sampled p", coprime_ok, coprime_cx);
  rep.vacuous = rep.witnesses == 0;
  return rep;
}

nlohmann::json to_json(const ResidueSpec& spec) {
  nlohmann::json per_l = nlohmann::json::array();
  for (const auto& [l, u_l] : spec.per_l) per_l.push_back({{"l", l}, {"u_l", u_l}});
  return {{"deltas", spec.deltas}, {"p0", spec.p0},          {"u", spec.u},
          {"v", spec.v},           {"per_l", std::move(per_l)}, {"literal_v", spec.literal_v}};
}

ResidueSpec residue_spec_from_json(const nlohmann::json& j) {
  ResidueSpec spec;
  spec.deltas = j.at("deltas").get<std::vector<std::int64_t>>();
  spec.p0 = j.at("p0").get<u64>();
  spec.u = j.at("u").get<u64>();
  spec.v = j.at("v").get<u64>();
  spec.literal_v = j.value("literal_v", false);
  for (const auto& e : j.at("per_l")) spec.per_l.push_back({e.at("l").get<u64>(), e.at("u_l").get<u64>()});
  return spec;
}

}  // namespace artin
