// Builds a progression p = u (mod v) whose primes are simultaneously inert in
// every field Q(sqrt delta_i), with (p + 1)/2 odd and coprime to v.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "artin/primetools.hpp"

namespace artin {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSolutionWithinBound : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class HypothesisViolated : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

struct LResidue {
  u64 l = 0;
  u64 u_l = 0;  // p0 or 4 p0, reduced mod l
  bool operator==(const LResidue&) const = default;
};

struct ResidueSpec {
  std::vector<std::int64_t> deltas;
  u64 p0 = 0;
  u64 u = 0;
  u64 v = 0;
  std::vector<LResidue> per_l;  // ascending l
  bool literal_v = false;
};

/// True when p is an odd prime with (-1/p) = (3/p) = 1 and (delta_i/p) = -1 for all i.
bool satisfies_p0_conditions(std::span<const std::int64_t> deltas, u64 p);

/// Smallest prime p0 <= search_bound satisfying the simultaneous Legendre
/// conditions. Throws HypothesisViolated when the square-product hypothesis
/// fails (unless `force`), NoSolutionWithinBound when the search is exhausted.
u64 find_p0(std::span<const std::int64_t> deltas, u64 search_bound = 10'000'000, bool force = false);

/// Odd primes dividing prod delta_i, ascending.
std::vector<u64> odd_prime_support(std::span<const std::int64_t> deltas);

/// v = 8 * (product of odd primes dividing the deltas), or 8 * prod delta_i when
/// `literal_v`; u is the least non-negative solution of u = p0 (mod 8) and
/// u = u_l (mod l). Throws ConstructionError if any invariant fails.
ResidueSpec build_residue_spec(std::span<const std::int64_t> deltas, u64 p0, bool literal_v = false);

struct PropertyCheck {
  std::string name;
  bool ok = true;
  std::string counterexample;
};

struct ValidationReport {
  std::vector<PropertyCheck> checks;
  u64 witnesses = 0;  // sampled primes p = u (mod v)
  bool vacuous = false;

  bool passed() const;
  const PropertyCheck* find(std::string_view name) const;
};

/// Structural invariants of `spec` plus, for every prime p = u (mod v) up to
/// sample_x: each delta inert at p, and (p+1)/2 odd and coprime to v.
ValidationReport validate_spec(const ResidueSpec& spec, u64 sample_x);

/// Sorted-key JSON with decimal integers.
nlohmann::json to_json(const ResidueSpec& spec);
ResidueSpec residue_spec_from_json(const nlohmann::json& j);

}  // namespace artin
