// Prime enumeration, factorization and the counting functions used by the
// sieve and order computations.
#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace artin {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

struct PrimePower {
  u64 prime = 0;
  int multiplicity = 0;

  auto operator<=>(const PrimePower&) const = default;
};

/// Prime factorization with strictly increasing primes. Empty for n = 1.
struct Factorization {
  std::vector<PrimePower> factors;

  /// Product of prime^multiplicity. Throws std::overflow_error past 2^64.
  u64 value() const;
  /// Number of prime factors counted with multiplicity.
  int omega_big() const;
  /// Number of distinct prime factors.
  int omega() const { return static_cast<int>(factors.size()); }
  bool is_prime() const {
    return factors.size() == 1 && factors.front().multiplicity == 1;
  }
  /// Prime factors listed with multiplicity, ascending.
  std::vector<u64> expanded() const;

  bool operator==(const Factorization&) const = default;
};

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
u64 powmod(u64 base, u64 exp, u64 m);
u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);

/// Deterministic Miller-Rabin (first 13 prime bases; exact below 3.3e24).
bool is_prime(u64 n);

/// Primes <= x, ascending. The segmented sieve splits [0, x] into disjoint
/// windows that are sieved independently and concatenated in order.
std::vector<u64> primes_up_to(u64 x, unsigned workers = 1);

/// Primes in [lo, hi). `base` must contain every prime <= sqrt(hi - 1).
std::vector<u64> primes_in_window(u64 lo, u64 hi, std::span<const u64> base);

/// Primes p <= x with p = u (mod v). Requires v >= 1, 0 <= u < v.
std::vector<u64> primes_in_progression(u64 x, u64 u, u64 v);

/// Trial division up to 10^6, then Brent-Pollard rho with a fixed sequence of
/// polynomial constants. Deterministic.
Factorization factorize(u64 n);

int omega_big(u64 n);
u64 euler_phi(u64 n);
u64 euler_phi(const Factorization& f);
/// Squarefree n: (-1)^k with k prime factors; 0 otherwise.
int moebius(const Factorization& f);
bool is_squarefree(u64 n);

/// Li(x) = integral from 2 to x of dt / log t. Throws std::domain_error for x < 2.
double li(double x);
/// Integral from a to b of dt / log t for 2 <= a <= b.
double li_increment(double a, double b);

struct ProgressionCount {
  u64 y = 0;
  u64 m = 1;
  u64 s = 0;
  u64 count = 0;
  double li_term = 0.0;  // Li(y)
  double error = 0.0;    // count - Li(y) / phi(m)
};

/// Number of primes p <= y with p = s (mod m), and its deviation from
/// Li(y)/phi(m). Requires gcd(s, m) = 1 and y >= 2.
ProgressionCount pi_count(u64 y, u64 m, u64 s);

/// max over residues s coprime to m and grid points y of |E(y; m, s)|, where
/// the grid is every prime y <= x together with y = x.
double e_max(u64 x, u64 m);

/// Sum of 1/p over primes x^beta < p < x^alpha. Requires 0 < beta < alpha <= 1.
double mertens_window_sum(u64 x, double beta, double alpha);

}  // namespace artin
