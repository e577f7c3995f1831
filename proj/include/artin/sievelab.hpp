// Finite versions of the sieve quantities over A = {p + 1 : p <= x, p = u (mod v)}.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "artin/primetools.hpp"

namespace artin {

/// Euler-Mascheroni constant to 20 significant digits.
inline constexpr long double kEulerGamma = 0.57721566490153286061L;

struct Ensemble {
  u64 x = 0;
  u64 u = 0;
  u64 v = 1;
  std::vector<u64> members;  // ascending
  double X = 0.0;            // Li(x) / phi(v)
};

/// Requires gcd(u, v) = 1, 8 | v, u = 1 (mod 4), u < v and x >= 2.
Ensemble build_ensemble(u64 x, u64 u, u64 v, unsigned workers = 1);

struct MuNu {
  int mu = 0;
  int nu = 0;
  bool squarefree = false;
};

/// mu(d) and the number of prime factors nu(d); squarefree = false when mu = 0.
MuNu mu_nu(u64 d);

struct DivisorCount {
  u64 d = 1;
  u64 count = 0;          // |A_d|
  double remainder = 0.0; // R_d = |A_d| - X / phi(d)
};

/// Requires d squarefree and coprime to v.
DivisorCount a_d_count(const Ensemble& ens, u64 d);

struct RemainderSumReport {
  double d_limit = 0.0;   // sum runs over d < d_limit
  u64 terms = 0;          // squarefree d coprime to v in range
  double sum = 0.0;       // sum mu^2(d) 3^nu(d) |R_d|
  double comparison = 0.0;  // X / log^A X
  std::vector<DivisorCount> per_d;
};

/// Exact finite value of sum over d < X^{1/2} / (log x)^{c2}, (d, v) = 1, of
/// mu^2(d) 3^{nu(d)} |R_d|. Terms are accumulated in ascending d.
RemainderSumReport remainder_sum(const Ensemble& ens, double c2, double a_exp);

/// 2 e^gamma log(t - 1) / t on [2, 4]; std::domain_error elsewhere.
double lower_f(double t);

struct LowerBoundReport {
  double z = 0.0;
  double t = 0.0;           // log x / (2 log z)
  double t_used = 0.0;      // min(t, 4)
  bool t_clamped = false;
  bool in_sieve_range = false;  // X^{1/8} < z < X^{1/4}
  double euler_product = 1.0;   // prod over 2 < q < z, q not dividing v, of (1 - 1/(q-1))
  double max_density = 0.0;     // max of 1/(q-1) over the sifting primes
  double f_value = 0.0;
  double main_term = 0.0;
  std::string caveat;
};

/// X * prod_{2<q<z, q∤v} (1 - 1/(q-1)) * f(log x / (2 log z)), without the
/// O(1/log x) correction. Outside X^{1/8} < z < X^{1/4} this throws unless
/// `allow_out_of_range`. f is increasing, so t > 4 is evaluated at f(4).
LowerBoundReport sieve_lower_main_term(const Ensemble& ens, double z, bool allow_out_of_range = false);

/// Members with no prime factor q < z except primes dividing v.
u64 s_direct(const Ensemble& ens, double z);

/// prod over 2 < p <= truncation of (1 - 1/(p-1)^2).
double selberg_constant_product(u64 truncation);

/// 8 C prod_{2<p|ab} (p-1)/(p-2) x / log^2 x with C the truncated product
/// above; the 1 + O(log log x / log x) factor is omitted. Requires ab != 0,
/// gcd(a, b) = 1 and 2 | ab.
double selberg_upper_bound(std::int64_t a, std::int64_t b, u64 x, u64 truncation = 1'000'000);

enum class CaseTag { case1, case2, case3, fail };
std::string_view to_string(CaseTag tag);

struct WindowCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// Factor pattern of (p+1)/2 against the final almost-prime case list.
struct CaseLabel {
  CaseTag tag = CaseTag::fail;
  u64 half = 0;                 // (p+1)/2
  std::vector<u64> witnesses;   // prime factors with multiplicity, ascending
  std::vector<WindowCheck> checks;
  std::string failure;          // first violated constraint, empty unless fail
  bool above_x_threshold = false;  // every odd prime factor > x^{1/4-delta}
};

/// Windows are exponents of p. Requires 0 < delta < 1/4 and (p+1)/2 odd.
/// `x` only feeds the informational check that every factor exceeds x^{1/4-delta}.
CaseLabel classify(u64 p, u64 x, double delta);

struct AlmostPrimeCensus {
  u64 total = 0;
  u64 four_large = 0;   // (p+1)/2 has exactly four prime factors, all > x^{1/4-delta}
  u64 cases_1_to_3 = 0;
  u64 per_case[4] = {0, 0, 0, 0};
};

AlmostPrimeCensus almost_prime_census(const Ensemble& ens, double delta);

}  // namespace artin
