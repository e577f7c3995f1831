#include "artin/sievelab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace artin {

namespace {

// Squarefree divisors of n below `limit` that are coprime to v.
void sifted_divisors(const Factorization& f, u64 v, u64 limit, std::vector<u64>& out) {
  out.assign(1, 1);
  for (const auto& pk : f.factors) {
    if (v % pk.prime == 0) continue;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      if (out[i] * pk.prime < limit) out.push_back(out[i] * pk.prime);
  }
}

double pow_ld(u64 base, long double exponent) {
  return static_cast<double>(std::pow(static_cast<long double>(base), exponent));
}

}  // namespace

Ensemble build_ensemble(u64 x, u64 u, u64 v, unsigned workers) {
  if (x < 2) throw std::invalid_argument("build_ensemble: x must be >= 2");
  if (v % 8 != 0) throw std::invalid_argument("build_ensemble: 8 must divide v");
  if (u >= v) throw std::invalid_argument("build_ensemble: need 0 <= u < v");
  if (gcd(u, v) != 1) throw std::invalid_argument("build_ensemble: gcd(u, v) must be 1");
  if (u % 4 != 1) throw std::invalid_argument("build_ensemble: u must be 1 mod 4");
  Ensemble ens{x, u, v, {}, li(static_cast<double>(x)) / static_cast<double>(euler_phi(v))};
  for (u64 p : primes_up_to(x, workers))
    if (p % v == u) ens.members.push_back(p + 1);
  return ens;
}

MuNu mu_nu(u64 d) {
  if (d == 0) throw std::invalid_argument("mu_nu: d must be >= 1");
  const Factorization f = factorize(d);
  const int mu = moebius(f);
  return {mu, f.omega(), mu != 0};
}

DivisorCount a_d_count(const Ensemble& ens, u64 d) {
  if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("a_d_count: d must be squarefree");
  if (gcd(d, ens.v) != 1) throw std::invalid_argument("a_d_count: d must be coprime to v");
  DivisorCount dc{d, 0, 0.0};
  for (u64 a : ens.members)
    if (a % d == 0) ++dc.count;
  dc.remainder = static_cast<double>(dc.count) - ens.X / static_cast<double>(euler_phi(d));
  return dc;
}

RemainderSumReport remainder_sum(const Ensemble& ens, double c2, double a_exp) {
  RemainderSumReport rep;
  const double log_x = std::log(static_cast<double>(ens.x));
  rep.d_limit = std::sqrt(ens.X) / std::pow(log_x, c2);
  rep.comparison = ens.X > 1.0 ? ens.X / std::pow(std::log(ens.X), a_exp) : 0.0;
  if (rep.d_limit <= 1.0) return rep;

  const auto limit = static_cast<u64>(std::ceil(rep.d_limit));  // d < d_limit <=> d < limit
  std::vector<u64> counts(limit, 0);
  std::vector<u64> divisors;
  for (u64 a : ens.members) {
    sifted_divisors(factorize(a), ens.v, limit, divisors);
    for (u64 d : divisors) ++counts[d];
  }
  for (u64 d = 1; d < limit; ++d) {
    if (gcd(d, ens.v) != 1) continue;
    const Factorization f = factorize(d);
    if (moebius(f) == 0) continue;
    DivisorCount dc{d, counts[d], static_cast<double>(counts[d]) - ens.X / static_cast<double>(euler_phi(f))};
    double weight = 1.0;
    for (int i = 0; i < f.omega(); ++i) weight *= 3.0;
    rep.sum += weight * std::abs(dc.remainder);
    ++rep.terms;
    rep.per_d.push_back(dc);
  }
  return rep;
}

double lower_f(double t) {
  if (!(t >= 2.0 && t <= 4.0)) throw std::domain_error("lower_f: t must lie in [2, 4]");
  return static_cast<double>(2.0L * std::exp(kEulerGamma) * std::log(static_cast<long double>(t) - 1.0L) /
                             static_cast<long double>(t));
}

LowerBoundReport sieve_lower_main_term(const Ensemble& ens, double z, bool allow_out_of_range) {
  LowerBoundReport rep;
  rep.z = z;
  rep.in_sieve_range = z > std::pow(ens.X, 0.125) && z < std::pow(ens.X, 0.25);
  if (!rep.in_sieve_range && !allow_out_of_range)
    throw std::domain_error("sieve_lower_main_term: z outside (X^{1/8}, X^{1/4})");
  rep.t = std::log(static_cast<double>(ens.x)) / (2.0 * std::log(z));
  if (rep.t < 2.0) throw std::domain_error("sieve_lower_main_term: log x / (2 log z) < 2");
  rep.t_clamped = rep.t > 4.0;
  rep.t_used = std::min(rep.t, 4.0);
  rep.f_value = lower_f(rep.t_used);
  for (u64 q : primes_up_to(static_cast<u64>(std::ceil(z)))) {
    if (q == 2 || static_cast<double>(q) >= z || ens.v % q == 0) continue;
    const double density = 1.0 / static_cast<double>(q - 1);
    rep.max_density = std::max(rep.max_density, density);
    rep.euler_product *= 1.0 - density;
  }
  rep.main_term = ens.X * rep.euler_product * rep.f_value;
  rep.caveat = "O(1/log x) correction omitted";
  if (rep.t_clamped) rep.caveat += "; t > 4 evaluated at f(4)";
  return rep;
}

u64 s_direct(const Ensemble& ens, double z) {
  u64 survivors = 0;
  for (u64 a : ens.members) {
    bool sifted = false;
    for (const auto& pk : factorize(a).factors) {
      if (static_cast<double>(pk.prime) >= z) break;
      if (ens.v % pk.prime != 0) {
        sifted = true;
        break;
      }
    }
    if (!sifted) ++survivors;
  }
  return survivors;
}

double selberg_constant_product(u64 truncation) {
  long double prod = 1.0L;
  for (u64 p : primes_up_to(truncation)) {
    if (p == 2) continue;
    const long double pm1 = static_cast<long double>(p - 1);
    prod *= 1.0L - 1.0L / (pm1 * pm1);
  }
  return static_cast<double>(prod);
}

double selberg_upper_bound(std::int64_t a, std::int64_t b, u64 x, u64 truncation) {
  if (a == 0 || b == 0) throw std::invalid_argument("selberg_upper_bound: need ab != 0");
  const u64 ua = static_cast<u64>(a < 0 ? -a : a), ub = static_cast<u64>(b < 0 ? -b : b);
  if (gcd(ua, ub) != 1) throw std::invalid_argument("selberg_upper_bound: need gcd(a, b) = 1");
  if (ua % 2 != 0 && ub % 2 != 0) throw std::invalid_argument("selberg_upper_bound: need 2 | ab");
  if (x < 3) throw std::domain_error("selberg_upper_bound: x must be >= 3");
  double local = 1.0;
  for (u64 n : {ua, ub})
    for (const auto& pk : factorize(n).factors)
      if (pk.prime > 2) local *= static_cast<double>(pk.prime - 1) / static_cast<double>(pk.prime - 2);
  const double xd = static_cast<double>(x), lx = std::log(xd);
  return 8.0 * selberg_constant_product(truncation) * local * xd / (lx * lx);
}

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::case1: return "Case1";
    case CaseTag::case2: return "Case2";
    case CaseTag::case3: return "Case3";
    case CaseTag::fail: return "Fail";
  }
  return "?";
}

CaseLabel classify(u64 p, u64 x, double delta) {
  if (!(delta > 0.0 && delta < 0.25)) throw std::domain_error("classify: delta must lie in (0, 1/4)");
  if (!is_prime(p)) throw std::invalid_argument("classify: p must be prime");
  if ((p + 1) % 4 != 2) throw std::invalid_argument("classify: (p+1)/2 must be odd");

  CaseLabel label;
  label.half = (p + 1) / 2;
  label.witnesses = factorize(label.half).expanded();
  const auto& w = label.witnesses;

  const double x_floor = std::pow(static_cast<double>(x), 0.25 - delta);
  label.above_x_threshold = std::all_of(w.begin(), w.end(), [&](u64 q) { return static_cast<double>(q) > x_floor; });

  const long double d = delta, d2 = d * d;
  auto window = [&](std::string lower_name, std::string upper_name, u64 value, long double lo,
                    long double hi) {
    const double bound_lo = pow_ld(p, lo), bound_hi = pow_ld(p, hi);
    const double v = static_cast<double>(value);
    label.checks.push_back({std::move(lower_name), v, bound_lo, v > bound_lo});
    label.checks.push_back({std::move(upper_name), v, bound_hi, v < bound_hi});
  };

  switch (w.size()) {
    case 1:
      label.tag = CaseTag::case1;
      return label;
    case 2:
      window("r1 > p^(1/4-delta)", "r1 < p^(1/2-delta^2)", w[0], 0.25L - d, 0.5L - d2);
      window("r2 > p^(1/2+delta^2)", "r2 < p^(3/4+delta)", w[1], 0.5L + d2, 0.75L + d);
      break;
    case 3:
      window("q1q2 > p^(1/2+delta)", "q1q2 < p^(2/3-delta^2)", w[0] * w[1], 0.5L + d, 2.0L / 3.0L - d2);
      window("q1q3 > p^(7/12-delta+delta^2)", "q1q3 < p^(3/4-2delta)", w[0] * w[2], 7.0L / 12.0L - d + d2,
             0.75L - 2 * d);
      window("q2q3 > p^(7/12+2delta+delta^2)", "q2q3 < p^(3/4+delta)", w[1] * w[2],
             7.0L / 12.0L + 2 * d + d2, 0.75L + d);
      break;
    default:
      label.failure = "four or more factors";
      return label;
  }
  for (const auto& c : label.checks)
    if (!c.ok) {
      label.failure = c.name + " violated";
      return label;
    }
  label.tag = w.size() == 2 ? CaseTag::case2 : CaseTag::case3;
  return label;
}

AlmostPrimeCensus almost_prime_census(const Ensemble& ens, double delta) {
  AlmostPrimeCensus census;
  const double floor = std::pow(static_cast<double>(ens.x), 0.25 - delta);
  for (u64 a : ens.members) {
    const u64 p = a - 1;
    ++census.total;
    const CaseLabel label = classify(p, ens.x, delta);
    ++census.per_case[static_cast<int>(label.tag)];
    if (label.tag != CaseTag::fail) ++census.cases_1_to_3;
    if (label.witnesses.size() == 4 &&
        std::all_of(label.witnesses.begin(), label.witnesses.end(),
                    [&](u64 q) { return static_cast<double>(q) > floor; }))
      ++census.four_large;
  }
  return census;
}

}  // namespace artin
