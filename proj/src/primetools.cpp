#include "artin/primetools.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace artin {

namespace {

constexpr u64 kTrialBound = 1'000'000;
constexpr u64 kWindow = u64{1} << 16;

std::vector<u64> simple_sieve(u64 x) {
  std::vector<u64> out;
  if (x < 2) return out;
  std::vector<bool> composite(x + 1, false);
  for (u64 i = 2; i <= x; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= x; j += i) composite[j] = true;
  }
  return out;
}

const std::vector<u64>& trial_primes() {
  static const std::vector<u64> table = simple_sieve(kTrialBound);
  return table;
}

u64 isqrt(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool miller_rabin_round(u64 n, u64 d, int s, u64 a) {
  u64 x = powmod(a % n, d, n);
  if (x == 0 || x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

u64 brent_rho(u64 n, u64 c) {
  u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
  const u64 block = 128;
  auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += block) {
      ys = y;
      for (u64 i = 0; i < std::min(block, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = gcd(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split_composite(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 c = 1;; ++c) {
    u64 d = brent_rho(n, c);
    if (d != n && d != 1) {
      split_composite(d, out);
      split_composite(n / d, out);
      return;
    }
  }
}

Factorization collect(std::vector<u64> primes) {
  std::sort(primes.begin(), primes.end());
  Factorization f;
  for (u64 p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p)
      ++f.factors.back().multiplicity;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

}  // namespace

u64 Factorization::value() const {
  u64 v = 1;
  for (const auto& [p, k] : factors)
    for (int i = 0; i < k; ++i) {
      if (v > std::numeric_limits<u64>::max() / p)
        throw std::overflow_error("factorization value exceeds 64 bits");
      v *= p;
    }
  return v;
}

int Factorization::omega_big() const {
  int total = 0;
  for (const auto& pk : factors) total += pk.multiplicity;
  return total;
}

std::vector<u64> Factorization::expanded() const {
  std::vector<u64> out;
  for (const auto& [p, k] : factors) out.insert(out.end(), k, p);
  return out;
}

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  u64 g = std::gcd(a, b);
  if (a / g > std::numeric_limits<u64>::max() / b)
    throw std::overflow_error("lcm exceeds 64 bits");
  return a / g * b;
}

u64 invmod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::domain_error("invmod: not invertible");
  if (t < 0) t += static_cast<i64>(m);
  return static_cast<u64>(t);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (u64 p : kBases) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases)
    if (!miller_rabin_round(n, d, s, a)) return false;
  return true;
}

std::vector<u64> primes_in_window(u64 lo, u64 hi, std::span<const u64> base) {
  std::vector<u64> out;
  if (hi <= lo || hi <= 2) return out;
  lo = std::max<u64>(lo, 2);
  std::vector<char> composite(hi - lo, 0);
  for (u64 p : base) {
    if (p * p >= hi) break;
    u64 start = std::max(p * p, (lo + p - 1) / p * p);
    for (u64 j = start; j < hi; j += p) composite[j - lo] = 1;
  }
  for (u64 i = 0; i < hi - lo; ++i)
    if (!composite[i]) out.push_back(lo + i);
  return out;
}

std::vector<u64> primes_up_to(u64 x, unsigned workers) {
  if (x < 2) return {};
  const auto base = simple_sieve(isqrt(x));
  const u64 windows = x / kWindow + 1;
  std::vector<std::vector<u64>> chunks(windows);
  auto run = [&](u64 first) {
    for (u64 w = first; w < windows; w += std::max(1u, workers)) {
      u64 lo = w * kWindow;
      u64 hi = std::min(x + 1, lo + kWindow);
      chunks[w] = primes_in_window(lo, hi, base);
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run, t);
  }
  std::vector<u64> out;
  for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

std::vector<u64> primes_in_progression(u64 x, u64 u, u64 v) {
  if (v == 0 || u >= v) throw std::invalid_argument("primes_in_progression: need v >= 1, 0 <= u < v");
  std::vector<u64> out;
  for (u64 p : primes_up_to(x))
    if (p % v == u) out.push_back(p);
  return out;
}

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  std::vector<u64> primes;
  for (u64 p : trial_primes()) {
    if (p * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  split_composite(n, primes);
  return collect(std::move(primes));
}

int omega_big(u64 n) { return factorize(n).omega_big(); }

u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, k] : f.factors) {
    phi *= p - 1;
    for (int i = 1; i < k; ++i) phi *= p;
  }
  return phi;
}

u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

int moebius(const Factorization& f) {
  for (const auto& pk : f.factors)
    if (pk.multiplicity > 1) return 0;
  return f.factors.size() % 2 ? -1 : 1;
}

bool is_squarefree(u64 n) { return n != 0 && moebius(factorize(n)) != 0; }

double li_increment(double a, double b) {
  if (a < 2.0 || b < a) throw std::domain_error("li_increment: need 2 <= a <= b");
  if (a == b) return 0.0;
  // Substituting t = e^s makes the integrand e^s / s, which is smooth.
  auto g = [](double s) { return std::exp(s) / s; };
  const double la = std::log(a), lb = std::log(b);
  if (lb - la < 0.05)
    return boost::math::quadrature::gauss<double, 20>::integrate(g, la, lb);
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, la, lb, 20, 1e-13, &err);
}

double li(double x) {
  if (!(x >= 2.0)) throw std::domain_error("li: x must be >= 2");
  return li_increment(2.0, x);
}

ProgressionCount pi_count(u64 y, u64 m, u64 s) {
  if (m == 0) throw std::invalid_argument("pi_count: modulus must be >= 1");
  if (y < 2) throw std::domain_error("pi_count: y must be >= 2");
  s %= m;
  if (gcd(s, m) != 1) throw std::invalid_argument("pi_count: residue not coprime to modulus");
  ProgressionCount pc{y, m, s, 0, li(static_cast<double>(y)), 0.0};
  for (u64 p : primes_up_to(y))
    if (p % m == s) ++pc.count;
  pc.error = static_cast<double>(pc.count) - pc.li_term / static_cast<double>(euler_phi(m));
  return pc;
}

double e_max(u64 x, u64 m) {
  if (m == 0) throw std::invalid_argument("e_max: modulus must be >= 1");
  if (x < 2) return 0.0;
  std::vector<u64> residues;
  for (u64 s = 0; s < m; ++s)
    if (gcd(s, m) == 1) residues.push_back(s);
  const double phi = static_cast<double>(residues.size());
  std::vector<u64> count(m, 0);
  double best = 0.0, li_prev = 0.0, y_prev = 2.0;
  auto evaluate = [&](double y) {
    li_prev += li_increment(y_prev, y);
    y_prev = y;
    const double main = li_prev / phi;
    for (u64 s : residues)
      best = std::max(best, std::abs(static_cast<double>(count[s]) - main));
  };
  for (u64 p : primes_up_to(x)) {
    ++count[p % m];
    evaluate(static_cast<double>(p));
  }
  evaluate(static_cast<double>(x));
  return best;
}

double mertens_window_sum(u64 x, double beta, double alpha) {
  if (!(beta > 0.0 && beta < alpha && alpha <= 1.0))
    throw std::domain_error("mertens_window_sum: need 0 < beta < alpha <= 1");
  const double xd = static_cast<double>(x);
  const double lo = std::pow(xd, beta), hi = std::pow(xd, alpha);
  double sum = 0.0;
  for (u64 p : primes_up_to(static_cast<u64>(std::floor(hi)))) {
    const double pd = static_cast<double>(p);
    if (pd > lo && pd < hi) sum += 1.0 / pd;
  }
  return sum;
}

}  // namespace artin
