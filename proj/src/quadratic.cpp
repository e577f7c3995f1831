#include "artin/quadratic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "artin/primetools.hpp"

namespace artin {

namespace {

// Sign of x + y*sqrt(d).
int sign_of_surd(const mpz_class& x, const mpz_class& y, std::int64_t d) {
  const int sx = sgn(x), sy = sgn(y);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // Opposite signs: compare x^2 with d y^2.
  mpz_class lhs = x * x, rhs = y * y * d;
  int cmp_sq = cmp(lhs, rhs);
  return cmp_sq == 0 ? 0 : (cmp_sq > 0 ? sx : sy);
}

}  // namespace

std::int64_t discriminant(std::int64_t d) {
  if (d <= 1) throw std::invalid_argument("discriminant: d must be > 1");
  if (!is_squarefree(static_cast<u64>(d)))
    throw std::invalid_argument("discriminant: d = " + std::to_string(d) + " is not squarefree");
  return d % 4 == 1 ? d : 4 * d;
}

FieldSpec FieldSpec::from_d(std::int64_t d) {
  FieldSpec f;
  f.delta = discriminant(d);
  f.d = d;
  f.half_basis = d % 4 == 1;
  return f;
}

FieldSpec FieldSpec::from_discriminant(std::int64_t delta) {
  if (delta <= 1) throw std::invalid_argument("discriminant must be > 1");
  if (delta % 4 == 1 && is_squarefree(static_cast<u64>(delta))) return from_d(delta);
  if (delta % 4 == 0) {
    const std::int64_t d = delta / 4;
    if ((d % 4 == 2 || d % 4 == 3) && is_squarefree(static_cast<u64>(d))) return from_d(d);
  }
  throw std::invalid_argument(std::to_string(delta) + " is not a real quadratic discriminant");
}

RingElement RingElement::from_sqrt_coords(const FieldSpec& field, const mpz_class& x,
                                          const mpz_class& y) {
  if (!field.half_basis) return RingElement(field, x, y);
  // x + y sqrt d = (x - y) + 2y w
  return RingElement(field, x - y, 2 * y);
}

std::pair<mpz_class, mpz_class> RingElement::doubled_sqrt_coords() const {
  if (field_.half_basis) return {2 * a_ + b_, b_};
  return {2 * a_, 2 * b_};
}

void RingElement::check_field(const RingElement& o) const {
  if (!(field_ == o.field_)) throw std::invalid_argument("ring elements from different fields");
}

RingElement RingElement::operator+(const RingElement& o) const {
  check_field(o);
  return {field_, a_ + o.a_, b_ + o.b_};
}

RingElement RingElement::operator-(const RingElement& o) const {
  check_field(o);
  return {field_, a_ - o.a_, b_ - o.b_};
}

RingElement RingElement::operator-() const { return {field_, -a_, -b_}; }

RingElement RingElement::operator*(const RingElement& o) const {
  check_field(o);
  const mpz_class bb = b_ * o.b_;
  if (field_.half_basis) {
    // w^2 = w + (d - 1)/4
    const std::int64_t k = (field_.d - 1) / 4;
    return {field_, a_ * o.a_ + bb * k, a_ * o.b_ + b_ * o.a_ + bb};
  }
  return {field_, a_ * o.a_ + bb * field_.d, a_ * o.b_ + b_ * o.a_};
}

RingElement RingElement::conjugate() const {
  // conj(w) = 1 - w in the half basis, -w otherwise.
  if (field_.half_basis) return {field_, a_ + b_, -b_};
  return {field_, a_, -b_};
}

int RingElement::compare_embedding(long c) const {
  auto [x, y] = doubled_sqrt_coords();
  return sign_of_surd(x - 2 * c, y, field_.d);
}

double RingElement::approx() const {
  auto [x, y] = doubled_sqrt_coords();
  return (x.get_d() + y.get_d() * std::sqrt(static_cast<double>(field_.d))) / 2.0;
}

std::string RingElement::to_string() const {
  std::ostringstream os;
  auto [x, y] = doubled_sqrt_coords();
  if (field_.half_basis && (x % 2 != 0))
    os << "(" << x << (y < 0 ? "-" : "+") << abs(y) << "*sqrt(" << field_.d << "))/2";
  else
    os << x / 2 << (y < 0 ? "-" : "+") << abs(y) / 2 << "*sqrt(" << field_.d << ")";
  return os.str();
}

mpz_class norm(const RingElement& e) {
  const auto& f = e.field();
  if (f.half_basis) return e.a() * e.a() + e.a() * e.b() - e.b() * e.b() * ((f.d - 1) / 4);
  return e.a() * e.a() - e.b() * e.b() * f.d;
}

mpz_class trace(const RingElement& e) {
  return e.field().half_basis ? mpz_class(2 * e.a() + e.b()) : mpz_class(2 * e.a());
}

UnitElement UnitElement::from_element(RingElement e) {
  const mpz_class n = artin::norm(e);
  if (n != 1 && n != -1) throw std::invalid_argument(e.to_string() + " is not a unit");
  if (e.b() == 0) throw std::invalid_argument("+-1 is a root of unity, not an admissible unit");
  return {std::move(e), static_cast<int>(n.get_si())};
}

UnitElement fundamental_unit(std::int64_t d) {
  const FieldSpec field = FieldSpec::from_d(d);

  // Continued fraction of sqrt d: m' = q a - m, q' = (d - m'^2)/q,
  // a' = floor((a0 + m')/q'). The period closes at the first q = 1.
  const mpz_class dz = d;
  const mpz_class a0 = sqrt(dz);
  mpz_class m = 0, q = 1, a = a0;
  mpz_class h_prev = 1, h = a0, k_prev = 0, k = 1;
  for (;;) {
    m = q * a - m;
    q = (dz - m * m) / q;
    a = (a0 + m) / q;
    if (q == 1) break;
    mpz_class h_next = a * h + h_prev, k_next = a * k + k_prev;
    h_prev = std::exchange(h, h_next);
    k_prev = std::exchange(k, k_next);
  }
  RingElement eta = RingElement::from_sqrt_coords(field, h, k);

  if (field.half_basis) {
    // The unit group of Z[sqrt d] has index 1 or 3 in the full unit group.
    // Look for eps with eps^3 = eta: its trace t solves t^3 - 3 N t = T.
    const mpz_class big_t = trace(eta);
    const long n = norm(eta).get_si();
    mpz_class t;
    mpz_root(t.get_mpz_t(), big_t.get_mpz_t(), 3);
    for (mpz_class cand = t - 1; cand <= t + 1; ++cand) {
      if (cand <= 0 || cand * cand * cand - 3 * n * cand != big_t) continue;
      const mpz_class num = cand * cand - 4 * n;
      if (num % d != 0) continue;
      const mpz_class y2 = num / d;
      if (!is_perfect_square(y2)) continue;
      const mpz_class y = sqrt(y2);
      if ((cand - y) % 2 != 0) continue;
      RingElement eps(field, (cand - y) / 2, y);
      if (eps * eps * eps == eta) {
        eta = eps;
        break;
      }
    }
  }
  return UnitElement::from_element(std::move(eta));
}

UnitElement to_norm_plus_one(const UnitElement& u) {
  if (u.norm == 1) return u;
  return UnitElement::from_element(u.element * u.element);
}

bool is_perfect_square(const mpz_class& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_perfect_square(std::int64_t n) { return is_perfect_square(mpz_class(static_cast<long>(n))); }

bool multiplicatively_independent(std::span<const std::int64_t> ns) {
  std::vector<Factorization> facs;
  std::vector<u64> primes;
  for (std::int64_t n : ns) {
    if (n == 0 || n == 1 || n == -1)
      throw std::invalid_argument("multiplicatively_independent: 0 and +-1 are not admissible");
    facs.push_back(factorize(static_cast<u64>(n < 0 ? -n : n)));
    for (const auto& pk : facs.back().factors) primes.push_back(pk.prime);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  // Rows: one per input; columns: prime exponents.
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& f : facs) {
    std::vector<mpq_class> row(primes.size(), 0);
    for (const auto& [p, e] : f.factors) {
      auto it = std::lower_bound(primes.begin(), primes.end(), p);
      row[static_cast<std::size_t>(it - primes.begin())] = e;
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < primes.size() && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const mpq_class factor = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < primes.size(); ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank == rows.size();
}

HypothesisCheck theorem_hypothesis_check(std::span<const std::int64_t> deltas) {
  if (deltas.empty()) throw std::invalid_argument("theorem_hypothesis_check: no discriminants");
  if (deltas.size() > 30) throw std::invalid_argument("theorem_hypothesis_check: too many discriminants");
  for (std::int64_t delta : deltas) {
    if (delta == 3) throw std::invalid_argument("discriminant 3 is excluded");
    if (delta <= 1) throw std::invalid_argument("discriminants must be > 1");
  }
  const std::uint32_t masks = std::uint32_t{1} << deltas.size();
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    mpz_class base = 1;
    for (std::size_t i = 0; i < deltas.size(); ++i)
      if (mask >> i & 1) base *= static_cast<long>(deltas[i]);
    for (int a1 = 0; a1 <= 1; ++a1)
      for (int a2 = 0; a2 <= 1; ++a2) {
        mpz_class n = base * (a2 ? 3 : 1) * (a1 ? -1 : 1);
        if (!is_perfect_square(n)) continue;
        SquareWitness w{a1, a2, {}, n, sqrt(n)};
        for (std::size_t i = 0; i < deltas.size(); ++i) w.b.push_back(mask >> i & 1);
        return {false, std::move(w)};
      }
  }
  return {true, std::nullopt};
}

}  // namespace artin
