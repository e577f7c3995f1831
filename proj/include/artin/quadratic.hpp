// Exact arithmetic in the ring of integers of a real quadratic field.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace artin {

/// Q(sqrt d) with d > 1 squarefree. The integral basis is {1, w} where
/// w = (1 + sqrt d) / 2 when d = 1 (mod 4) and w = sqrt d otherwise.
struct FieldSpec {
  std::int64_t d = 0;
  std::int64_t delta = 0;
  bool half_basis = false;

  static FieldSpec from_d(std::int64_t d);
  /// Inverse of the discriminant rule; rejects integers that are not a
  /// fundamental discriminant of a real quadratic field.
  static FieldSpec from_discriminant(std::int64_t delta);

  bool operator==(const FieldSpec&) const = default;
};

/// delta = d when d = 1 (mod 4), else 4d. Throws std::invalid_argument when
/// d <= 1 or d is not squarefree.
std::int64_t discriminant(std::int64_t d);

/// a + b*w in the integral basis of `field`.
class RingElement {
 public:
  RingElement() = default;
  RingElement(FieldSpec field, mpz_class a, mpz_class b)
      : field_(field), a_(std::move(a)), b_(std::move(b)) {}

  /// The element x + y*sqrt(d); throws if it is not integral.
  static RingElement from_sqrt_coords(const FieldSpec& field, const mpz_class& x,
                                      const mpz_class& y);

  const FieldSpec& field() const { return field_; }
  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }

  /// Coordinates (X, Y) with element = (X + Y*sqrt d) / 2.
  std::pair<mpz_class, mpz_class> doubled_sqrt_coords() const;

  RingElement operator+(const RingElement& o) const;
  RingElement operator-(const RingElement& o) const;
  RingElement operator-() const;
  RingElement operator*(const RingElement& o) const;
  RingElement conjugate() const;

  bool operator==(const RingElement& o) const {
    return field_ == o.field_ && a_ == o.a_ && b_ == o.b_;
  }

  /// Sign of the real embedding minus `c`.
  int compare_embedding(long c) const;
  double approx() const;
  std::string to_string() const;

 private:
  void check_field(const RingElement& o) const;

  FieldSpec field_;
  mpz_class a_;
  mpz_class b_;
};

mpz_class norm(const RingElement& e);
mpz_class trace(const RingElement& e);

struct UnitElement {
  RingElement element;
  int norm = 1;

  /// Validates |norm| = 1 and that the element is not +-1.
  static UnitElement from_element(RingElement e);
};

/// Smallest unit > 1 of the ring of integers of Q(sqrt d).
UnitElement fundamental_unit(std::int64_t d);

/// u when norm(u) = +1, otherwise u^2.
UnitElement to_norm_plus_one(const UnitElement& u);

/// True iff no nontrivial integer relation prod n_i^e_i = 1 exists. Signs
/// carry no rank: any relation involving -1 squares to one free of it.
/// Throws std::invalid_argument for 0 or +-1 entries.
bool multiplicatively_independent(std::span<const std::int64_t> ns);

bool is_perfect_square(const mpz_class& n);
bool is_perfect_square(std::int64_t n);

struct SquareWitness {
  int a1 = 0;              // exponent of -1
  int a2 = 0;              // exponent of 3
  std::vector<int> b;      // exponents of the discriminants
  mpz_class product;
  mpz_class root;
};

struct HypothesisCheck {
  bool holds = true;
  std::optional<SquareWitness> witness;
};

/// Checks that (-1)^a1 3^a2 prod delta_i^b_i is never a square when sum b_i
/// is odd. Returns the first violating exponent vector otherwise, enumerating
/// b by increasing bitmask and then (a1, a2). Rejects delta = 3 and delta <= 1.
HypothesisCheck theorem_hypothesis_check(std::span<const std::int64_t> deltas);

}  // namespace artin
