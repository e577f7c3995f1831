// Residue field O/(p) for an inert prime p and its norm-one subgroup of
// order p + 1.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "artin/primetools.hpp"
#include "artin/quadratic.hpp"

namespace artin {

/// Legendre symbol (a / n) for an odd prime n.
int kronecker(std::int64_t a, u64 n);

enum class Splitting { inert, split, ramified };
std::string_view to_string(Splitting s);

/// ramified iff p | delta, inert iff (delta / p) = -1, split otherwise.
/// p = 2 is decided by delta mod 8.
Splitting splitting_type(std::int64_t delta, u64 p);

/// A prime p certified inert in `field`, with p + 1 factored once for reuse
/// by every order computation at p.
struct InertContext {
  u64 p = 0;
  FieldSpec field;
  Factorization p_plus_1;
  u64 d_mod_p = 0;
  u64 inv2 = 0;

  /// Throws std::invalid_argument for p = 2, composite p, or p not inert.
  /// A precomputed factorization of p + 1 may be passed in for reuse.
  static std::shared_ptr<const InertContext> make(const FieldSpec& field, u64 p,
                                                  std::optional<Factorization> p_plus_1 = std::nullopt);
};

using ContextPtr = std::shared_ptr<const InertContext>;

/// x + y*sqrt(d) reduced mod p.
struct ResidueElement {
  ContextPtr ctx;
  u64 x = 0;
  u64 y = 0;

  ResidueElement operator*(const ResidueElement& o) const;
  ResidueElement operator+(const ResidueElement& o) const;
  ResidueElement operator-() const;
  bool operator==(const ResidueElement& o) const { return x == o.x && y == o.y; }
  ResidueElement pow(u64 e) const;
  ResidueElement conjugate() const;
  bool is_zero() const { return x == 0 && y == 0; }
  bool is_one() const { return x == 1 && y == 0; }
  bool is_minus_one() const { return y == 0 && x + 1 == ctx->p; }
};

ResidueElement make_residue(const ContextPtr& ctx, u64 x, u64 y);

/// Image of e in O/(p); half-basis coordinates go through 2^{-1} mod p.
ResidueElement reduce(const RingElement& e, const ContextPtr& ctx);

/// x^2 - d y^2 mod p.
u64 residue_norm(const ResidueElement& r);

/// Exact order of a norm-one residue. Starts at p + 1 and strips each prime
/// q | p + 1 while r^{t/q} = 1. Throws std::invalid_argument if norm != 1.
u64 kernel_order(const ResidueElement& r);

/// c in {+1, -1} with (c u)^{(p+1)/2} = -1. Requires p = 1 (mod 4) and a
/// norm-one reduction of u.
int sign_choice(const UnitElement& u, const ContextPtr& ctx);

/// lcm of the orders; all inputs must share one context and have norm one.
u64 joint_order(std::span<const ResidueElement> rs);

struct PrimitivityResult {
  bool primitive = false;
  int sign = 1;
  u64 order = 0;
};

/// Whether c*u has order p + 1, c chosen by sign_choice.
PrimitivityResult is_primitive(const UnitElement& u, const ContextPtr& ctx);

}  // namespace artin
