#include "artin/modfield.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace artin {

namespace {

u64 mod_signed(std::int64_t a, u64 n) {
  const auto m = static_cast<std::int64_t>(n);
  std::int64_t r = a % m;
  return static_cast<u64>(r < 0 ? r + m : r);
}

u64 mod_mpz(const mpz_class& a, u64 n) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), n);
  return r.get_ui();
}

void require_same(const ResidueElement& a, const ResidueElement& b) {
  if (a.ctx != b.ctx && (a.ctx->p != b.ctx->p || !(a.ctx->field == b.ctx->field)))
    throw std::invalid_argument("residues from different inert contexts");
}

}  // namespace

int kronecker(std::int64_t a, u64 n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("kronecker: modulus must be an odd prime");
  // Jacobi symbol by reciprocity; equals the Legendre symbol for prime n.
  u64 top = mod_signed(a, n), bottom = n;
  int result = 1;
  while (top != 0) {
    while (top % 2 == 0) {
      top /= 2;
      const u64 r = bottom % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(top, bottom);
    if (top % 4 == 3 && bottom % 4 == 3) result = -result;
    top %= bottom;
  }
  return bottom == 1 ? result : 0;
}

std::string_view to_string(Splitting s) {
  switch (s) {
    case Splitting::inert: return "inert";
    case Splitting::split: return "split";
    case Splitting::ramified: return "ramified";
  }
  return "?";
}

Splitting splitting_type(std::int64_t delta, u64 p) {
  if (p == 2) {
    if (delta % 2 == 0) return Splitting::ramified;
    return mod_signed(delta, 8) == 5 ? Splitting::inert : Splitting::split;
  }
  if (mod_signed(delta, p) == 0) return Splitting::ramified;
  return kronecker(delta, p) == -1 ? Splitting::inert : Splitting::split;
}

std::shared_ptr<const InertContext> InertContext::make(const FieldSpec& field, u64 p,
                                                      std::optional<Factorization> p_plus_1) {
  if (p == 2) throw std::invalid_argument("inert context: p = 2 is not supported");
  if (!is_prime(p)) throw std::invalid_argument("inert context: " + std::to_string(p) + " is not prime");
  if (splitting_type(field.delta, p) != Splitting::inert)
    throw std::invalid_argument("inert context: p = " + std::to_string(p) + " is not inert for delta = " +
                                std::to_string(field.delta));
  auto ctx = std::make_shared<InertContext>();
  ctx->p = p;
  ctx->field = field;
  if (p_plus_1) {
    if (p_plus_1->value() != p + 1) throw std::invalid_argument("inert context: factorization is not of p + 1");
    ctx->p_plus_1 = std::move(*p_plus_1);
  } else {
    ctx->p_plus_1 = factorize(p + 1);
  }
  ctx->d_mod_p = mod_signed(field.d, p);
  ctx->inv2 = (p + 1) / 2;
  return ctx;
}

ResidueElement make_residue(const ContextPtr& ctx, u64 x, u64 y) {
  return {ctx, x % ctx->p, y % ctx->p};
}

ResidueElement ResidueElement::operator*(const ResidueElement& o) const {
  require_same(*this, o);
  const u64 p = ctx->p;
  const u64 yy = mulmod(mulmod(y, o.y, p), ctx->d_mod_p, p);
  const u64 nx = (mulmod(x, o.x, p) + yy) % p;
  const u64 ny = (mulmod(x, o.y, p) + mulmod(y, o.x, p)) % p;
  return {ctx, nx, ny};
}

ResidueElement ResidueElement::operator+(const ResidueElement& o) const {
  require_same(*this, o);
  const u64 p = ctx->p;
  return {ctx, (x + o.x) % p, (y + o.y) % p};
}

ResidueElement ResidueElement::operator-() const {
  const u64 p = ctx->p;
  return {ctx, (p - x) % p, (p - y) % p};
}

ResidueElement ResidueElement::pow(u64 e) const {
  ResidueElement result{ctx, 1 % ctx->p, 0};
  ResidueElement base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

ResidueElement ResidueElement::conjugate() const { return {ctx, x, (ctx->p - y) % ctx->p}; }

ResidueElement reduce(const RingElement& e, const ContextPtr& ctx) {
  if (!(e.field() == ctx->field)) throw std::invalid_argument("reduce: element and context fields differ");
  auto [dx, dy] = e.doubled_sqrt_coords();
  const u64 p = ctx->p;
  return {ctx, mulmod(mod_mpz(dx, p), ctx->inv2, p), mulmod(mod_mpz(dy, p), ctx->inv2, p)};
}

u64 residue_norm(const ResidueElement& r) {
  const u64 p = r.ctx->p;
  const u64 dyy = mulmod(mulmod(r.y, r.y, p), r.ctx->d_mod_p, p);
  return (mulmod(r.x, r.x, p) + p - dyy) % p;
}

u64 kernel_order(const ResidueElement& r) {
  if (residue_norm(r) != 1) throw std::invalid_argument("kernel_order: residue does not have norm one");
  u64 t = r.ctx->p + 1;
  for (const auto& [q, k] : r.ctx->p_plus_1.factors)
    for (int i = 0; i < k && t % q == 0; ++i) {
      if (!r.pow(t / q).is_one()) break;
      t /= q;
    }
  return t;
}

int sign_choice(const UnitElement& u, const ContextPtr& ctx) {
  if (ctx->p % 4 != 1) throw std::invalid_argument("sign_choice: requires p = 1 (mod 4)");
  const ResidueElement r = reduce(u.element, ctx);
  if (residue_norm(r) != 1) throw std::invalid_argument("sign_choice: unit reduction must have norm one");
  const ResidueElement half = r.pow((ctx->p + 1) / 2);
  if (half.is_minus_one()) return 1;
  if (half.is_one()) return -1;
  throw std::logic_error("sign_choice: (p+1)/2 power is not +-1");
}

u64 joint_order(std::span<const ResidueElement> rs) {
  if (rs.empty()) throw std::invalid_argument("joint_order: no residues");
  u64 result = 1;
  for (const auto& r : rs) {
    require_same(rs.front(), r);
    const u64 ord = kernel_order(r);
    if ((r.ctx->p + 1) % ord != 0) throw std::logic_error("joint_order: order does not divide p + 1");
    result = lcm(result, ord);
  }
  return result;
}

PrimitivityResult is_primitive(const UnitElement& u, const ContextPtr& ctx) {
  const int c = sign_choice(u, ctx);
  ResidueElement r = reduce(u.element, ctx);
  if (c < 0) r = -r;
  const u64 ord = kernel_order(r);
  return {ord == ctx->p + 1, c, ord};
}

}  // namespace artin
