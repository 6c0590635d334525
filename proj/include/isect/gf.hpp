#pragma once

// Exact arithmetic in F_q for q = p^h <= 2^16.
//
// An element is stored by its code sum c_i b^i, where c_i are the coefficients
// of its polynomial-basis representation over the base field of order b (the
// prime field for fields made by Field::create). Multiplication goes through
// exp/log tables relative to the smallest primitive element by code.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isect/error.hpp"

namespace isect {

struct Elem {
  std::uint32_t code = 0;

  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Coefficient list, lowest degree first.
using Poly = std::vector<Elem>;

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

class Field {
 public:
  /// Canonical F_{p^h}; the modulus is the first monic irreducible in code order.
  static FieldPtr create(std::uint32_t p, std::uint32_t h);

  /// F_q for a prime power q; throws NotPrime otherwise.
  static FieldPtr of_order(std::uint32_t q);

  /// base[Y]/(modulus). The modulus must be monic and irreducible over base;
  /// base elements keep their codes (degree-0 part).
  static FieldPtr extension(FieldPtr base, Poly modulus);

  std::uint32_t p() const { return p_; }
  std::uint32_t h() const { return h_; }
  std::uint32_t q() const { return q_; }
  /// Degree over the base field (equals h() for fields from create()).
  std::uint32_t degree() const { return deg_; }
  const Field* base() const { return base_.get(); }
  /// Modulus over the base field, lowest degree first. For a prime field this is X.
  const Poly& modulus() const { return modulus_; }
  Elem primitive() const { return primitive_; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }

  Elem elem(std::uint64_t code) const {
    if (code >= q_) throw Error(Errc::FieldMismatch, "code " + std::to_string(code) + " outside F_" + std::to_string(q_));
    return Elem{static_cast<std::uint32_t>(code)};
  }

  /// Image of the integer n under Z -> F_q.
  Elem from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return Elem{static_cast<std::uint32_t>(r)};
  }

  std::vector<Elem> elements() const {
    std::vector<Elem> out(q_);
    for (std::uint32_t i = 0; i < q_; ++i) out[i] = Elem{i};
    return out;
  }

  Elem add(Elem a, Elem b) const {
    if (!add_.empty()) return Elem{add_[static_cast<std::size_t>(a.code) * q_ + b.code]};
    return Elem{digit_add(a.code, b.code)};
  }
  Elem neg(Elem a) const { return Elem{neg_[a.code]}; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a.code == 0 || b.code == 0) return Elem{0};
    return Elem{exp_[static_cast<std::size_t>(log_[a.code]) + log_[b.code]]};
  }

  Elem inv(Elem a) const {
    if (a.code == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
    const std::uint32_t l = log_[a.code];
    return Elem{exp_[l == 0 ? 0 : (q_ - 1) - l]};
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::int64_t e) const {
    if (a.code == 0) {
      if (e == 0) return one();
      if (e < 0) throw Error(Errc::DivisionByZero, "negative power of zero");
      return zero();
    }
    const std::int64_t order = q_ - 1;
    std::int64_t r = (static_cast<std::int64_t>(log_[a.code]) * (e % order)) % order;
    if (r < 0) r += order;
    return Elem{exp_[static_cast<std::size_t>(r)]};
  }

  /// Discrete log to the primitive element; a must be nonzero.
  std::uint32_t log(Elem a) const {
    if (a.code == 0) throw Error(Errc::DivisionByZero, "log of zero");
    return log_[a.code];
  }
  Elem exp(std::int64_t i) const {
    const std::int64_t order = q_ - 1;
    std::int64_t r = i % order;
    if (r < 0) r += order;
    return Elem{exp_[static_cast<std::size_t>(r)]};
  }

  bool is_square(Elem a) const { return a.code == 0 || p_ == 2 || log_[a.code] % 2 == 0; }

  /// Structural equality: same order and the same modulus chain.
  bool same_as(const Field& o) const {
    if (this == &o) return true;
    if (q_ != o.q_ || p_ != o.p_ || deg_ != o.deg_ || modulus_ != o.modulus_) return false;
    if (!base_ || !o.base_) return !base_ && !o.base_;
    return base_->same_as(*o.base_);
  }

  void require_same(const Field& o) const {
    if (!same_as(o)) throw Error(Errc::FieldMismatch, "operands from different fields");
  }

 private:
  Field() = default;

  std::uint32_t digit_add(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2 && (!base_ || base_->base_ == nullptr) && base_q_ == 2) return a ^ b;
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < deg_; ++i) {
      const std::uint32_t da = a % base_q_, db = b % base_q_;
      a /= base_q_;
      b /= base_q_;
      out += scale * base_add(da, db);
      scale *= base_q_;
    }
    return out;
  }

  std::uint32_t base_add(std::uint32_t a, std::uint32_t b) const {
    if (!base_) return (a + b) % p_;
    return base_->add(Elem{a}, Elem{b}).code;
  }

  // Multiplication by polynomial arithmetic, used before the log tables exist.
  std::uint32_t raw_mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t raw_pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = raw_mul(r, a);
      a = raw_mul(a, a);
      e >>= 1;
    }
    return r;
  }
  void build_tables();

  std::uint32_t p_ = 0, h_ = 0, q_ = 0, base_q_ = 0, deg_ = 1;
  FieldPtr base_;
  Poly modulus_;
  Elem primitive_{};
  std::vector<std::uint16_t> exp_, log_, neg_;
  std::vector<std::uint16_t> add_;
};

// ---------------------------------------------------------------------------
// Polynomials over a field.

namespace poly {

inline void trim(Poly& f) {
  while (!f.empty() && f.back().code == 0) f.pop_back();
}

inline int degree(const Poly& f) {
  for (std::size_t i = f.size(); i-- > 0;)
    if (f[i].code != 0) return static_cast<int>(i);
  return -1;
}

inline Elem eval(const Field& F, const Poly& f, Elem x) {
  Elem r = F.zero();
  for (std::size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
  return r;
}

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].code == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

/// Quotient and remainder; the divisor must be nonzero.
inline std::pair<Poly, Poly> divmod(const Field& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  if (b.empty()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  const int db = degree(b);
  if (degree(a) < db) return {Poly{}, a};
  const Elem lead_inv = F.inv(b.back());
  Poly quo(a.size() - b.size() + 1, F.zero());
  for (int i = degree(a); i >= db; --i) {
    const Elem c = F.mul(a[static_cast<std::size_t>(i)], lead_inv);
    if (c.code == 0) continue;
    quo[static_cast<std::size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) {
      auto& slot = a[static_cast<std::size_t>(i - db + j)];
      slot = F.sub(slot, F.mul(c, b[static_cast<std::size_t>(j)]));
    }
  }
  trim(quo);
  trim(a);
  return {quo, a};
}

inline Poly mod(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

inline Poly monic(const Field& F, Poly f) {
  trim(f);
  if (f.empty()) return f;
  const Elem inv = F.inv(f.back());
  for (auto& c : f) c = F.mul(c, inv);
  return f;
}

inline Poly gcd(const Field& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

inline Poly powmod(const Field& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r{F.one()};
  base = mod(F, base, m);
  while (e) {
    if (e & 1) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

inline bool has_root(const Field& F, const Poly& f) {
  for (std::uint32_t x = 0; x < F.q(); ++x)
    if (eval(F, f, Elem{x}).code == 0) return true;
  return false;
}

/// Irreducibility over F. Degrees <= 3 use the exhaustive root check; higher
/// degrees use X^{q^d} = X mod f together with gcd(X^{q^{d/r}} - X, f) = 1 for
/// every prime r dividing d.
inline bool is_irreducible(const Field& F, Poly f) {
  trim(f);
  const int d = degree(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  if (d <= 3) return !has_root(F, f);
  const Poly x{F.zero(), F.one()};
  std::vector<Poly> frob(static_cast<std::size_t>(d) + 1);
  frob[0] = x;
  for (int i = 1; i <= d; ++i) frob[static_cast<std::size_t>(i)] = powmod(F, frob[static_cast<std::size_t>(i - 1)], F.q(), f);
  if (sub(F, frob[static_cast<std::size_t>(d)], x) != Poly{}) return false;
  for (std::uint64_t r : detail::prime_factors(static_cast<std::uint64_t>(d))) {
    const Poly g = gcd(F, sub(F, frob[static_cast<std::size_t>(d) / r], x), f);
    if (degree(g) != 0) return false;
  }
  return true;
}

/// Monic irreducible polynomials of degree d are scanned by the code
/// c_0 + c_1 q + ... + c_{d-1} q^{d-1} of their lower coefficients; the first
/// irreducible one is returned.
inline Poly find_irreducible(const Field& F, int d) {
  if (d < 1) throw Error(Errc::BadParameters, "degree must be positive");
  Poly f(static_cast<std::size_t>(d) + 1, F.zero());
  f.back() = F.one();
  for (std::uint64_t code = 0;; ++code) {
    std::uint64_t c = code;
    bool overflow = false;
    for (int i = 0; i < d; ++i) {
      f[static_cast<std::size_t>(i)] = Elem{static_cast<std::uint32_t>(c % F.q())};
      c /= F.q();
    }
    if (c != 0) overflow = true;
    if (overflow) throw Error(Errc::BadParameters, "no irreducible polynomial found");
    if (d > 1 && f[0].code == 0) continue;
    if (is_irreducible(F, f)) return f;
  }
}

}  // namespace poly

// ---------------------------------------------------------------------------

inline std::uint32_t Field::raw_mul(std::uint32_t a, std::uint32_t b) const {
  if (!base_) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
  const Field& B = *base_;
  Poly fa(deg_), fb(deg_);
  for (std::uint32_t i = 0; i < deg_; ++i) {
    fa[i] = Elem{a % base_q_};
    fb[i] = Elem{b % base_q_};
    a /= base_q_;
    b /= base_q_;
  }
  poly::trim(fa);
  poly::trim(fb);
  Poly r = poly::mod(B, poly::mul(B, fa, fb), modulus_);
  std::uint32_t out = 0, scale = 1;
  for (std::uint32_t i = 0; i < deg_; ++i) {
    if (i < r.size()) out += scale * r[i].code;
    scale *= base_q_;
  }
  return out;
}

inline void Field::build_tables() {
  // Additive tables.
  neg_.assign(q_, 0);
  for (std::uint32_t a = 0; a < q_; ++a) {
    std::uint32_t x = a, out = 0, scale = 1;
    for (std::uint32_t i = 0; i < deg_; ++i) {
      const std::uint32_t d = x % base_q_;
      x /= base_q_;
      const std::uint32_t nd = base_ ? base_->neg(Elem{d}).code : (p_ - d) % p_;
      out += scale * nd;
      scale *= base_q_;
    }
    neg_[a] = static_cast<std::uint16_t>(out);
  }
  if (q_ <= 1024) {
    add_.assign(static_cast<std::size_t>(q_) * q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b)
        add_[static_cast<std::size_t>(a) * q_ + b] = static_cast<std::uint16_t>(digit_add(a, b));
  }

  // Smallest primitive element by code.
  const std::uint64_t order = q_ - 1;
  const auto factors = detail::prime_factors(order);
  std::uint32_t g = 1;
  for (;; ++g) {
    if (g >= q_) throw Error(Errc::BadParameters, "modulus is not irreducible: no primitive element");
    bool ok = raw_pow(g, order) == 1;
    for (std::uint64_t r : factors) {
      if (!ok) break;
      if (raw_pow(g, order / r) == 1) ok = false;
    }
    if (ok) break;
  }
  primitive_ = Elem{g};
  exp_.assign(2 * order + 1, 0);
  log_.assign(q_, 0);
  std::uint32_t x = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = static_cast<std::uint16_t>(x);
    log_[x] = static_cast<std::uint16_t>(i);
    x = raw_mul(x, g);
  }
  if (x != 1) throw Error(Errc::BadParameters, "multiplicative group is not cyclic; modulus reducible");
  for (std::uint64_t i = order; i < exp_.size(); ++i) exp_[i] = exp_[i - order];
}

inline FieldPtr Field::create(std::uint32_t p, std::uint32_t h) {
  if (!detail::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (h < 1) throw Error(Errc::BadParameters, "exponent must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < h; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) throw Error(Errc::OrderTooLarge, "p^h exceeds 2^16");
  }
  std::shared_ptr<Field> prime(new Field());
  prime->p_ = p;
  prime->h_ = 1;
  prime->q_ = p;
  prime->base_q_ = p;
  prime->deg_ = 1;
  prime->modulus_ = Poly{Elem{0}, Elem{1}};
  prime->build_tables();
  if (h == 1) return prime;
  return extension(prime, poly::find_irreducible(*prime, static_cast<int>(h)));
}

inline FieldPtr Field::of_order(std::uint32_t q) {
  if (q < 2) throw Error(Errc::NotPrime, "field order must be at least 2");
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    std::uint32_t h = 0, r = q;
    while (r % p == 0) {
      r /= p;
      ++h;
    }
    if (r != 1) throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
    return create(p, h);
  }
  throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
}

inline FieldPtr Field::extension(FieldPtr base, Poly modulus) {
  poly::trim(modulus);
  const int d = poly::degree(modulus);
  if (d < 1 || modulus.back().code != 1) throw Error(Errc::BadParameters, "modulus must be monic of positive degree");
  if (!poly::is_irreducible(*base, modulus)) throw Error(Errc::BadParameters, "modulus is reducible");
  std::uint64_t q = 1;
  for (int i = 0; i < d; ++i) {
    q *= base->q();
    if (q > kMaxFieldOrder) throw Error(Errc::OrderTooLarge, "extension order exceeds 2^16");
  }
  std::shared_ptr<Field> f(new Field());
  f->p_ = base->p();
  f->h_ = base->h() * static_cast<std::uint32_t>(d);
  f->q_ = static_cast<std::uint32_t>(q);
  f->base_q_ = base->q();
  f->deg_ = static_cast<std::uint32_t>(d);
  f->base_ = std::move(base);
  f->modulus_ = std::move(modulus);
  f->build_tables();
  return f;
}

}  // namespace isect
