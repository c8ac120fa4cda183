#pragma once

// Exact arithmetic in F_{p^k} in the polynomial basis 1, x, ..., x^{k-1}
// modulo the lexicographically least monic irreducible of degree k.
//
// Coefficient vectors are ordered low degree first. The element enumeration
// order compares coefficient vectors lexicographically from the constant
// term, the same order used to pick the modulus.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tamerep/arith.hpp"
#include "tamerep/error.hpp"

namespace tamerep {

using BigInt = boost::multiprecision::cpp_int;
using Coeffs = std::vector<u64>;

namespace poly {

// Dense polynomials over F_p, low degree first, trimmed (no trailing zeros).

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Coeffs sub(Coeffs a, const Coeffs& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  trim(r);
  return r;
}

/// Remainder and quotient of a by b (b nonzero).
inline std::pair<Coeffs, Coeffs> divmod(Coeffs a, const Coeffs& b, u64 p) {
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  const u64 lead_inv = powmod(b.back(), p - 2, p);
  Coeffs q(a.size() - b.size() + 1, 0);
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const u64 c = mulmod(a[i], lead_inv, p);
    q[i - b.size() + 1] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      u64& slot = a[i - b.size() + 1 + j];
      slot = (slot + p - mulmod(c, b[j], p)) % p;
    }
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline Coeffs mod(const Coeffs& a, const Coeffs& b, u64 p) { return divmod(a, b, p).second; }

inline Coeffs make_monic(Coeffs a, u64 p) {
  if (a.empty()) return a;
  const u64 inv = powmod(a.back(), p - 2, p);
  for (u64& c : a) c = mulmod(c, inv, p);
  return a;
}

inline Coeffs gcd(Coeffs a, Coeffs b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

inline Coeffs powmod(Coeffs base, u64 exp, const Coeffs& f, u64 p) {
  Coeffs result{1};
  base = mod(base, f, p);
  while (exp != 0) {
    if (exp & 1U) result = mod(mul(result, base, p), f, p);
    base = mod(mul(base, base, p), f, p);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a modulo f via extended Euclid; nullopt when not coprime.
inline std::optional<Coeffs> inverse_mod(const Coeffs& a, const Coeffs& f, u64 p) {
  Coeffs r0 = f, r1 = mod(a, f, p);
  Coeffs s0{}, s1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    Coeffs s = sub(s0, mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) return std::nullopt;
  const u64 c = tamerep::powmod(r0[0], p - 2, p);
  Coeffs out = s0;
  for (u64& v : out) v = mulmod(v, c, p);
  return out;
}

inline u64 eval(const Coeffs& a, u64 x, u64 p) {
  u64 acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = (mulmod(acc, x, p) + a[i]) % p;
  return acc;
}

/// Ben-Or test: no factor of degree <= deg/2.
inline bool is_irreducible(const Coeffs& f, u64 p) {
  const std::size_t k = f.size() - 1;
  if (k == 1) return true;
  if (f[0] == 0) return false;
  if (p <= (1U << 16)) {
    for (u64 a = 0; a < p; ++a) {
      if (eval(f, a, p) == 0) return false;
    }
  }
  const Coeffs x{0, 1};
  Coeffs h = x;
  for (std::size_t i = 1; i <= k / 2; ++i) {
    h = powmod(h, p, f, p);
    if (gcd(sub(h, x, p), f, p).size() > 1) return false;
  }
  return true;
}

/// Least monic irreducible of degree k, coefficients compared from the
/// constant term upward.
inline Coeffs least_irreducible(u64 p, unsigned k) {
  if (k == 1) return {0, 1};
  Coeffs f(k + 1, 0);
  f[k] = 1;
  f[0] = 1;
  while (true) {
    if (is_irreducible(f, p)) return f;
    // increment: coefficient k-1 is the least significant digit
    std::size_t i = k;
    while (i-- > 0) {
      if (++f[i] < p) break;
      f[i] = 0;
    }
    if (f[0] == 0) f[0] = 1;
  }
}

}  // namespace poly

class Element;

struct FieldData {
  u64 p = 0;
  unsigned k = 0;
  Coeffs modulus;       // k + 1 entries, monic
  Coeffs neg_modulus;   // (p - m_i) mod p for i < k
  BigInt order;
  bool bounded = true;  // order <= 2^63
};

/// Shared immutable handle to a field descriptor. Copies are cheap and two
/// handles compare equal when they describe the same (p, modulus).
class Field {
 public:
  Field() = default;

  u64 characteristic() const { return d_->p; }
  unsigned degree() const { return d_->k; }
  std::span<const u64> modulus() const { return d_->modulus; }
  const BigInt& order() const { return d_->order; }
  bool bounded() const { return d_->bounded; }

  u64 order_u64() const {
    if (!d_->bounded) raise(Errc::size_overflow, "field size exceeds 2^63");
    return static_cast<u64>(d_->order);
  }

  bool valid() const { return d_ != nullptr; }

  friend bool operator==(const Field& a, const Field& b) {
    if (a.d_ == b.d_) return true;
    if (!a.d_ || !b.d_) return false;
    return a.d_->p == b.d_->p && a.d_->modulus == b.d_->modulus;
  }

  std::string describe() const {
    std::string s = "F_" + std::to_string(d_->p);
    if (d_->k > 1) s += "^" + std::to_string(d_->k);
    return s;
  }

  // Raw kernels over coefficient spans of length k.

  bool is_zero(std::span<const u64> a) const {
    return std::all_of(a.begin(), a.end(), [](u64 v) { return v == 0; });
  }

  bool is_one(std::span<const u64> a) const {
    if (a[0] != 1) return false;
    return std::all_of(a.begin() + 1, a.end(), [](u64 v) { return v == 0; });
  }

  void add_to(std::span<u64> acc, std::span<const u64> b) const {
    const u64 p = d_->p;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const u64 s = acc[i] + b[i];
      acc[i] = (s >= p || s < acc[i]) ? s - p : s;
    }
  }

  void sub_from(std::span<u64> acc, std::span<const u64> b) const {
    const u64 p = d_->p;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] >= b[i] ? acc[i] - b[i] : acc[i] + (p - b[i]);
  }

  void negate(std::span<u64> a) const {
    for (u64& v : a) v = v == 0 ? 0 : d_->p - v;
  }

  /// out = a * b; out must not alias a or b.
  void mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
    const u64 p = d_->p;
    const unsigned k = d_->k;
    if (k == 1) {
      out[0] = mulmod(a[0], b[0], p);
      return;
    }
    thread_local std::vector<u128> acc;
    acc.assign(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i) {
      if (a[i] == 0) continue;
      const u128 ai = a[i];
      for (unsigned j = 0; j < k; ++j) acc[i + j] += ai * b[j];
    }
    const auto& neg = d_->neg_modulus;
    for (unsigned i = 2 * k - 1; i-- > k;) {
      const u64 c = static_cast<u64>(acc[i] % p);
      if (c == 0) continue;
      const u128 cc = c;
      for (unsigned j = 0; j < k; ++j) acc[i - k + j] += cc * neg[j];
    }
    for (unsigned i = 0; i < k; ++i) out[i] = static_cast<u64>(acc[i] % p);
  }

  /// acc -= a * b
  void sub_mul(std::span<u64> acc, std::span<const u64> a, std::span<const u64> b) const {
    thread_local Coeffs tmp;
    tmp.resize(d_->k);
    mul(a, b, tmp);
    sub_from(acc, tmp);
  }

  void inverse(std::span<const u64> a, std::span<u64> out) const {
    if (is_zero(a)) raise(Errc::zero_element, "inverse of zero");
    const u64 p = d_->p;
    if (d_->k == 1) {
      out[0] = powmod(a[0], p - 2, p);
      return;
    }
    Coeffs av(a.begin(), a.end());
    poly::trim(av);
    auto inv = poly::inverse_mod(av, d_->modulus, p);
    if (!inv) raise(Errc::zero_element, "element is not invertible");
    std::fill(out.begin(), out.end(), 0);
    std::copy(inv->begin(), inv->end(), out.begin());
  }

  Element zero() const;
  Element one() const;
  Element from_int(long long v) const;
  Element from_coeffs(Coeffs c) const;
  Element generator_x() const;
  /// The element at position `index` in enumeration order.
  Element element_at(u64 index) const;
  /// Position of `e` in enumeration order (bounded fields only).
  u64 index_of(const Element& e) const;

  static Field create(u64 p, unsigned k, bool capped);

 private:
  explicit Field(std::shared_ptr<const FieldData> d) : d_(std::move(d)) {}
  std::shared_ptr<const FieldData> d_;
};

class Element {
 public:
  Element() = default;
  Element(Field f, Coeffs c) : f_(std::move(f)), c_(std::move(c)) {}

  const Field& field() const { return f_; }
  std::span<const u64> coeffs() const { return c_; }
  const Coeffs& coeff_vector() const { return c_; }

  bool is_zero() const { return f_.is_zero(c_); }
  bool is_one() const { return f_.is_one(c_); }

  Element operator+(const Element& o) const {
    check(o);
    Element r = *this;
    f_.add_to(r.c_, o.c_);
    return r;
  }

  Element operator-(const Element& o) const {
    check(o);
    Element r = *this;
    f_.sub_from(r.c_, o.c_);
    return r;
  }

  Element operator-() const {
    Element r = *this;
    f_.negate(r.c_);
    return r;
  }

  Element operator*(const Element& o) const {
    check(o);
    Element r(f_, Coeffs(c_.size()));
    f_.mul(c_, o.c_, r.c_);
    return r;
  }

  Element inverse() const {
    Element r(f_, Coeffs(c_.size()));
    f_.inverse(c_, r.c_);
    return r;
  }

  Element operator/(const Element& o) const { return *this * o.inverse(); }

  Element pow(u64 e) const {
    Element result = f_.one(), base = *this;
    while (e != 0) {
      if (e & 1U) result = result * base;
      base = base * base;
      e >>= 1U;
    }
    return result;
  }

  Element pow(const BigInt& e) const {
    if (e == 0) return f_.one();
    Element result = f_.one();
    for (std::size_t bit = boost::multiprecision::msb(e) + 1; bit-- > 0;) {
      result = result * result;
      if (boost::multiprecision::bit_test(e, static_cast<unsigned>(bit))) result = result * *this;
    }
    return result;
  }

  friend bool operator==(const Element& a, const Element& b) { return a.c_ == b.c_ && a.f_ == b.f_; }
  friend bool operator<(const Element& a, const Element& b) { return a.c_ < b.c_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + "]";
  }

 private:
  void check(const Element& o) const {
    if (!(f_ == o.f_)) raise(Errc::field_mismatch, "operands live in different fields");
  }

  Field f_;
  Coeffs c_;
};

inline Field Field::create(u64 p, unsigned k, bool capped) {
  if (!is_prime(p)) raise(Errc::non_prime_characteristic, std::to_string(p) + " is not prime");
  if (k == 0) raise(Errc::degree_zero, "extension degree must be positive");
  const auto q = checked_pow(p, k, kSizeLimit);
  if (capped && !q) raise(Errc::size_overflow, "p^k exceeds 2^63");
  if (k > 1 && p >= (u64{1} << 32)) raise(Errc::size_overflow, "extension fields need p < 2^32");
  if (k > 4096) raise(Errc::size_overflow, "extension degree too large");
  auto d = std::make_shared<FieldData>();
  d->p = p;
  d->k = k;
  d->modulus = poly::least_irreducible(p, k);
  d->neg_modulus.resize(k);
  for (unsigned i = 0; i < k; ++i) d->neg_modulus[i] = (p - d->modulus[i]) % p;
  d->order = boost::multiprecision::pow(BigInt(p), k);
  d->bounded = q.has_value();
  return Field(std::move(d));
}

/// F_{p^k} with the deterministic modulus; rejects p^k > 2^63.
inline Field make_field(u64 p, unsigned k) { return Field::create(p, k, true); }

/// Same construction without the 2^63 size cap. Operations that need the
/// factorization of q - 1 (generators, element orders) still reject such
/// fields with SizeOverflow.
inline Field make_field_unbounded(u64 p, unsigned k) { return Field::create(p, k, false); }

inline Element Field::zero() const { return Element(*this, Coeffs(d_->k, 0)); }

inline Element Field::one() const {
  Coeffs c(d_->k, 0);
  c[0] = 1 % d_->p;
  return Element(*this, std::move(c));
}

inline Element Field::from_int(long long v) const {
  const auto p = static_cast<long long>(std::min<u64>(d_->p, static_cast<u64>(INT64_MAX)));
  long long r = v % p;
  if (r < 0) r += p;
  Coeffs c(d_->k, 0);
  c[0] = static_cast<u64>(r);
  return Element(*this, std::move(c));
}

inline Element Field::from_coeffs(Coeffs c) const {
  if (c.size() != d_->k) raise(Errc::bad_input, "coefficient vector has wrong length");
  for (u64 v : c) {
    if (v >= d_->p) raise(Errc::bad_input, "coefficient out of range");
  }
  return Element(*this, std::move(c));
}

inline Element Field::generator_x() const {
  if (d_->k == 1) return zero();
  Coeffs c(d_->k, 0);
  c[1] = 1;
  return Element(*this, std::move(c));
}

inline Element Field::element_at(u64 index) const {
  Coeffs c(d_->k, 0);
  for (unsigned i = d_->k; i-- > 0 && index != 0;) {
    c[i] = index % d_->p;
    index /= d_->p;
  }
  if (index != 0) raise(Errc::bad_input, "enumeration index out of range");
  return Element(*this, std::move(c));
}

inline u64 Field::index_of(const Element& e) const {
  if (!bounded()) raise(Errc::size_overflow, "field size exceeds 2^63");
  u64 idx = 0;
  for (u64 c : e.coeffs()) idx = idx * d_->p + c;
  return idx;
}

/// Least element of order q - 1 in enumeration order.
inline Element find_generator(const Field& f) {
  const u64 q = f.order_u64();
  const u64 group = q - 1;
  const auto primes = prime_divisors(group);
  for (u64 idx = 1; idx < q; ++idx) {
    const Element x = f.element_at(idx);
    if (x.is_zero()) continue;
    bool primitive = true;
    for (u64 r : primes) {
      if (x.pow(group / r).is_one()) {
        primitive = false;
        break;
      }
    }
    if (primitive) return x;
  }
  raise(Errc::bad_input, "no generator found");
}

inline u64 mul_order(const Element& x) {
  if (x.is_zero()) raise(Errc::zero_element, "order of zero");
  u64 order = x.field().order_u64() - 1;
  for (const auto& [r, e] : factor(order)) {
    for (unsigned i = 0; i < e && x.pow(order / r).is_one(); ++i) order /= r;
  }
  return order;
}

inline bool is_square(const Element& x) {
  if (x.is_zero()) raise(Errc::zero_element, "square class of zero");
  const Field& f = x.field();
  if (f.characteristic() == 2) return true;
  return x.pow(BigInt(f.order() - 1) / 2).is_one();
}

/// Least non-square in enumeration order (q odd).
inline Element least_nonsquare(const Field& f) {
  if (f.characteristic() == 2) raise(Errc::odd_characteristic_required, "no non-squares in characteristic 2");
  for (u64 idx = 1;; ++idx) {
    const Element x = f.element_at(idx);
    if (!x.is_zero() && !is_square(x)) return x;
  }
}

/// Tonelli-Shanks; nullopt for non-squares.
inline std::optional<Element> sqrt(const Element& a) {
  const Field& f = a.field();
  if (a.is_zero()) return a;
  if (f.characteristic() == 2) return a.pow(BigInt(f.order()) / 2);
  if (!is_square(a)) return std::nullopt;
  BigInt qm = f.order() - 1;
  unsigned s = 0;
  while ((qm & 1) == 0) {
    qm >>= 1;
    ++s;
  }
  const Element z = least_nonsquare(f);
  Element c = z.pow(qm);
  Element x = a.pow(BigInt((qm + 1) / 2));
  Element b = a.pow(qm);
  unsigned m = s;
  while (!b.is_one()) {
    unsigned i = 0;
    Element b2 = b;
    while (!b2.is_one()) {
      b2 = b2 * b2;
      ++i;
    }
    Element g = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) g = g * g;
    x = x * g;
    c = g * g;
    b = b * c;
    m = i;
  }
  return x;
}

}  // namespace tamerep
