#pragma once

// Subfields F_{p^d} inside F_{p^n} and the relative norm between them.

#include <optional>
#include <vector>

#include "tamerep/field.hpp"
#include "tamerep/matrix.hpp"

namespace tamerep {

/// A fixed embedding F_{p^d} -> F_{p^n}: the generator x of the subfield is
/// sent to `root`, the least root of the subfield modulus in enumeration order.
struct SubfieldEmbedding {
  Field big;
  Field sub;
  Element root;
  std::vector<Element> root_powers;  // root^0 .. root^{d-1}

  Element embed(const Element& a) const {
    Element acc = big.zero();
    for (std::size_t i = 0; i < root_powers.size(); ++i) {
      if (a.coeffs()[i] != 0) acc = acc + root_powers[i] * big.from_int(static_cast<long long>(a.coeffs()[i]));
    }
    return acc;
  }

  /// Inverse of embed on the image; nullopt when z lies outside the subfield.
  std::optional<Element> restrict(const Element& z) const {
    const Field fp = make_field_unbounded(big.characteristic(), 1);
    const std::size_t n = big.degree(), d = sub.degree();
    Matrix sys(fp, n, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t r = 0; r < n; ++r) sys.entry(r, i)[0] = root_powers[i].coeffs()[r];
    }
    for (std::size_t r = 0; r < n; ++r) sys.entry(r, d)[0] = z.coeffs()[r];
    const auto [red, pivots] = rref(sys);
    if (!pivots.empty() && pivots.back() == d) return std::nullopt;
    Coeffs a(d, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) a[pivots[r]] = red.entry(r, d)[0];
    return sub.from_coeffs(std::move(a));
  }
};

inline constexpr u64 kSubfieldEnumerationCap = u64{1} << 22;

inline SubfieldEmbedding make_embedding(const Field& big, unsigned d) {
  const unsigned n = big.degree();
  if (d == 0 || n % d != 0) raise(Errc::not_a_divisor, std::to_string(d) + " does not divide " + std::to_string(n));
  const u64 p = big.characteristic();
  Field sub = big.bounded() ? make_field(p, d) : make_field_unbounded(p, d);

  // The subfield is the fixed space of x -> x^{p^d}, an F_p-subspace.
  const Field fp = make_field_unbounded(p, 1);
  const Element frob_x = big.generator_x().pow(boost::multiprecision::pow(BigInt(p), d));
  Matrix frob(fp, n, n);
  Element col = big.one();
  for (unsigned j = 0; j < n; ++j) {
    for (unsigned r = 0; r < n; ++r) frob.entry(r, j)[0] = col.coeffs()[r];
    if (n > 1) col = col * frob_x;
  }
  const Matrix basis = nullspace(frob - Matrix::identity(fp, n));
  if (basis.rows() != d) raise(Errc::embedding_failure, "fixed space has unexpected dimension");
  const auto count = checked_pow(p, d, kSubfieldEnumerationCap);
  if (!count) raise(Errc::embedding_failure, "subfield too large to search for roots");

  const auto modulus = sub.modulus();
  std::optional<Element> best;
  std::vector<u64> digits(d, 0);
  for (u64 idx = 0; idx < *count; ++idx) {
    Element z = big.zero();
    for (unsigned b = 0; b < d; ++b) {
      if (digits[b] == 0) continue;
      Coeffs v(n);
      for (unsigned r = 0; r < n; ++r) v[r] = mulmod(basis.entry(b, r)[0], digits[b], p);
      z = z + big.from_coeffs(std::move(v));
    }
    Element value = big.zero();
    for (std::size_t i = modulus.size(); i-- > 0;) value = value * z + big.from_int(static_cast<long long>(modulus[i]));
    if (value.is_zero() && (!best || z < *best)) best = z;
    for (unsigned b = 0; b < d; ++b) {
      if (++digits[b] < p) break;
      digits[b] = 0;
    }
  }
  if (!best) raise(Errc::embedding_failure, "subfield modulus has no root");

  SubfieldEmbedding emb{big, sub, *best, {}};
  Element pw = big.one();
  for (unsigned i = 0; i < d; ++i) {
    emb.root_powers.push_back(pw);
    pw = pw * *best;
  }
  return emb;
}

/// N(x) = x^{1 + p^d + ... + p^{n-d}}, expressed in the subfield.
inline Element norm_map(const Element& x, const SubfieldEmbedding& emb) {
  if (!(x.field() == emb.big)) raise(Errc::field_mismatch, "element outside the embedding's field");
  const u64 p = emb.big.characteristic();
  const BigInt pn = boost::multiprecision::pow(BigInt(p), emb.big.degree());
  const BigInt pd = boost::multiprecision::pow(BigInt(p), emb.sub.degree());
  const Element n = x.pow(BigInt((pn - 1) / (pd - 1)));
  auto out = emb.restrict(n);
  if (!out) raise(Errc::embedding_failure, "norm value is not in the subfield");
  return *out;
}

inline Element norm_map(const Element& x, unsigned d) { return norm_map(x, make_embedding(x.field(), d)); }

}  // namespace tamerep
