#pragma once

// The residual induced representation of a tame character, realized on
// <Phi, Sigma> over F_{ell^k} with k = ord_t(ell).
//
// Basis: coset representatives Phi^0, ..., Phi^{n-1}. The inertia generator
// acts diagonally by the Galois conjugates chi^{p^i}; Phi is the monomial
// shift with Phi[i][i+1] = 1 and the wrap-around entry Phi[n-1][0] = chi(p),
// so that Phi Sigma Phi^{-1} = Sigma^p.

#include <span>
#include <string>
#include <vector>

#include "tamerep/arith.hpp"
#include "tamerep/error.hpp"
#include "tamerep/field.hpp"
#include "tamerep/group.hpp"
#include "tamerep/matrix.hpp"
#include "tamerep/tame_character.hpp"

namespace tamerep {

struct ResidualRep {
  TameCharacter chi;
  u64 ell = 0;
  unsigned k = 0;
  Field field;
  Element zeta;                       // order t
  std::vector<u64> sigma_exponents;   // Sigma[i][i] = zeta^{sigma_exponents[i]}
  Matrix phi;
  Matrix sigma;

  std::vector<Matrix> generators() const { return {phi, sigma}; }
};

/// An element of exact prime order t in f. Fields whose size fits 64 bits
/// use g^{(q-1)/t} for the deterministic generator g; larger fields use
/// y^{(q-1)/t} for the least y in enumeration order where that is not 1.
inline Element root_of_unity(const Field& f, u64 t) {
  const BigInt qm = f.order() - 1;
  if (qm % t != 0) raise(Errc::bad_input, "t does not divide q - 1");
  const BigInt cofactor = qm / t;
  if (f.bounded()) return find_generator(f).pow(cofactor);
  for (u64 idx = 1;; ++idx) {
    const Element y = f.element_at(idx);
    if (y.is_zero()) continue;
    Element z = y.pow(cofactor);
    if (!z.is_one()) return z;
  }
}

namespace unchecked {

/// Builds the matrices without the O/S-type precondition. Exists so tests
/// can exhibit non-self-dual inductions; not part of the public contract.
inline ResidualRep build_residual_rep(const TameCharacter& chi, u64 ell) {
  validate(chi);
  if (!is_prime(chi.t)) raise(Errc::bad_character, "t must be prime");
  if (ell % 2 == 0 || !is_prime(ell) || ell == chi.p || ell == chi.t) {
    raise(Errc::bad_residue_char, "ell must be an odd prime distinct from p and t");
  }
  ResidualRep rep;
  rep.chi = chi;
  rep.ell = ell;
  rep.k = static_cast<unsigned>(mult_order_mod(ell, chi.t));
  rep.field = make_field_unbounded(ell, rep.k);
  rep.zeta = root_of_unity(rep.field, chi.t);

  const std::size_t n = chi.n;
  rep.sigma = Matrix(rep.field, n, n);
  rep.phi = Matrix(rep.field, n, n);
  u64 e = chi.exponent_index % chi.t;
  const u64 p_mod_t = chi.p % chi.t;
  for (std::size_t i = 0; i < n; ++i) {
    rep.sigma_exponents.push_back(e);
    rep.sigma.set(i, i, rep.zeta.pow(e));
    e = mulmod(e, p_mod_t, chi.t);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) rep.phi.set(i, i + 1, rep.field.one());
  rep.phi.set(n - 1, 0, rep.field.from_int(chi.sign));
  if (n == 1) rep.phi.set(0, 0, rep.field.from_int(chi.sign));
  return rep;
}

}  // namespace unchecked

inline bool tame_relation_holds(const ResidualRep& rep) {
  return rep.phi * rep.sigma == rep.sigma.pow(rep.chi.p) * rep.phi;
}

inline ResidualRep build_residual_rep(const TameCharacter& chi, u64 ell) {
  if (classify_type(chi) == CharacterType::neither) {
    std::string why;
    for (const auto& f : type_failures(chi)) why += (why.empty() ? "" : ", ") + f;
    raise(Errc::bad_type, "character is neither O- nor S-type (failed: " + why + ")");
  }
  ResidualRep rep = unchecked::build_residual_rep(chi, ell);
  if (!tame_relation_holds(rep)) throw std::logic_error("Phi Sigma Phi^{-1} != Sigma^p");
  return rep;
}

/// Basis of the space of Gram matrices G with M^T G M = G for every M in
/// `gens`; each basis Gram has first nonzero entry (row-major) equal to 1.
inline std::vector<Matrix> invariant_forms(std::span<const Matrix> gens) {
  if (gens.empty()) raise(Errc::bad_input, "need at least one matrix");
  const Field& f = gens.front().field();
  const std::size_t n = gens.front().rows();
  const std::size_t nn = n * n;
  Matrix system(f, gens.size() * nn, nn);
  Coeffs prod(f.degree());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const Matrix& m = gens[g];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t row = g * nn + a * n + b;
        for (std::size_t i = 0; i < n; ++i) {
          if (f.is_zero(m.entry(i, a))) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (f.is_zero(m.entry(j, b))) continue;
            f.mul(m.entry(i, a), m.entry(j, b), prod);
            f.add_to(system.entry(row, i * n + j), prod);
          }
        }
        Coeffs one(f.degree(), 0);
        one[0] = 1;
        f.sub_from(system.entry(row, a * n + b), one);
      }
    }
  }
  const Matrix basis = nullspace(system);
  std::vector<Matrix> out;
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    Matrix gram(f, n, n);
    std::optional<Element> lead;
    for (std::size_t c = 0; c < nn; ++c) {
      const Element v = basis.at(r, c);
      if (!lead && !v.is_zero()) lead = v.inverse();
      gram.set(c / n, c % n, v);
    }
    out.push_back(lead ? gram.scaled(*lead) : gram);
  }
  return out;
}

inline std::vector<Matrix> invariant_forms(const ResidualRep& rep) {
  const auto gens = rep.generators();
  return invariant_forms(std::span<const Matrix>(gens));
}

enum class FormKind { symmetric, alternating, neither };

constexpr const char* form_kind_name(FormKind k) {
  switch (k) {
    case FormKind::symmetric: return "symmetric";
    case FormKind::alternating: return "alternating";
    case FormKind::neither: return "neither";
  }
  return "neither";
}

inline FormKind form_kind(const Matrix& g) {
  if (!g.square()) raise(Errc::shape_mismatch, "Gram matrix must be square");
  const Matrix t = g.transpose();
  if (t == g) return FormKind::symmetric;
  if (t == -g) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (!g.field().is_zero(g.entry(i, i))) return FormKind::neither;
    }
    return FormKind::alternating;
  }
  return FormKind::neither;
}

/// dim {X : X M = M X for all M in gens}; 1 certifies absolute irreducibility.
inline std::size_t commutant_dim(std::span<const Matrix> gens) {
  if (gens.empty()) raise(Errc::bad_input, "need at least one matrix");
  const Field& f = gens.front().field();
  const std::size_t n = gens.front().rows();
  const std::size_t nn = n * n;
  Matrix system(f, gens.size() * nn, nn);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const Matrix& m = gens[g];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t row = g * nn + a * n + b;
        // (XM)_{ab} = sum_j X_{aj} M_{jb};  (MX)_{ab} = sum_i M_{ai} X_{ib}
        for (std::size_t j = 0; j < n; ++j) f.add_to(system.entry(row, a * n + j), m.entry(j, b));
        for (std::size_t i = 0; i < n; ++i) f.sub_from(system.entry(row, i * n + b), m.entry(a, i));
      }
    }
  }
  return nn - rank(system);
}

inline std::size_t commutant_dim(const ResidualRep& rep) {
  const auto gens = rep.generators();
  return commutant_dim(std::span<const Matrix>(gens));
}

inline Group image_group(const ResidualRep& rep, std::size_t cap) { return closure(rep.generators(), cap); }

}  // namespace tamerep
