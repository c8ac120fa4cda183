#pragma once

// Quadratic spaces over F_q, q odd, with Q(v) = v^T G v.
//
// Spinor norms are products of Q over the vectors of a reflection
// decomposition, taken modulo squares. The classifier places a group of
// similitudes containing Omega between P-Omega and PGO by computing its image
// in GO / (Omega . scalars).

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tamerep/arith.hpp"
#include "tamerep/error.hpp"
#include "tamerep/field.hpp"
#include "tamerep/group.hpp"
#include "tamerep/matrix.hpp"

namespace tamerep {

enum class SquareClass { square, nonsquare };

constexpr const char* square_class_name(SquareClass c) { return c == SquareClass::square ? "square" : "nonsquare"; }

inline SquareClass square_class(const Element& x) {
  return is_square(x) ? SquareClass::square : SquareClass::nonsquare;
}

inline SquareClass operator*(SquareClass a, SquareClass b) {
  return a == b ? SquareClass::square : SquareClass::nonsquare;
}

inline bool vector_is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Element& e) { return e.is_zero(); });
}

inline Vector axpy(const Element& a, const Vector& x, const Vector& y) {
  Vector out = y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_zero()) out[i] = out[i] + a * x[i];
  }
  return out;
}

inline Vector scale(const Element& a, const Vector& x) {
  Vector out = x;
  for (auto& e : out) e = e * a;
  return out;
}

/// Nondegenerate symmetric bilinear space of even dimension over F_q, q odd.
class QuadraticSpace {
 public:
  explicit QuadraticSpace(Matrix gram) : gram_(std::move(gram)) {
    const Field& f = gram_.field();
    if (f.characteristic() == 2) raise(Errc::odd_characteristic_required, "quadratic spaces need q odd");
    if (!gram_.square() || gram_.rows() == 0 || gram_.rows() % 2 != 0) {
      raise(Errc::bad_input, "Gram matrix must be square of positive even size");
    }
    if (!(gram_.transpose() == gram_)) raise(Errc::bad_input, "Gram matrix must be symmetric");
    det_ = determinant(gram_);
    if (det_.is_zero()) raise(Errc::degenerate_form, "Gram matrix is singular");
    orthogonal_basis_ = diagonalize(standard_basis());
  }

  const Field& field() const { return gram_.field(); }
  const Matrix& gram() const { return gram_; }
  std::size_t dimension() const { return gram_.rows(); }
  const Element& determinant_value() const { return det_; }

  Element b(const Vector& x, const Vector& y) const { return bilinear(gram_, x, y); }
  Element q(const Vector& x) const { return bilinear(gram_, x, x); }

  /// Pairwise orthogonal anisotropic basis, by Gram-Schmidt on the standard basis.
  const std::vector<Vector>& orthogonal_basis() const { return orthogonal_basis_; }

  /// (-1)^{n/2} det G modulo squares.
  SquareClass discriminant_class() const {
    Element d = det_;
    if ((dimension() / 2) % 2 == 1) d = -d;
    return square_class(d);
  }

  bool preserves(const Matrix& m) const { return m.transpose() * gram_ * m == gram_; }

  std::vector<Vector> standard_basis() const {
    const std::size_t n = dimension();
    std::vector<Vector> out;
    for (std::size_t i = 0; i < n; ++i) {
      Vector v(n, field().zero());
      v[i] = field().one();
      out.push_back(std::move(v));
    }
    return out;
  }

  /// Orthogonal basis of span(vectors) when that span is nondegenerate.
  /// Throws DegenerateForm if the span has a radical.
  std::vector<Vector> diagonalize(std::vector<Vector> rest) const {
    std::vector<Vector> out;
    while (!rest.empty()) {
      std::size_t pick = rest.size();
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (!q(rest[i]).is_zero()) {
          pick = i;
          break;
        }
      }
      if (pick == rest.size()) {
        // all isotropic: w_i + w_j is anisotropic whenever B(w_i, w_j) != 0
        for (std::size_t i = 0; i < rest.size() && pick == rest.size(); ++i) {
          for (std::size_t j = i + 1; j < rest.size(); ++j) {
            if (!b(rest[i], rest[j]).is_zero()) {
              rest[i] = axpy(field().one(), rest[j], rest[i]);
              pick = i;
              break;
            }
          }
        }
        if (pick == rest.size()) raise(Errc::degenerate_form, "subspace has a radical");
      }
      Vector x = rest[pick];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
      const Element qinv = q(x).inverse();
      for (auto& w : rest) w = axpy(-(b(w, x) * qinv), x, w);
      out.push_back(std::move(x));
    }
    return out;
  }

 private:
  Matrix gram_;
  Element det_;
  std::vector<Vector> orthogonal_basis_;
};

/// r_v(x) = x - 2 B(x, v) / Q(v) v, as the matrix I - (2/Q(v)) v v^T G.
inline Matrix reflection(const Vector& v, const QuadraticSpace& space) {
  const Field& f = space.field();
  const Element qv = space.q(v);
  if (qv.is_zero()) raise(Errc::bad_input, "reflection through an isotropic vector");
  const Element c = f.from_int(2) / qv;
  const std::size_t n = space.dimension();
  Matrix vcol(f, n, 1), vrow(f, 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    vcol.set(i, 0, v[i]);
    vrow.set(0, i, v[i]);
  }
  return Matrix::identity(f, n) - (vcol * (vrow * space.gram())).scaled(c);
}

struct TypeReport {
  std::size_t witt_index = 0;
  int epsilon = 1;
  SquareClass disc_class = SquareClass::square;
  std::vector<std::pair<Vector, Vector>> hyperbolic_pairs;  // B(e, f) = 1, Q(e) = Q(f) = 0
};

inline constexpr u64 kIsotropicEnumerationLimit = u64{1} << 20;

namespace detail {

inline std::optional<Vector> isotropic_by_enumeration(const std::vector<Vector>& basis, const QuadraticSpace& space) {
  const Field& f = space.field();
  const u64 q = f.order_u64();
  const std::size_t m = basis.size();
  const u64 total = *checked_pow(q, static_cast<unsigned>(m), kIsotropicEnumerationLimit);
  std::vector<u64> digits(m, 0);
  for (u64 idx = 0; idx < total; ++idx) {
    // first coordinate most significant, matching element enumeration order
    u64 rem = idx;
    for (std::size_t i = m; i-- > 0;) {
      digits[i] = rem % q;
      rem /= q;
    }
    Vector v(space.dimension(), f.zero());
    for (std::size_t i = 0; i < m; ++i) {
      if (digits[i] != 0) v = axpy(f.element_at(digits[i]), basis[i], v);
    }
    if (!vector_is_zero(v) && space.q(v).is_zero()) return v;
  }
  return std::nullopt;
}

/// Isotropic vector in the span of at most three basis vectors, by
/// diagonalizing a1 x^2 + a2 y^2 (+ a3 z^2) and solving with z = 1.
inline std::optional<Vector> isotropic_by_completing_square(const std::vector<Vector>& basis,
                                                            const QuadraticSpace& space) {
  const Field& f = space.field();
  std::vector<Vector> rest(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(3, basis.size())));
  std::vector<Vector> diag;
  while (!rest.empty()) {
    for (const auto& w : rest) {
      if (!vector_is_zero(w) && space.q(w).is_zero()) return w;
    }
    std::size_t pick = 0;
    while (pick < rest.size() && vector_is_zero(rest[pick])) ++pick;
    if (pick == rest.size()) break;
    Vector x = rest[pick];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    const Element qinv = space.q(x).inverse();
    for (auto& w : rest) w = axpy(-(space.b(w, x) * qinv), x, w);
    diag.push_back(std::move(x));
  }
  if (diag.size() < 2) return std::nullopt;
  const Element a1 = space.q(diag[0]), a2 = space.q(diag[1]);
  if (diag.size() == 2) {
    const auto x = sqrt(-(a2 / a1));
    if (!x) return std::nullopt;
    return axpy(*x, diag[0], diag[1]);
  }
  const Element a3 = space.q(diag[2]);
  for (u64 idx = 0;; ++idx) {
    const Element x = f.element_at(idx);
    const Element rhs = (-a3 - a1 * x * x) / a2;
    const auto y = sqrt(rhs);
    if (!y) continue;
    return axpy(x, diag[0], axpy(*y, diag[1], diag[2]));
  }
}

inline std::vector<Vector> independent_rows(const std::vector<Vector>& vs, const Field& f, std::size_t n) {
  if (vs.empty()) return {};
  Matrix m(f, vs.size(), n);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, vs[i][j]);
  }
  const auto [red, pivots] = rref(m);
  std::vector<Vector> out;
  for (std::size_t r = 0; r < pivots.size(); ++r) out.push_back(row_vector(red, r));
  return out;
}

}  // namespace detail

/// Splits off hyperbolic planes until the complement is anisotropic.
inline TypeReport witt_decompose(const QuadraticSpace& space) {
  const Field& f = space.field();
  const std::size_t n = space.dimension();
  TypeReport report;
  std::vector<Vector> basis = space.standard_basis();
  while (basis.size() >= 2) {
    std::optional<Vector> u;
    const auto small = f.bounded() ? checked_pow(f.order_u64(), static_cast<unsigned>(basis.size()), kIsotropicEnumerationLimit)
                                   : std::nullopt;
    u = small ? detail::isotropic_by_enumeration(basis, space) : detail::isotropic_by_completing_square(basis, space);
    if (!u) break;
    std::optional<Vector> partner;
    for (const auto& w : basis) {
      const Element buw = space.b(*u, w);
      if (!buw.is_zero()) {
        partner = scale(buw.inverse(), w);
        break;
      }
    }
    if (!partner) raise(Errc::degenerate_form, "isotropic vector in the radical");
    const Element half_q = space.q(*partner) / f.from_int(2);
    Vector fvec = axpy(-half_q, *u, *partner);
    std::vector<Vector> projected;
    for (const auto& w : basis) {
      Vector x = axpy(-space.b(w, fvec), *u, w);
      x = axpy(-space.b(w, *u), fvec, x);
      projected.push_back(std::move(x));
    }
    basis = detail::independent_rows(projected, f, n);
    report.hyperbolic_pairs.emplace_back(std::move(*u), std::move(fvec));
  }
  report.witt_index = report.hyperbolic_pairs.size();
  if (report.witt_index == n / 2) {
    report.epsilon = 1;
  } else if (report.witt_index + 1 == n / 2) {
    report.epsilon = -1;
  } else {
    throw std::logic_error("Witt index out of range for a nondegenerate form");
  }
  report.disc_class = space.discriminant_class();
  if ((report.epsilon == 1) != (report.disc_class == SquareClass::square)) {
    throw std::logic_error("Witt decomposition disagrees with the discriminant criterion");
  }
  return report;
}

/// Vectors v_1..v_s with M = r_{v_1} ... r_{v_s}.
inline std::vector<Vector> reflection_decomposition(const Matrix& m, const QuadraticSpace& space) {
  if (!(m.field() == space.field()) || m.rows() != space.dimension() || !m.square()) {
    raise(Errc::not_orthogonal, "matrix does not act on the space");
  }
  if (!space.preserves(m)) raise(Errc::not_orthogonal, "matrix does not preserve the form");
  Matrix current = m;
  std::vector<Vector> vectors;
  for (const Vector& x : space.orthogonal_basis()) {
    const Vector y = current.apply(x);
    if (y == x) continue;
    const Vector d = axpy(space.field().from_int(-1), y, x);
    if (!space.q(d).is_zero()) {
      current = reflection(d, space) * current;
      vectors.push_back(d);
    } else {
      const Vector s = axpy(space.field().one(), y, x);
      current = reflection(x, space) * (reflection(s, space) * current);
      vectors.push_back(s);
      vectors.push_back(x);
    }
  }
  if (!current.is_identity()) throw std::logic_error("reflection peeling did not terminate at the identity");
  return vectors;
}

inline SquareClass spinor_norm(const Matrix& m, const QuadraticSpace& space) {
  SquareClass acc = SquareClass::square;
  for (const auto& v : reflection_decomposition(m, space)) acc = acc * square_class(space.q(v));
  return acc;
}

enum class Flavor { omega, so, o, go };

constexpr const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::omega: return "Omega";
    case Flavor::so: return "SO";
    case Flavor::o: return "O";
    case Flavor::go: return "GO";
  }
  return "?";
}

/// |O_n^eps(q)| = 2 q^{m(m-1)} (q^m - eps) prod_{i<m} (q^{2i} - 1), m = n/2;
/// SO has index 2, Omega index 2 in SO, and |GO| = |O| (q - 1).
inline BigInt group_order(std::size_t n, int epsilon, u64 q, Flavor flavor) {
  if (n < 2 || n % 2 != 0) raise(Errc::bad_params, "n must be even and at least 2");
  if (epsilon != 1 && epsilon != -1) raise(Errc::bad_params, "epsilon must be +1 or -1");
  const auto fq = q < 3 || q % 2 == 0 ? std::vector<std::pair<u64, unsigned>>{} : factor(q);
  if (fq.size() != 1) raise(Errc::bad_params, "q must be an odd prime power");
  const std::size_t m = n / 2;
  const BigInt bq = q;
  BigInt order = 2 * boost::multiprecision::pow(bq, static_cast<unsigned>(m * (m - 1)));
  order *= boost::multiprecision::pow(bq, static_cast<unsigned>(m)) - epsilon;
  for (std::size_t i = 1; i < m; ++i) order *= boost::multiprecision::pow(bq, static_cast<unsigned>(2 * i)) - 1;
  switch (flavor) {
    case Flavor::omega: return order / 4;
    case Flavor::so: return order / 2;
    case Flavor::o: return order;
    case Flavor::go: return order * (q - 1);
  }
  return order;
}

struct ScalarSubgroup {
  BigInt order;
  std::vector<Element> listed;  // empty when the full scalar group is too large to list
};

inline ScalarSubgroup scalars_in(Flavor flavor, const QuadraticSpace& space) {
  const Field& f = space.field();
  const std::size_t n = space.dimension();
  const Element one = f.one(), minus_one = f.from_int(-1);
  switch (flavor) {
    case Flavor::o:
    case Flavor::so:
      return {2, {one, minus_one}};
    case Flavor::omega:
      if (spinor_norm(Matrix::scalar(minus_one, n), space) == SquareClass::square) return {2, {one, minus_one}};
      return {1, {one}};
    case Flavor::go: {
      ScalarSubgroup out{f.order() - 1, {}};
      if (f.bounded() && f.order_u64() <= (u64{1} << 20)) {
        for (u64 idx = 1; idx < f.order_u64(); ++idx) out.listed.push_back(f.element_at(idx));
        std::sort(out.listed.begin(), out.listed.end());
      }
      return out;
    }
  }
  return {};
}

/// lambda with g^T G g = lambda G, or nullopt if g is not a similitude.
inline std::optional<Element> similitude_factor(const Matrix& g, const QuadraticSpace& space) {
  if (!(g.field() == space.field()) || !g.square() || g.rows() != space.dimension()) return std::nullopt;
  const Matrix& gram = space.gram();
  const Matrix image = g.transpose() * gram * g;
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    for (std::size_t j = 0; j < gram.cols(); ++j) {
      if (gram.field().is_zero(gram.entry(i, j))) continue;
      const Element lambda = image.at(i, j) / gram.at(i, j);
      if (lambda.is_zero() || !(gram.scaled(lambda) == image)) return std::nullopt;
      return lambda;
    }
  }
  return std::nullopt;
}

enum class PlacementLabel { p_omega, pso, po, pgo, other };

constexpr const char* placement_label_name(PlacementLabel l) {
  switch (l) {
    case PlacementLabel::p_omega: return "P_OMEGA";
    case PlacementLabel::pso: return "PSO";
    case PlacementLabel::po: return "PO";
    case PlacementLabel::pgo: return "PGO";
    case PlacementLabel::other: return "OTHER";
  }
  return "OTHER";
}

struct CharacterImages {
  SquareClass multiplier;             // lambda modulo squares
  int det_sign;                       // det(g) / lambda^{n/2}
  std::optional<SquareClass> spinor;  // of g / sqrt(lambda), when lambda is a square
};

struct SubgroupPlacement {
  PlacementLabel label = PlacementLabel::other;
  std::vector<CharacterImages> char_images;
  std::string note;
};

inline constexpr std::size_t kClassifyEnumerationCap = 200000;

namespace detail {

inline CharacterImages character_images(const Matrix& g, const QuadraticSpace& space) {
  const auto lambda = similitude_factor(g, space);
  if (!lambda) raise(Errc::not_similitude, "generator is not a similitude of the form");
  const std::size_t n = space.dimension();
  const Element ratio = determinant(g) / lambda->pow(static_cast<u64>(n / 2));
  CharacterImages out{square_class(*lambda), ratio.is_one() ? 1 : -1, std::nullopt};
  if (!ratio.is_one() && !(ratio == space.field().from_int(-1))) {
    throw std::logic_error("det / lambda^{n/2} is not +-1");
  }
  if (out.multiplier == SquareClass::square) {
    const Element s = *sqrt(*lambda);
    out.spinor = spinor_norm(g.scaled(s.inverse()), space);
  }
  return out;
}

// Image of a square-multiplier similitude in O.Z / Omega.Z, as bits
// (det, spinor); the spinor bit is dropped when -I has non-square spinor
// norm, because then SO.Z = Omega.Z.
inline unsigned orthogonal_part_bits(const CharacterImages& c, bool keep_spinor) {
  unsigned bits = c.det_sign == -1 ? 1U : 0U;
  if (keep_spinor && c.spinor == SquareClass::nonsquare) bits |= 2U;
  return bits;
}

inline unsigned span_bits(const std::vector<unsigned>& vs) {
  unsigned mask = 1U;  // set of reachable values, bit v set when v is in the span
  for (unsigned v : vs) {
    unsigned next = mask;
    for (unsigned x = 0; x < 4; ++x) {
      if (mask & (1U << x)) next |= 1U << (x ^ v);
    }
    mask = next;
  }
  return mask;
}

}  // namespace detail

inline SubgroupPlacement classify_subgroup(const std::vector<Matrix>& gens, const QuadraticSpace& space,
                                           bool promise_contains_omega) {
  if (gens.empty()) raise(Errc::bad_input, "need at least one generator");
  const std::size_t n = space.dimension();
  SubgroupPlacement out;
  for (const auto& g : gens) out.char_images.push_back(detail::character_images(g, space));

  if (!promise_contains_omega) {
    const Group group = [&] {
      try {
        return closure(gens, kClassifyEnumerationCap);
      } catch (const Error& e) {
        if (e.code() == Errc::cap_exceeded) raise(Errc::promise_unverifiable, "group too large to verify Omega");
        throw;
      }
    }();
    const TypeReport type = witt_decompose(space);
    const BigInt omega = group_order(n, type.epsilon, space.field().order_u64(), Flavor::omega);
    std::size_t in_omega = 0;
    for (const auto& m : group.elements()) {
      if (space.preserves(m) && determinant(m).is_one() && spinor_norm(m, space) == SquareClass::square) ++in_omega;
    }
    if (BigInt(in_omega) != omega) {
      out.note = "group does not contain Omega";
      return out;
    }
  }

  const bool keep_spinor =
      spinor_norm(Matrix::scalar(space.field().from_int(-1), n), space) == SquareClass::square;
  const unsigned full = detail::span_bits(keep_spinor ? std::vector<unsigned>{1U, 2U} : std::vector<unsigned>{1U});

  std::vector<std::size_t> nonsquare;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (out.char_images[i].multiplier == SquareClass::nonsquare) nonsquare.push_back(i);
  }

  std::vector<unsigned> bits;
  if (nonsquare.empty()) {
    for (const auto& c : out.char_images) bits.push_back(detail::orthogonal_part_bits(c, keep_spinor));
    const unsigned span = detail::span_bits(bits);
    if (span == 1U) {
      out.label = PlacementLabel::p_omega;
    } else if (keep_spinor && span == detail::span_bits({2U})) {
      out.label = PlacementLabel::pso;
    } else if (span == full) {
      out.label = PlacementLabel::po;
    }
    return out;
  }

  // Schreier generators of the index-2 square-multiplier part, transversal {1, x}.
  const Matrix& x = gens[nonsquare.front()];
  const Matrix x_inv = inverse(x);
  const auto push = [&](const Matrix& m) {
    bits.push_back(detail::orthogonal_part_bits(detail::character_images(m, space), keep_spinor));
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (out.char_images[i].multiplier == SquareClass::square) {
      push(gens[i]);
      push(x * gens[i] * x_inv);
    } else {
      push(gens[i] * x_inv);
      push(x * gens[i]);
    }
  }
  if (detail::span_bits(bits) == full) out.label = PlacementLabel::pgo;
  return out;
}

}  // namespace tamerep
