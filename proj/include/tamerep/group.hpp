#pragma once

// Enumerated finite matrix groups of small order.
//
// After closure, every element is addressed by its position in the canonical
// (sorted) element list. Products are evaluated on indices: right
// multiplication by a generator is a stored permutation, and an arbitrary
// element is reached by its word in the generators from the BFS tree.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tamerep/arith.hpp"
#include "tamerep/error.hpp"
#include "tamerep/matrix.hpp"

namespace tamerep {

struct CoeffsHash {
  std::size_t operator()(const Coeffs& c) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (u64 v : c) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

inline constexpr std::size_t kEnumerationLimit = 10000;

class Subgroup;

class Group {
 public:
  const Field& field() const { return d_->field; }
  std::size_t dimension() const { return d_->dim; }
  std::size_t order() const { return d_->elements.size(); }
  const std::vector<Matrix>& elements() const { return d_->elements; }
  const Matrix& element(std::size_t i) const { return d_->elements[i]; }
  const std::vector<std::size_t>& generator_indices() const { return d_->gens; }
  std::size_t identity() const { return d_->identity; }

  std::vector<Matrix> generators() const {
    std::vector<Matrix> out;
    for (std::size_t g : d_->gens) out.push_back(d_->elements[g]);
    return out;
  }

  std::optional<std::size_t> find(const Matrix& m) const {
    auto it = d_->index.find(m.data());
    if (it == d_->index.end() || m.rows() != d_->dim || m.cols() != d_->dim || !(m.field() == d_->field)) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t multiply(std::size_t a, std::size_t b) const {
    std::size_t x = a;
    for (std::uint32_t g : word(b)) x = d_->right[g][x];
    return x;
  }

  std::size_t inverse(std::size_t a) const {
    const auto w = word(a);
    std::size_t x = d_->identity;
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = d_->right_inv[*it][x];
    return x;
  }

  std::size_t power(std::size_t a, u64 e) const {
    std::size_t result = d_->identity, base = a;
    while (e != 0) {
      if (e & 1U) result = multiply(result, base);
      e >>= 1U;
      if (e != 0) base = multiply(base, base);
    }
    return result;
  }

  /// y^{-1} x y
  std::size_t conjugate(std::size_t x, std::size_t y) const { return multiply(multiply(inverse(y), x), y); }

  std::size_t element_order(std::size_t a) const {
    std::size_t x = a, e = 1;
    while (x != d_->identity) {
      x = multiply(x, a);
      ++e;
    }
    return e;
  }

  /// Permutation x -> g^{-1} x g for the i-th generator g.
  const std::vector<std::uint32_t>& conjugation_by_generator(std::size_t i) const { return d_->conj[i]; }

  /// Orbits of conjugation, each sorted, ordered by least member.
  std::vector<std::vector<std::size_t>> conjugacy_classes() const;

  Subgroup generate(std::span<const std::size_t> gens) const;
  Subgroup whole() const;
  Subgroup trivial() const;

  friend Group closure(const std::vector<Matrix>& gens, std::size_t cap);

 private:
  struct Data {
    Field field;
    std::size_t dim = 0;
    std::vector<Matrix> elements;
    std::unordered_map<Coeffs, std::size_t, CoeffsHash> index;
    std::vector<std::size_t> gens;
    std::size_t identity = 0;
    std::vector<std::vector<std::uint32_t>> right;      // right[g][x] = x * gen_g
    std::vector<std::vector<std::uint32_t>> right_inv;  // right_inv[g][x] = x * gen_g^{-1}
    std::vector<std::vector<std::uint32_t>> conj;       // conj[g][x] = gen_g^{-1} x gen_g
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> parent_gen;
  };

  std::vector<std::uint32_t> word(std::size_t b) const {
    std::vector<std::uint32_t> w;
    for (std::size_t x = b; x != d_->identity; x = d_->parent[x]) w.push_back(d_->parent_gen[x]);
    std::reverse(w.begin(), w.end());
    return w;
  }

  std::shared_ptr<const Data> d_;
};

/// A subgroup of an enumerated group, as a sorted list of element indices.
class Subgroup {
 public:
  Subgroup(Group parent, std::vector<std::size_t> members, std::vector<std::size_t> gens)
      : parent_(std::move(parent)), members_(std::move(members)), gens_(std::move(gens)) {
    std::sort(members_.begin(), members_.end());
    mask_.assign(parent_.order(), false);
    for (std::size_t m : members_) mask_[m] = true;
  }

  const Group& parent() const { return parent_; }
  std::size_t order() const { return members_.size(); }
  std::size_t index() const { return parent_.order() / members_.size(); }
  const std::vector<std::size_t>& members() const { return members_; }
  const std::vector<std::size_t>& generators() const { return gens_; }
  bool contains(std::size_t x) const { return mask_[x]; }

  bool contains(const Subgroup& o) const {
    return std::all_of(o.members_.begin(), o.members_.end(), [&](std::size_t x) { return mask_[x]; });
  }

  bool is_normal() const {
    for (std::size_t g = 0; g < parent_.generator_indices().size(); ++g) {
      const auto& conj = parent_.conjugation_by_generator(g);
      for (std::size_t x : members_) {
        if (!mask_[conj[x]]) return false;
      }
    }
    return true;
  }

  Subgroup intersect(const Subgroup& o) const {
    std::vector<std::size_t> common;
    for (std::size_t x : members_) {
      if (o.mask_[x]) common.push_back(x);
    }
    return Subgroup(parent_, std::move(common), {});
  }

  /// Matrices of the members, in canonical order.
  std::vector<Matrix> matrices() const {
    std::vector<Matrix> out;
    for (std::size_t x : members_) out.push_back(parent_.element(x));
    return out;
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }

 private:
  Group parent_;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> gens_;
  std::vector<bool> mask_;
};

/// Breadth-first product closure of `gens`.
inline Group closure(const std::vector<Matrix>& gens, std::size_t cap) {
  if (gens.empty()) raise(Errc::bad_input, "closure needs at least one generator");
  const Field& f = gens.front().field();
  const std::size_t dim = gens.front().rows();
  for (const Matrix& g : gens) {
    if (!g.square() || g.rows() != dim) raise(Errc::shape_mismatch, "generators must be square of one size");
    if (!(g.field() == f)) raise(Errc::field_mismatch, "generators over different fields");
    if (determinant(g).is_zero()) raise(Errc::singular_generator, "generator is singular");
  }

  std::vector<Matrix> found{Matrix::identity(f, dim)};
  std::unordered_map<Coeffs, std::size_t, CoeffsHash> seen{{found[0].data(), 0}};
  std::vector<std::vector<std::uint32_t>> edges(gens.size());
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      Matrix y = found[head] * gens[g];
      auto [it, inserted] = seen.try_emplace(y.data(), found.size());
      if (inserted) {
        if (found.size() >= cap) raise(Errc::cap_exceeded, "group order exceeds cap " + std::to_string(cap));
        found.push_back(std::move(y));
      }
      edges[g].push_back(static_cast<std::uint32_t>(it->second));
    }
  }

  const std::size_t order = found.size();
  std::vector<std::size_t> perm(order);
  for (std::size_t i = 0; i < order; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return found[a] < found[b]; });
  std::vector<std::uint32_t> rank_of(order);
  for (std::size_t i = 0; i < order; ++i) rank_of[perm[i]] = static_cast<std::uint32_t>(i);

  auto d = std::make_shared<Group::Data>();
  d->field = f;
  d->dim = dim;
  d->elements.reserve(order);
  for (std::size_t i = 0; i < order; ++i) d->elements.push_back(std::move(found[perm[i]]));
  for (std::size_t i = 0; i < order; ++i) d->index.emplace(d->elements[i].data(), i);
  d->identity = rank_of[0];
  for (std::size_t g = 0; g < gens.size(); ++g) d->gens.push_back(rank_of[seen.at(gens[g].data())]);

  d->right.assign(gens.size(), std::vector<std::uint32_t>(order));
  d->right_inv.assign(gens.size(), std::vector<std::uint32_t>(order));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    std::vector<bool> hit(order, false);
    for (std::size_t x = 0; x < order; ++x) {
      const std::uint32_t y = rank_of[edges[g][x]];
      d->right[g][rank_of[x]] = y;
      if (hit[y]) throw std::logic_error("right multiplication by a generator is not a permutation");
      hit[y] = true;
      d->right_inv[g][y] = rank_of[x];
    }
  }

  d->parent.assign(order, 0);
  d->parent_gen.assign(order, 0);
  std::vector<bool> visited(order, false);
  std::deque<std::size_t> queue{d->identity};
  visited[d->identity] = true;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const std::size_t y = d->right[g][x];
      if (visited[y]) continue;
      visited[y] = true;
      d->parent[y] = static_cast<std::uint32_t>(x);
      d->parent_gen[y] = static_cast<std::uint32_t>(g);
      queue.push_back(y);
    }
  }

  Group group;
  group.d_ = d;
  d->conj.assign(gens.size(), std::vector<std::uint32_t>(order));
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::size_t ginv = group.inverse(d->gens[g]);
    for (std::size_t x = 0; x < order; ++x) {
      d->conj[g][x] = static_cast<std::uint32_t>(group.multiply(ginv, d->right[g][x]));
    }
  }
  return group;
}

inline std::vector<std::vector<std::size_t>> Group::conjugacy_classes() const {
  const std::size_t order = this->order();
  std::vector<bool> done(order, false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t r = 0; r < order; ++r) {
    if (done[r]) continue;
    std::vector<std::size_t> orbit{r};
    done[r] = true;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      for (const auto& conj : d_->conj) {
        const std::size_t y = conj[orbit[head]];
        if (!done[y]) {
          done[y] = true;
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    classes.push_back(std::move(orbit));
  }
  return classes;
}

inline Subgroup Group::generate(std::span<const std::size_t> gens) const {
  std::vector<bool> in(order(), false);
  std::vector<std::size_t> members{d_->identity};
  in[d_->identity] = true;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (std::size_t g : gens) {
      const std::size_t y = multiply(members[head], g);
      if (!in[y]) {
        in[y] = true;
        members.push_back(y);
      }
    }
  }
  return Subgroup(*this, std::move(members), std::vector<std::size_t>(gens.begin(), gens.end()));
}

inline Subgroup Group::whole() const {
  std::vector<std::size_t> all(order());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return Subgroup(*this, std::move(all), d_->gens);
}

inline Subgroup Group::trivial() const { return Subgroup(*this, {d_->identity}, {}); }

namespace detail {

/// Subgroup generated by `seed` together with the generators of `base`,
/// adding only elements not already covered.
inline Subgroup extend(const Group& g, const Subgroup& base, std::span<const std::size_t> seed) {
  std::vector<std::size_t> gens = base.generators();
  Subgroup current = base;
  for (std::size_t x : seed) {
    if (current.contains(x)) continue;
    gens.push_back(x);
    current = g.generate(gens);
  }
  return current;
}

}  // namespace detail

/// All normal subgroups: normal closures of conjugacy classes and their
/// iterated joins, sorted by order.
inline std::vector<Subgroup> normal_subgroups(const Group& g) {
  if (g.order() > kEnumerationLimit) raise(Errc::too_large, "group exceeds the enumeration limit");
  std::vector<Subgroup> found{g.trivial()};
  const auto add = [&](Subgroup s) {
    for (const auto& existing : found) {
      if (existing == s) return false;
    }
    found.push_back(std::move(s));
    return true;
  };
  for (const auto& cls : g.conjugacy_classes()) add(detail::extend(g, g.trivial(), cls));

  for (std::size_t i = 0; i < found.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (found[i].contains(found[j]) || found[j].contains(found[i])) continue;
      add(detail::extend(g, found[i], found[j].members()));
    }
  }

  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.members() < b.members();
  });
  for (const auto& s : found) {
    if (!s.is_normal()) throw std::logic_error("normal subgroup enumeration produced a non-normal subgroup");
  }
  return found;
}

/// Intersection of all normal subgroups of index at most d.
inline Subgroup gamma_d(const Group& g, std::size_t d, const std::vector<Subgroup>& normals) {
  if (d == 0) raise(Errc::bad_input, "d must be positive");
  Subgroup acc = g.whole();
  for (const auto& n : normals) {
    if (n.index() <= d) acc = acc.intersect(n);
  }
  return acc;
}

inline Subgroup gamma_d(const Group& g, std::size_t d) { return gamma_d(g, d, normal_subgroups(g)); }

struct MetacyclicWitness {
  std::size_t cyclic_generator;  // generates the normal subgroup of order t
  std::size_t lift;              // maps to a generator of the cyclic quotient
  u64 exponent;                  // lift * c * lift^{-1} = c^exponent
};

/// Normal cyclic C of order t with G/C cyclic and the quotient acting on C
/// through a character of exact order n modulo t.
inline std::optional<MetacyclicWitness> is_metacyclic_tn(const Group& g, u64 t, u64 n) {
  if (g.order() > kEnumerationLimit) raise(Errc::too_large, "group exceeds the enumeration limit");
  if (t < 2 || g.order() % t != 0) return std::nullopt;
  const std::size_t quotient = g.order() / t;

  std::vector<std::size_t> candidates = g.generator_indices();
  for (std::size_t i = 0; i < g.order(); ++i) candidates.push_back(i);
  std::vector<bool> tried(g.order(), false);

  for (std::size_t c : candidates) {
    if (tried[c] || g.element_order(c) != t) continue;
    std::vector<std::size_t> powers{g.identity()};
    for (u64 e = 1; e < t; ++e) powers.push_back(g.multiply(powers.back(), c));
    for (std::size_t x : powers) tried[x] = true;
    const Subgroup cyc(g, powers, {c});
    if (!cyc.is_normal()) continue;

    std::unordered_map<std::size_t, u64> exponent_of;
    for (u64 e = 0; e < t; ++e) exponent_of[powers[e]] = e;

    for (std::size_t lift : candidates) {
      std::size_t x = lift, e = 1;
      while (!cyc.contains(x) && e <= quotient) {
        x = g.multiply(x, lift);
        ++e;
      }
      if (e != quotient) continue;
      const std::size_t image = g.multiply(g.multiply(lift, c), g.inverse(lift));
      const u64 r = exponent_of.at(image);
      // every generator of G/C induces the same automorphism group on C
      if (r == 1 || mult_order_mod(r, t) != n) break;
      return MetacyclicWitness{c, lift, r};
    }
  }
  return std::nullopt;
}

}  // namespace tamerep
