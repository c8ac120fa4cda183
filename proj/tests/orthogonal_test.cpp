#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "tamerep/induce.hpp"
#include "tamerep/orthogonal.hpp"

using namespace tamerep;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::bad_input;
}

struct Fixture {
  oracle::OrthogonalFamily fam;
  Field field;
  QuadraticSpace space;

  Fixture(int n, int eps, int q, bool with_go = false)
      : fam(oracle::orthogonal_family(n, eps, q, with_go)),
        field(make_field(static_cast<u64>(q), 1)),
        space(oracle::to_matrix(fam.gram, n, field)) {}

  Matrix lift(oracle::Packed m) const { return oracle::to_matrix(m, fam.n, field); }

  std::vector<Matrix> lift(const std::vector<oracle::Packed>& ms) const {
    std::vector<Matrix> out;
    for (auto m : ms) out.push_back(lift(m));
    return out;
  }

  std::vector<oracle::Packed> sorted(const oracle::Set& s) const {
    std::vector<oracle::Packed> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
  }
};

Matrix random_symmetric(const Field& f, std::size_t n, std::mt19937_64& rng) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Element e = f.from_int(static_cast<long long>(rng() % f.characteristic()));
      m.set(i, j, e);
      m.set(j, i, e);
    }
  }
  return m;
}

}  // namespace

TEST(QuadraticSpace, Validation) {
  const Field f3 = make_field(3, 1);
  EXPECT_EQ(code_of([&] { QuadraticSpace(Matrix::from_ints(f3, {{1, 1}, {0, 1}})); }), Errc::bad_input);
  EXPECT_EQ(code_of([&] { QuadraticSpace(Matrix::from_ints(f3, {{1, 1}, {1, 1}})); }), Errc::degenerate_form);
  EXPECT_EQ(code_of([&] { QuadraticSpace(Matrix::identity(f3, 3)); }), Errc::bad_input);
  EXPECT_EQ(code_of([&] { QuadraticSpace(Matrix::identity(make_field(2, 2), 2)); }),
            Errc::odd_characteristic_required);
}

TEST(WittDecompose, PermutationGramOverF13To4) {
  const Field f = make_field(13, 4);
  Matrix g(f, 8, 8);
  for (std::size_t i = 0; i < 4; ++i) {
    g.set(i, i + 4, f.one());
    g.set(i + 4, i, f.one());
  }
  const TypeReport r = witt_decompose(QuadraticSpace(g));
  EXPECT_EQ(r.witt_index, 4U);
  EXPECT_EQ(r.epsilon, 1);
}

TEST(WittDecompose, SmallPlanesOverF3) {
  const Field f3 = make_field(3, 1);
  const TypeReport aniso = witt_decompose(QuadraticSpace(Matrix::from_ints(f3, {{1, 0}, {0, 1}})));
  EXPECT_EQ(aniso.witt_index, 0U);
  EXPECT_EQ(aniso.epsilon, -1);
  const TypeReport hyp = witt_decompose(QuadraticSpace(Matrix::from_ints(f3, {{1, 0}, {0, -1}})));
  EXPECT_EQ(hyp.witt_index, 1U);
  EXPECT_EQ(hyp.epsilon, 1);
}

TEST(WittDecompose, HyperbolicPairsAreValid) {
  std::mt19937_64 rng(23);
  for (u64 q : {3, 13}) {
    const Field f = make_field(q, 1);
    for (int trial = 0; trial < 10; ++trial) {
      Matrix g = random_symmetric(f, 6, rng);
      if (determinant(g).is_zero()) continue;
      const QuadraticSpace v(g);
      const TypeReport r = witt_decompose(v);
      for (std::size_t a = 0; a < r.hyperbolic_pairs.size(); ++a) {
        const auto& [e, fv] = r.hyperbolic_pairs[a];
        EXPECT_TRUE(v.q(e).is_zero());
        EXPECT_TRUE(v.q(fv).is_zero());
        EXPECT_TRUE(v.b(e, fv).is_one());
        for (std::size_t b = a + 1; b < r.hyperbolic_pairs.size(); ++b) {
          const auto& [e2, f2] = r.hyperbolic_pairs[b];
          EXPECT_TRUE(v.b(e, e2).is_zero() && v.b(e, f2).is_zero() && v.b(fv, e2).is_zero() && v.b(fv, f2).is_zero());
        }
      }
    }
  }
}

// Both isotropic-vector searches (enumeration and completing the square)
// must agree with the discriminant computed by naive elimination.
TEST(WittDecompose, AgreesWithDiscriminantOnRandomForms) {
  std::mt19937_64 rng(29);
  for (long long q : {3LL, 13LL}) {
    const Field f = make_field(static_cast<u64>(q), 1);
    for (std::size_t n : {2U, 4U, 6U, 8U}) {
      int done = 0;
      while (done < 40) {
        const Matrix g = random_symmetric(f, n, rng);
        std::vector<oracle::Vec> rows(n, oracle::Vec(n));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) rows[i][j] = static_cast<long long>(g.entry(i, j)[0]);
        }
        long long d = oracle::det_rows(rows, q);
        if (d == 0) continue;
        if ((n / 2) % 2 == 1) d = oracle::mod(-d, q);
        const TypeReport r = witt_decompose(QuadraticSpace(g));
        EXPECT_EQ(r.epsilon, oracle::naive_square(d, q) ? 1 : -1);
        EXPECT_EQ(r.witt_index, r.epsilon == 1 ? n / 2 : n / 2 - 1);
        ++done;
      }
    }
  }
}

TEST(WittDecompose, LargeFieldInvariantForm) {
  const ResidualRep rep = build_residual_rep(make_character(8, 47, 97, 1), 13);
  const auto forms = invariant_forms(rep);
  ASSERT_EQ(forms.size(), 1U);
  const TypeReport r = witt_decompose(QuadraticSpace(forms[0]));
  EXPECT_EQ(r.witt_index, 4U);
}

TEST(SpinorNorm, Examples) {
  const Field f3 = make_field(3, 1);
  const QuadraticSpace h(Matrix::from_ints(f3, {{0, 1}, {1, 0}}));
  EXPECT_EQ(spinor_norm(Matrix::identity(f3, 2), h), SquareClass::square);
  const Vector v{f3.from_int(1), f3.from_int(1)};  // Q(v) = 2, a non-square
  EXPECT_EQ(spinor_norm(reflection(v, h), h), SquareClass::nonsquare);
  const Vector w{f3.from_int(1), f3.from_int(2)};  // Q(w) = 4 = 1
  EXPECT_EQ(spinor_norm(reflection(w, h), h), SquareClass::square);
  EXPECT_EQ(spinor_norm(Matrix::scalar(f3.from_int(-1), 2), h), SquareClass::nonsquare);
}

TEST(SpinorNorm, RejectsNonOrthogonal) {
  const Field f5 = make_field(5, 1);
  const QuadraticSpace h(Matrix::from_ints(f5, {{0, 1}, {1, 0}}));
  EXPECT_EQ(code_of([&] { spinor_norm(Matrix::from_ints(f5, {{1, 1}, {0, 1}}), h); }), Errc::not_orthogonal);
}

TEST(SpinorNorm, DecompositionReproducesTheMatrix) {
  const Fixture fx(4, -1, 5);
  std::mt19937_64 rng(31);
  const auto elems = fx.sorted(fx.fam.o);
  for (int i = 0; i < 100; ++i) {
    const Matrix m = fx.lift(elems[rng() % elems.size()]);
    const auto vs = reflection_decomposition(m, fx.space);
    EXPECT_LE(vs.size(), 8U);
    Matrix prod = Matrix::identity(fx.field, 4);
    for (const auto& v : vs) prod = prod * reflection(v, fx.space);
    EXPECT_EQ(prod, m);
    EXPECT_EQ(determinant(m), fx.field.from_int(vs.size() % 2 == 0 ? 1 : -1));
  }
}

TEST(SpinorNorm, HomomorphismAndKernel) {
  std::mt19937_64 rng(37);
  for (int n : {2, 4}) {
    for (int q : {3, 5}) {
      for (int eps : {1, -1}) {
        const Fixture fx(n, eps, q);
        const auto elems = fx.sorted(fx.fam.o);
        for (int i = 0; i < 200; ++i) {
          const Matrix a = fx.lift(elems[rng() % elems.size()]), b = fx.lift(elems[rng() % elems.size()]);
          EXPECT_EQ(spinor_norm(a * b, fx.space), spinor_norm(a, fx.space) * spinor_norm(b, fx.space));
        }
        std::size_t kernel = 0;
        for (auto m : fx.fam.so) {
          const bool in_kernel = spinor_norm(fx.lift(m), fx.space) == SquareClass::square;
          kernel += in_kernel ? 1 : 0;
          EXPECT_EQ(in_kernel, fx.fam.omega.contains(m));
        }
        EXPECT_EQ(2 * kernel, fx.fam.so.size()) << n << " " << q << " " << eps;
      }
    }
  }
}

TEST(GroupOrder, Examples) {
  EXPECT_EQ(group_order(2, 1, 3, Flavor::o), 4);
  EXPECT_EQ(group_order(2, -1, 3, Flavor::o), 8);
  EXPECT_EQ(group_order(4, 1, 3, Flavor::o), 1152);
  EXPECT_EQ(group_order(4, -1, 3, Flavor::o), 1440);
  EXPECT_EQ(group_order(2, 1, 7, Flavor::omega), 3);
  EXPECT_EQ(group_order(2, -1, 7, Flavor::omega), 4);
}

TEST(GroupOrder, MatchesEnumeration) {
  for (int n : {2, 4}) {
    for (int q : {3, 5}) {
      for (int eps : {1, -1}) {
        const auto fam = oracle::orthogonal_family(n, eps, q);
        const u64 uq = static_cast<u64>(q);
        EXPECT_EQ(group_order(n, eps, uq, Flavor::omega), fam.omega.size());
        EXPECT_EQ(group_order(n, eps, uq, Flavor::so), fam.so.size());
        EXPECT_EQ(group_order(n, eps, uq, Flavor::o), fam.o.size());
        EXPECT_EQ(group_order(n, eps, uq, Flavor::go), fam.go.size());
      }
    }
  }
}

TEST(GroupOrder, BadParams) {
  EXPECT_EQ(code_of([] { group_order(3, 1, 3, Flavor::o); }), Errc::bad_params);
  EXPECT_EQ(code_of([] { group_order(4, 0, 3, Flavor::o); }), Errc::bad_params);
  EXPECT_EQ(code_of([] { group_order(4, 1, 4, Flavor::o); }), Errc::bad_params);
  EXPECT_EQ(code_of([] { group_order(4, 1, 15, Flavor::o); }), Errc::bad_params);
  EXPECT_EQ(group_order(4, 1, 9, Flavor::o), 2 * 81 * 80 * 80);
}

TEST(ScalarsIn, Examples) {
  const Field f3 = make_field(3, 1);
  const QuadraticSpace h(Matrix::from_ints(f3, {{0, 1}, {1, 0}}));
  EXPECT_EQ(scalars_in(Flavor::omega, h).order, 1);
  EXPECT_EQ(scalars_in(Flavor::o, h).listed.size(), 2U);
  EXPECT_EQ(scalars_in(Flavor::so, h).order, 2);
  const Field f13 = make_field(13, 1);
  const QuadraticSpace h13(Matrix::from_ints(f13, {{0, 1}, {1, 0}}));
  EXPECT_EQ(scalars_in(Flavor::go, h13).order, 12);
  EXPECT_EQ(scalars_in(Flavor::go, h13).listed.size(), 12U);
  // -1 is a square mod 13, so -I = r_{e+f} r_{e-f} has square spinor norm
  EXPECT_EQ(scalars_in(Flavor::omega, h13).order, 2);
}

TEST(ScalarsIn, AgreesWithEnumeration) {
  for (int eps : {1, -1}) {
    const Fixture fx(4, eps, 3);
    for (auto [flavor, set] : {std::pair{Flavor::omega, &fx.fam.omega}, std::pair{Flavor::so, &fx.fam.so},
                               std::pair{Flavor::o, &fx.fam.o}}) {
      std::size_t count = 0;
      for (int c = 1; c < 3; ++c) count += set->contains(oracle::scalar(4, c)) ? 1 : 0;
      EXPECT_EQ(scalars_in(flavor, fx.space).order, count);
    }
  }
}

namespace {

struct ClassifierCase {
  Fixture fx;
  std::vector<Matrix> omega, so, o;
  explicit ClassifierCase(int eps) : fx(4, eps, 3, true) {
    omega = fx.lift(fx.fam.omega_gens);
    so = omega;
    for (auto m : fx.sorted(fx.fam.so)) {
      if (!fx.fam.omega.contains(m)) {
        so.push_back(fx.lift(m));
        break;
      }
    }
    o = fx.lift(fx.fam.o_gens);
  }
};

}  // namespace

TEST(ClassifySubgroup, ChainAtFourPlusThree) {
  const ClassifierCase c(1);
  EXPECT_EQ(classify_subgroup(c.omega, c.fx.space, true).label, PlacementLabel::p_omega);
  EXPECT_EQ(classify_subgroup(c.so, c.fx.space, true).label, PlacementLabel::pso);
  EXPECT_EQ(classify_subgroup(c.o, c.fx.space, true).label, PlacementLabel::po);
  std::vector<Matrix> go = c.o;
  go.push_back(c.fx.lift(oracle::nonsquare_similitude(4, 1, 3)));
  EXPECT_EQ(classify_subgroup(go, c.fx.space, true).label, PlacementLabel::pgo);
}

TEST(ClassifySubgroup, NonSquareSimilitudeAtTwoPlusThree) {
  const Fixture fx(2, 1, 3, true);
  auto gens = fx.lift(fx.fam.o_gens);
  gens.push_back(fx.lift(oracle::nonsquare_similitude(2, 1, 3)));
  const auto placement = classify_subgroup(gens, fx.space, true);
  EXPECT_EQ(placement.label, PlacementLabel::pgo);
  EXPECT_EQ(placement.char_images.back().multiplier, SquareClass::nonsquare);
  EXPECT_FALSE(placement.char_images.back().spinor.has_value());
  EXPECT_EQ(classify_subgroup(gens, fx.space, false).label, PlacementLabel::pgo);
}

TEST(ClassifySubgroup, PatternOutsideTheChainsIsOther) {
  const ClassifierCase c(1);
  // Omega plus a reflection through a non-square vector: kernel of det * spinor
  auto gens = c.omega;
  for (const auto& v : oracle::all_vectors(4, 3)) {
    const long long qv = oracle::form(c.fx.fam.gram, 4, 3, v, v);
    if (qv != 0 && !oracle::naive_square(qv, 3)) {
      gens.push_back(c.fx.lift(oracle::reflection(c.fx.fam.gram, 4, 3, v)));
      break;
    }
  }
  EXPECT_EQ(classify_subgroup(gens, c.fx.space, true).label, PlacementLabel::other);
}

TEST(ClassifySubgroup, InvariantUnderSimilitudeConjugation) {
  std::mt19937_64 rng(41);
  for (int eps : {1, -1}) {
    const ClassifierCase c(eps);
    const auto go = c.fx.sorted(c.fx.fam.go);
    std::vector<std::vector<Matrix>> sets{c.omega, c.so, c.o};
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix s = c.fx.lift(go[rng() % go.size()]);
      const Matrix s_inv = inverse(s);
      for (const auto& gens : sets) {
        std::vector<Matrix> conj;
        for (const auto& g : gens) conj.push_back(s * g * s_inv);
        EXPECT_EQ(classify_subgroup(conj, c.fx.space, true).label, classify_subgroup(gens, c.fx.space, true).label);
      }
    }
  }
}

TEST(ClassifySubgroup, VerifiesPromiseByEnumeration) {
  const ClassifierCase c(-1);
  EXPECT_EQ(classify_subgroup(c.omega, c.fx.space, false).label, PlacementLabel::p_omega);
  EXPECT_EQ(classify_subgroup(c.o, c.fx.space, false).label, PlacementLabel::po);
  const auto small = classify_subgroup({c.o.front()}, c.fx.space, false);
  EXPECT_EQ(small.label, PlacementLabel::other);
  EXPECT_FALSE(small.note.empty());
}

TEST(ClassifySubgroup, Errors) {
  const Field f5 = make_field(5, 1);
  const QuadraticSpace h(Matrix::from_ints(f5, {{0, 1}, {1, 0}}));
  EXPECT_EQ(code_of([&] { classify_subgroup({Matrix::from_ints(f5, {{1, 1}, {0, 1}})}, h, true); }),
            Errc::not_similitude);
  const Fixture big(4, 1, 7);
  EXPECT_EQ(code_of([&] { classify_subgroup(big.lift(big.fam.o_gens), big.space, false); }),
            Errc::promise_unverifiable);
}
