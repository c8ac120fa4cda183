#include <gtest/gtest.h>

#include "tamerep/induce.hpp"

using namespace tamerep;

namespace {

ResidualRep rep_of(u64 n, u64 p, u64 t, int sign, u64 ell, u64 idx = 1) {
  return build_residual_rep(make_character(n, p, t, sign, idx), ell);
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::bad_input;
}

}  // namespace

TEST(BuildResidualRep, OTypeN8) {
  const ResidualRep rep = rep_of(8, 19, 17, 1, 13);
  EXPECT_EQ(rep.k, 4U);
  EXPECT_EQ(rep.sigma_exponents, (std::vector<u64>{1, 2, 4, 8, 16, 15, 13, 9}));
  EXPECT_EQ(mul_order(rep.zeta), 17U);
  EXPECT_TRUE(rep.phi.pow(8).is_identity());
  EXPECT_TRUE(rep.sigma.pow(17).is_identity());
  EXPECT_TRUE(tame_relation_holds(rep));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(rep.sigma.at(i, i), rep.zeta.pow(rep.sigma_exponents[i]));
}

TEST(BuildResidualRep, STypeWrapsWithMinusOne) {
  const ResidualRep rep = rep_of(8, 19, 17, -1, 13);
  const Matrix minus_i = Matrix::scalar(rep.field.from_int(-1), 8);
  EXPECT_EQ(rep.phi.pow(8), minus_i);
  EXPECT_TRUE(rep.phi.pow(16).is_identity());
  for (u64 e = 1; e < 16; ++e) EXPECT_FALSE(rep.phi.pow(e).is_identity());
}

TEST(BuildResidualRep, PrimeFieldCase) {
  const ResidualRep rep = rep_of(2, 5, 3, 1, 7);
  EXPECT_EQ(rep.k, 1U);
  const u64 z = rep.zeta.coeffs()[0];
  EXPECT_TRUE(z == 2 || z == 4);
  EXPECT_EQ(z * z * z % 7, 1U);
  EXPECT_EQ(z, 2U);  // least generator of F_7^x is 3, and 3^{6/3} = 9 = 2
}

TEST(BuildResidualRep, LargeResidueFieldUsesUnboundedArithmetic) {
  const ResidualRep rep = rep_of(8, 47, 97, 1, 13);
  EXPECT_EQ(rep.k, 96U);
  EXPECT_FALSE(rep.field.bounded());
  EXPECT_FALSE(rep.zeta.is_one());
  EXPECT_TRUE(rep.zeta.pow(97).is_one());
  EXPECT_TRUE(tame_relation_holds(rep));
}

TEST(BuildResidualRep, Errors) {
  EXPECT_EQ(code_of([] { rep_of(8, 19, 3, 1, 13); }), Errc::bad_type);
  EXPECT_EQ(code_of([] { rep_of(8, 19, 17, 1, 17); }), Errc::bad_residue_char);
  EXPECT_EQ(code_of([] { rep_of(8, 19, 17, 1, 19); }), Errc::bad_residue_char);
  EXPECT_EQ(code_of([] { rep_of(8, 19, 17, 1, 2); }), Errc::bad_residue_char);
  EXPECT_EQ(code_of([] { rep_of(8, 19, 17, 1, 9); }), Errc::bad_residue_char);
}

TEST(BuildResidualRep, BadTypeNamesFailedCondition) {
  try {
    rep_of(8, 19, 3, 1, 13);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("admissible"), std::string::npos);
  }
}

TEST(InvariantForms, OTypeIsTheSymmetricPairing) {
  const ResidualRep rep = rep_of(8, 19, 17, 1, 13);
  const auto forms = invariant_forms(rep);
  ASSERT_EQ(forms.size(), 1U);
  Matrix expected(rep.field, 8, 8);
  for (std::size_t i = 0; i < 8; ++i) expected.set(i, (i + 4) % 8, rep.field.one());
  EXPECT_EQ(forms[0], expected);
  EXPECT_EQ(form_kind(forms[0]), FormKind::symmetric);
}

TEST(InvariantForms, STypeIsAlternating) {
  const ResidualRep rep = rep_of(8, 19, 17, -1, 13);
  const auto forms = invariant_forms(rep);
  ASSERT_EQ(forms.size(), 1U);
  EXPECT_EQ(form_kind(forms[0]), FormKind::alternating);
  for (const Matrix& m : rep.generators()) EXPECT_EQ(m.transpose() * forms[0] * m, forms[0]);
}

TEST(InvariantForms, NonSelfDualHasNone) {
  // 11 has order 3 mod 7, and {1, 2, 4} meets no negatives mod 7
  const ResidualRep rep = unchecked::build_residual_rep(make_character(3, 11, 7, 1), 13);
  EXPECT_TRUE(tame_relation_holds(rep));
  EXPECT_TRUE(invariant_forms(rep).empty());
}

TEST(InvariantForms, CanonicalScaling) {
  const ResidualRep rep = rep_of(4, 3, 5, -1, 11);
  for (const Matrix& g : invariant_forms(rep)) {
    for (std::size_t c = 0; c < 16; ++c) {
      const Element v = g.at(c / 4, c % 4);
      if (v.is_zero()) continue;
      EXPECT_TRUE(v.is_one());
      break;
    }
  }
}

TEST(FormKind, Examples) {
  const Field f = make_field(7, 1);
  EXPECT_EQ(form_kind(Matrix::identity(f, 3)), FormKind::symmetric);
  EXPECT_EQ(form_kind(Matrix::from_ints(f, {{0, 1}, {-1, 0}})), FormKind::alternating);
  EXPECT_EQ(form_kind(Matrix::from_ints(f, {{0, 1}, {0, 0}})), FormKind::neither);
}

TEST(CommutantDim, Examples) {
  EXPECT_EQ(commutant_dim(rep_of(8, 19, 17, 1, 13)), 1U);
  EXPECT_EQ(commutant_dim(rep_of(2, 5, 3, 1, 7)), 1U);
  // two copies of one 1-dimensional character
  const Field f = make_field(7, 1);
  const std::vector<Matrix> gens{Matrix::scalar(f.from_int(2), 2), Matrix::scalar(f.from_int(3), 2)};
  EXPECT_EQ(commutant_dim(std::span<const Matrix>(gens)), 4U);
}

TEST(ImageGroup, Orders) {
  EXPECT_EQ(image_group(rep_of(8, 19, 17, 1, 13), 1000).order(), 136U);
  EXPECT_EQ(image_group(rep_of(8, 19, 17, -1, 13), 1000).order(), 272U);
  const Group dihedral = image_group(rep_of(2, 5, 3, 1, 7), 100);
  EXPECT_EQ(dihedral.order(), 6U);
  EXPECT_TRUE(is_metacyclic_tn(dihedral, 3, 2).has_value());
}

TEST(ImageGroup, CapExceeded) {
  try {
    image_group(rep_of(8, 19, 17, 1, 13), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
}

TEST(ExponentIndex, GaloisConjugatesAreEquivalent) {
  for (u64 idx : {1, 3, 5, 16}) {
    const ResidualRep rep = rep_of(8, 19, 17, 1, 13, idx);
    EXPECT_EQ(image_group(rep, 1000).order(), 136U);
    const auto forms = invariant_forms(rep);
    ASSERT_EQ(forms.size(), 1U);
    EXPECT_EQ(form_kind(forms[0]), FormKind::symmetric);
    // conjugate characters permute the diagonal of Sigma
    std::vector<u64> exps = rep.sigma_exponents, base = rep_of(8, 19, 17, 1, 13).sigma_exponents;
    for (auto& e : base) e = e * idx % 17;
    std::sort(exps.begin(), exps.end());
    std::sort(base.begin(), base.end());
    EXPECT_EQ(exps, base);
  }
}
