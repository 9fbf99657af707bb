#include <gtest/gtest.h>

#include "gseq/poly.hpp"
#include "gseq/symk.hpp"

using namespace gseq;

TEST(Poly, TrimsNegligibleLeadingCoefficients) {
  const RealPoly p({1.0, 2.0, 1e-20});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(RealPoly({0.0, 0.0}).is_zero());
}

TEST(Poly, Arithmetic) {
  const RealPoly a({1.0, 1.0});   // 1 + t
  const RealPoly b({-1.0, 1.0});  // -1 + t
  const RealPoly prod = a * b;
  ASSERT_EQ(prod.degree(), 2);
  EXPECT_EQ(prod.coeff(0), -1.0);
  EXPECT_EQ(prod.coeff(1), 0.0);
  EXPECT_EQ(prod.coeff(2), 1.0);
  EXPECT_EQ((a - a).degree(), 0);
  EXPECT_DOUBLE_EQ(prod(3.0), 8.0);
  const RealPoly d = RealPoly::from_shifts({1.0, 2.0, 3.0}).derivative(2);  // 6t + 12
  EXPECT_EQ(d.degree(), 1);
  EXPECT_DOUBLE_EQ(d.coeff(0), 12.0);
  EXPECT_DOUBLE_EQ(d.coeff(1), 6.0);
}

TEST(Poly, RootsOfProductOfShifts) {
  const std::vector<double> shifts{-3.0, -0.5, 0.25, 2.0, 7.0};
  const RootList r = real_roots(RealPoly::from_shifts(shifts));
  ASSERT_TRUE(r.real_rooted());
  ASSERT_EQ(r.roots.size(), 5u);
  const std::vector<double> want{-7.0, -2.0, -0.25, 0.5, 3.0};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(r.roots[i], want[i], 1e-11);
}

TEST(Poly, ComplexRootsAreNotRealized) {
  const RootList r = real_roots(RealPoly({1.0, 0.0, 1.0}));  // t^2 + 1
  EXPECT_FALSE(r.real_rooted());
  EXPECT_NEAR(r.max_imag, 1.0, 1e-12);
  EXPECT_NEAR(r.max_imag_rel, 0.5, 1e-12);
  EXPECT_THROW(real_roots(RealPoly({2.0})), DomainError);
}

TEST(Poly, RepeatedRootCountsAsReal) {
  const RootList r = real_roots(RealPoly::from_shifts({1.0, 1.0, -2.0}), 1e-6);
  EXPECT_TRUE(r.real_rooted());
}

TEST(Poly, InterlacingOfDerivative) {
  const RealPoly f = RealPoly::from_shifts({-4.0, -1.0, 0.5, 3.0});
  const RootList rf = real_roots(f);
  const RootList rg = real_roots(f.derivative());
  const InterlaceResult ok = check_interlacing(rg.roots, rf.roots);
  EXPECT_TRUE(ok.ok);
  EXPECT_GT(ok.worst_slack, 0.0);
}

TEST(Poly, InterlacingRules) {
  EXPECT_TRUE(check_interlacing({0.0, 2.0}, {1.0, 3.0}).ok);
  EXPECT_FALSE(check_interlacing({0.0, 2.0}, {3.0, 4.0}).ok);
  EXPECT_TRUE(check_interlacing({1.0}, {0.0, 2.0}).ok);
  EXPECT_FALSE(check_interlacing({3.0}, {0.0, 2.0}).ok);
  EXPECT_THROW(check_interlacing({1.0}, {0.0, 1.0, 2.0}), DomainError);
}
