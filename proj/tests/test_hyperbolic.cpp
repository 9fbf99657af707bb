#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "gseq/hyperbolic.hpp"
#include "gseq/sampling.hpp"

using namespace gseq;

namespace {

// F_k from an eigendecomposition of r: T_{k-1} is diagonal with entries
// sigma_{k-1}(lam | i), each computed by direct expansion.
double fk_oracle(const BlockMatrix& R, int k) {
  const int n = R.n();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R.r.dense());
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::VectorXd y = es.eigenvectors().transpose() * R.x;
  auto sigma = [&](int skip, int j) {
    std::vector<double> c{1.0};  // prod (1 + lam_i z), coefficient of z^j
    for (int i = 0; i < n; ++i) {
      if (i == skip) continue;
      c.push_back(0.0);
      for (std::size_t m = c.size() - 1; m > 0; --m) c[m] += lam(i) * c[m - 1];
    }
    return j < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(j)] : 0.0;
  };
  double pair = 0.0;
  for (int i = 0; i < n; ++i) pair += y(i) * y(i) * sigma(i, k - 1);
  return R.r00 * sigma(-1, k) - pair;
}

}  // namespace

TEST(Hyperbolic, FkMatchesOracle) {
  Rng rng(21);
  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      const BlockMatrix R = random_block(rng, n);
      EXPECT_NEAR(eval_Fk(R, k), fk_oracle(R, k), 1e-12);
    }
}

TEST(Hyperbolic, FkAtTopDegreeIsDeterminant) {
  Rng rng(2);
  for (int n = 1; n <= 6; ++n) {
    const BlockMatrix R = random_block(rng, n);
    EXPECT_NEAR(eval_Fk(R, n), R.assemble().dense().determinant(), 1e-12);
  }
}

TEST(Hyperbolic, FkOfIdentity) {
  EXPECT_DOUBLE_EQ(eval_Fk(BlockMatrix::identity(4), 2), 6.0);
  EXPECT_TRUE(in_S(BlockMatrix::identity(4), 2));
  EXPECT_THROW(eval_Fk(BlockMatrix::identity(3), 4), DomainError);
}

TEST(Hyperbolic, BlockRoundTrip) {
  Rng rng(4);
  const SymMatrix full = random_symmetric(rng, 5);
  const BlockMatrix R = BlockMatrix::from_full(full);
  EXPECT_EQ(R.n(), 4);
  EXPECT_LE((R.assemble().dense() - full.dense()).norm(), 0.0);
  const BlockMatrix S = R.shifted(0.5);
  EXPECT_DOUBLE_EQ(S.r00, R.r00 + 0.5);
  EXPECT_DOUBLE_EQ(S.r(2, 2), R.r(2, 2) + 0.5);
  EXPECT_DOUBLE_EQ(S.r(1, 2), R.r(1, 2));
}

TEST(Hyperbolic, PolynomialsAgreeWithDirectEvaluation) {
  Rng rng(9);
  for (int n = 2; n <= 7; ++n)
    for (int k = 1; k <= n; ++k) {
      const BlockMatrix R = random_block(rng, n);
      const RealPoly p = p_poly(R, k);
      const RealPoly s = shifted_sigma_poly(R.r, k);
      EXPECT_EQ(p.degree(), k + 1);
      EXPECT_EQ(s.degree(), k);
      for (double t : {-1.7, -0.3, 0.0, 0.9, 2.4}) {
        const BlockMatrix Rt = R.shifted(t);
        EXPECT_NEAR(p(t), fk_oracle(Rt, k), 1e-10 * (1.0 + std::abs(p(t))));
        EXPECT_NEAR(s(t), sigma_k(Rt.r, k), 1e-10 * (1.0 + std::abs(s(t))));
      }
    }
}

TEST(Hyperbolic, LeadingCoefficients) {
  Rng rng(10);
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= n; ++k) {
      const BlockMatrix R = random_block(rng, n);
      EXPECT_NEAR(p_poly(R, k).leading(), binomial(n, k), 1e-9 * binomial(n, k));
      EXPECT_NEAR(shifted_sigma_poly(R.r, k).leading(), binomial(n, k), 1e-9 * binomial(n, k));
      if (k >= 2) {
        EXPECT_NEAR(q_poly(R.r, 0, k).leading(), binomial(n - 1, k - 1), 1e-9 * binomial(n, k));
      }
    }
}

TEST(Hyperbolic, DerivativeFormsAgree) {
  Rng rng(12);
  for (int n = 2; n <= 7; ++n)
    for (int k = 1; k <= n; ++k) {
      const SymMatrix r = random_symmetric(rng, n);
      const RealPoly a = shifted_sigma_poly(r, k);
      const RealPoly b = shifted_sigma_poly_via_derivative(r, k);
      for (int i = 0; i <= k; ++i) EXPECT_NEAR(a.coeff(i), b.coeff(i), 1e-10 * (1.0 + std::abs(a.coeff(i))));
      for (int i = 0; i < n; ++i) {
        const RealPoly q = q_poly(r, i, k);
        const RealPoly qd = q_poly_via_derivative(r, i, k);
        for (int j = 0; j <= std::max(q.degree(), qd.degree()); ++j)
          EXPECT_NEAR(q.coeff(j), qd.coeff(j), 1e-10 * (1.0 + std::abs(q.coeff(j))));
      }
    }
  EXPECT_THROW(q_poly(SymMatrix::identity(3), 3, 2), DomainError);
}

TEST(Hyperbolic, CertificateOfIdentity) {
  // p(t) = C(n, k) (1 + t)^(k + 1): every root sits at -1.
  const CertReport c = certify_theorem(BlockMatrix::identity(4), 2, 1e-4);
  EXPECT_TRUE(c.real_rooted);
  EXPECT_TRUE(c.interlaced);
  EXPECT_TRUE(c.localized_wide);
  EXPECT_DOUBLE_EQ(c.leading_coeff, 6.0);
}

TEST(Hyperbolic, CertificateOnRandomBlocks) {
  Rng rng(33);
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= n; ++k)
      for (int rep = 0; rep < 50; ++rep) {
        const CertReport c = certify_theorem(random_block(rng, n), k);
        EXPECT_TRUE(c.all_true()) << "n=" << n << " k=" << k;
        EXPECT_LE(c.max_imag_rel, 1e-8);
      }
}

TEST(Hyperbolic, ConcavityTrivialCases) {
  Rng rng(14);
  const BlockMatrix a = random_S_member(rng, 4, 2);
  EXPECT_NEAR(concavity_probe(a, a, 2).worst_slack, 0.0, 1e-12);

  // x = 0, k = n: concavity of det^(1/(n+1)) on positive diagonals.
  const BlockMatrix d1(1.0, Eigen::VectorXd::Zero(3), SymMatrix::diagonal(std::vector<double>{1.0, 2.0, 3.0}));
  const BlockMatrix d2(4.0, Eigen::VectorXd::Zero(3), SymMatrix::diagonal(std::vector<double>{0.5, 5.0, 1.0}));
  const ConcavityResult r = concavity_probe(d1, d2, 3);
  EXPECT_GE(r.worst_slack, 0.0);
  EXPECT_TRUE(r.segment_in_S);

  const BlockMatrix bad(-1.0, Eigen::VectorXd::Zero(3), SymMatrix::identity(3));
  EXPECT_THROW(concavity_probe(bad, d1, 3), DomainError);
}

TEST(Hyperbolic, Lem2SlackAtIdentity) {
  Eigen::VectorXd g(2);
  g << 0.3, -1.2;
  EXPECT_NEAR(lem2_slack(SymMatrix::identity(2), g, 1).value, 0.0, 1e-14);
  EXPECT_NEAR(lem2_slack(SymMatrix::identity(2), Eigen::VectorXd::Zero(2), 1).value, 0.0, 1e-14);
  // At E = I the left side is C(n-1, k-1) (n/2 - 1) |g|^2.
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; 2 * k <= n; ++k) {
      const Eigen::VectorXd h = Eigen::VectorXd::LinSpaced(n, -1.0, 0.7);
      const double hand = binomial(n - 1, k - 1) * (n / 2.0 - 1.0) * h.squaredNorm() -
                          (n - 2.0 * k) * (n - k + 1.0) / (2.0 * n) * binomial(n, k - 1) * h.squaredNorm();
      EXPECT_NEAR(lem2_slack(SymMatrix::identity(n), h, k).value, hand, 1e-11 * (1.0 + std::abs(hand)));
    }
  EXPECT_THROW(lem2_slack(SymMatrix::identity(3), Eigen::VectorXd::Zero(3), 2), DomainError);
}

TEST(Hyperbolic, AndrewsSlackAtIdentity) {
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(andrews_matrix_slack(SymMatrix::identity(2 * k), k).value, 0.0, 1e-10);
  EXPECT_THROW(andrews_matrix_slack(SymMatrix::identity(5), 2), DomainError);
}
