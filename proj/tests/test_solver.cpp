#include <gtest/gtest.h>

#include "gseq/analytic.hpp"
#include "gseq/solver.hpp"

using namespace gseq;

namespace {

Eigen::VectorXd zeros(const GridGeometry& g) { return Eigen::VectorXd::Zero(g.spatial_size()); }

}  // namespace

TEST(Solver, ConfigValidation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.armijo_ratio = 1.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.s_schedule = {1.0, 0.5, 0.5};
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.linear_solver = "cg";
  EXPECT_THROW(c.validate(), DomainError);
  const auto sched = SolverConfig::default_schedule(3);
  EXPECT_EQ(sched, (std::vector<double>{1.0, 0.5, 0.25, 0.125}));
}

TEST(Solver, SubsolutionConstant) {
  const GridGeometry g(2, 1, 6, 4);
  // F_k(U_{-a}) = 2 a lambda0 n = 2a for zero data.
  EXPECT_EQ(subsolution_constant(g, zeros(g), zeros(g), SpaceTimeField::constant(g, 1.0)), 1.0);
  EXPECT_EQ(subsolution_constant(g, zeros(g), zeros(g), SpaceTimeField::constant(g, 5.0)), 4.0);
}

TEST(Solver, HomogeneousDataGivesClosedForm) {
  for (auto [n, k] : {std::pair{2, 1}, std::pair{4, 2}}) {
    const GridGeometry g(n, k, 4, 4);
    const double c = 1.7;
    const double a = c / (2.0 * std::pow(g.lambda0(), k) * binomial(n, k));
    const SolveOutcome out = newton_solve(comparison_field(g, -2.0 * a, zeros(g), zeros(g)),
                                          SpaceTimeField::constant(g, c), SolverConfig{});
    ASSERT_TRUE(out.report.converged) << out.report.diagnosis;
    EXPECT_LE(out.report.iterations, 5);
    EXPECT_LE((out.state.u - comparison_field(g, -a, zeros(g), zeros(g))).sup_abs(), 1e-10);
  }
}

TEST(Solver, RejectsBadStarts) {
  const GridGeometry g(2, 1, 6, 4);
  const SpaceTimeField f = SpaceTimeField::constant(g, 1.0);
  EXPECT_THROW(newton_solve(comparison_field(g, 1.0, zeros(g), zeros(g)), f, SolverConfig{}), DomainError);
  EXPECT_THROW(newton_solve(comparison_field(g, -1.0, zeros(g), zeros(g)), SpaceTimeField::constant(g, -1.0),
                            SolverConfig{}),
               DomainError);
}

TEST(Solver, ContinuityPathWithCosineData) {
  const GridGeometry g(2, 1, 8, 7);
  const Eigen::VectorXd u0 = SliceSpec::cosine(0.1, 0, 2).sample(g);
  const Eigen::VectorXd u1 = SliceSpec::cosine(-0.1, 1, 2).sample(g);
  const SpaceTimeField f = SpaceTimeField::constant(g, 1.0);
  const ContinuityOutcome out = continuity_solve(g, u0, u1, f, SolverConfig{});
  ASSERT_TRUE(out.report.converged);
  EXPECT_DOUBLE_EQ(out.path.back(), 1.0);
  EXPECT_LE(residual_sup(out.state.u, f), 1e-9);
  EXPECT_TRUE(out.report.margins.positive());
  EXPECT_LE((out.state.u.level(0) - u0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((out.state.u.level(g.levels() - 1) - u1).cwiseAbs().maxCoeff(), 0.0);

  SolverConfig direct;
  direct.linear_solver = "direct";
  const ContinuityOutcome other = continuity_solve(g, u0, u1, f, direct);
  EXPECT_LE(uniqueness_probe(out.state.u, other.state.u).sup_gap, 1e-9);
}

TEST(Solver, ManufacturedSolutionIsRecovered) {
  const GridGeometry g(2, 1, 16, 15);
  const AnalyticField ms = manufactured_solution(2, g.L(), 0.1);
  const SpaceTimeField exact = ms.sample(g);
  const ContinuityOutcome out =
      continuity_solve(g, exact.level(0), exact.level(g.levels() - 1), ms.fk(g), SolverConfig{});
  ASSERT_TRUE(out.report.converged);
  EXPECT_LT((out.state.u - exact).sup_abs(), 2e-2);
}

TEST(Solver, ShortSweepIsMonotone) {
  const GridGeometry g(2, 1, 8, 7);
  SolverConfig cfg;
  cfg.s_schedule = {1.0, 0.5, 0.25, 0.125};
  const SweepResult sw = degenerate_sweep(g, SliceSpec::cosine(0.05, 0, 2).sample(g), zeros(g), cfg);
  ASSERT_TRUE(sw.converged);
  ASSERT_EQ(sw.stages.size(), 4u);
  EXPECT_TRUE(sw.monotone);
  ASSERT_EQ(sw.cauchy.size(), 3u);
  EXPECT_LT(sw.cauchy[2], sw.cauchy[0]);
  EXPECT_LE((sw.limit - sw.stages.back().state.u).sup_abs(), 0.0);
}

TEST(Solver, GradientTermLabel) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
  e(0) = 1.0;
  // |g|^2/2 I - g g^T = diag(-1/2, 1/2, 1/2): sigma_2 = -1/4
  const ConeLabel l3 = gradient_term_label(e, 2);
  EXPECT_FALSE(l3.inside);
  EXPECT_NEAR(l3.margin, -0.25, 1e-15);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(4);
  f(1) = 1.0;
  EXPECT_NEAR(gradient_term_label(f, 2).margin, 0.0, 1e-15);  // closure when n = 2k
  EXPECT_TRUE(gradient_term_label(Eigen::VectorXd::Ones(5), 2).inside);
}

TEST(Solver, ShrinkToStrict) {
  const GridGeometry g(2, 1, 6, 5);
  const SpaceTimeField u = manufactured_solution(2, g.L(), 0.1).sample(g);
  const ShrinkResult r = shrink_to_strict(u, 1e-3, 1);
  EXPECT_TRUE(r.strict());
  EXPECT_GE(r.concavity_slack, 0.0);
  const double t = g.t(2);
  EXPECT_NEAR(r.w(2, 4), 0.999 * u(2, 4) + 1e-3 * t * t, 1e-15);
  EXPECT_THROW(shrink_to_strict(u, 0.0, 1), DomainError);
  EXPECT_THROW(shrink_to_strict(u, 1.0, 1), DomainError);

  const GridGeometry g3(3, 1, 4, 3);
  EXPECT_THROW(shrink_to_strict(SpaceTimeField::constant(g3, 0.0), 1e-3, 2), DomainError);
}

TEST(Solver, UniquenessProbeLocatesGap) {
  const GridGeometry g(2, 1, 4, 3);
  SpaceTimeField a = SpaceTimeField::constant(g, 1.0);
  SpaceTimeField b = a;
  b(2, 5) += 0.25;
  const UniquenessReport r = uniqueness_probe(a, b);
  EXPECT_DOUBLE_EQ(r.sup_gap, 0.25);
  EXPECT_EQ(r.level, 2);
  EXPECT_EQ(r.s, 5);
}
