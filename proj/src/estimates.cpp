#include "gseq/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gseq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

C0Slacks verify_c0(const SpaceTimeField& u, double a) {
  const GridGeometry& g = u.geometry();
  const Eigen::VectorXd u0 = u.level(0), u1 = u.level(g.levels() - 1);
  const SpaceTimeField lo = comparison_field(g, -a, u0, u1);
  const SpaceTimeField hi = comparison_field(g, 0.0, u0, u1);
  return {(u.values() - lo.values()).minCoeff(), (hi.values() - u.values()).minCoeff()};
}

UtSlacks verify_ut(const SpaceTimeField& u, double a) {
  const GridGeometry& g = u.geometry();
  const int last = g.levels() - 1;
  const double ht = g.ht();
  UtSlacks out{kInf, kInf};
  for (long s = 0; s < g.spatial_size(); ++s) {
    const double diff = u(last, s) - u(0, s);
    for (int j = 0; j <= last; ++j) {
      double ut;
      if (j == 0)
        ut = (-3.0 * u(0, s) + 4.0 * u(1, s) - u(2, s)) / (2.0 * ht);
      else if (j == last)
        ut = (3.0 * u(last, s) - 4.0 * u(last - 1, s) + u(last - 2, s)) / (2.0 * ht);
      else
        ut = (u(j + 1, s) - u(j - 1, s)) / (2.0 * ht);
      out.low = std::min(out.low, ut - (diff - a));
      out.high = std::min(out.high, (diff + a) - ut);
    }
  }
  return out;
}

ECone verify_e_cone(const SpaceTimeField& u) {
  const GridGeometry& g = u.geometry();
  ECone out{kInf, kInf};
  for (int j = 1; j <= g.Nt(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) {
      const PointDerivs d = derivatives_at(u, j, s);
      const SymMatrix a = schouten_from(g.lambda0(), d.grad, d.hess);
      const Eigen::MatrixXd e = d.utt * a.dense() - d.grad_ut * d.grad_ut.transpose();
      out.margin = std::min(out.margin, cone_label_from_sigma(symk_data(e, g.k()).sigma, g.k()).margin);
      out.chain_min = std::min(out.chain_min, d.utt * a.dense().trace() - d.grad_ut.squaredNorm());
    }
  return out;
}

Suprema measure_suprema(const SpaceTimeField& u) {
  const GridGeometry& g = u.geometry();
  Suprema out;
  for (int j = 0; j < g.levels(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) {
      if (j >= 1 && j <= g.Nt()) {
        const PointDerivs d = derivatives_at(u, j, s);
        out.utt = std::max(out.utt, d.utt);
        out.grad_ut = std::max(out.grad_ut, d.grad_ut.norm());
        out.grad = std::max(out.grad, d.grad.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.hess, Eigen::EigenvaluesOnly);
        out.hess = std::max(out.hess, es.eigenvalues().cwiseAbs().maxCoeff());
      } else {
        // Boundary levels: spatial quantities only.
        const double hx = g.hx();
        Eigen::VectorXd grad(g.n());
        Eigen::MatrixXd hess(g.n(), g.n());
        for (int p = 0; p < g.n(); ++p) {
          const long sp = g.neighbor(s, p, 1), sm = g.neighbor(s, p, -1);
          grad(p) = (u(j, sp) - u(j, sm)) / (2.0 * hx);
          hess(p, p) = (u(j, sp) - 2.0 * u(j, s) + u(j, sm)) / (hx * hx);
          for (int q = p + 1; q < g.n(); ++q) {
            hess(p, q) = hess(q, p) = (u(j, g.neighbor(sp, q, 1)) - u(j, g.neighbor(sp, q, -1)) -
                                       u(j, g.neighbor(sm, q, 1)) + u(j, g.neighbor(sm, q, -1))) /
                                      (4.0 * hx * hx);
          }
        }
        out.grad = std::max(out.grad, grad.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
        out.hess = std::max(out.hess, es.eigenvalues().cwiseAbs().maxCoeff());
      }
    }
  return out;
}

bool BoundReport::holds(double tol) const {
  return c0.low >= -tol && c0.high >= -tol && ut.low >= -tol && ut.high >= -tol && e_cone.margin > 0.0 &&
         e_cone.chain_min > 0.0;
}

namespace {

nlohmann::ordered_json bound_json(const BoundReport& b) {
  return {{"c0_low_slack", b.c0.low},
          {"c0_high_slack", b.c0.high},
          {"ut_low_slack", b.ut.low},
          {"ut_high_slack", b.ut.high},
          {"e_cone_margin", b.e_cone.margin},
          {"e_chain_min", b.e_cone.chain_min},
          {"utt_min", b.utt_min},
          {"sup_grad", b.sup.grad},
          {"sup_utt", b.sup.utt},
          {"sup_hess", b.sup.hess},
          {"sup_grad_ut", b.sup.grad_ut}};
}

}  // namespace

std::string BoundReport::to_json() const { return bound_json(*this).dump(2) + "\n"; }

BoundReport verify_bounds(const SpaceTimeField& u, double a) {
  BoundReport b;
  b.c0 = verify_c0(u, a);
  b.ut = verify_ut(u, a);
  b.e_cone = verify_e_cone(u);
  b.sup = measure_suprema(u);
  const GridGeometry& g = u.geometry();
  b.utt_min = kInf;
  for (int j = 1; j <= g.Nt(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) b.utt_min = std::min(b.utt_min, derivatives_at(u, j, s).utt);
  return b;
}

double RefinementStudy::max_relative_variation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const Suprema& p = rows[i].bounds.sup;
    const Suprema& q = rows[i + 1].bounds.sup;
    const double pairs[4][2] = {{p.grad, q.grad}, {p.utt, q.utt}, {p.hess, q.hess}, {p.grad_ut, q.grad_ut}};
    for (const auto& pr : pairs) {
      const double m = std::max(std::abs(pr[0]), std::abs(pr[1]));
      if (m > 0.0) worst = std::max(worst, std::abs(pr[1] - pr[0]) / m);
    }
  }
  return worst;
}

std::string RefinementStudy::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "N,Nt,converged,a,c0_low_slack,c0_high_slack,ut_low_slack,ut_high_slack,e_cone_margin,sup_grad,sup_utt,"
        "sup_hess,sup_grad_ut\n";
  for (const auto& r : rows) {
    const auto& b = r.bounds;
    os << r.N << "," << r.Nt << "," << (r.converged ? 1 : 0) << "," << r.a << "," << b.c0.low << "," << b.c0.high
       << "," << b.ut.low << "," << b.ut.high << "," << b.e_cone.margin << "," << b.sup.grad << "," << b.sup.utt
       << "," << b.sup.hess << "," << b.sup.grad_ut << "\n";
  }
  return os.str();
}

std::string RefinementStudy::to_json() const {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    auto row = bound_json(r.bounds);
    row["N"] = r.N;
    row["Nt"] = r.Nt;
    row["converged"] = r.converged;
    row["a"] = r.a;
    arr.push_back(row);
  }
  j["rows"] = arr;
  j["max_relative_variation"] = max_relative_variation();
  return j.dump(2) + "\n";
}

RefinementStudy refinement_study(const Problem& problem, const std::vector<int>& resolutions, const SolverConfig& cfg) {
  if (resolutions.size() < 2) throw DomainError("refinement_study: at least two resolutions required");
  RefinementStudy out;
  for (int N : resolutions) {
    const GridGeometry g = problem.geometry(N);
    const SpaceTimeField f = SpaceTimeField::constant(g, problem.f);
    const ContinuityOutcome sol = continuity_solve(g, problem.u0.sample(g), problem.u1.sample(g), f, cfg);
    RefinementRow row;
    row.N = N;
    row.Nt = g.Nt();
    row.converged = sol.report.converged;
    row.a = sol.a;
    row.bounds = verify_bounds(sol.state.u, sol.a);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace gseq
