#include "gseq/analytic.hpp"

#include <cmath>

namespace gseq {

namespace {

double phase_of(const std::vector<int>& wave, const Eigen::VectorXd& x, double L, double phase) {
  double th = phase;
  for (std::size_t a = 0; a < wave.size(); ++a) th += 2.0 * M_PI * wave[a] * x(static_cast<Eigen::Index>(a)) / L;
  return th;
}

}  // namespace

SliceSpec SliceSpec::cosine(double amplitude, int axis, int n, int mode) {
  if (axis < 0 || axis >= n) throw DomainError("SliceSpec::cosine: axis out of range");
  CosineMode m;
  m.amplitude = amplitude;
  m.wave.assign(static_cast<std::size_t>(n), 0);
  m.wave[static_cast<std::size_t>(axis)] = mode;
  return {0.0, {m}};
}

double SliceSpec::eval(const Eigen::VectorXd& x, double L) const {
  double v = constant;
  for (const auto& m : modes) {
    if (static_cast<Eigen::Index>(m.wave.size()) != x.size())
      throw DomainError("SliceSpec: wave vector length differs from dimension");
    v += m.amplitude * std::cos(phase_of(m.wave, x, L, m.phase));
  }
  return v;
}

Eigen::VectorXd SliceSpec::sample(const GridGeometry& g) const {
  Eigen::VectorXd out(g.spatial_size());
  for (long s = 0; s < g.spatial_size(); ++s) out(s) = eval(g.position(s), g.L());
  return out;
}

AnalyticField::AnalyticField(int n, double L, RealPoly base, std::vector<Term> terms)
    : n_(n), L_(L), base_(std::move(base)), terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (static_cast<int>(t.wave.size()) != n) throw DomainError("AnalyticField: wave vector length differs from n");
}

PointDerivs AnalyticField::jet(double t, const Eigen::VectorXd& x) const {
  PointDerivs d;
  const RealPoly b1 = base_.derivative(), b2 = base_.derivative(2);
  d.u = base_(t);
  d.ut = b1(t);
  d.utt = b2(t);
  d.grad = Eigen::VectorXd::Zero(n_);
  d.grad_ut = Eigen::VectorXd::Zero(n_);
  d.hess = Eigen::MatrixXd::Zero(n_, n_);
  const double om = 2.0 * M_PI / L_;
  for (const auto& term : terms_) {
    const double th = phase_of(term.wave, x, L_, term.phase);
    const double c = std::cos(th), s = std::sin(th);
    const double p0 = term.coeff(t), p1 = term.coeff.derivative()(t), p2 = term.coeff.derivative(2)(t);
    Eigen::VectorXd w(n_);
    for (int a = 0; a < n_; ++a) w(a) = om * term.wave[static_cast<std::size_t>(a)];
    d.u += p0 * c;
    d.ut += p1 * c;
    d.utt += p2 * c;
    d.grad -= p0 * s * w;
    d.grad_ut -= p1 * s * w;
    d.hess -= p0 * c * w * w.transpose();
  }
  return d;
}

double AnalyticField::value(double t, const Eigen::VectorXd& x) const { return jet(t, x).u; }

SpaceTimeField AnalyticField::sample(const GridGeometry& g) const {
  if (g.n() != n_ || g.L() != L_) throw DomainError("AnalyticField::sample: geometry mismatch");
  return SpaceTimeField::from_function(g, [&](double t, const Eigen::VectorXd& x) { return value(t, x); });
}

SymMatrix AnalyticField::schouten(double t, const Eigen::VectorXd& x, double lambda0) const {
  const PointDerivs d = jet(t, x);
  return schouten_from(lambda0, d.grad, d.hess);
}

SpaceTimeField AnalyticField::fk(const GridGeometry& g) const {
  if (g.n() != n_ || g.L() != L_) throw DomainError("AnalyticField::fk: geometry mismatch");
  return SpaceTimeField::from_function(g, [&](double t, const Eigen::VectorXd& x) {
    const PointDerivs d = jet(t, x);
    return fk_value(d.utt, d.grad_ut, schouten_from(g.lambda0(), d.grad, d.hess).dense(), g.k());
  });
}

AnalyticField manufactured_solution(int n, double L, double amplitude) {
  std::vector<AnalyticField::Term> terms;
  std::vector<int> w1(static_cast<std::size_t>(n), 0);
  w1[0] = 1;
  terms.push_back({RealPoly({amplitude, amplitude}), w1, 0.0});
  if (n >= 2) {
    std::vector<int> w2(static_cast<std::size_t>(n), 0);
    w2[0] = 1;
    w2[1] = 1;
    terms.push_back({RealPoly({0.0, 0.0, 0.5 * amplitude}), w2, 0.3});
  }
  return AnalyticField(n, L, RealPoly({0.0, 0.0, 1.0}), std::move(terms));
}

}  // namespace gseq
