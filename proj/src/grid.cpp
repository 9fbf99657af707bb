#include "gseq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <exception>
#include <thread>

#include "gseq/parallel.hpp"

namespace gseq {

// ---------------------------------------------------------------------------
// Geometry and fields

GridGeometry::GridGeometry(int n, int k, int N, int Nt, double L, double lambda0)
    : n_(n), k_(k), N_(N), Nt_(Nt), L_(L), lambda0_(lambda0) {
  if (n < 1) throw DomainError("GridGeometry: n must be positive");
  if (k < 1 || 2 * k > n) throw DomainError("GridGeometry: 2k <= n violated (n = " + std::to_string(n) +
                                            ", k = " + std::to_string(k) + ")");
  if (N < 4) throw DomainError("GridGeometry: N must be at least 4");
  if (Nt < 3) throw DomainError("GridGeometry: Nt must be at least 3");
  if (!(lambda0 > 0.0)) throw DomainError("GridGeometry: lambda0 must be positive");
  if (!(L > 0.0)) throw DomainError("GridGeometry: L must be positive");
  strides_.assign(static_cast<std::size_t>(n), 1);
  for (int a = n - 2; a >= 0; --a) strides_[static_cast<std::size_t>(a)] = strides_[static_cast<std::size_t>(a + 1)] * N;
  spatial_ = strides_[0] * N;
}

std::vector<int> GridGeometry::coords(long s) const {
  std::vector<int> c(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) c[static_cast<std::size_t>(a)] = static_cast<int>((s / stride(a)) % N_);
  return c;
}

Eigen::VectorXd GridGeometry::position(long s) const {
  Eigen::VectorXd x(n_);
  for (int a = 0; a < n_; ++a) x(a) = hx() * static_cast<double>((s / stride(a)) % N_);
  return x;
}

long GridGeometry::spatial_index(const std::vector<int>& c) const {
  long s = 0;
  for (int a = 0; a < n_; ++a) s += stride(a) * (((c[static_cast<std::size_t>(a)] % N_) + N_) % N_);
  return s;
}

long GridGeometry::neighbor(long s, int axis, int offset) const {
  const long st = stride(axis);
  const long ci = (s / st) % N_;
  const long cj = ((ci + offset) % N_ + N_) % N_;
  return s + (cj - ci) * st;
}

bool GridGeometry::operator==(const GridGeometry& o) const {
  return n_ == o.n_ && k_ == o.k_ && N_ == o.N_ && Nt_ == o.Nt_ && L_ == o.L_ && lambda0_ == o.lambda0_;
}

SpaceTimeField::SpaceTimeField(GridGeometry g) : g_(std::move(g)), v_(Eigen::VectorXd::Zero(g_.size())) {}

SpaceTimeField::SpaceTimeField(GridGeometry g, Eigen::VectorXd values) : g_(std::move(g)), v_(std::move(values)) {
  if (v_.size() != g_.size()) throw DomainError("SpaceTimeField: value count does not match geometry");
  if (!v_.allFinite()) throw DomainError("SpaceTimeField: values must be finite");
}

SpaceTimeField SpaceTimeField::from_function(const GridGeometry& g,
                                             const std::function<double(double, const Eigen::VectorXd&)>& fn) {
  SpaceTimeField out(g);
  for (long s = 0; s < g.spatial_size(); ++s) {
    const Eigen::VectorXd x = g.position(s);
    for (int j = 0; j < g.levels(); ++j) out(j, s) = fn(g.t(j), x);
  }
  return out;
}

SpaceTimeField SpaceTimeField::constant(const GridGeometry& g, double c) {
  return SpaceTimeField(g, Eigen::VectorXd::Constant(g.size(), c));
}

Eigen::VectorXd SpaceTimeField::level(int j) const { return v_.segment(j * g_.spatial_size(), g_.spatial_size()); }

void SpaceTimeField::set_level(int j, const Eigen::VectorXd& slice) {
  if (slice.size() != g_.spatial_size()) throw DomainError("set_level: slice size mismatch");
  v_.segment(j * g_.spatial_size(), g_.spatial_size()) = slice;
}

Eigen::VectorXd SpaceTimeField::interior() const { return v_.segment(g_.spatial_size(), g_.interior_size()); }

void SpaceTimeField::set_interior(const Eigen::VectorXd& x) {
  if (x.size() != g_.interior_size()) throw DomainError("set_interior: size mismatch");
  v_.segment(g_.spatial_size(), g_.interior_size()) = x;
}

namespace {
void require_same(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.geometry() != b.geometry()) throw DomainError("field geometries differ");
}
}  // namespace

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same(a, b);
  return SpaceTimeField(a.geometry(), a.values() + b.values());
}

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same(a, b);
  return SpaceTimeField(a.geometry(), a.values() - b.values());
}

SpaceTimeField operator*(double c, const SpaceTimeField& a) { return SpaceTimeField(a.geometry(), c * a.values()); }

std::string point_name(const GridGeometry& g, int level, long s) {
  std::ostringstream os;
  os << "level " << level << " (t = " << g.t(level) << "), x = (";
  const auto c = g.coords(s);
  for (std::size_t a = 0; a < c.size(); ++a) os << (a ? ", " : "") << c[a];
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Pointwise jets

namespace {

void spatial_jet(const SpaceTimeField& u, int level, long s, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  const GridGeometry& g = u.geometry();
  const int n = g.n();
  const double hx = g.hx();
  const double c = u(level, s);
  grad.resize(n);
  hess.resize(n, n);
  for (int a = 0; a < n; ++a) {
    const long sp = g.neighbor(s, a, 1), sm = g.neighbor(s, a, -1);
    grad(a) = (u(level, sp) - u(level, sm)) / (2.0 * hx);
    hess(a, a) = (u(level, sp) - 2.0 * c + u(level, sm)) / (hx * hx);
    for (int b = a + 1; b < n; ++b) {
      const double v = (u(level, g.neighbor(sp, b, 1)) - u(level, g.neighbor(sp, b, -1)) -
                        u(level, g.neighbor(sm, b, 1)) + u(level, g.neighbor(sm, b, -1))) /
                       (4.0 * hx * hx);
      hess(a, b) = v;
      hess(b, a) = v;
    }
  }
}

void require_interior(const GridGeometry& g, int level) {
  if (level < 1 || level > g.Nt())
    throw DomainError("time level " + std::to_string(level) + " is not interior");
}

}  // namespace

PointDerivs derivatives_at(const SpaceTimeField& u, int level, long s) {
  const GridGeometry& g = u.geometry();
  require_interior(g, level);
  PointDerivs d;
  const double ht = g.ht(), hx = g.hx();
  d.u = u(level, s);
  d.ut = (u(level + 1, s) - u(level - 1, s)) / (2.0 * ht);
  d.utt = (u(level + 1, s) - 2.0 * d.u + u(level - 1, s)) / (ht * ht);
  spatial_jet(u, level, s, d.grad, d.hess);
  d.grad_ut.resize(g.n());
  for (int a = 0; a < g.n(); ++a) {
    const long sp = g.neighbor(s, a, 1), sm = g.neighbor(s, a, -1);
    d.grad_ut(a) = (u(level + 1, sp) - u(level + 1, sm) - u(level - 1, sp) + u(level - 1, sm)) / (4.0 * ht * hx);
  }
  return d;
}

SymMatrix schouten_from(double lambda0, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
  Eigen::MatrixXd a = hess + grad * grad.transpose();
  a.diagonal().array() += lambda0 - 0.5 * grad.squaredNorm();
  return SymMatrix::from_dense(a);
}

SymMatrix schouten_at(const SpaceTimeField& u, int level, long s) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  spatial_jet(u, level, s, grad, hess);
  return schouten_from(u.geometry().lambda0(), grad, hess);
}

SymkData symk_data(const Eigen::MatrixXd& m, int k) {
  const int n = static_cast<int>(m.rows());
  if (k < 1 || k > n) throw DomainError("symk_data: k outside [1, n]");
  SymkData out;
  out.sigma.assign(static_cast<std::size_t>(n + 1), 0.0);
  out.sigma[0] = 1.0;
  // T_0 = I; sigma_j = tr(M T_{j-1}) / j; T_j = sigma_j I - M T_{j-1}.
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
  for (int j = 1; j <= n; ++j) {
    const Eigen::MatrixXd mt = m * t;
    out.sigma[static_cast<std::size_t>(j)] = mt.trace() / j;
    if (j == k) out.T = t;
    if (j < n) {
      t = -mt;
      t.diagonal().array() += out.sigma[static_cast<std::size_t>(j)];
    }
  }
  out.T = 0.5 * (out.T + out.T.transpose()).eval();
  return out;
}

double fk_value(double utt, const Eigen::VectorXd& p, const Eigen::MatrixXd& A, int k) {
  const SymkData d = symk_data(A, k);
  return utt * d.sigma[static_cast<std::size_t>(k)] - p.dot(d.T * p);
}

PointState point_state(const SpaceTimeField& u, int level, long s) {
  const GridGeometry& g = u.geometry();
  const PointDerivs d = derivatives_at(u, level, s);
  PointState ps;
  ps.utt = d.utt;
  ps.grad_ut = d.grad_ut;
  ps.A = schouten_from(g.lambda0(), d.grad, d.hess);
  ps.E = d.utt * ps.A;
  ps.E -= SymMatrix::outer(d.grad_ut);
  const SymkData sd = symk_data(ps.A.dense(), g.k());
  ps.admissible = cone_label_from_sigma(sd.sigma, g.k());
  ps.F = d.utt * sd.sigma[static_cast<std::size_t>(g.k())] - d.grad_ut.dot(sd.T * d.grad_ut);
  return ps;
}

double fk_at(const SpaceTimeField& u, int level, long s) {
  const PointDerivs d = derivatives_at(u, level, s);
  const SymMatrix a = schouten_from(u.geometry().lambda0(), d.grad, d.hess);
  return fk_value(d.utt, d.grad_ut, a.dense(), u.geometry().k());
}

SpaceTimeField fk_field(const SpaceTimeField& u) {
  const GridGeometry& g = u.geometry();
  SpaceTimeField out(g);
  const long ns = g.spatial_size();
  parallel_for(g.interior_size(), [&](long lo, long hi) {
    for (long r = lo; r < hi; ++r) {
      const int j = static_cast<int>(1 + r / ns);
      const long s = r % ns;
      out(j, s) = fk_at(u, j, s);
    }
  });
  return out;
}

SpaceTimeField residual(const SpaceTimeField& u, const SpaceTimeField& f) {
  require_same(u, f);
  SpaceTimeField out = fk_field(u);
  const GridGeometry& g = u.geometry();
  for (int j = 1; j <= g.Nt(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) out(j, s) -= f(j, s);
  return out;
}

// ---------------------------------------------------------------------------
// Linearization

Eigen::MatrixXd PointCoefficients::symbol() const {
  const auto n = M.rows();
  Eigen::MatrixXd s(n + 1, n + 1);
  s(0, 0) = ctt;
  s.block(1, 0, n, 1) = 0.5 * m;
  s.block(0, 1, 1, n) = 0.5 * m.transpose();
  s.block(1, 1, n, n) = M;
  return s;
}

PointCoefficients point_coefficients(const SpaceTimeField& u, int level, long s) {
  const GridGeometry& g = u.geometry();
  const int k = g.k();
  const PointDerivs d = derivatives_at(u, level, s);
  if (!(d.utt > 0.0))
    throw DomainError("linearize: u_tt = " + std::to_string(d.utt) + " <= 0 at " + point_name(g, level, s));
  const SymMatrix a = schouten_from(g.lambda0(), d.grad, d.hess);
  if (!cone_label_from_sigma(symk_data(a.dense(), k).sigma, k).inside)
    throw DomainError("linearize: A_u outside Gamma_k^+ at " + point_name(g, level, s));
  const Eigen::MatrixXd e = d.utt * a.dense() - d.grad_ut * d.grad_ut.transpose();
  const SymkData ed = symk_data(e, k);
  const Eigen::MatrixXd& t = ed.T;
  const double sk = ed.sigma[static_cast<std::size_t>(k)];
  const double p1 = std::pow(d.utt, 1.0 - k);
  const double p2 = std::pow(d.utt, 2.0 - k);

  PointCoefficients c;
  c.ctt = (1.0 - k) * std::pow(d.utt, -static_cast<double>(k)) * sk + p1 * t.cwiseProduct(a.dense()).sum();
  c.M = p2 * t;
  c.b = p2 * (2.0 * (t * d.grad) - t.trace() * d.grad);
  c.m = -2.0 * p1 * (t * d.grad_ut);
  return c;
}

namespace {

// Stencil weights of L at one point; `emit(level, s, w)` receives each term.
template <class Emit>
void emit_stencil(const GridGeometry& g, const PointCoefficients& c, int j, long s, Emit&& emit) {
  const int n = g.n();
  const double ht = g.ht(), hx = g.hx();
  const double itt = c.ctt / (ht * ht);
  emit(j + 1, s, itt);
  emit(j - 1, s, itt);
  double centre = -2.0 * itt;
  for (int a = 0; a < n; ++a) {
    const long sp = g.neighbor(s, a, 1), sm = g.neighbor(s, a, -1);
    const double waa = c.M(a, a) / (hx * hx);
    const double wb = c.b(a) / (2.0 * hx);
    emit(j, sp, waa + wb);
    emit(j, sm, waa - wb);
    centre -= 2.0 * waa;
    for (int b = a + 1; b < n; ++b) {
      const double wab = 2.0 * c.M(a, b) / (4.0 * hx * hx);
      emit(j, g.neighbor(sp, b, 1), wab);
      emit(j, g.neighbor(sp, b, -1), -wab);
      emit(j, g.neighbor(sm, b, 1), -wab);
      emit(j, g.neighbor(sm, b, -1), wab);
    }
    const double wm = c.m(a) / (4.0 * ht * hx);
    emit(j + 1, sp, wm);
    emit(j + 1, sm, -wm);
    emit(j - 1, sp, -wm);
    emit(j - 1, sm, wm);
  }
  emit(j, s, centre);
}

}  // namespace

SpaceTimeField LinearOperator::apply(const SpaceTimeField& v) const {
  if (v.geometry() != g_) throw DomainError("LinearOperator::apply: geometry mismatch");
  SpaceTimeField out(g_);
  out.set_interior(m_ * v.interior());
  return out;
}

LinearOperator linearize(const SpaceTimeField& u, int threads) {
  const GridGeometry& g = u.geometry();
  const long ns = g.spatial_size();
  const long rows = g.interior_size();
  const int nt = std::max(1, threads > 0 ? threads : thread_count());
  std::vector<std::vector<Eigen::Triplet<double>>> parts(static_cast<std::size_t>(nt));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
  auto work = [&](int w) {
    try {
      auto& trip = parts[static_cast<std::size_t>(w)];
      for (long r = rows * w / nt; r < rows * (w + 1) / nt; ++r) {
        const int j = static_cast<int>(1 + r / ns);
        const long s = r % ns;
        const PointCoefficients c = point_coefficients(u, j, s);
        emit_stencil(g, c, j, s, [&](int lj, long ls, double w) {
          if (lj < 1 || lj > g.Nt()) return;  // Dirichlet data
          trip.emplace_back(r, (lj - 1) * ns + ls, w);
        });
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Eigen::Triplet<double>> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  LinearOperator::Matrix m(rows, rows);
  m.setFromTriplets(all.begin(), all.end());
  m.makeCompressed();
  return LinearOperator(g, std::move(m));
}

SpaceTimeField linearized_action(const SpaceTimeField& u, const SpaceTimeField& v) {
  require_same(u, v);
  const GridGeometry& g = u.geometry();
  SpaceTimeField out(g);
  for (int j = 1; j <= g.Nt(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) {
      const PointCoefficients c = point_coefficients(u, j, s);
      double acc = 0.0;
      emit_stencil(g, c, j, s, [&](int lj, long ls, double w) { acc += w * v(lj, ls); });
      out(j, s) = acc;
    }
  return out;
}

SymbolScan symbol_scan(const SpaceTimeField& u) {
  const GridGeometry& g = u.geometry();
  SymbolScan out;
  out.min_eig = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= g.Nt(); ++j)
    for (long s = 0; s < g.spatial_size(); ++s) {
      const Eigen::MatrixXd sym = point_coefficients(u, j, s).symbol();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < out.min_eig) {
        out.min_eig = es.eigenvalues()(0);
        out.level = j;
        out.s = s;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic form

namespace {

struct QData {
  double utt;
  Eigen::VectorXd p;
  Eigen::MatrixXd T;
  int k;
};

QData q_data(const SpaceTimeField& u, int level, long s) {
  const GridGeometry& g = u.geometry();
  const PointDerivs d = derivatives_at(u, level, s);
  if (!(d.utt > 0.0)) throw DomainError("q_form: u_tt <= 0 at " + point_name(g, level, s));
  const SymMatrix a = schouten_from(g.lambda0(), d.grad, d.hess);
  const Eigen::MatrixXd e = d.utt * a.dense() - d.grad_ut * d.grad_ut.transpose();
  return {d.utt, d.grad_ut, symk_data(e, g.k()).T, g.k()};
}

Eigen::MatrixXd sym_product(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a * b.transpose() + b * a.transpose();
}

}  // namespace

double q_form(const SpaceTimeField& u, int level, long s, const SpaceTimeGrad& dphi, const SpaceTimeGrad& dpsi) {
  const QData q = q_data(u, level, s);
  const Eigen::MatrixXd inner = q.utt * sym_product(dphi.dx, dpsi.dx) - dphi.dt * sym_product(q.p, dpsi.dx) -
                                dpsi.dt * sym_product(q.p, dphi.dx) +
                                (2.0 / q.utt) * dphi.dt * dpsi.dt * q.p * q.p.transpose();
  return std::pow(q.utt, 1.0 - q.k) * q.T.cwiseProduct(inner).sum();
}

double q_form_square(const SpaceTimeField& u, int level, long s, const SpaceTimeGrad& dphi) {
  const QData q = q_data(u, level, s);
  const double r = std::sqrt(q.utt);
  const Eigen::VectorXd y = r * dphi.dx - (dphi.dt / r) * q.p;
  return 2.0 * std::pow(q.utt, 1.0 - q.k) * y.dot(q.T * y);
}

// ---------------------------------------------------------------------------
// Comparison fields, scans, symmetries

SpaceTimeField comparison_field(const GridGeometry& g, double a, const Eigen::VectorXd& u0, const Eigen::VectorXd& u1) {
  if (u0.size() != g.spatial_size() || u1.size() != g.spatial_size())
    throw DomainError("comparison_field: boundary slice size mismatch");
  SpaceTimeField out(g);
  out.set_level(0, u0);
  out.set_level(g.levels() - 1, u1);
  for (int j = 1; j <= g.Nt(); ++j) {
    const double t = g.t(j);
    out.set_level(j, (a * t * (1.0 - t)) * Eigen::VectorXd::Ones(g.spatial_size()) + (1.0 - t) * u0 + t * u1);
  }
  return out;
}

AdmissibilityReport admissibility_scan(const SpaceTimeField& u) {
  const GridGeometry& g = u.geometry();
  const long ns = g.spatial_size();
  const int k = g.k();
  const int t = std::max(1, thread_count());
  std::vector<AdmissibilityReport> part(static_cast<std::size_t>(t));
  const double inf = std::numeric_limits<double>::infinity();
  for (auto& p : part) p.cone_margin = p.utt_min = p.fk_min = inf;
  const long rows = g.interior_size();
  auto work = [&](int w) {
    auto& acc = part[static_cast<std::size_t>(w)];
    for (long r = rows * w / t; r < rows * (w + 1) / t; ++r) {
      const int j = static_cast<int>(1 + r / ns);
      const long s = r % ns;
      const PointDerivs d = derivatives_at(u, j, s);
      const SymMatrix a = schouten_from(g.lambda0(), d.grad, d.hess);
      const SymkData sd = symk_data(a.dense(), k);
      const double margin = cone_label_from_sigma(sd.sigma, k).margin;
      const double f = d.utt * sd.sigma[static_cast<std::size_t>(k)] - d.grad_ut.dot(sd.T * d.grad_ut);
      if (margin < acc.cone_margin) acc.cone_margin = margin, acc.cone_level = j, acc.cone_s = s;
      if (d.utt < acc.utt_min) acc.utt_min = d.utt, acc.utt_level = j, acc.utt_s = s;
      if (f < acc.fk_min) acc.fk_min = f, acc.fk_level = j, acc.fk_s = s;
    }
  };
  if (t == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  AdmissibilityReport out = part[0];
  for (std::size_t w = 1; w < part.size(); ++w) {
    const auto& p = part[w];
    if (p.cone_margin < out.cone_margin) out.cone_margin = p.cone_margin, out.cone_level = p.cone_level, out.cone_s = p.cone_s;
    if (p.utt_min < out.utt_min) out.utt_min = p.utt_min, out.utt_level = p.utt_level, out.utt_s = p.utt_s;
    if (p.fk_min < out.fk_min) out.fk_min = p.fk_min, out.fk_level = p.fk_level, out.fk_s = p.fk_s;
  }
  return out;
}

SpaceTimeField spatial_shift(const SpaceTimeField& u, const std::vector<int>& offsets) {
  const GridGeometry& g = u.geometry();
  if (static_cast<int>(offsets.size()) != g.n()) throw DomainError("spatial_shift: one offset per axis required");
  SpaceTimeField out(g);
  for (long s = 0; s < g.spatial_size(); ++s) {
    long src = s;
    for (int a = 0; a < g.n(); ++a) src = g.neighbor(src, a, -offsets[static_cast<std::size_t>(a)]);
    for (int j = 0; j < g.levels(); ++j) out(j, s) = u(j, src);
  }
  return out;
}

SpaceTimeField gauge_shift(const SpaceTimeField& u, double c1, double c2) {
  const GridGeometry& g = u.geometry();
  SpaceTimeField out = u;
  for (int j = 0; j < g.levels(); ++j) {
    const double d = c1 * g.t(j) + c2;
    for (long s = 0; s < g.spatial_size(); ++s) out(j, s) -= d;
  }
  return out;
}

}  // namespace gseq
