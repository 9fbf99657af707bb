#include "gseq/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <thread>
#include <vector>

namespace gseq {

namespace {

int resolve_threads(int threads, long samples) {
  int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::max(1L, std::min<long>(t, samples)));
}

// Contiguous chunks of sample indices, one accumulator per chunk, merged in
// chunk order.
template <class Acc, class Body>
Acc parallel_reduce(long samples, int threads, Body body) {
  const int t = resolve_threads(threads, samples);
  std::vector<Acc> partial(static_cast<std::size_t>(t));
  auto work = [&](int w) {
    const long lo = samples * w / t;
    const long hi = samples * (w + 1) / t;
    for (long i = lo; i < hi; ++i) body(partial[static_cast<std::size_t>(w)], i);
  };
  if (t == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Acc total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

void check_spec(const CampaignSpec& s) {
  if (s.n < 1 || s.k < 1 || s.k > s.n) throw DomainError("campaign: need 1 <= k <= n");
  if (s.samples < 1) throw DomainError("campaign: samples must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------

void RootCampaign::merge(const RootCampaign& o) {
  samples += o.samples;
  real_rooted_failures += o.real_rooted_failures;
  interlace_failures += o.interlace_failures;
  localize_failures += o.localize_failures;
  localize_wide_failures += o.localize_wide_failures;
  worst_max_imag_rel = std::max(worst_max_imag_rel, o.worst_max_imag_rel);
  worst_interlace_slack = std::min(worst_interlace_slack, o.worst_interlace_slack);
  worst_localize_slack = std::min(worst_localize_slack, o.worst_localize_slack);
  worst_localize_wide_slack = std::min(worst_localize_wide_slack, o.worst_localize_wide_slack);
  min_leading = std::min(min_leading, o.min_leading);
  max_leading = std::max(max_leading, o.max_leading);
  min_q_leading = std::min(min_q_leading, o.min_q_leading);
  shifted_sigma_not_real += o.shifted_sigma_not_real;
  q_interlace_failures += o.q_interlace_failures;
  worst_q_interlace_slack = std::min(worst_q_interlace_slack, o.worst_q_interlace_slack);
}

RootCampaign run_root_campaign(const CampaignSpec& spec, double tol) {
  check_spec(spec);
  return parallel_reduce<RootCampaign>(spec.samples, spec.threads, [&](RootCampaign& acc, long i) {
    Rng rng = sample_rng(spec.seed, spec.n, spec.k, static_cast<std::uint64_t>(i), 1);
    const BlockMatrix R = random_block(rng, spec.n);
    const CertReport rep = certify_theorem(R, spec.k, tol);
    acc.samples += 1;
    if (!rep.real_rooted) ++acc.real_rooted_failures;
    if (!rep.interlaced) ++acc.interlace_failures;
    if (!rep.localized) ++acc.localize_failures;
    if (!rep.localized_wide) ++acc.localize_wide_failures;
    acc.worst_max_imag_rel = std::max(acc.worst_max_imag_rel, rep.max_imag_rel);
    acc.worst_interlace_slack = std::min(acc.worst_interlace_slack, rep.interlace_slack);
    acc.worst_localize_slack = std::min(acc.worst_localize_slack, rep.localize_slack);
    acc.worst_localize_wide_slack = std::min(acc.worst_localize_wide_slack, rep.localize_wide_slack);
    acc.min_leading = std::min(acc.min_leading, rep.leading_coeff);
    acc.max_leading = std::max(acc.max_leading, rep.leading_coeff);

    const RootList sig = real_roots(shifted_sigma_poly(R.r, spec.k), tol);
    if (!sig.real_rooted()) {
      ++acc.shifted_sigma_not_real;
      return;
    }
    for (int j = 0; j < spec.n; ++j) {
      const RealPoly q = q_poly(R.r, j, spec.k);
      acc.min_q_leading = std::min(acc.min_q_leading, q.leading());
      if (q.degree() < 1) continue;
      const RootList qr = real_roots(q, tol);
      if (!qr.real_rooted()) {
        ++acc.q_interlace_failures;
        continue;
      }
      const auto il = check_interlacing(qr.roots, sig.roots, tol);
      acc.worst_q_interlace_slack = std::min(acc.worst_q_interlace_slack, il.worst_slack);
      if (!il.ok) ++acc.q_interlace_failures;
    }
  });
}

// ---------------------------------------------------------------------------

void ConcavityCampaign::merge(const ConcavityCampaign& o) {
  samples += o.samples;
  worst_slack_rel = std::min(worst_slack_rel, o.worst_slack_rel);
  segment_exits += o.segment_exits;
  failures += o.failures;
}

ConcavityCampaign run_concavity_campaign(const CampaignSpec& spec, double tol) {
  check_spec(spec);
  return parallel_reduce<ConcavityCampaign>(spec.samples, spec.threads, [&](ConcavityCampaign& acc, long i) {
    Rng rng = sample_rng(spec.seed, spec.n, spec.k, static_cast<std::uint64_t>(i), 2);
    const BlockMatrix a = random_S_member(rng, spec.n, spec.k);
    const BlockMatrix b = random_S_member(rng, spec.n, spec.k);
    const ConcavityResult res = concavity_probe(a, b, spec.k);
    acc.samples += 1;
    const double rel = res.worst_slack / res.scale;
    acc.worst_slack_rel = std::min(acc.worst_slack_rel, rel);
    if (!res.segment_in_S) ++acc.segment_exits;
    if (rel < -tol) ++acc.failures;
  });
}

// ---------------------------------------------------------------------------

void IdentityCampaign::merge(const IdentityCampaign& o) {
  samples += o.samples;
  sum_weighted = std::max(sum_weighted, o.sum_weighted);
  sum_partial = std::max(sum_partial, o.sum_partial);
  split = std::max(split, o.split);
  derivative = std::max(derivative, o.derivative);
  rank_one_sigma = std::max(rank_one_sigma, o.rank_one_sigma);
  rank_one_newton = std::max(rank_one_newton, o.rank_one_newton);
  trace_identity = std::max(trace_identity, o.trace_identity);
  newton_slack = std::min(newton_slack, o.newton_slack);
  maclaurin_slack = std::min(maclaurin_slack, o.maclaurin_slack);
  generalized_slack = std::min(generalized_slack, o.generalized_slack);
  min_newton_transform_eig = std::min(min_newton_transform_eig, o.min_newton_transform_eig);
}

double IdentityCampaign::worst_identity_error() const {
  return std::max({sum_weighted, sum_partial, split, derivative, rank_one_sigma, rank_one_newton, trace_identity});
}

double IdentityCampaign::worst_inequality_slack() const {
  return std::min({newton_slack, maclaurin_slack, generalized_slack});
}

IdentityCampaign run_identity_campaign(const CampaignSpec& spec) {
  check_spec(spec);
  const int n = spec.n;
  const int k = spec.k;
  return parallel_reduce<IdentityCampaign>(spec.samples, spec.threads, [&](IdentityCampaign& acc, long idx) {
    Rng rng = sample_rng(spec.seed, n, k, static_cast<std::uint64_t>(idx), 3);
    acc.samples += 1;
    // Symmetric-function identities on an arbitrary real vector.
    const Eigen::VectorXd v = uniform_vector(rng, n, -2.0, 2.0);
    const EigenList lam(v);
    const auto sig = elementary_symmetric_all(lam.values());
    const int kp = std::min(k, n - 1);
    if (n >= 2) {
      double weighted = 0.0, plain = 0.0, wscale = 0.0, pscale = 0.0;
      for (int i = 0; i < n; ++i) {
        const double part = sigma_k_partial(lam, kp, i);
        weighted += v(i) * part;
        plain += part;
        wscale += std::abs(v(i) * part);
        pscale += std::abs(part);
        const double next_i = kp + 1 <= n - 1 ? sigma_k_partial(lam, kp + 1, i) : 0.0;
        const double lhs = sig[static_cast<std::size_t>(kp + 1)];
        const double rhs = next_i + v(i) * part;
        acc.split = std::max(acc.split, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(next_i), std::abs(v(i) * part)}));
        Eigen::VectorXd bumped = v;
        bumped(i) += 1.0;
        const double diff = sigma_k(EigenList(bumped), kp + 1) - lhs;
        acc.derivative = std::max(acc.derivative, relative_gap(diff, part));
      }
      const double target_w = (kp + 1.0) * sig[static_cast<std::size_t>(kp + 1)];
      const double target_p = (n - kp) * sig[static_cast<std::size_t>(kp)];
      acc.sum_weighted = std::max(acc.sum_weighted, std::abs(weighted - target_w) / std::max({1.0, wscale, std::abs(target_w)}));
      acc.sum_partial = std::max(acc.sum_partial, std::abs(plain - target_p) / std::max({1.0, pscale, std::abs(target_p)}));
    }

    // Rank-one update identities on an arbitrary symmetric matrix.
    const SymMatrix a = random_symmetric(rng, n);
    const Eigen::VectorXd x = uniform_vector(rng, n, -1.0, 1.0);
    const RankOneIdentity ro = rank_one_identity(a, x, k);
    acc.rank_one_sigma = std::max(acc.rank_one_sigma, std::abs(ro.sigma_lhs - ro.sigma_rhs) / ro.scale);
    if (ro.newton_lhs)
      acc.rank_one_newton = std::max(acc.rank_one_newton, std::abs(*ro.newton_lhs - *ro.newton_rhs) / ro.scale);

    // Trace identity on an arbitrary symmetric matrix.
    const SymMatrix e = random_symmetric(rng, n);
    {
      const Spectral sp(e);
      const double sk = sp.sigma[static_cast<std::size_t>(k)];
      const double pair = sp.newton(k - 1).cwiseProduct(e.dense()).sum();
      const double lhs = pair - (k - 1.0) * sk;
      acc.trace_identity = std::max(acc.trace_identity, std::abs(lhs - sk) / std::max({1.0, std::abs(pair), std::abs(k * sk)}));
    }

    // Inequalities. Newton's holds for any real vector.
    if (k <= n - 1) {
      const auto nw = inequality_suite(EigenList(random_cone_eigenvalues(rng, n, k, 0.0)), k, k - 1, k, k - 1);
      acc.newton_slack = std::min(acc.newton_slack, *nw.newton / nw.newton_scale);
      const double lhs = (n - k + 1.0) * (k + 1.0) * sig[static_cast<std::size_t>(k - 1)] * sig[static_cast<std::size_t>(k + 1)];
      const double rhs = k * (n - k) * sig[static_cast<std::size_t>(k)] * sig[static_cast<std::size_t>(k)];
      acc.newton_slack = std::min(acc.newton_slack, (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
    const Eigen::VectorXd cone = random_cone_eigenvalues(rng, n, k, 0.0);
    if (k >= 2) {
      const int l = static_cast<int>(uniform(rng, 0.0, static_cast<double>(k)));  // 0..k-1
      const int s = static_cast<int>(uniform(rng, 0.0, static_cast<double>(l + 1)));  // 0..l
      const int r = s + 1 + static_cast<int>(uniform(rng, 0.0, static_cast<double>(k - s)));  // s+1..k
      const auto res = inequality_suite(EigenList(cone), k, l, std::min(r, k), s);
      acc.maclaurin_slack = std::min(acc.maclaurin_slack, res.maclaurin / res.maclaurin_scale);
      acc.generalized_slack = std::min(acc.generalized_slack, res.generalized / res.generalized_scale);
    }

    // T_{k-1}(A) is positive definite on Gamma_k^+.
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    const SymMatrix ac = SymMatrix::from_dense(q * cone.asDiagonal() * q.transpose());
    const Spectral sp(ac);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sp.newton(k - 1), Eigen::EigenvaluesOnly);
    acc.min_newton_transform_eig = std::min(acc.min_newton_transform_eig, es.eigenvalues()(0));
  });
}

// ---------------------------------------------------------------------------

void SlackCampaign::merge(const SlackCampaign& o) {
  samples += o.samples;
  worst_slack_rel = std::min(worst_slack_rel, o.worst_slack_rel);
  failures += o.failures;
}

SlackCampaign run_lem2_campaign(const CampaignSpec& spec, double tol) {
  check_spec(spec);
  if (spec.n < 2 * spec.k) throw DomainError("lem2 campaign: requires n >= 2k");
  return parallel_reduce<SlackCampaign>(spec.samples, spec.threads, [&](SlackCampaign& acc, long i) {
    Rng rng = sample_rng(spec.seed, spec.n, spec.k, static_cast<std::uint64_t>(i), 4);
    const SymMatrix e = random_cone_matrix(rng, spec.n, spec.k, 1e-3);
    const Eigen::VectorXd g = uniform_vector(rng, spec.n, -1.0, 1.0);
    const Slack s = lem2_slack(e, g, spec.k);
    acc.samples += 1;
    acc.worst_slack_rel = std::min(acc.worst_slack_rel, s.value / s.scale);
    if (s.value < -tol * s.scale) ++acc.failures;
  });
}

SlackCampaign run_andrews_campaign(const CampaignSpec& spec, double tol) {
  check_spec(spec);
  if (spec.n != 2 * spec.k) throw DomainError("andrews campaign: requires n = 2k");
  return parallel_reduce<SlackCampaign>(spec.samples, spec.threads, [&](SlackCampaign& acc, long i) {
    Rng rng = sample_rng(spec.seed, spec.n, spec.k, static_cast<std::uint64_t>(i), 5);
    const SymMatrix a = random_cone_matrix(rng, spec.n, spec.k, 1e-3);
    const Slack s = andrews_matrix_slack(a, spec.k);
    acc.samples += 1;
    acc.worst_slack_rel = std::min(acc.worst_slack_rel, s.value / s.scale);
    if (s.value < -tol * s.scale) ++acc.failures;
  });
}

// ---------------------------------------------------------------------------

namespace {

// Worst-case accumulators start at +-1e300; untouched ones print as null.
nlohmann::ordered_json worst(double v) {
  if (std::abs(v) >= 1e299) return nullptr;
  return v;
}

}  // namespace

std::string campaign_json(const CampaignSpec& spec, const RootCampaign* roots,
                          const ConcavityCampaign* concavity, const IdentityCampaign* identities,
                          const SlackCampaign* lem2, const SlackCampaign* andrews) {
  nlohmann::ordered_json j;
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["samples"] = spec.samples;
  j["seed"] = spec.seed;
  if (roots) {
    j["real_roots"] = {
        {"samples", roots->samples},
        {"passed", roots->passed()},
        {"real_rooted_failures", roots->real_rooted_failures},
        {"interlace_failures", roots->interlace_failures},
        {"localize_failures", roots->localize_failures},
        {"localize_wide_failures", roots->localize_wide_failures},
        {"worst_max_imag_rel", roots->worst_max_imag_rel},
        {"worst_interlace_slack", worst(roots->worst_interlace_slack)},
        {"worst_localize_slack", worst(roots->worst_localize_slack)},
        {"worst_localize_wide_slack", worst(roots->worst_localize_wide_slack)},
        {"leading_coeff_min", worst(roots->min_leading)},
        {"leading_coeff_max", worst(roots->max_leading)},
        {"q_leading_coeff_min", worst(roots->min_q_leading)},
        {"shifted_sigma_not_real", roots->shifted_sigma_not_real},
        {"q_interlace_failures", roots->q_interlace_failures},
        {"worst_q_interlace_slack", worst(roots->worst_q_interlace_slack)},
    };
  }
  if (concavity) {
    j["concavity"] = {
        {"samples", concavity->samples},
        {"passed", concavity->passed()},
        {"worst_slack_rel", worst(concavity->worst_slack_rel)},
        {"segment_exits", concavity->segment_exits},
        {"failures", concavity->failures},
    };
  }
  if (identities) {
    j["identities"] = {
        {"samples", identities->samples},
        {"sum_weighted", identities->sum_weighted},
        {"sum_partial", identities->sum_partial},
        {"split", identities->split},
        {"derivative", identities->derivative},
        {"rank_one_sigma", identities->rank_one_sigma},
        {"rank_one_newton", identities->rank_one_newton},
        {"trace_identity", identities->trace_identity},
        {"newton_slack", worst(identities->newton_slack)},
        {"maclaurin_slack", worst(identities->maclaurin_slack)},
        {"generalized_slack", worst(identities->generalized_slack)},
        {"min_newton_transform_eig", worst(identities->min_newton_transform_eig)},
    };
  }
  auto slack = [](const SlackCampaign& s) {
    return nlohmann::ordered_json{{"samples", s.samples},
                                  {"passed", s.passed()},
                                  {"worst_slack_rel", worst(s.worst_slack_rel)},
                                  {"failures", s.failures}};
  };
  if (lem2) j["lem2"] = slack(*lem2);
  if (andrews) j["andrews"] = slack(*andrews);
  return j.dump(2) + "\n";
}

}  // namespace gseq
