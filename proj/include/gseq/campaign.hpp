// Randomized certification campaigns. Samples are independent; each report
// is an associative merge of worst-case slacks, so any thread partition
// yields the same numbers.
#pragma once

#include <cstdint>
#include <string>

#include "gseq/sampling.hpp"

namespace gseq {

struct CampaignSpec {
  int n = 2;
  int k = 1;
  long samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;  // 0 = hardware concurrency
};

struct RootCampaign {
  long samples = 0;
  long real_rooted_failures = 0;
  long interlace_failures = 0;
  long localize_failures = 0;
  long localize_wide_failures = 0;
  double worst_max_imag_rel = 0.0;
  double worst_interlace_slack = 1e300;
  double worst_localize_slack = 1e300;
  double worst_localize_wide_slack = 1e300;
  double min_leading = 1e300;  // measured leading coefficient of p_{k+1}
  double max_leading = -1e300;
  double min_q_leading = 1e300;  // measured leading coefficient of q_{i,k}
  long shifted_sigma_not_real = 0;
  long q_interlace_failures = 0;
  double worst_q_interlace_slack = 1e300;

  void merge(const RootCampaign& o);
  bool passed() const {
    return real_rooted_failures == 0 && interlace_failures == 0 && localize_failures == 0 &&
           localize_wide_failures == 0 && shifted_sigma_not_real == 0 && q_interlace_failures == 0;
  }
};

/// p_{k+1} of random block matrices: real roots, interlacing by the roots of
/// sigma_k(r + tI), localization (both index readings), and interlacing of
/// each q_{i,k} with sigma_k(r + tI).
RootCampaign run_root_campaign(const CampaignSpec& spec, double tol = 1e-8);

struct ConcavityCampaign {
  long samples = 0;
  double worst_slack_rel = 1e300;  // min of slack / scale
  long segment_exits = 0;
  long failures = 0;  // slack < -tol * scale

  void merge(const ConcavityCampaign& o);
  bool passed() const { return failures == 0 && segment_exits == 0; }
};

ConcavityCampaign run_concavity_campaign(const CampaignSpec& spec, double tol = 1e-10);

struct IdentityCampaign {
  long samples = 0;
  double sum_weighted = 0.0;       // sum_i lam_i sigma_k(lam|i) vs (k+1) sigma_{k+1}
  double sum_partial = 0.0;        // sum_i sigma_k(lam|i) vs (n-k) sigma_k
  double split = 0.0;              // sigma_{k+1} = sigma_{k+1}(lam|i) + lam_i sigma_k(lam|i)
  double derivative = 0.0;         // sigma_{k+1}(lam + e_i) - sigma_{k+1}(lam) = sigma_k(lam|i)
  double rank_one_sigma = 0.0;     // sigma_k(A - XX) identity
  double rank_one_newton = 0.0;    // <T_k(A - XX), XX> identity
  double trace_identity = 0.0;     // <T_{k-1}(E), E> - (k-1) sigma_k(E) = sigma_k(E)
  double newton_slack = 1e300;     // min rel slack
  double maclaurin_slack = 1e300;
  double generalized_slack = 1e300;
  double min_newton_transform_eig = 1e300;  // min eig of T_{k-1}(A), A in Gamma_k^+, rel

  void merge(const IdentityCampaign& o);
  double worst_identity_error() const;
  double worst_inequality_slack() const;
};

IdentityCampaign run_identity_campaign(const CampaignSpec& spec);

struct SlackCampaign {
  long samples = 0;
  double worst_slack_rel = 1e300;
  long failures = 0;

  void merge(const SlackCampaign& o);
  bool passed() const { return failures == 0; }
};

/// Gradient quadratic-form inequality <T_{k-1}(E), |g|^2/2 I - g g> >= c sigma_{k-1}(E)|g|^2, n >= 2k.
SlackCampaign run_lem2_campaign(const CampaignSpec& spec, double tol = 1e-10);
/// T_{k-1}(A) Ric >= (n-1) sigma_k(A), n = 2k.
SlackCampaign run_andrews_campaign(const CampaignSpec& spec, double tol = 1e-10);

/// JSON text with n, k, samples, seed and the worst slacks of each campaign.
std::string campaign_json(const CampaignSpec& spec, const RootCampaign* roots,
                          const ConcavityCampaign* concavity, const IdentityCampaign* identities,
                          const SlackCampaign* lem2, const SlackCampaign* andrews);

}  // namespace gseq
