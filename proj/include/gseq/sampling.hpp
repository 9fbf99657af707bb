// Random draws used by the certification campaigns. Every draw takes an
// explicit engine; campaigns derive one engine per sample from
// (seed, n, k, sample index) so results do not depend on thread count.
#pragma once

#include <cstdint>
#include <random>

#include "gseq/hyperbolic.hpp"

namespace gseq {

using Rng = std::mt19937_64;

Rng sample_rng(std::uint64_t seed, int n, int k, std::uint64_t index, std::uint64_t stream = 0);

double uniform(Rng& rng, double lo, double hi);
Eigen::VectorXd uniform_vector(Rng& rng, int n, double lo, double hi);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Eigen::MatrixXd random_orthogonal(Rng& rng, int n);

/// Symmetric matrix with iid U[-1, 1] entries on and above the diagonal.
SymMatrix random_symmetric(Rng& rng, int n);

/// Eigenvalues drawn in U[-1, 1]^n then shifted by multiples of 0.1 until
/// the Gamma_k^+ margin exceeds `min_margin`.
Eigen::VectorXd random_cone_eigenvalues(Rng& rng, int n, int k, double min_margin = 0.1);

/// Q diag(lam) Q^T with lam from random_cone_eigenvalues.
SymMatrix random_cone_matrix(Rng& rng, int n, int k, double min_margin = 0.1);

/// Block matrix with iid U[-1, 1] symmetric entries.
BlockMatrix random_block(Rng& rng, int n);

/// Member of S kept away from its boundary: r from random_cone_matrix,
/// x in U[-1, 1]^n, r00 rejection-sampled until F_k > 0.01 sigma_k(r).
BlockMatrix random_S_member(Rng& rng, int n, int k);

}  // namespace gseq
