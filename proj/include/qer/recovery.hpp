// Structured recovery algorithms: greedy dominant-eigenvector recovery
// (EigQER), its block variant with per-block optimal corrections
// (BlockEigQER), order-restricted subspace recovery (OrderQER), and the
// projective syndrome-measurement baseline.
#pragma once

#include "qer/codes.hpp"
#include "qer/fidelity.hpp"
#include "qer/sdp.hpp"

#include <vector>

namespace qer {

struct EigQerOptions {
  double rank_sv_threshold = 0.05;  // keep singular values with sigma^2 >= this
  double early_stop_contribution = 1e-5;  // stop below this; 0 disables
  Index max_elements = 0;                 // 0 = unlimited
};

// A recovery given by partial-isometry operator elements R_k = U_k P_k with
// mutually orthogonal input supports: P_j P_k = delta_jk P_k, equivalently
// R_j R_k^dag = 0 for j != k. The sum of
// the P_k may fall short of I (deficit PSD) for early-stopped runs; any
// input component in the deficit subspace is discarded, which never lowers
// the reported fidelity below the achieved value.
struct StructuredRecovery {
  std::vector<Mat> elements;          // R_k, each d_S x d_C
  std::vector<double> contributions;  // f_k = <<R_k|C|R_k>>, in build order
  std::vector<Index> ranks;           // rank d_k of each element
  Index d_S = 0, d_C = 0;
  double fidelity = 0.0;  // sum of contributions
  Mat deficit;            // I - sum_k R_k^dag R_k
};

// Greedy recovery: repeatedly take the dominant eigenvector of the data
// matrix compressed to the not-yet-claimed part of H_C, reshape it to an
// operator, truncate to the singular values with sigma^2 >=
// rank_sv_threshold, snap to the closest partial isometry, and remove the
// claimed input support from the working subspace. Each round uses a dense
// eigendecomposition of the compressed matrix: deterministic (ties in the
// spectrum are resolved by a fixed convention rather than by iteration
// noise) and increasingly cheap as the subspace shrinks. Terminates when the
// supports exhaust H_C, when the compressed matrix has no weight left, when
// a contribution falls below early_stop_contribution (that element is
// discarded), or at max_elements.
StructuredRecovery eig_qer(const DataMatrix& D, const EigQerOptions& opts = {});

// Baseline: projective syndrome measurement, then the inverse of the
// minimum-weight Pauli consistent with the syndrome (lexicographically
// smallest on ties), decoded through U_C^dag. Contributions are evaluated
// against D.
StructuredRecovery standard_qec_recovery(const StabilizerCode& code,
                                         const DataMatrix& D);

// A recovery that first measures which block subspace the state is in, then
// applies that block's optimal recovery (computed by the restricted
// semidefinite solve). Blocks are mutually orthogonal; order-restricted
// constructions may also carry a greedy residual tail on what is left.
struct BlockRecovery {
  struct Block {
    Mat basis;  // d_C x d_q isometry Q spanning the block subspace
    Mat X;      // optimal Choi matrix of the compressed block problem
    Mat Y;      // block dual certificate on the compressed subspace
    double fidelity = 0.0;  // tr(X C_block)
  };
  std::vector<Block> blocks;
  StructuredRecovery residual;  // greedy tail; empty unless requested
  Index d_S = 0, d_C = 0;
  double fidelity = 0.0;  // sum of block fidelities and residual contributions
  Mat deficit;            // I - sum_q P_q - residual supports
};

// Block variant of the greedy recovery: per round, take the eigenvectors of
// the M largest eigenvalues of the deflated data matrix, span the block by
// the union of their reshaped operators' input supports, solve the block-
// restricted problem optimally, and project the block out. M = 1 recovers
// greedy subspaces with optimal corrections; M = d_S * d_C solves the whole
// problem in one block.
BlockRecovery block_eig_qer(const DataMatrix& D, Index M,
                            const SdpOptions& sdp_opts = {});

// Order-restricted recovery for an n-fold product of a single-qubit channel
// whose elements split into a dominant no-error part (element 0 by
// convention) and a designated error element: the order-t block spans the
// images of the logical basis under every t-site error pattern,
// orthonormalized against lower orders. Each listed order gets an optimal
// block solve; the leftover space is handled greedily when residual_greedy
// is set.
BlockRecovery order_qer(const StabilizerCode& code,
                        const KrausChannel& single_qubit,
                        Index error_element, const DataMatrix& D,
                        const std::vector<int>& orders,
                        bool residual_greedy = true,
                        const SdpOptions& sdp_opts = {},
                        const EigQerOptions& eig_opts = {});

// Operator elements (each d_S x d_C) realizing a block recovery: spectral
// decomposition of each block's Choi matrix lifted through its basis, then
// any residual elements. Eigenvalues below eig_cut are dropped.
std::vector<Mat> block_recovery_elements(const BlockRecovery& rec,
                                         double eig_cut = 1e-12);

}  // namespace qer
