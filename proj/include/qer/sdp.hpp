// Semidefinite optimization of recovery operations: given the data matrix C
// of an encoded channel, find the Choi matrix X of the recovery maximizing
// the average entanglement fidelity tr(X C), together with a dual
// certificate Y whose trace upper-bounds every recovery's fidelity.
#pragma once

#include "qer/opalg.hpp"

#include <vector>

namespace qer {

struct SdpOptions {
  double tol = 1e-7;       // stop when gap / (1 + |primal|) falls below this
  double feas_tol = 1e-8;  // max constraint violation allowed at convergence
  int max_iters = 200;
};

struct SdpIterStat {
  double primal = 0.0;  // tr(X C) at the iterate
  double dual = 0.0;    // tr(Y) at the iterate
  double gap = 0.0;     // complementarity <X, Z> (= dual - primal here)
  double mu = 0.0;      // barrier parameter
};

// maximize tr(X C) over X >= 0 on H_S (x) H_sub^* with ptrace_left(X) = I.
// C must be Hermitian of size d_S * d_sub; H_sub is the full channel output
// space or any subspace of it (a block).
struct QerSdpProblem {
  Mat C;
  Index d_S = 0;
  Index d_sub = 0;
};

struct QerSdpSolution {
  Mat X;                 // optimal recovery Choi matrix, Hermitian PSD
  Mat Y;                 // dual certificate on H_sub: I (x) Y - C >= 0
  double primal_value = 0.0;  // tr(X C), the optimal fidelity
  double dual_value = 0.0;    // tr(Y), certified upper bound on the fidelity
  double gap = 0.0;           // final complementarity <X, Z>
  double primal_infeas = 0.0;  // max-abs violation of ptrace_left(X) = I
  double dual_infeas = 0.0;    // max-abs drift of the slack Z = I (x) Y - C
  int iters = 0;
  bool converged = false;
  std::vector<SdpIterStat> history;  // one entry per interior-point iteration
};

// Primal-dual path-following interior-point method. Hermitian matrices are
// handled through their real symmetric embedding [[Re, -Im], [Im, Re]]; the
// embedding doubles traces and inner products (compensated when reporting)
// while leaving eigenvalues unchanged, so feasibility margins transfer
// directly. Iterates stay exactly feasible: X starts at I/d_S and the dual
// starts above the largest eigenvalue of C, so only the complementarity gap
// has to be driven to zero.
QerSdpSolution solve_qer_sdp(const QerSdpProblem& prob,
                             const SdpOptions& opts = {});

struct BlockSdpSolution {
  QerSdpSolution sol;  // solution of the compressed problem on the support
  Mat basis;           // columns span the block: d_C x d_k isometry Q
};

// Restrict recoveries to read only a subspace of the channel output space:
// compress C by I (x) conj(Q) for an orthonormal basis Q of the projector's
// support and solve there. P_block must be a Hermitian projector on H_C.
// The compressed optimizer lifts back as (I (x) conj(Q)) X (I (x) conj(Q))^dag.
BlockSdpSolution solve_block_sdp(const Mat& C, Index d_S, const Mat& P_block,
                                 const SdpOptions& opts = {});

// Same restriction with the subspace given directly by an orthonormal basis
// Q (d_C x d_k, columns orthonormal) instead of a projector.
BlockSdpSolution solve_block_sdp_in_basis(const Mat& C, Index d_S,
                                          const Mat& Q,
                                          const SdpOptions& opts = {});

}  // namespace qer
