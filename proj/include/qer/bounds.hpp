// Lagrange-dual upper bounds on recovery fidelity. Any Hermitian Y on the
// starred channel-output space with I (x) Y - C >= 0 certifies tr Y as an
// upper bound on the fidelity of every trace-preserving recovery evaluated
// against the same data matrix C: for such a recovery, fidelity = tr(X C)
// <= tr(X (I (x) Y)) = tr Y because the recovery's Choi matrix X is PSD
// with left partial trace I. Constructions here trade tightness against
// cost, from closed-form disc bounds to iteratively repaired certificates
// assembled from per-subspace semidefinite solutions.
#pragma once

#include "qer/codes.hpp"
#include "qer/fidelity.hpp"
#include "qer/recovery.hpp"
#include "qer/sdp.hpp"

#include <string>
#include <vector>

namespace qer {

struct DualPoint {
  Mat Y;                            // Hermitian, d_C x d_C, starred space
  double bound = 0.0;               // tr Y
  double feasibility_margin = 0.0;  // min eig(I (x) Y - C)
  bool feasible = false;            // margin >= -tol at construction
  std::string provenance;           // which construction produced it
  int updates = 0;                  // dual updates spent (iterative builds)
};

// Minimum eigenvalue of I (x) Y - C via the shifted power method; Y is a
// feasible certificate iff the margin clears the chosen tolerance.
double dual_margin(const Mat& Y, const DataMatrix& D);

// Wrap an explicit Y, measuring its margin. Throws if Y is not Hermitian
// (1e-8) or sized other than d_C.
DualPoint make_dual_point(const Mat& Y, const DataMatrix& D,
                          std::string provenance, double tol = 1e-8);

// Orthonormal bases of the code's syndrome subspaces, in syndrome order.
// Together the columns partition the channel output space.
std::vector<Mat> syndrome_subspace_bases(const StabilizerCode& code);

// Orthonormal bases of the element input supports of a structured recovery,
// in element order, extended by one basis for the unclaimed remainder when
// the supports do not already span the output space.
std::vector<Mat> recovery_subspace_bases(const StructuredRecovery& rec);

// Disc bound: Y = sum_q w_q conj(P_q) with w_q the maximum absolute row sum
// over the q-th row block of C in the subspace-ordered basis. Feasible by
// construction -- every disc of I (x) Y - C touches the nonnegative axis --
// but often loose (the bound can exceed 1). Throws std::invalid_argument
// unless the bases are orthonormal, pairwise orthogonal, and complete.
DualPoint gersgorin_dual(const DataMatrix& D, const std::vector<Mat>& bases);

// Two-norm variant: w_q = sigma_max of the q-th row block of C. Tighter
// than the row-sum weights but not guaranteed feasible; an infeasible point
// is an initializer for iterative_dual, never a bound by itself.
DualPoint svd_dual(const DataMatrix& D, const std::vector<Mat>& bases);

struct IterativeDualOptions {
  double tol = 1e-8;    // stop once min eig(I (x) Y - C) >= -tol
  int max_updates = 0;  // 0 -> d_S * d_C, the exact-arithmetic worst case
};

// Repairs an infeasible start Y0: repeatedly take the most negative
// eigenpair (x, |x>>) of Z = I (x) Y - C, split the eigenvector's reshaped
// operator by SVD, and add |x| / sigma_1^2 times the projector onto its
// leading right singular direction to Y. Each update is the smallest
// perturbation of the starred slot that lifts the targeted eigenvalue to
// zero; since the added term is PSD no eigenvalue decreases, so the number
// of negative eigenvalues never grows and termination needs at most
// d_S * d_C updates. The inner eigenproblem is solved densely; a feasible
// start is returned unchanged with zero updates.
DualPoint iterative_dual(const DataMatrix& D, const Mat& Y0,
                         const IterativeDualOptions& opts = {});

// Cheap start: Y0 = sum_q lambda_max(C_qq) conj(P_q) from the diagonal
// subspace blocks of C. Feasible outright for Pauli channels on stabilizer
// codes with the syndrome partition; generally in need of repair.
Mat block_lambda_max_init(const DataMatrix& D, const std::vector<Mat>& bases);

// Start assembled block-diagonally from per-subspace dual certificates:
// Y0 = sum_q conj(B_q) Y_q B_q^T, where Y_q certifies the compressed block
// problem on span(B_q). Feasible on each block by construction; the cross
// blocks are what iterative repair must fix.
Mat block_dual_init(const std::vector<Mat>& bases,
                    const std::vector<Mat>& block_duals, Index d_C);
Mat block_dual_init(const BlockRecovery& rec);

// Merges per-subspace certificates pairwise instead of repairing the full
// assembly at once: blocks are sorted by dimension and paired smallest with
// smallest, each pair is repaired on its joint subspace, and the merge tree
// closes with one global repair pass. Bounds match the direct repair
// closely while keeping the intermediate eigenproblems small.
DualPoint iterated_block_dual(const DataMatrix& D,
                              const std::vector<Mat>& bases,
                              const std::vector<Mat>& block_duals,
                              const IterativeDualOptions& opts = {});
DualPoint iterated_block_dual(const DataMatrix& D, const BlockRecovery& rec,
                              const IterativeDualOptions& opts = {});

struct PauliCertificate {
  StructuredRecovery recovery;  // max-likelihood syndrome correction
  DualPoint dual;               // matching certificate, zero gap
};

// Exact optimum for a Pauli channel on a stabilizer code. The recovery
// applies, per syndrome, the inverse of the most likely normalizer action;
// the dual point Y = sum_q max_p a_pq conj(P_q) / d_S has tr Y equal to the
// recovery's fidelity, and I (x) Y - C is diagonal in the classification
// eigenbasis with entries (max_p' a_p'q - a_pq) / d_S >= 0, so the margin
// is identically zero and the bound is tight. Throws std::invalid_argument
// on size mismatch or an unnormalized channel.
PauliCertificate pauli_certificate(const StabilizerCode& code,
                                   const PauliChannelSpec& spec);

}  // namespace qer
