// recovery.cpp -- greedy, blocked, and order-restricted recovery
// constructions, plus the projective syndrome-measurement baseline.

#include "qer/recovery.hpp"

#include "qer/opalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qer {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_data_matrix(const DataMatrix& D) {
  require(D.d_S >= 1 && D.d_C >= 1, "data matrix: dimensions must be positive");
  require(D.C.rows() == D.C.cols() && D.C.rows() == D.d_S * D.d_C,
          "data matrix: size must be d_S * d_C");
  require(is_hermitian(D.C, 1e-8), "data matrix: must be Hermitian");
}

double zero_scale(const Mat& C) {
  return 1e-12 * std::max(1.0, std::abs(C.trace().real()));
}

// C <- (I (x) conj(I - V V^dag)) C (I (x) conj(I - V V^dag)) for an
// orthonormal V (d_C x d_k), blockwise so the cost stays O(d_k d_C^2 d_S^2).
void deflate_support(Mat& C, const Mat& V, Index d_S, Index d_C) {
  const Mat W = V.conjugate();
  for (Index s = 0; s < d_S; ++s)
    for (Index t = 0; t < d_S; ++t) {
      auto blk = C.block(s * d_C, t * d_C, d_C, d_C);
      blk -= W * (W.adjoint() * blk).eval();
      blk -= (blk * W).eval() * W.adjoint();
    }
  C = 0.5 * (C + C.adjoint()).eval();
}

// Enforced construction guarantees, rechecked after every build: elements are
// partial isometries with mutually orthogonal input supports and the claimed
// supports never exceed the identity.
void enforce_structure(const StructuredRecovery& rec) {
  const Index K = Index(rec.elements.size());
  if (K == 0) return;
  Mat E(K * rec.d_S, rec.d_C);
  for (Index k = 0; k < K; ++k)
    E.middleRows(k * rec.d_S, rec.d_S) = rec.elements[std::size_t(k)];
  const Mat G = E * E.adjoint();
  for (Index j = 0; j < K; ++j)
    for (Index k = 0; k < K; ++k) {
      const Mat blk = G.block(j * rec.d_S, k * rec.d_S, rec.d_S, rec.d_S);
      if (j == k) {
        if ((blk * blk - blk).cwiseAbs().maxCoeff() > 1e-9)
          throw std::logic_error("recovery element is not a partial isometry");
      } else if (blk.cwiseAbs().maxCoeff() > 1e-9) {
        throw std::logic_error("recovery element supports overlap");
      }
    }
  Mat deficit = Mat::Identity(rec.d_C, rec.d_C) - E.adjoint() * E;
  deficit = 0.5 * (deficit + deficit.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(deficit, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-9)
    throw std::logic_error("recovery supports exceed the identity");
}

StructuredRecovery finish_structured(StructuredRecovery rec) {
  rec.fidelity = 0.0;
  for (double f : rec.contributions) rec.fidelity += f;
  Mat sumP = Mat::Zero(rec.d_C, rec.d_C);
  for (const Mat& R : rec.elements) sumP += R.adjoint() * R;
  rec.deficit = Mat::Identity(rec.d_C, rec.d_C) - sumP;
  rec.deficit = 0.5 * (rec.deficit + rec.deficit.adjoint()).eval();
  enforce_structure(rec);
  return rec;
}

double contribution_of(const Mat& R, const Mat& C) {
  const Vec r = dket(R);
  return (r.dot(C * r)).real();
}

// Orthonormal basis for the part of raw's span not already inside used.
// Projecting once before the QR is not enough: a raw column whose genuinely
// new component is tiny gets normalized by the QR, amplifying its residual
// overlap with used. A second projection pass after the QR removes that
// amplified overlap (columns are unit vectors, so renormalizing is benign).
Mat fresh_directions(const Mat& used, const Mat& raw) {
  Mat r = raw;
  if (used.cols() > 0) r -= used * (used.adjoint() * r).eval();
  Mat Q = orthonormal_basis(r);
  if (used.cols() == 0 || Q.cols() == 0) return Q;
  Q -= used * (used.adjoint() * Q).eval();
  Index kept = 0;
  for (Index c = 0; c < Q.cols(); ++c) {
    const double nrm = Q.col(c).norm();
    if (nrm < 0.5) continue;  // was pure overlap dust after all
    Q.col(kept++) = Q.col(c) / nrm;
  }
  return Q.leftCols(kept);
}

}  // namespace

StructuredRecovery eig_qer(const DataMatrix& D, const EigQerOptions& opts) {
  check_data_matrix(D);
  require(opts.rank_sv_threshold > 0.0 && opts.rank_sv_threshold <= 1.0,
          "greedy recovery: rank threshold must lie in (0, 1]");
  require(opts.max_elements >= 0,
          "greedy recovery: element cap must be nonnegative");

  StructuredRecovery rec;
  rec.d_S = D.d_S;
  rec.d_C = D.d_C;

  // Work in the coordinates of the not-yet-claimed subspace: comp spans it,
  // C_red is the data matrix compressed to it. Claimed supports leave the
  // representation entirely, so later elements are orthogonal to earlier
  // ones by construction and every round's eigensolve shrinks.
  Mat comp = Mat::Identity(rec.d_C, rec.d_C);
  Mat C_red = 0.5 * (D.C + D.C.adjoint());
  const double tiny = zero_scale(C_red);
  while (comp.cols() > 0) {
    if (opts.max_elements > 0 &&
        Index(rec.elements.size()) >= opts.max_elements)
      break;
    if (C_red.trace().real() <= tiny) break;

    Eigen::SelfAdjointEigenSolver<Mat> es(C_red);
    if (es.info() != Eigen::Success)
      throw std::runtime_error(
          "greedy recovery: eigensolver failed to converge");
    const Index last = C_red.rows() - 1;
    if (es.eigenvalues()(last) <= tiny) break;

    const Index m = comp.cols();
    const Mat X = undket(es.eigenvectors().col(last), rec.d_S, m);
    Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Index d_k = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()(i);
      if (s * s >= opts.rank_sv_threshold) ++d_k;
    }
    d_k = std::max<Index>(d_k, 1);
    const Mat V = svd.matrixV().leftCols(d_k);
    const Mat R =
        (svd.matrixU().leftCols(d_k) * V.adjoint()) * comp.adjoint();
    const double f = contribution_of(R, D.C);
    if (opts.early_stop_contribution > 0.0 &&
        f < opts.early_stop_contribution)
      break;  // discard this element and stop

    rec.elements.push_back(R);
    rec.contributions.push_back(f);
    rec.ranks.push_back(d_k);
    if (comp.cols() == d_k) break;  // recovery complete

    const Mat K = orthogonal_complement(V);
    C_red = second_factor_compress(C_red, rec.d_S, K);
    comp = (comp * K).eval();
  }

  if (rec.elements.empty())
    throw std::runtime_error("greedy recovery: data matrix has no weight");
  return finish_structured(std::move(rec));
}

StructuredRecovery standard_qec_recovery(const StabilizerCode& code,
                                         const DataMatrix& D) {
  const Index d_S = Index(1) << code.k;
  const Index d_C = Index(1) << code.n;
  check_data_matrix(D);
  require(D.d_S == d_S && D.d_C == d_C,
          "syndrome baseline: data matrix does not match the code");

  const SyndromeDecomposition sd = syndrome_decomposition(code);
  StructuredRecovery rec;
  rec.d_S = d_S;
  rec.d_C = d_C;
  for (std::size_t q = 0; q < sd.U_Cq.size(); ++q) {
    // R_q = U_C^dag E_q P_q for the minimum-weight error E_q (Hermitian, so
    // U_C^dag E_q = (E_q U_C)^dag), evaluated through the syndrome isometry
    // to stay cheap: R_q = [(E_q U_C)^dag U_Cq] U_Cq^dag.
    const PauliWord E_q{sd.raw_word[q], 0};
    const Mat EU = pauli_apply_cols(E_q, code.U_C);
    const Mat R = (EU.adjoint() * sd.U_Cq[q]) * sd.U_Cq[q].adjoint();
    rec.elements.push_back(R);
    rec.contributions.push_back(contribution_of(R, D.C));
    rec.ranks.push_back(d_S);
  }
  return finish_structured(std::move(rec));
}

namespace {

BlockRecovery finish_block(BlockRecovery rec) {
  rec.fidelity = rec.residual.fidelity;
  Mat sumP = Mat::Zero(rec.d_C, rec.d_C);
  for (const auto& b : rec.blocks) {
    rec.fidelity += b.fidelity;
    sumP += b.basis * b.basis.adjoint();
  }
  for (const Mat& R : rec.residual.elements) sumP += R.adjoint() * R;
  rec.deficit = Mat::Identity(rec.d_C, rec.d_C) - sumP;
  rec.deficit = 0.5 * (rec.deficit + rec.deficit.adjoint()).eval();

  // Blocks must be mutually orthogonal subspaces not exceeding the identity.
  Eigen::SelfAdjointEigenSolver<Mat> es(rec.deficit, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-8)
    throw std::logic_error("block recovery supports exceed the identity");
  for (std::size_t i = 0; i < rec.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < rec.blocks.size(); ++j)
      if ((rec.blocks[i].basis.adjoint() * rec.blocks[j].basis)
              .cwiseAbs()
              .maxCoeff() > 1e-8)
        throw std::logic_error("block recovery subspaces overlap");
  return rec;
}

}  // namespace

BlockRecovery block_eig_qer(const DataMatrix& D, Index M,
                            const SdpOptions& sdp_opts) {
  check_data_matrix(D);
  require(M >= 1 && M <= D.d_S * D.d_C,
          "blocked recovery: eigenvector count per round must lie in "
          "[1, d_S * d_C]");

  BlockRecovery rec;
  rec.d_S = D.d_S;
  rec.d_C = D.d_C;
  rec.residual.d_S = D.d_S;
  rec.residual.d_C = D.d_C;

  // Same compressed-complement representation as the greedy construction:
  // comp spans what no block has claimed yet.
  Mat comp = Mat::Identity(rec.d_C, rec.d_C);
  Mat C_red = 0.5 * (D.C + D.C.adjoint());
  const double tiny = zero_scale(C_red);
  while (comp.cols() > 0) {
    if (C_red.trace().real() <= tiny) break;
    Eigen::SelfAdjointEigenSolver<Mat> es(C_red);
    if (es.info() != Eigen::Success)
      throw std::runtime_error(
          "blocked recovery: eigensolver failed to converge");
    const Index N = C_red.rows();
    const Index m = comp.cols();
    std::vector<Index> take;
    for (Index i = N - 1; i >= 0 && Index(take.size()) < M; --i) {
      if (es.eigenvalues()(i) <= tiny) break;
      take.push_back(i);
    }
    if (take.empty()) break;

    // Union of the input supports of the reshaped leading eigenvectors,
    // in the coordinates of the unclaimed subspace.
    Mat raw(m, Index(take.size()) * rec.d_S);
    for (std::size_t t = 0; t < take.size(); ++t)
      raw.middleCols(Index(t) * rec.d_S, rec.d_S) =
          undket(es.eigenvectors().col(take[t]), rec.d_S, m).adjoint();
    const Mat Q_local = orthonormal_basis(raw);
    if (Q_local.cols() == 0) break;
    const Mat Q = comp * Q_local;

    BlockSdpSolution bs = solve_block_sdp_in_basis(D.C, rec.d_S, Q, sdp_opts);
    BlockRecovery::Block blk;
    blk.basis = Q;
    blk.X = bs.sol.X;
    blk.Y = bs.sol.Y;
    blk.fidelity = bs.sol.primal_value;
    rec.blocks.push_back(std::move(blk));

    if (Q_local.cols() == m) break;  // everything claimed
    const Mat K = orthogonal_complement(Q_local);
    C_red = second_factor_compress(C_red, rec.d_S, K);
    comp = (comp * K).eval();
  }

  if (rec.blocks.empty())
    throw std::runtime_error("blocked recovery: data matrix has no weight");
  return finish_block(std::move(rec));
}

BlockRecovery order_qer(const StabilizerCode& code,
                        const KrausChannel& single_qubit, Index error_element,
                        const DataMatrix& D, const std::vector<int>& orders,
                        bool residual_greedy, const SdpOptions& sdp_opts,
                        const EigQerOptions& eig_opts) {
  const Index d_S = Index(1) << code.k;
  const Index d_C = Index(1) << code.n;
  check_data_matrix(D);
  require(D.d_S == d_S && D.d_C == d_C,
          "order recovery: data matrix does not match the code");
  require(single_qubit.dim_in == 2 && single_qubit.dim_out == 2,
          "order recovery: factor channel must act on one qubit");
  require(error_element >= 1 &&
              error_element < Index(single_qubit.elements.size()),
          "order recovery: error element index out of range (element 0 is "
          "the no-error part)");
  require(!orders.empty(), "order recovery: no orders requested");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    require(orders[i] >= 1 && orders[i] <= code.n,
            "order recovery: order must lie in [1, n]");
    require(i == 0 || orders[i] > orders[i - 1],
            "order recovery: orders must be strictly increasing");
  }

  const Mat& E0 = single_qubit.elements[0];
  const Mat& E1 = single_qubit.elements[std::size_t(error_element)];

  BlockRecovery rec;
  rec.d_S = d_S;
  rec.d_C = d_C;
  rec.residual.d_S = d_S;
  rec.residual.d_C = d_C;

  Mat prev(d_C, 0);
  for (int t : orders) {
    // Images of the logical basis under every t-site error pattern; the
    // first-order block also carries the unperturbed images.
    std::vector<std::vector<int>> patterns;
    if (t == 1) patterns.push_back({});
    std::vector<int> sites(static_cast<std::size_t>(t));
    // enumerate ascending site combinations of size t
    for (int i = 0; i < t; ++i) sites[std::size_t(i)] = i;
    while (true) {
      patterns.push_back(sites);
      int pos = t - 1;
      while (pos >= 0 && sites[std::size_t(pos)] == code.n - t + pos) --pos;
      if (pos < 0) break;
      ++sites[std::size_t(pos)];
      for (int i = pos + 1; i < t; ++i)
        sites[std::size_t(i)] = sites[std::size_t(i - 1)] + 1;
    }

    Mat raw(d_C, Index(patterns.size()) * d_S);
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      Mat op = Mat::Identity(1, 1);
      std::size_t next = 0;
      for (int site = 0; site < code.n; ++site) {
        const bool hit =
            next < patterns[p].size() && patterns[p][next] == site;
        op = kron(op, hit ? E1 : E0);
        if (hit) ++next;
      }
      raw.middleCols(Index(p) * d_S, d_S) = op * code.U_C;
    }
    const Mat Q = fresh_directions(prev, raw);
    if (Q.cols() == 0) continue;  // order adds no new directions

    BlockSdpSolution bs = solve_block_sdp_in_basis(D.C, d_S, Q, sdp_opts);
    BlockRecovery::Block blk;
    blk.basis = Q;
    blk.X = bs.sol.X;
    blk.Y = bs.sol.Y;
    blk.fidelity = bs.sol.primal_value;
    rec.blocks.push_back(std::move(blk));

    Mat grown(d_C, prev.cols() + Q.cols());
    grown << prev, Q;
    prev = std::move(grown);
  }

  if (residual_greedy && prev.cols() < d_C) {
    Mat C_resid = 0.5 * (D.C + D.C.adjoint());
    if (prev.cols() > 0) deflate_support(C_resid, prev, d_S, d_C);
    if (C_resid.trace().real() > zero_scale(D.C)) {
      // Contributions against the deflated matrix equal contributions
      // against the original one because the residual elements are
      // supported on the deflated subspace.
      rec.residual = eig_qer({std::move(C_resid), d_S, d_C}, eig_opts);
    }
  }
  return finish_block(std::move(rec));
}

std::vector<Mat> block_recovery_elements(const BlockRecovery& rec,
                                         double eig_cut) {
  std::vector<Mat> elems;
  for (const auto& blk : rec.blocks) {
    const Index d_q = blk.basis.cols();
    Eigen::SelfAdjointEigenSolver<Mat> es(blk.X);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam <= eig_cut) continue;
      const Mat r = undket(std::sqrt(lam) * es.eigenvectors().col(i),
                           rec.d_S, d_q);
      elems.push_back(r * blk.basis.adjoint());
    }
  }
  for (const Mat& R : rec.residual.elements) elems.push_back(R);
  return elems;
}

}  // namespace qer
