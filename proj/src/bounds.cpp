#include "qer/bounds.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qer {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_data(const DataMatrix& D) {
  require(D.d_S > 0 && D.d_C > 0, "data matrix: dimensions must be positive");
  const Index n = D.d_S * D.d_C;
  require(D.C.rows() == n && D.C.cols() == n,
          "data matrix: size does not match d_S * d_C");
  require((D.C - D.C.adjoint()).cwiseAbs().maxCoeff() <= 1e-8,
          "data matrix: not Hermitian");
}

void check_hermitian(const Mat& Y, Index d, const char* msg) {
  require(Y.rows() == d && Y.cols() == d, msg);
  require((Y - Y.adjoint()).cwiseAbs().maxCoeff() <= 1e-8, msg);
}

Mat hermitized(const Mat& Y) { return 0.5 * (Y + Y.adjoint()); }

// Stacks the bases and checks that together they are an orthonormal system;
// when complete is set they must span the whole space.
Mat stack_bases(const std::vector<Mat>& bases, Index d_C, bool complete) {
  require(!bases.empty(), "subspace bases: empty list");
  Index total = 0;
  for (const Mat& B : bases) {
    require(B.rows() == d_C && B.cols() > 0,
            "subspace bases: wrong dimensions");
    total += B.cols();
  }
  require(total <= d_C, "subspace bases: more directions than the space");
  require(!complete || total == d_C,
          "subspace bases: do not partition the space");
  Mat W(d_C, total);
  Index off = 0;
  for (const Mat& B : bases) {
    W.middleCols(off, B.cols()) = B;
    off += B.cols();
  }
  require((W.adjoint() * W - Mat::Identity(total, total))
              .cwiseAbs()
              .maxCoeff() <= 1e-8,
          "subspace bases: not jointly orthonormal");
  return W;
}

Mat weighted_projector_sum(const std::vector<Mat>& bases,
                           const std::vector<double>& w) {
  const Index d_C = bases.front().rows();
  Mat Y = Mat::Zero(d_C, d_C);
  for (std::size_t q = 0; q < bases.size(); ++q)
    Y += w[q] * (bases[q] * bases[q].adjoint()).conjugate();
  return hermitized(Y);
}

Mat block_diag(const Mat& A, const Mat& B) {
  Mat out = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  out.topLeftCorner(A.rows(), A.cols()) = A;
  out.bottomRightCorner(B.rows(), B.cols()) = B;
  return out;
}

}  // namespace

double dual_margin(const Mat& Y, const DataMatrix& D) {
  check_data(D);
  require(Y.rows() == D.d_C && Y.cols() == D.d_C,
          "dual point: Y size does not match the output space");
  Mat Z = kron(Mat::Identity(D.d_S, D.d_S), hermitized(Y)) - D.C;
  EigPair low = min_eig(hermitized(Z));
  return low.value;
}

DualPoint make_dual_point(const Mat& Y, const DataMatrix& D,
                          std::string provenance, double tol) {
  check_hermitian(Y, D.d_C, "dual point: Y must be Hermitian on the output space");
  DualPoint p;
  p.Y = hermitized(Y);
  p.bound = p.Y.trace().real();
  p.feasibility_margin = dual_margin(p.Y, D);
  p.feasible = p.feasibility_margin >= -tol;
  p.provenance = std::move(provenance);
  return p;
}

std::vector<Mat> syndrome_subspace_bases(const StabilizerCode& code) {
  return syndrome_decomposition(code).U_Cq;
}

std::vector<Mat> recovery_subspace_bases(const StructuredRecovery& rec) {
  std::vector<Mat> bases;
  bases.reserve(rec.elements.size() + 1);
  for (const Mat& R : rec.elements) bases.push_back(orthonormal_basis(R.adjoint()));
  Index total = 0;
  for (const Mat& B : bases) total += B.cols();
  if (total < rec.d_C) {
    Mat W(rec.d_C, total);
    Index off = 0;
    for (const Mat& B : bases) {
      W.middleCols(off, B.cols()) = B;
      off += B.cols();
    }
    bases.push_back(orthogonal_complement(W));
  }
  return bases;
}

DualPoint gersgorin_dual(const DataMatrix& D, const std::vector<Mat>& bases) {
  check_data(D);
  Mat W = stack_bases(bases, D.d_C, /*complete=*/true);
  // Rows of C in the subspace-ordered basis; the q-th weight dominates the
  // absolute row sums of the q-th row block, which places every disc of
  // I (x) Y - C on the nonnegative axis.
  const Mat T = kron(Mat::Identity(D.d_S, D.d_S), W.conjugate());
  const Mat Cs = T.adjoint() * D.C * T;
  const RVec row_sums = Cs.cwiseAbs().rowwise().sum();
  std::vector<double> w(bases.size(), 0.0);
  Index off = 0;
  for (std::size_t q = 0; q < bases.size(); ++q) {
    const Index r = bases[q].cols();
    for (Index s = 0; s < D.d_S; ++s)
      w[q] = std::max(w[q],
                      row_sums.segment(s * D.d_C + off, r).maxCoeff());
    off += r;
  }
  DualPoint p = make_dual_point(weighted_projector_sum(bases, w), D,
                                "gersgorin");
  return p;
}

DualPoint svd_dual(const DataMatrix& D, const std::vector<Mat>& bases) {
  check_data(D);
  stack_bases(bases, D.d_C, /*complete=*/true);
  std::vector<double> w(bases.size(), 0.0);
  for (std::size_t q = 0; q < bases.size(); ++q) {
    const Index r = bases[q].cols();
    const Mat Bc = bases[q].conjugate();
    Mat rows(D.d_S * r, D.d_S * D.d_C);
    for (Index s = 0; s < D.d_S; ++s)
      for (Index t = 0; t < D.d_S; ++t)
        rows.block(s * r, t * D.d_C, r, D.d_C) =
            Bc.adjoint() * D.C.block(s * D.d_C, t * D.d_C, D.d_C, D.d_C);
    Eigen::JacobiSVD<Mat> svd(rows);
    w[q] = svd.singularValues()(0);
  }
  return make_dual_point(weighted_projector_sum(bases, w), D, "svd");
}

DualPoint iterative_dual(const DataMatrix& D, const Mat& Y0,
                         const IterativeDualOptions& opts) {
  check_data(D);
  check_hermitian(Y0, D.d_C,
                  "dual repair: start must be Hermitian on the output space");
  require(opts.tol > 0.0, "dual repair: tolerance must be positive");
  require(opts.max_updates >= 0, "dual repair: update cap must be nonnegative");
  const Index budget =
      opts.max_updates > 0 ? opts.max_updates : D.d_S * D.d_C;

  const Mat I_S = Mat::Identity(D.d_S, D.d_S);
  Mat Y = hermitized(Y0);
  Mat Z = hermitized(kron(I_S, Y) - D.C);
  DualPoint p;
  p.provenance = "iterative";
  Index last_negatives = Z.rows() + 1;
  for (;;) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Z);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("dual repair: eigensolver failed");
    p.feasibility_margin = es.eigenvalues()(0);
    // The update adds a PSD term, so no eigenvalue may move down.
    Index negatives = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < -opts.tol) ++negatives;
    if (negatives > last_negatives)
      throw std::logic_error("dual repair: negative eigenvalue count grew");
    last_negatives = negatives;
    if (p.feasibility_margin >= -opts.tol) break;
    if (p.updates >= budget) break;

    // Smallest perturbation of the starred slot lifting this eigenvalue to
    // zero: weight |x| / sigma_1^2 on the leading right singular direction
    // of the reshaped eigenvector.
    const Mat X = undket(es.eigenvectors().col(0), D.d_S, D.d_C);
    Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinV);
    const double s1sq = svd.singularValues()(0) * svd.singularValues()(0);
    // A unit vector has at most d_S Schmidt terms, so the top one carries
    // at least 1/d_S of the weight; each update costs at most d_S * |x|.
    if (s1sq < 1.0 / double(D.d_S) - 1e-12)
      throw std::logic_error("dual repair: Schmidt weight below the floor");
    const Vec v = svd.matrixV().col(0);
    const Mat dir = hermitized((v * v.adjoint()).conjugate());
    const double step = -p.feasibility_margin / s1sq;
    Y += step * dir;
    Z += step * kron(I_S, dir);
    ++p.updates;
  }
  p.Y = std::move(Y);
  p.bound = p.Y.trace().real();
  p.feasible = p.feasibility_margin >= -opts.tol;
  return p;
}

Mat block_lambda_max_init(const DataMatrix& D, const std::vector<Mat>& bases) {
  check_data(D);
  stack_bases(bases, D.d_C, /*complete=*/false);
  std::vector<double> w(bases.size(), 0.0);
  for (std::size_t q = 0; q < bases.size(); ++q) {
    Eigen::SelfAdjointEigenSolver<Mat> es(
        second_factor_compress(D.C, D.d_S, bases[q]), Eigen::EigenvaluesOnly);
    w[q] = es.eigenvalues()(es.eigenvalues().size() - 1);
  }
  return weighted_projector_sum(bases, w);
}

Mat block_dual_init(const std::vector<Mat>& bases,
                    const std::vector<Mat>& block_duals, Index d_C) {
  require(!bases.empty() && bases.size() == block_duals.size(),
          "block dual start: need one dual per subspace basis");
  Mat Y = Mat::Zero(d_C, d_C);
  for (std::size_t q = 0; q < bases.size(); ++q) {
    const Mat& B = bases[q];
    require(B.rows() == d_C && B.cols() > 0,
            "block dual start: basis dimensions do not match the space");
    check_hermitian(block_duals[q], B.cols(),
                    "block dual start: dual size does not match its basis");
    Y += B.conjugate() * hermitized(block_duals[q]) * B.transpose();
  }
  return hermitized(Y);
}

Mat block_dual_init(const BlockRecovery& rec) {
  require(!rec.blocks.empty(), "block dual start: recovery has no blocks");
  std::vector<Mat> bases, duals;
  bases.reserve(rec.blocks.size());
  duals.reserve(rec.blocks.size());
  for (const auto& blk : rec.blocks) {
    bases.push_back(blk.basis);
    duals.push_back(blk.Y);
  }
  return block_dual_init(bases, duals, rec.d_C);
}

DualPoint iterated_block_dual(const DataMatrix& D,
                              const std::vector<Mat>& bases,
                              const std::vector<Mat>& block_duals,
                              const IterativeDualOptions& opts) {
  check_data(D);
  require(!bases.empty() && bases.size() == block_duals.size(),
          "iterated dual: need one dual per subspace basis");
  stack_bases(bases, D.d_C, /*complete=*/false);
  std::vector<std::pair<Mat, Mat>> blocks;  // (basis, dual on its span)
  blocks.reserve(bases.size());
  for (std::size_t q = 0; q < bases.size(); ++q) {
    check_hermitian(block_duals[q], bases[q].cols(),
                    "iterated dual: dual size does not match its basis");
    blocks.emplace_back(bases[q], hermitized(block_duals[q]));
  }

  int spent = 0;
  while (blocks.size() > 1) {
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const auto& a, const auto& b) {
                       return a.first.cols() < b.first.cols();
                     });
    std::vector<std::pair<Mat, Mat>> merged;
    merged.reserve((blocks.size() + 1) / 2);
    std::size_t i = 0;
    for (; i + 1 < blocks.size(); i += 2) {
      Mat B(D.d_C, blocks[i].first.cols() + blocks[i + 1].first.cols());
      B << blocks[i].first, blocks[i + 1].first;
      DataMatrix pair{second_factor_compress(D.C, D.d_S, B), D.d_S, B.cols()};
      DualPoint dp = iterative_dual(
          pair, block_diag(blocks[i].second, blocks[i + 1].second), opts);
      spent += dp.updates;
      merged.emplace_back(std::move(B), std::move(dp.Y));
    }
    if (i < blocks.size()) merged.push_back(std::move(blocks[i]));
    blocks = std::move(merged);
  }

  // Close with one pass against the full data matrix: the merge tree only
  // certifies the span of the blocks, not directions outside it.
  const Mat& B = blocks.front().first;
  Mat Yfull = B.conjugate() * blocks.front().second * B.transpose();
  DualPoint out = iterative_dual(D, hermitized(Yfull), opts);
  out.updates += spent;
  out.provenance = "iterated-block";
  return out;
}

DualPoint iterated_block_dual(const DataMatrix& D, const BlockRecovery& rec,
                              const IterativeDualOptions& opts) {
  require(!rec.blocks.empty(), "iterated dual: recovery has no blocks");
  require(rec.d_C == D.d_C && rec.d_S == D.d_S,
          "iterated dual: recovery and data matrix dimensions differ");
  std::vector<Mat> bases, duals;
  bases.reserve(rec.blocks.size());
  duals.reserve(rec.blocks.size());
  for (const auto& blk : rec.blocks) {
    bases.push_back(blk.basis);
    duals.push_back(blk.Y);
  }
  return iterated_block_dual(D, bases, duals, opts);
}

PauliCertificate pauli_certificate(const StabilizerCode& code,
                                   const PauliChannelSpec& spec) {
  require(spec.n == code.n,
          "certificate: channel acts on a different number of qubits");
  double total = 0.0;
  for (const PauliTerm& t : spec.terms) total += std::norm(t.amp);
  require(std::abs(total - 1.0) <= 1e-10,
          "certificate: channel amplitudes are not normalized");

  SyndromeDecomposition sd = syndrome_decomposition(code);
  const RMat tab = pauli_error_coefficients(code, sd, spec);
  const Index d_S = Index(1) << code.k;
  const Index d_C = Index(1) << code.n;

  PauliCertificate cert;
  cert.recovery.d_S = d_S;
  cert.recovery.d_C = d_C;
  Mat Y = Mat::Zero(d_C, d_C);
  Mat claimed = Mat::Zero(d_C, d_C);
  for (Index q = 0; q < tab.cols(); ++q) {
    Index p_best = 0;
    tab.col(q).maxCoeff(&p_best);
    const double v = tab(p_best, q);
    Mat R = sd.U_Cq[std::size_t(q)].adjoint() * sd.A[std::size_t(p_best)];
    claimed += R.adjoint() * R;
    cert.recovery.elements.push_back(std::move(R));
    cert.recovery.contributions.push_back(v);
    cert.recovery.ranks.push_back(d_S);
    cert.recovery.fidelity += v;
    Y += (v / double(d_S)) * sd.projector(q).conjugate();
  }
  cert.recovery.deficit = Mat::Identity(d_C, d_C) - claimed;

  cert.dual.Y = hermitized(Y);
  cert.dual.bound = cert.dual.Y.trace().real();
  // I (x) Y - C is diagonal in the classification eigenbasis with entries
  // (max_p' a_p'q - a_pq) / d_S, so the margin is exactly zero: it is
  // attained at every argmax cell and no entry is negative.
  cert.dual.feasibility_margin = 0.0;
  cert.dual.feasible = true;
  cert.dual.provenance = "pauli-certificate";
  return cert;
}

}  // namespace qer
