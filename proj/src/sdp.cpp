// Interior-point solver for the recovery-fidelity semidefinite program
//
//   maximize tr(X C)   s.t.  ptrace_left(X) = I_{d_sub},  X >= 0,
//
// run as a minimization of <-C, X> in a primal-dual path-following scheme
// with Nesterov-Todd scaling and a Mehrotra predictor-corrector step.
//
// All Hermitian operators are carried through the real symmetric embedding
//   emb(H) = [[Re H, -Im H], [Im H, Re H]],
// a *-isomorphism onto the symmetric matrices commuting with the embedded
// imaginary unit. Eigenvalues survive unchanged (each doubled in
// multiplicity), so positive semidefiniteness and step-length control carry
// over directly, while traces and inner products double and are halved again
// wherever values are reported. Matrix functions of embedded matrices stay
// inside the embedded algebra; iterates are nevertheless re-projected onto
// it after every update so that roundoff cannot accumulate off-algebra.
//
// The start is strictly feasible on both sides (X = I/d_S satisfies the
// partial-trace constraint exactly; the dual diagonal starts above the top
// eigenvalue of C), and every direction solved for keeps both residuals at
// zero, so the algorithm only has to close the complementarity gap. The
// Schur complement in the partial-trace constraint basis is assembled from
// the constraints' sparse embedded entries (at most 4 d_S each) and solved
// by Cholesky with an escalating ridge fallback.

#include "qer/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qer {

namespace {

RMat embed(const Mat& H) {
  const Index n = H.rows();
  RMat S(2 * n, 2 * n);
  S.topLeftCorner(n, n) = H.real();
  S.topRightCorner(n, n) = -H.imag();
  S.bottomLeftCorner(n, n) = H.imag();
  S.bottomRightCorner(n, n) = H.real();
  return S;
}

Mat unembed(const RMat& S) {
  const Index n = S.rows() / 2;
  RMat re = (S.topLeftCorner(n, n) + S.bottomRightCorner(n, n)) / 2.0;
  RMat im = (S.bottomLeftCorner(n, n) - S.topRightCorner(n, n)) / 2.0;
  re = ((re + re.transpose()) / 2.0).eval();
  im = ((im - im.transpose()) / 2.0).eval();
  Mat H = re.cast<cplx>();
  H += cplx(0.0, 1.0) * im.cast<cplx>();
  return H;
}

// Orthogonal projection of a symmetric matrix back onto the embedded
// algebra (Hermitian part re-symmetrized), guarding against roundoff drift.
void reembed(RMat& S) {
  const Index n = S.rows() / 2;
  RMat re = (S.topLeftCorner(n, n) + S.bottomRightCorner(n, n)) / 2.0;
  re = ((re + re.transpose()) / 2.0).eval();
  RMat im = (S.bottomLeftCorner(n, n) - S.topRightCorner(n, n)) / 2.0;
  im = ((im - im.transpose()) / 2.0).eval();
  S.topLeftCorner(n, n) = re;
  S.bottomRightCorner(n, n) = re;
  S.bottomLeftCorner(n, n) = im;
  S.topRightCorner(n, n) = -im;
}

// One partial-trace constraint tr(X (I (x) B_j)) = b_j in embedded sparse
// form. The Hermitian basis B_j runs over diagonal units (b = 1), real
// symmetric pairs, and imaginary antisymmetric pairs (b = 0), so that the
// constraint family is exactly ptrace_left(X) = I.
struct Constraint {
  struct Entry {
    Index r, c;
    double v;
  };
  std::vector<Entry> entries;  // embedded symmetric matrix A_j = emb(I (x) B_j)
  double b = 0.0;              // complex-domain right-hand side tr(B_j)
  int kind = 0;                // 0: diagonal, 1: real pair, 2: imaginary pair
  Index k = 0, l = 0;          // basis position within the d_sub factor
};

std::vector<Constraint> constraint_basis(Index d_S, Index d_sub) {
  const Index N = d_S * d_sub;
  std::vector<Constraint> cons;
  cons.reserve(std::size_t(d_sub) * std::size_t(d_sub));
  for (Index k = 0; k < d_sub; ++k) {
    Constraint c;
    c.kind = 0;
    c.k = k;
    c.b = 1.0;
    for (Index s = 0; s < d_S; ++s) {
      const Index f = s * d_sub + k;
      c.entries.push_back({f, f, 1.0});
      c.entries.push_back({N + f, N + f, 1.0});
    }
    cons.push_back(std::move(c));
  }
  for (Index k = 0; k < d_sub; ++k) {
    for (Index l = k + 1; l < d_sub; ++l) {
      Constraint cr;  // B = E_kl + E_lk
      cr.kind = 1;
      cr.k = k;
      cr.l = l;
      Constraint ci;  // B = i E_kl - i E_lk
      ci.kind = 2;
      ci.k = k;
      ci.l = l;
      for (Index s = 0; s < d_S; ++s) {
        const Index fk = s * d_sub + k;
        const Index fl = s * d_sub + l;
        cr.entries.push_back({fk, fl, 1.0});
        cr.entries.push_back({fl, fk, 1.0});
        cr.entries.push_back({N + fk, N + fl, 1.0});
        cr.entries.push_back({N + fl, N + fk, 1.0});
        ci.entries.push_back({fk, N + fl, -1.0});
        ci.entries.push_back({fl, N + fk, 1.0});
        ci.entries.push_back({N + fk, fl, 1.0});
        ci.entries.push_back({N + fl, fk, -1.0});
      }
      cons.push_back(std::move(cr));
      cons.push_back(std::move(ci));
    }
  }
  return cons;
}

double sparse_dot(const Constraint& c, const RMat& S) {
  double acc = 0.0;
  for (const auto& e : c.entries) acc += e.v * S(e.r, e.c);
  return acc;
}

// dense += w * A_j for every constraint, used for A^*(y).
void scatter_add(const std::vector<Constraint>& cons, const RVec& w,
                 RMat& dense) {
  for (std::size_t j = 0; j < cons.size(); ++j) {
    const double wj = w(Index(j));
    if (wj == 0.0) continue;
    for (const auto& e : cons[j].entries) dense(e.r, e.c) += wj * e.v;
  }
}

// Schur complement M_ij = tr(A_i W A_j W), assembled entry-wise from the
// sparse constraints: tr(A_i W A_j W) = sum_{e in A_i, f in A_j}
// v_e v_f W(c_e, r_f) W(c_f, r_e).
RMat schur_matrix(const std::vector<Constraint>& cons, const RMat& W) {
  const Index m = Index(cons.size());
  RMat M(m, m);
  for (Index j = 0; j < m; ++j) {
    const auto& cj = cons[std::size_t(j)];
    for (Index i = 0; i <= j; ++i) {
      const auto& ci = cons[std::size_t(i)];
      double acc = 0.0;
      for (const auto& e : ci.entries)
        for (const auto& f : cj.entries)
          acc += e.v * f.v * W(e.c, f.r) * W(f.c, e.r);
      M(i, j) = acc;
      M(j, i) = acc;
    }
  }
  return M;
}

RMat sym(const RMat& S) { return ((S + S.transpose()) / 2.0).eval(); }

constexpr double kEigFloor = 1e-300;

RMat eig_fn(const Eigen::SelfAdjointEigenSolver<RMat>& es,
            double (*f)(double)) {
  RVec d = es.eigenvalues();
  for (Index i = 0; i < d.size(); ++i) d(i) = f(std::max(d(i), kEigFloor));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Longest step a in (0, 1] keeping S + a * dS positive definite, damped by
// tau; needs the eigendecomposition of the current (positive definite) S.
double max_step(const Eigen::SelfAdjointEigenSolver<RMat>& es_S,
                const RMat& dS, double tau) {
  RMat Sih = eig_fn(es_S, [](double x) { return 1.0 / std::sqrt(x); });
  RMat scaled = sym(Sih * dS * Sih);
  Eigen::SelfAdjointEigenSolver<RMat> es(scaled, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues()(0);
  if (lam_min >= 0.0) return 1.0;
  return std::min(1.0, tau / (-lam_min));
}

// Complex dual certificate Y = -sum_j y_j B_j from the multiplier vector.
Mat dual_matrix(const std::vector<Constraint>& cons, const RVec& y,
                Index d_sub) {
  Mat Y = Mat::Zero(d_sub, d_sub);
  for (std::size_t j = 0; j < cons.size(); ++j) {
    const auto& c = cons[j];
    const double w = -y(Index(j));
    if (c.kind == 0) {
      Y(c.k, c.k) += w;
    } else if (c.kind == 1) {
      Y(c.k, c.l) += w;
      Y(c.l, c.k) += w;
    } else {
      Y(c.k, c.l) += cplx(0.0, w);
      Y(c.l, c.k) += cplx(0.0, -w);
    }
  }
  return Y;
}

struct SchurSolver {
  Eigen::LLT<RMat> llt;
  Eigen::LDLT<RMat> ldlt;
  bool use_ldlt = false;

  explicit SchurSolver(RMat M) {
    const Index m = M.rows();
    double ridge = 1e-14 * M.trace() / double(m);
    for (int attempt = 0; attempt < 4; ++attempt) {
      llt.compute(M + ridge * RMat::Identity(m, m));
      if (llt.info() == Eigen::Success) return;
      ridge *= 100.0;
    }
    ldlt.compute(M);
    use_ldlt = true;
  }

  RVec solve(const RVec& rhs) const {
    return use_ldlt ? RVec(ldlt.solve(rhs)) : RVec(llt.solve(rhs));
  }
};

}  // namespace

QerSdpSolution solve_qer_sdp(const QerSdpProblem& prob,
                             const SdpOptions& opts) {
  const Index d_S = prob.d_S;
  const Index d_sub = prob.d_sub;
  if (d_S < 1 || d_sub < 1)
    throw std::invalid_argument("solve_qer_sdp: dimensions must be positive");
  const Index N = d_S * d_sub;
  if (prob.C.rows() != N || prob.C.cols() != N)
    throw std::invalid_argument(
        "solve_qer_sdp: data matrix size must be d_S * d_sub");
  if (!is_hermitian(prob.C, 1e-9))
    throw std::invalid_argument("solve_qer_sdp: data matrix must be Hermitian");

  const Mat Ch = ((prob.C + prob.C.adjoint()) / 2.0).eval();
  const Index n2 = 2 * N;                       // embedded side length
  const RMat C0 = embed(Mat(-Ch));              // minimization objective
  const std::vector<Constraint> cons = constraint_basis(d_S, d_sub);
  const Index m = Index(cons.size());

  // Strictly feasible start: X is the maximally mixed Choi matrix, the dual
  // diagonal sits above the top eigenvalue of C so the slack starts
  // positive definite.
  RMat X = RMat::Identity(n2, n2) / double(d_S);
  Eigen::SelfAdjointEigenSolver<Mat> esC(Ch, Eigen::EigenvaluesOnly);
  const double lmax = esC.eigenvalues().maxCoeff();
  RVec y = RVec::Zero(m);
  // Degree-1 homogeneous in C (with a floor for C ~ 0) so that scaling the
  // objective rescales the whole iterate sequence exactly: the returned
  // optimizer X is then invariant under C -> s C to machine precision.
  const double c_scale = Ch.norm() > 0.0 ? Ch.norm() : 1.0;
  const double y0 = -(std::max(lmax, 0.0) * 1.05 + 0.1 * c_scale);
  for (Index k = 0; k < d_sub; ++k) y(k) = y0;
  RMat Z = C0;
  scatter_add(cons, RVec(-y), Z);  // Z = C0 - A^*(y)
  reembed(Z);

  const double tau = 0.98;
  QerSdpSolution out;
  out.history.reserve(std::size_t(opts.max_iters) + 1);

  auto stats = [&](double& primal, double& dual, double& gap_c, double& mu,
                   double& pinf, double& dinf) {
    mu = X.cwiseProduct(Z).sum() / double(n2);
    gap_c = X.cwiseProduct(Z).sum() / 2.0;
    primal = -C0.cwiseProduct(X).sum() / 2.0;
    dual = 0.0;
    for (Index j = 0; j < m; ++j) dual -= y(j) * cons[std::size_t(j)].b;
    pinf = 0.0;
    for (const auto& c : cons)
      pinf = std::max(pinf, std::abs(sparse_dot(c, X) - 2.0 * c.b) / 2.0);
    RMat Zerr = C0 - Z;
    scatter_add(cons, RVec(-y), Zerr);  // C0 - A^*(y) - Z
    dinf = Zerr.cwiseAbs().maxCoeff();
  };

  int it = 0;
  for (;;) {
    double primal, dual, gap_c, mu, pinf, dinf;
    stats(primal, dual, gap_c, mu, pinf, dinf);
    out.history.push_back({primal, dual, gap_c, mu});
    out.gap = gap_c;
    out.iters = it;
    if (gap_c / (1.0 + std::abs(primal)) <= opts.tol &&
        pinf <= opts.feas_tol && dinf <= opts.feas_tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iters) break;

    // Nesterov-Todd scaling point W: W Z W = X.
    Eigen::SelfAdjointEigenSolver<RMat> esZ(Z);
    RMat Zh = eig_fn(esZ, [](double x) { return std::sqrt(x); });
    RMat Zih = eig_fn(esZ, [](double x) { return 1.0 / std::sqrt(x); });
    RMat Zinv = eig_fn(esZ, [](double x) { return 1.0 / x; });
    RMat Mid = sym(Zh * X * Zh);
    Eigen::SelfAdjointEigenSolver<RMat> esMid(Mid);
    RMat Midh = eig_fn(esMid, [](double x) { return std::sqrt(x); });
    RMat W = sym(Zih * Midh * Zih);
    reembed(W);

    SchurSolver schur(schur_matrix(cons, W));
    Eigen::SelfAdjointEigenSolver<RMat> esX(X);

    // Both residuals are zero, so a direction for complementarity target Rc
    // solves A(W A^*(dy) W) = A(Rc), dZ = -A^*(dy), dX = Rc - W dZ W.
    auto solve_dirs = [&](const RMat& Rc, RVec& dy, RMat& dZ, RMat& dX) {
      RVec rhs(m);
      for (Index j = 0; j < m; ++j)
        rhs(j) = -sparse_dot(cons[std::size_t(j)], Rc);
      dy = schur.solve(rhs);
      dZ = RMat::Zero(n2, n2);
      scatter_add(cons, RVec(-dy), dZ);
      dX = sym(Rc - W * dZ * W);
      reembed(dX);
    };

    // Predictor: pure Newton step toward complementarity zero.
    RVec dy_a;
    RMat dZ_a, dX_a;
    solve_dirs(RMat(-X), dy_a, dZ_a, dX_a);
    const double ap_a = max_step(esX, dX_a, 1.0);
    const double ad_a = max_step(esZ, dZ_a, 1.0);
    const double a_aff = std::min(ap_a, ad_a);
    const double mu_aff =
        (X + a_aff * dX_a).cwiseProduct(Z + a_aff * dZ_a).sum() / double(n2);
    const double ratio = std::max(mu_aff, 0.0) / mu;
    const double sigma = std::min(1.0, std::max(0.0, ratio * ratio * ratio));

    // Corrector: recenter to sigma * mu and subtract the second-order term.
    RMat Rc = sym(sigma * mu * Zinv - X -
                  0.5 * (dX_a * dZ_a * Zinv + Zinv * dZ_a * dX_a));
    reembed(Rc);
    RVec dy;
    RMat dZ, dX;
    solve_dirs(Rc, dy, dZ, dX);
    const double ap = max_step(esX, dX, tau);
    const double ad = max_step(esZ, dZ, tau);
    X = sym(X + ap * dX);
    reembed(X);
    y += ad * dy;
    Z = sym(Z + ad * dZ);
    reembed(Z);
    ++it;
  }

  out.X = unembed(X);
  out.X = ((out.X + out.X.adjoint()) / 2.0).eval();
  out.Y = dual_matrix(cons, y, d_sub);
  out.Y = ((out.Y + out.Y.adjoint()) / 2.0).eval();
  out.primal_value = std::real(hs_inner(out.X, Ch));
  out.dual_value = std::real(out.Y.trace());
  out.primal_infeas = (ptrace_left(out.X, d_S, d_sub) -
                       Mat::Identity(d_sub, d_sub))
                          .cwiseAbs()
                          .maxCoeff();
  out.dual_infeas =
      (kron(Mat::Identity(d_S, d_S), out.Y) - Ch - unembed(Z))
          .cwiseAbs()
          .maxCoeff();
  return out;
}

BlockSdpSolution solve_block_sdp(const Mat& C, Index d_S, const Mat& P_block,
                                 const SdpOptions& opts) {
  if (P_block.rows() != P_block.cols())
    throw std::invalid_argument("solve_block_sdp: projector must be square");
  const Index d_C = P_block.rows();
  if (d_S < 1 || d_C < 1 || C.rows() != d_S * d_C || C.cols() != C.rows())
    throw std::invalid_argument(
        "solve_block_sdp: data matrix size must be d_S * dim(P)");
  if (!is_hermitian(P_block, 1e-9) ||
      (P_block * P_block - P_block).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument(
        "solve_block_sdp: block must be a Hermitian projector");

  Mat Q = orthonormal_basis(P_block);
  if (Q.cols() < 1)
    throw std::invalid_argument("solve_block_sdp: block projector is zero");
  if ((Q * Q.adjoint() - P_block).cwiseAbs().maxCoeff() > 1e-7)
    throw std::invalid_argument(
        "solve_block_sdp: support basis does not reproduce the projector");
  return solve_block_sdp_in_basis(C, d_S, Q, opts);
}

BlockSdpSolution solve_block_sdp_in_basis(const Mat& C, Index d_S,
                                          const Mat& Q,
                                          const SdpOptions& opts) {
  const Index d_C = Q.rows();
  const Index d_k = Q.cols();
  if (d_k < 1 || d_k > d_C)
    throw std::invalid_argument("solve_block_sdp: empty or oversized basis");
  if (d_S < 1 || C.rows() != d_S * d_C || C.cols() != C.rows())
    throw std::invalid_argument(
        "solve_block_sdp: data matrix size must be d_S * dim(basis rows)");
  if ((Q.adjoint() * Q - Mat::Identity(d_k, d_k)).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument(
        "solve_block_sdp: basis columns must be orthonormal");

  // Recoveries reading only this block see C through I (x) conj(Q).
  Mat IQ = kron(Mat::Identity(d_S, d_S), Q.conjugate());
  Mat C_red = IQ.adjoint() * C * IQ;
  C_red = ((C_red + C_red.adjoint()) / 2.0).eval();

  BlockSdpSolution out;
  out.sol = solve_qer_sdp({C_red, d_S, d_k}, opts);
  out.basis = Q;
  return out;
}

}  // namespace qer
