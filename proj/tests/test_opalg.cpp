// Operator-algebra unit tests: vectorization layout, partial-trace oracles,
// power-iteration eigensolvers, closest-isometry properties.
#include "qer/opalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <random>

#include "doctest.h"

using namespace qer;

namespace {

std::mt19937_64& test_rng() {
  static std::mt19937_64 rng(20240817ull);
  return rng;
}

Index rand_dim(Index lo, Index span) {
  return lo + static_cast<Index>(test_rng()() % static_cast<std::uint64_t>(span));
}

Mat randc(Index rows, Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = cplx(nd(test_rng()), nd(test_rng()));
  return M;
}

Mat rand_hermitian(Index n) {
  const Mat G = randc(n, n);
  return Mat(0.5 * (G + G.adjoint()));
}

Mat rand_psd(Index n) {
  const Mat G = randc(n, n);
  return Mat(G * G.adjoint());
}

}  // namespace

TEST_CASE("dket flattens row-major and undket inverts it exactly") {
  Mat A(2, 3);
  A << cplx(1, 9), cplx(2, 8), cplx(3, 7), cplx(4, 6), cplx(5, 5), cplx(6, 4);
  const Vec v = dket(A);
  REQUIRE(v.size() == 6);
  // Coordinate (i, j) of a rows x cols matrix sits at flat index i*cols + j.
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(v(i * 3 + j) == A(i, j));
  const Mat back = undket(v, 2, 3);
  CHECK((back - A).norm() == 0.0);
}

TEST_CASE("hs_inner matches the trace of the adjoint product") {
  for (int rep = 0; rep < 100; ++rep) {
    const Index r = rand_dim(1, 6);
    const Index c = rand_dim(1, 6);
    const Mat A = randc(r, c), B = randc(r, c);
    const cplx direct = (A.adjoint() * B).trace();
    CHECK(std::abs(hs_inner(A, B) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
  // <<A|B>> also equals the ordinary inner product of the double-kets.
  const Mat A = randc(3, 4), B = randc(3, 4);
  CHECK(std::abs(hs_inner(A, B) - dket(A).dot(dket(B))) <= 1e-12);
}

TEST_CASE("kron layout pinned on an explicit 2x2 pair") {
  Mat A(2, 2), B(2, 2);
  A << 1, 2, 3, 4;
  B << 0, 5, 6, 7;
  const Mat K = kron(A, B);
  REQUIRE(K.rows() == 4);
  REQUIRE(K.cols() == 4);
  CHECK(K(0, 1) == cplx(5));   // A(0,0) * B(0,1)
  CHECK(K(0, 3) == cplx(10));  // A(0,1) * B(0,1)
  CHECK(K(2, 0) == cplx(0));   // A(1,0) * B(0,0)
  CHECK(K(3, 2) == cplx(24));  // A(1,1) * B(1,0)
  // Mixed-product property on random square factors.
  const Mat P = randc(2, 2), Q = randc(3, 3), R = randc(2, 2), S = randc(3, 3);
  const Mat lhs = kron(P, Q) * kron(R, S);
  const Mat rhs = kron(Mat(P * R), Mat(Q * S));
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("kron_conj_apply agrees with the explicit Kronecker matrix") {
  for (int rep = 0; rep < 20; ++rep) {
    const Index kr = rand_dim(2, 3);
    const Index kc = rand_dim(2, 3);
    const Index hr = rand_dim(2, 3);
    const Index hc = rand_dim(2, 3);
    const Mat A = randc(kr, kc);   // maps C's row space
    const Mat B = randc(hr, hc);   // maps C's column space
    const Mat C = randc(kc, hc);
    const Vec via_kron = kron(A, B.conjugate()) * dket(C);
    const Vec fast = kron_conj_apply(A, B, dket(C), kc, hc);
    REQUIRE(fast.size() == kr * hr);
    CHECK((fast - via_kron).norm() <= 1e-12 * (1.0 + via_kron.norm()));
    // Operator form: the result is the double-ket of A C B^dag.
    CHECK((fast - dket(Mat(A * C * B.adjoint()))).norm() <= 1e-12);
  }
}

TEST_CASE("partial traces match naive index sums") {
  const Index dk = 3, dh = 4;
  const Mat X = randc(dk * dh, dk * dh);
  Mat left = Mat::Zero(dh, dh), right = Mat::Zero(dk, dk);
  for (Index i = 0; i < dk; ++i)
    for (Index ip = 0; ip < dk; ++ip)
      for (Index j = 0; j < dh; ++j)
        for (Index jp = 0; jp < dh; ++jp) {
          if (i == ip) left(j, jp) += X(i * dh + j, i * dh + jp);
          if (j == jp) right(i, ip) += X(i * dh + j, ip * dh + j);
        }
  CHECK((ptrace_left(X, dk, dh) - left).norm() <= 1e-12 * left.norm());
  CHECK((ptrace_right(X, dk, dh) - right).norm() <= 1e-12 * right.norm());
  // Both preserve the full trace.
  CHECK(std::abs(ptrace_left(X, dk, dh).trace() - X.trace()) <= 1e-12);
  CHECK(std::abs(ptrace_right(X, dk, dh).trace() - X.trace()) <= 1e-12);
}

TEST_CASE("partial traces of a double-ket dyad reduce to matrix products") {
  const Index dk = 3, dh = 5;
  const Mat A = randc(dk, dh), B = randc(dk, dh);
  const Mat X = dket(A) * dket(B).adjoint();
  // Tracing out the left factor leaves conj(A^dag B); the right, A B^dag.
  const Mat left = ptrace_left(X, dk, dh);
  const Mat right = ptrace_right(X, dk, dh);
  CHECK((left - Mat((A.adjoint() * B).conjugate())).norm() <= 1e-12);
  CHECK((right - Mat(A * B.adjoint())).norm() <= 1e-12);
}

TEST_CASE("partial traces of a Kronecker product split into factors") {
  const Mat A = randc(3, 3), B = randc(4, 4);
  const Mat K = kron(A, B);
  CHECK((ptrace_left(K, 3, 4) - Mat(A.trace() * B)).norm() <= 1e-12);
  CHECK((ptrace_right(K, 3, 4) - Mat(B.trace() * A)).norm() <= 1e-12);
}

TEST_CASE("dominant_eig matches a dense eigensolver on random PSD matrices") {
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = rand_dim(4, 9);
    const Mat M = rand_psd(n);
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    const double expect = es.eigenvalues().maxCoeff();
    const EigPair p = dominant_eig(M);
    CHECK(p.converged);
    CHECK(std::abs(p.value - expect) <= 1e-8 * (1.0 + expect));
    CHECK((M * p.vector - p.value * p.vector).norm() <= 1e-7 * M.norm());
    CHECK(std::abs(p.vector.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("dominant_eig is deterministic") {
  const Mat M = rand_psd(12);
  const EigPair a = dominant_eig(M);
  const EigPair b = dominant_eig(M);
  CHECK(a.value == b.value);
  REQUIRE(a.vector.size() == b.vector.size());
  CHECK((a.vector - b.vector).norm() == 0.0);
}

TEST_CASE("dominant_eig escapes a start vector inside the kernel") {
  // The all-ones start is an exact eigenvector of eigenvalue 0 here, so a
  // single-start power iteration "converges" without ever seeing lambda = 2.
  Mat M(2, 2);
  M << 1, -1, -1, 1;
  const EigPair p = dominant_eig(M);
  CHECK(p.converged);
  CHECK(std::abs(p.value - 2.0) <= 1e-9);
}

TEST_CASE("dominant_eig survives repeated deflation of a degenerate spectrum") {
  // Projector onto a 3-dimensional subspace: after deflating one eigenvector,
  // the remaining dominant eigenspace is still degenerate.
  const Mat Q = orthonormal_basis(randc(6, 3));
  Mat M = Q * Q.adjoint();
  for (int step = 0; step < 3; ++step) {
    const EigPair p = dominant_eig(M);
    CHECK(p.converged);
    CHECK(std::abs(p.value - 1.0) <= 1e-8);
    M -= p.value * p.vector * p.vector.adjoint();
  }
  CHECK(dominant_eig(M).value <= 1e-7);
}

TEST_CASE("min_eig matches a dense eigensolver on random Hermitian matrices") {
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = rand_dim(4, 9);
    const Mat M = rand_hermitian(n);
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    const double expect = es.eigenvalues().minCoeff();
    const EigPair p = min_eig(M);
    CHECK(std::abs(p.value - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    CHECK((M * p.vector - p.value * p.vector).norm() <= 1e-7 * (1.0 + M.norm()));
  }
}

TEST_CASE("closest_isometry leaves unitaries fixed and strips singular values") {
  Mat X(2, 2);
  X << 2, 0, 0, 0.5;
  const Mat R = closest_isometry(X, 2);
  CHECK((R - Mat::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("closest_isometry attains the singular-value distance bound") {
  // For rank-d R with R^dag R = I_d projected correctly, the squared distance
  // equals ||X||^2 + d - 2 * (sum of the d largest singular values).
  for (int rep = 0; rep < 10; ++rep) {
    const Index rows = 6, cols = 4;
    const Mat X = randc(rows, cols);
    Eigen::JacobiSVD<Mat> svd(X);
    for (Index d = 1; d <= cols; ++d) {
      const Mat R = closest_isometry(X, d);
      // R embeds a d-dimensional space: R^dag R is a rank-d projector.
      const Mat P = R.adjoint() * R;
      CHECK((P * P - P).norm() <= 1e-10);
      CHECK(std::abs(P.trace().real() - static_cast<double>(d)) <= 1e-10);
      const double sig = svd.singularValues().head(d).sum();
      const double want = X.squaredNorm() + d - 2.0 * sig;
      CHECK(std::abs((X - R).squaredNorm() - want) <= 1e-10 * (1.0 + want));
    }
  }
}

TEST_CASE("closest_isometry beats random isometries of the same rank") {
  const Mat X = randc(5, 3);
  const Mat R = closest_isometry(X, 3);
  for (int rep = 0; rep < 25; ++rep) {
    const Mat W = orthonormal_basis(randc(5, 3));
    REQUIRE(W.cols() == 3);
    const Mat V = orthonormal_basis(randc(3, 3));
    const Mat other = W * V.adjoint();
    CHECK((X - R).norm() <= (X - other).norm() + 1e-12);
  }
}

TEST_CASE("orthonormal_basis spans the input and drops dependent columns") {
  const Mat base = randc(8, 4);
  Mat cols(8, 6);
  cols.leftCols(4) = base;
  cols.col(4) = base.col(0) + cplx(0, 1) * base.col(2);
  cols.col(5) = base.col(1) - 2.0 * base.col(3);
  const Mat Q = orthonormal_basis(cols);
  REQUIRE(Q.cols() == 4);
  CHECK((Q.adjoint() * Q - Mat::Identity(4, 4)).norm() <= 1e-12);
  // Every input column lies in the span of Q.
  const Mat proj = Q * Q.adjoint();
  CHECK((proj * cols - cols).norm() <= 1e-10 * cols.norm());
  // Empty and zero inputs degrade gracefully.
  CHECK(orthonormal_basis(Mat(5, 0)).cols() == 0);
  CHECK(orthonormal_basis(Mat::Zero(5, 3)).cols() == 0);
}
