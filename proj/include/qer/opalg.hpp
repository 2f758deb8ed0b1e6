// Operator algebra for channel-adapted recovery: double-ket vectorization,
// partial traces, power-iteration eigensolvers, closest-isometry projection.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace qer {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

// Vectorization convention: an operator A mapping H (cols) into K (rows)
// becomes the vector |A>> in K (x) H* with flat coordinate (i,j) -> i*cols + j.
Vec dket(const Mat& A);
Mat undket(const Vec& v, Index rows, Index cols);

// Hilbert-Schmidt inner product <<A|B>> = tr(A^dag B).
cplx hs_inner(const Mat& A, const Mat& B);

Mat kron(const Mat& A, const Mat& B);

// (A (x) conj(B)) |C>> = |A C B^dag>>, without forming the Kronecker product.
// B maps the column space of the result into the column space of C.
Vec kron_conj_apply(const Mat& A, const Mat& B, const Vec& c,
                    Index c_rows, Index c_cols);

// Partial traces of an operator X on K (x) H* (dim_k * dim_h square).
// ptrace_left traces out K and returns a dim_h square matrix;
// ptrace_right traces out H* and returns a dim_k square matrix.
Mat ptrace_left(const Mat& X, Index dim_k, Index dim_h);
Mat ptrace_right(const Mat& X, Index dim_k, Index dim_h);

bool is_hermitian(const Mat& M, double tol = 1e-10);

// Orthonormal basis for the span of the given columns (column-pivoted QR);
// directions with residual norm below drop_tol are dropped.
Mat orthonormal_basis(const Mat& columns, double drop_tol = 1e-10);

// Orthonormal basis of the orthogonal complement of V (m x q, orthonormal
// columns) inside C^m, via the full unitary factor of a QR decomposition.
Mat orthogonal_complement(const Mat& V);

// (I (x) conj(B))^dag X (I (x) conj(B)) for an operator X on K (x) H* with
// dim K = dim_k and an orthonormal basis B of a subspace of H: the operator
// as seen on K (x) span(B)*. Hermitized on output.
Mat second_factor_compress(const Mat& X, Index dim_k, const Mat& B);

struct EigOptions {
  double tol = 1e-10;        // residual tolerance relative to ||M||_F
  int max_iters = 0;         // 0 -> max(1000, 50 * dim)
  bool accept_on_stall = true;
  std::uint64_t start_salt = 0;  // mixed into the seeded secondary start
};

struct EigPair {
  double value = 0.0;
  Vec vector;
  int iters = 0;
  double residual = 0.0;
  bool converged = false;
};

// Dominant (largest) eigenpair of a Hermitian PSD matrix by power iteration.
// Runs two starts -- the all-ones vector and a deterministic start seeded from
// a content hash of the matrix -- and keeps the larger converged eigenvalue.
// A single start can be exactly orthogonal to the remaining dominant
// eigenspace after repeated deflation (the residual still converges, silently
// yielding a sub-dominant pair), which the second start guards against.
EigPair dominant_eig(const Mat& M, const EigOptions& opt = {});

// Smallest eigenpair of a Hermitian matrix via the shifted power method:
// dominant_eig(eta*I - M) with eta = 1 + max absolute row sum.
EigPair min_eig(const Mat& M, const EigOptions& opt = {});

// Closest rank-d isometry in Frobenius norm: X = U S V^dag -> U_d V_d^dag,
// keeping the d leading singular directions.
Mat closest_isometry(const Mat& X, Index rank);

}  // namespace qer
