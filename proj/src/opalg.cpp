// opalg.cpp -- double-ket vectorization, partial traces, power iteration,
// closest isometry.
#include "qer/opalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

namespace qer {

Vec dket(const Mat& A) {
  const Index rows = A.rows(), cols = A.cols();
  Vec v(rows * cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) v(i * cols + j) = A(i, j);
  return v;
}

Mat undket(const Vec& v, Index rows, Index cols) {
  Mat A(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) A(i, j) = v(i * cols + j);
  return A;
}

cplx hs_inner(const Mat& A, const Mat& B) {
  return A.conjugate().cwiseProduct(B).sum();
}

Mat kron(const Mat& A, const Mat& B) {
  Mat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

Vec kron_conj_apply(const Mat& A, const Mat& B, const Vec& c,
                    Index c_rows, Index c_cols) {
  const Mat C = undket(c, c_rows, c_cols);
  return dket(A * C * B.adjoint());
}

Mat ptrace_left(const Mat& X, Index dim_k, Index dim_h) {
  Mat Z = Mat::Zero(dim_h, dim_h);
  for (Index i = 0; i < dim_k; ++i)
    Z += X.block(i * dim_h, i * dim_h, dim_h, dim_h);
  return Z;
}

Mat ptrace_right(const Mat& X, Index dim_k, Index dim_h) {
  Mat Y(dim_k, dim_k);
  for (Index i = 0; i < dim_k; ++i)
    for (Index ip = 0; ip < dim_k; ++ip)
      Y(i, ip) = X.block(i * dim_h, ip * dim_h, dim_h, dim_h).trace();
  return Y;
}

bool is_hermitian(const Mat& M, double tol) {
  if (M.rows() != M.cols()) return false;
  return (M - M.adjoint()).norm() <= tol * std::max(1.0, M.norm());
}

Mat orthonormal_basis(const Mat& columns, double drop_tol) {
  if (columns.cols() == 0) return Mat(columns.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat> qr(columns);
  qr.setThreshold(drop_tol);
  const Index r = qr.rank();
  Mat Q = qr.householderQ() * Mat::Identity(columns.rows(), r);
  return Q;
}

Mat orthogonal_complement(const Mat& V) {
  const Index m = V.rows();
  const Index q = V.cols();
  Eigen::HouseholderQR<Mat> qr(V);
  const Mat Qfull = qr.householderQ() * Mat::Identity(m, m);
  return Qfull.rightCols(m - q);
}

Mat second_factor_compress(const Mat& X, Index dim_k, const Mat& B) {
  const Index d = B.rows();
  const Index m = B.cols();
  const Mat Bc = B.conjugate();
  Mat out(dim_k * m, dim_k * m);
  for (Index s = 0; s < dim_k; ++s)
    for (Index t = 0; t < dim_k; ++t)
      out.block(s * m, t * m, m, m) =
          Bc.adjoint() * X.block(s * d, t * d, d, d) * Bc;
  return 0.5 * (out + out.adjoint()).eval();
}

namespace {

Vec seeded_start(const Mat& M, std::uint64_t salt) {
  // FNV-1a over the matrix dimensions and raw coefficient bytes, mixed with
  // the salt, so the start vector varies with the matrix content.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= b[k];
      h *= 1099511628211ull;
    }
  };
  const std::uint64_t r = static_cast<std::uint64_t>(M.rows());
  const std::uint64_t c = static_cast<std::uint64_t>(M.cols());
  mix(&r, sizeof r);
  mix(&c, sizeof c);
  mix(M.data(), sizeof(cplx) * static_cast<std::size_t>(M.size()));
  mix(&salt, sizeof salt);

  std::mt19937_64 rng(h);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(M.rows());
  for (Index i = 0; i < v.size(); ++i) v(i) = cplx(nd(rng), nd(rng));
  const double nrm = v.norm();
  if (nrm < 1e-300) return Vec::Ones(M.rows()).normalized();
  return v / nrm;
}

EigPair power_once(const Mat& M, Vec v, double tol_abs, int max_iters,
                   bool accept_on_stall, std::uint64_t salt) {
  EigPair out;
  const Index n = M.rows();
  v.normalize();
  double lam = 0.0;
  double res = std::numeric_limits<double>::infinity();
  double window_best = res;
  int since_improve = 0;
  bool rerandomized = false;

  int it = 0;
  for (; it < max_iters; ++it) {
    const Vec w = M * v;
    lam = v.dot(w).real();
    res = (w - lam * v).norm();
    if (res <= tol_abs) {
      out.converged = true;
      break;
    }
    if (res < 0.99 * window_best) {
      window_best = res;
      since_improve = 0;
    } else if (++since_improve >= 50) {
      if (!rerandomized) {
        v = seeded_start(M, salt ^ 0x9e3779b97f4a7c15ull);
        rerandomized = true;
        window_best = std::numeric_limits<double>::infinity();
        since_improve = 0;
        continue;
      }
      if (accept_on_stall) break;
      window_best = res;
      since_improve = 0;
    }
    const double nw = w.norm();
    if (nw < 1e-300) break;  // numerically in the kernel: eigenvalue ~ 0
    v = w / nw;
  }
  // Rayleigh polish with the final vector.
  const Vec w = M * v;
  lam = v.dot(w).real();
  res = (w - lam * v).norm();
  out.value = lam;
  out.vector = v;
  out.iters = it;
  out.residual = res;
  out.converged = out.converged || res <= tol_abs;
  (void)n;
  return out;
}

}  // namespace

EigPair dominant_eig(const Mat& M, const EigOptions& opt) {
  const Index n = M.rows();
  EigPair out;
  if (n == 0) {
    out.converged = true;
    out.vector = Vec(0);
    return out;
  }
  const double scale = M.norm();
  if (scale == 0.0) {
    out.converged = true;
    out.value = 0.0;
    out.vector = Vec::Ones(n).normalized();
    return out;
  }
  const double tol_abs = opt.tol * scale;
  const int max_iters =
      opt.max_iters > 0 ? opt.max_iters
                        : std::max<int>(1000, 50 * static_cast<int>(n));

  const EigPair a = power_once(M, Vec::Ones(n), tol_abs, max_iters,
                               opt.accept_on_stall, opt.start_salt);
  const EigPair b = power_once(M, seeded_start(M, opt.start_salt), tol_abs,
                               max_iters, opt.accept_on_stall, opt.start_salt);

  // Either start can land on a sub-dominant eigenpair when it begins exactly
  // orthogonal to the dominant eigenspace, so keep the larger eigenvalue,
  // preferring converged results.
  if (a.converged != b.converged) return a.converged ? a : b;
  return a.value >= b.value ? a : b;
}

EigPair min_eig(const Mat& M, const EigOptions& opt) {
  const Index n = M.rows();
  if (n == 0) {
    EigPair out;
    out.converged = true;
    out.vector = Vec(0);
    return out;
  }
  const double eta = 1.0 + M.cwiseAbs().rowwise().sum().maxCoeff();
  const Mat shifted = eta * Mat::Identity(n, n) - M;
  EigPair p = dominant_eig(shifted, opt);
  p.value = eta - p.value;
  // Residual is invariant under the shift; recompute against M for clarity.
  if (p.vector.size() == n) {
    const Vec w = M * p.vector;
    p.residual = (w - p.value * p.vector).norm();
  }
  return p;
}

Mat closest_isometry(const Mat& X, Index rank) {
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index d = std::min<Index>(rank, svd.singularValues().size());
  return svd.matrixU().leftCols(d) * svd.matrixV().leftCols(d).adjoint();
}

}  // namespace qer
