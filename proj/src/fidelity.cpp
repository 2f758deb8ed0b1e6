// fidelity.cpp -- Choi matrices, the data matrix, fidelity evaluation.
#include "qer/fidelity.hpp"

#include <cmath>
#include <stdexcept>

namespace qer {

Ensemble mixed_state_ensemble(Index d) {
  Ensemble ens;
  ens.states.emplace_back(Mat(Mat::Identity(d, d) / double(d)), 1.0);
  return ens;
}

void validate_ensemble(const Ensemble& ens) {
  if (ens.states.empty()) throw std::invalid_argument("ensemble: empty");
  double total = 0.0;
  for (const auto& [rho, p] : ens.states) {
    if (p < 0.0) throw std::invalid_argument("ensemble: negative probability");
    total += p;
    if (rho.rows() != rho.cols() || !is_hermitian(rho, 1e-12))
      throw std::invalid_argument("ensemble: state not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 ||
        std::abs(rho.trace().imag()) > 1e-12)
      throw std::invalid_argument("ensemble: state trace != 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw std::invalid_argument("ensemble: state not PSD");
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble: probabilities do not sum to 1");
}

Mat choi_of_elements(const std::vector<Mat>& elems) {
  if (elems.empty()) throw std::invalid_argument("choi: no elements");
  const Index d = elems.front().rows() * elems.front().cols();
  Mat X = Mat::Zero(d, d);
  for (const Mat& A : elems) {
    const Vec v = dket(A);
    X.noalias() += v * v.adjoint();
  }
  return X;
}

Mat choi(const KrausChannel& ch) { return choi_of_elements(ch.elements); }

Mat choi_apply(const Mat& X, Index dim_out, Index dim_in, const Mat& rho) {
  const Mat lifted = kron(Mat::Identity(dim_out, dim_out), rho.conjugate()) * X;
  return ptrace_right(lifted, dim_out, dim_in);
}

DataMatrix build_data_matrix(const Ensemble& ens, const KrausChannel& E) {
  validate_ensemble(ens);
  const Index d_S = E.dim_in, d_C = E.dim_out;
  for (const auto& [rho, p] : ens.states)
    if (rho.rows() != d_S)
      throw std::invalid_argument("build_data_matrix: dimension mismatch");
  DataMatrix D;
  D.d_S = d_S;
  D.d_C = d_C;
  D.C = Mat::Zero(d_S * d_C, d_S * d_C);
  double want_trace = 0.0;
  for (const auto& [rho, p] : ens.states) {
    want_trace += p * (rho * rho).trace().real();
    for (const Mat& Ek : E.elements) {
      const Vec v = dket(rho * Ek.adjoint());
      D.C.noalias() += p * (v * v.adjoint());
    }
  }
  if (!is_hermitian(D.C, 1e-12))
    throw std::runtime_error("build_data_matrix: lost Hermiticity");
  D.C = 0.5 * (D.C + D.C.adjoint());
  if (std::abs(D.C.trace().real() - want_trace) > 1e-10)
    throw std::runtime_error("build_data_matrix: trace identity violated");
  return D;
}

namespace {

double checked_fidelity(double value) {
  if (value < -1e-9 || value > 1.0 + 1e-9)
    throw std::runtime_error("fidelity outside [0,1]: numerical integrity");
  return std::min(1.0, std::max(0.0, value));
}

}  // namespace

double fidelity_of_elements(const std::vector<Mat>& elems,
                            const DataMatrix& D) {
  double f = 0.0;
  for (const Mat& R : elems) {
    if (R.rows() != D.d_S || R.cols() != D.d_C)
      throw std::invalid_argument("fidelity: element dimension mismatch");
    const Vec v = dket(R);
    f += (v.adjoint() * D.C * v)(0).real();
  }
  return checked_fidelity(f);
}

double fidelity_of_choi(const Mat& X_R, const DataMatrix& D) {
  if (X_R.rows() != D.C.rows())
    throw std::invalid_argument("fidelity: Choi dimension mismatch");
  return checked_fidelity(hs_inner(X_R, D.C).real());
}

}  // namespace qer
