// Average entanglement fidelity: Choi matrices, the data matrix that folds
// the input ensemble and channel together, and fidelity evaluation for
// recovery operations in either Kraus or Choi form.
#pragma once

#include "qer/channels.hpp"
#include "qer/opalg.hpp"

#include <utility>
#include <vector>

namespace qer {

struct Ensemble {
  std::vector<std::pair<Mat, double>> states;  // (density matrix, probability)
};

// The single completely mixed state I/d with probability 1.
Ensemble mixed_state_ensemble(Index d);

// Throws unless probabilities are nonnegative and sum to 1 and every state
// is Hermitian, PSD, and unit trace (all to 1e-12).
void validate_ensemble(const Ensemble& ens);

// Choi matrix sum_k |A_k>><<A_k| of a channel with elements A_k
// (dim_out x dim_in), living on the doubled space of size dim_out * dim_in.
Mat choi(const KrausChannel& ch);
Mat choi_of_elements(const std::vector<Mat>& elems);

// Channel action recovered from a Choi matrix:
// tr over the input factor of (I (x) conj(rho)) X.
Mat choi_apply(const Mat& X, Index dim_out, Index dim_in, const Mat& rho);

// Hermitian PSD matrix on H_S (x) H_C^* whose quadratic form in |R_k>> sums
// to the average entanglement fidelity of the recovery {R_k}.
struct DataMatrix {
  Mat C;
  Index d_S = 0;
  Index d_C = 0;
};

// C = sum_{i,k} p_i |rho_i E_k^dag>><<rho_i E_k^dag| for the encoded channel
// E (mapping d_S into d_C). Trace equals sum_i p_i tr(rho_i^2).
DataMatrix build_data_matrix(const Ensemble& ens, const KrausChannel& E);

// Fidelity of a recovery given by operator elements (each d_S x d_C):
// sum_k <<R_k | C | R_k>>. Throws if the value leaves [0,1] by more than
// 1e-9; values inside that band are clamped to [0,1].
double fidelity_of_elements(const std::vector<Mat>& elems,
                            const DataMatrix& D);

// Fidelity tr(X_R C) of a recovery in Choi form, same range policy.
double fidelity_of_choi(const Mat& X_R, const DataMatrix& D);

}  // namespace qer
