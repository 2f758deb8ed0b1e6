// Quantum channels as Kraus-operator sets: standard qubit noise models,
// Pauli channels, tensor powers, and composition with an encoding isometry.
#pragma once

#include "qer/opalg.hpp"

#include <string>
#include <vector>

namespace qer {

struct KrausChannel {
  std::vector<Mat> elements;  // each dim_out x dim_in
  Index dim_in = 0;
  Index dim_out = 0;
};

// Frobenius norm of (sum_k E_k^dag E_k) - I; zero for a trace-preserving set.
double cptp_defect(const KrausChannel& ch);

// Channel action E(rho) = sum_k E_k rho E_k^dag.
Mat apply_channel(const KrausChannel& ch, const Mat& rho);

Mat pauli_matrix(char p);                          // 'I', 'X', 'Y', 'Z'
Mat pauli_string_matrix(const std::string& word);  // n-fold Kronecker product

// Probability gamma of decaying |1> -> |0>.
KrausChannel amplitude_damping(double gamma);

// Rotates the pure states at angles +-theta/2 in the xz-plane toward each
// other by phi, leaving each output pure; all other inputs emerge mixed.
// The two sign-paired elements and one diagonal element are scaled by
// constants solved from the trace-preservation constraint.
KrausChannel pure_state_rotation(double theta, double phi);

struct PauliTerm {
  std::string word;  // over {I,X,Y,Z}, length n
  cplx amp;
};

struct PauliChannelSpec {
  int n = 1;
  std::vector<PauliTerm> terms;  // unique words, sum |amp|^2 = 1
};

KrausChannel pauli_channel(const PauliChannelSpec& spec);

KrausChannel depolarizing(double p);  // one qubit

// n-fold tensor power; element count grows as |elements|^n and is rejected
// when a nonzero cap is exceeded. Elements are ordered lexicographically by
// factor index.
KrausChannel tensor_pow(const KrausChannel& ch, int n,
                        std::size_t element_cap = 0);

// Right-composition with an encoding isometry: elements {E_k U_C},
// mapping the logical space into the channel output space.
KrausChannel compose_encoding(const KrausChannel& ch, const Mat& U_C);

}  // namespace qer
