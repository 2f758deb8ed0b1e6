// Stabilizer codes: exact Pauli-word arithmetic, encoding isometries,
// syndrome-subspace machinery, and classification of Pauli errors into
// (normalizer, syndrome) cells.
#pragma once

#include "qer/channels.hpp"
#include "qer/opalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qer {

// A scaled Pauli string i^{phase4} * (w_1 (x) ... (x) w_n), phases tracked
// exactly as integers mod 4. Qubit 0 is the leftmost letter and the most
// significant bit of a computational-basis index.
struct PauliWord {
  std::string word;
  int phase4 = 0;
};

PauliWord pauli_mul(const PauliWord& a, const PauliWord& b);
bool pauli_anticommutes(const std::string& a, const std::string& b);
int pauli_weight(const std::string& word);

// Apply i^{phase4} * word to a state vector in O(2^n).
Vec pauli_apply(const PauliWord& p, const Vec& v);
Mat pauli_apply_cols(const PauliWord& p, const Mat& M);
Mat pauli_word_dense(const PauliWord& p);

struct StabilizerCode {
  int n = 0;  // physical qubits
  int k = 0;  // logical qubits
  std::vector<std::string> generators;  // n-k commuting words
  std::vector<std::string> logical_X;   // k words
  std::vector<std::string> logical_Z;   // k words
  Mat U_C;                              // 2^n x 2^k encoding isometry
};

StabilizerCode five_qubit_code();
StabilizerCode steane_code();
StabilizerCode shor_code();

// Rebuilds the encoding isometry for explicit generator/logical choices;
// used to check that measurable quantities do not depend on the choice.
StabilizerCode make_stabilizer_code(std::vector<std::string> generators,
                                    std::vector<std::string> logical_X,
                                    std::vector<std::string> logical_Z);

// Isometry-only code from a seeded Gaussian matrix; no stabilizer structure.
Mat random_code(int n, int k, std::uint64_t seed);

// Syndrome subspaces S_q, q = 0..2^{n-k}-1 with S_0 the code space; bit b of
// q is 1 when the error anticommutes with generators[b]. Each subspace
// carries the basis T_q |m>_0, where the transfer word T_q is the minimum-
// weight (then lexicographically smallest) word with syndrome q, adjusted by
// logical operators so that it commutes with every logical operator. That
// adjustment makes subspace transfer and normalizer action commute.
struct SyndromeDecomposition {
  int n = 0, k = 0;
  std::vector<std::string> raw_word;  // unadjusted min-weight word per syndrome
  std::vector<PauliWord> T;       // 2^{n-k} transfer words, T[0] = identity
  std::vector<Mat> U_Cq;          // 2^n x 2^k isometries onto each S_q
  std::vector<PauliWord> A_word;  // 4^k normalizer words X^i Z^j (see below)
  std::vector<Mat> A;             // dense normalizer operators, 2^n x 2^n

  Mat projector(Index q) const;              // P_q = U_Cq U_Cq^dag
  Mat transfer(Index q_from, Index q_to) const;  // W = U_Cq[to] U_Cq[from]^dag
};

// Normalizer index p reads in binary as i_1..i_k j_1..j_k (i_1 most
// significant): A_p = X_1^{i_1}..X_k^{i_k} Z_1^{j_1}..Z_k^{j_k}.
SyndromeDecomposition syndrome_decomposition(const StabilizerCode& code);

// The same operator pattern on the k-qubit source space, satisfying
// A_p U_C = U_C A_p^S.
Mat normalizer_source_action(int k, Index p);

// Classify every term of a Pauli channel: entry (p, q) accumulates the
// squared amplitude of the terms acting as normalizer p on syndrome space q.
// Entries sum to 1; throws if any term fails to decompose into a single cell
// to 1e-10.
RMat pauli_error_coefficients(const StabilizerCode& code,
                              const SyndromeDecomposition& sd,
                              const PauliChannelSpec& spec);

}  // namespace qer
