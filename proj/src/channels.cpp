// channels.cpp -- Kraus-set constructors, tensor powers, encoding
// composition.
#include "qer/channels.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace qer {

double cptp_defect(const KrausChannel& ch) {
  Mat acc = Mat::Zero(ch.dim_in, ch.dim_in);
  for (const Mat& E : ch.elements) acc += E.adjoint() * E;
  return (acc - Mat::Identity(ch.dim_in, ch.dim_in)).norm();
}

Mat apply_channel(const KrausChannel& ch, const Mat& rho) {
  Mat out = Mat::Zero(ch.dim_out, ch.dim_out);
  for (const Mat& E : ch.elements) out += E * rho * E.adjoint();
  return out;
}

Mat pauli_matrix(char p) {
  Mat M(2, 2);
  switch (p) {
    case 'I': M << 1, 0, 0, 1; break;
    case 'X': M << 0, 1, 1, 0; break;
    case 'Y': M << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': M << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli_matrix: unknown label");
  }
  return M;
}

Mat pauli_string_matrix(const std::string& word) {
  if (word.empty()) throw std::invalid_argument("pauli_string_matrix: empty");
  Mat M = pauli_matrix(word[0]);
  for (std::size_t i = 1; i < word.size(); ++i)
    M = kron(M, pauli_matrix(word[i]));
  return M;
}

KrausChannel amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("amplitude_damping: gamma outside [0,1]");
  KrausChannel ch;
  ch.dim_in = ch.dim_out = 2;
  Mat E0(2, 2), E1(2, 2);
  E0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  E1 << 0, std::sqrt(gamma), 0, 0;
  ch.elements = {E0, E1};
  return ch;
}

KrausChannel pure_state_rotation(double theta, double phi) {
  const double pi = 3.14159265358979323846;
  if (!(theta > 0.0 && theta < pi))
    throw std::invalid_argument("pure_state_rotation: theta outside (0,pi)");
  if (phi < 0.0 || phi > theta)
    throw std::invalid_argument("pure_state_rotation: phi outside [0,theta]");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const double cp = std::cos((theta - phi) / 2), sp = std::sin((theta - phi) / 2);

  // Trace preservation reduces to a 2x2 linear system for (alpha^2, beta^2):
  // the sign-paired elements cancel off-diagonal terms by construction.
  Eigen::Matrix2d A;
  A << 2 * s * s, (cp * cp) / (c * c),
       2 * c * c, (sp * sp) / (s * s);
  const Eigen::Vector2d rhs(1.0, 1.0);
  const Eigen::Vector2d sq = A.fullPivLu().solve(rhs);
  if (!(sq(0) >= -1e-12 && sq(1) >= -1e-12))
    throw std::runtime_error("pure_state_rotation: normalization infeasible");
  const double alpha = std::sqrt(std::max(0.0, sq(0)));
  const double beta = std::sqrt(std::max(0.0, sq(1)));

  Mat Ep(2, 2), Em(2, 2), Ed(2, 2);
  Ep << cp * s, cp * c,
        sp * s, sp * c;
  Em << cp * s, -cp * c,
        -sp * s, sp * c;
  Ed << cp / c, 0,
        0, sp / s;
  KrausChannel ch;
  ch.dim_in = ch.dim_out = 2;
  ch.elements = {alpha * Ep, alpha * Em, beta * Ed};
  if (cptp_defect(ch) > 1e-12)
    throw std::runtime_error("pure_state_rotation: CPTP closure failed");
  return ch;
}

KrausChannel pauli_channel(const PauliChannelSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("pauli_channel: n < 1");
  double total = 0.0;
  std::set<std::string> seen;
  for (const PauliTerm& t : spec.terms) {
    if (static_cast<int>(t.word.size()) != spec.n)
      throw std::invalid_argument("pauli_channel: word length != n");
    if (!seen.insert(t.word).second)
      throw std::invalid_argument("pauli_channel: duplicate word");
    total += std::norm(t.amp);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("pauli_channel: amplitudes not normalized");
  KrausChannel ch;
  ch.dim_in = ch.dim_out = Index(1) << spec.n;
  for (const PauliTerm& t : spec.terms)
    ch.elements.push_back(t.amp * pauli_string_matrix(t.word));
  return ch;
}

KrausChannel depolarizing(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("depolarizing: p outside [0,1]");
  PauliChannelSpec spec;
  spec.n = 1;
  spec.terms = {{"I", std::sqrt(1.0 - p)},
                {"X", std::sqrt(p / 3.0)},
                {"Y", std::sqrt(p / 3.0)},
                {"Z", std::sqrt(p / 3.0)}};
  return pauli_channel(spec);
}

KrausChannel tensor_pow(const KrausChannel& ch, int n,
                        std::size_t element_cap) {
  if (n < 1) throw std::invalid_argument("tensor_pow: n < 1");
  if (element_cap > 0) {
    double count = 1.0;
    for (int i = 0; i < n; ++i) count *= double(ch.elements.size());
    if (count > double(element_cap))
      throw std::runtime_error("tensor_pow: element count exceeds cap");
  }
  KrausChannel out = ch;
  for (int i = 1; i < n; ++i) {
    KrausChannel next;
    next.dim_in = out.dim_in * ch.dim_in;
    next.dim_out = out.dim_out * ch.dim_out;
    next.elements.reserve(out.elements.size() * ch.elements.size());
    for (const Mat& A : out.elements)
      for (const Mat& B : ch.elements) next.elements.push_back(kron(A, B));
    out = std::move(next);
  }
  return out;
}

KrausChannel compose_encoding(const KrausChannel& ch, const Mat& U_C) {
  if (U_C.rows() != ch.dim_in)
    throw std::invalid_argument("compose_encoding: dimension mismatch");
  const Mat gram = U_C.adjoint() * U_C;
  if ((gram - Mat::Identity(U_C.cols(), U_C.cols())).norm() > 1e-10)
    throw std::invalid_argument("compose_encoding: U_C is not an isometry");
  KrausChannel out;
  out.dim_in = U_C.cols();
  out.dim_out = ch.dim_out;
  out.elements.reserve(ch.elements.size());
  for (const Mat& E : ch.elements) out.elements.push_back(E * U_C);
  return out;
}

}  // namespace qer
