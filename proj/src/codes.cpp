// codes.cpp -- exact Pauli-word arithmetic, stabilizer encodings, syndrome
// machinery, Pauli-error classification.
#include "qer/codes.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

namespace qer {

namespace {

constexpr cplx kQuarter[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0),
                              cplx(0, -1)};

// Single-letter product c = i^{phase4} * letter.
struct LetterProd {
  char letter;
  int phase4;
};

LetterProd letter_mul(char a, char b) {
  if (a == 'I') return {b, 0};
  if (b == 'I') return {a, 0};
  if (a == b) return {'I', 0};
  // Cyclic products: XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
  if (a == 'X' && b == 'Y') return {'Z', 1};
  if (a == 'Y' && b == 'X') return {'Z', 3};
  if (a == 'Y' && b == 'Z') return {'X', 1};
  if (a == 'Z' && b == 'Y') return {'X', 3};
  if (a == 'Z' && b == 'X') return {'Y', 1};
  if (a == 'X' && b == 'Z') return {'Y', 3};
  throw std::invalid_argument("letter_mul: unknown Pauli letter");
}

void validate_letters(const std::string& w) {
  for (char c : w)
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw std::invalid_argument("pauli word: unknown letter");
}

int syndrome_of(const std::string& word,
                const std::vector<std::string>& gens) {
  int q = 0;
  for (std::size_t b = 0; b < gens.size(); ++b)
    q |= int(pauli_anticommutes(word, gens[b])) << b;
  return q;
}

}  // namespace

PauliWord pauli_mul(const PauliWord& a, const PauliWord& b) {
  if (a.word.size() != b.word.size())
    throw std::invalid_argument("pauli_mul: length mismatch");
  PauliWord out;
  out.word.resize(a.word.size());
  out.phase4 = (a.phase4 + b.phase4) % 4;
  for (std::size_t i = 0; i < a.word.size(); ++i) {
    const LetterProd lp = letter_mul(a.word[i], b.word[i]);
    out.word[i] = lp.letter;
    out.phase4 = (out.phase4 + lp.phase4) % 4;
  }
  return out;
}

bool pauli_anticommutes(const std::string& a, const std::string& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("pauli_anticommutes: length mismatch");
  int count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 'I' && b[i] != 'I' && a[i] != b[i]) ++count;
  return (count % 2) != 0;
}

int pauli_weight(const std::string& word) {
  int w = 0;
  for (char c : word)
    if (c != 'I') ++w;
  return w;
}

Vec pauli_apply(const PauliWord& p, const Vec& v) {
  validate_letters(p.word);
  const int n = int(p.word.size());
  const Index d = Index(1) << n;
  if (v.size() != d) throw std::invalid_argument("pauli_apply: dim mismatch");
  std::uint64_t xmask = 0, zmask = 0;
  int ny = 0;
  for (int j = 0; j < n; ++j) {
    const std::uint64_t bit = std::uint64_t(1) << (n - 1 - j);  // qubit 0 = MSB
    const char c = p.word[std::size_t(j)];
    if (c == 'X' || c == 'Y') xmask |= bit;
    if (c == 'Z' || c == 'Y') zmask |= bit;
    if (c == 'Y') ++ny;
  }
  const cplx base = kQuarter[(p.phase4 + ny) % 4];
  Vec out(d);
  for (Index idx = 0; idx < d; ++idx) {
    const int par = std::popcount(std::uint64_t(idx) & zmask) & 1;
    out(Index(std::uint64_t(idx) ^ xmask)) = (par ? -base : base) * v(idx);
  }
  return out;
}

Mat pauli_apply_cols(const PauliWord& p, const Mat& M) {
  Mat out(M.rows(), M.cols());
  for (Index j = 0; j < M.cols(); ++j) out.col(j) = pauli_apply(p, Vec(M.col(j)));
  return out;
}

Mat pauli_word_dense(const PauliWord& p) {
  const Index d = Index(1) << p.word.size();
  Mat M = Mat::Zero(d, d);
  Vec basis = Vec::Zero(d);
  // Columns of the dense operator are the images of basis vectors; the apply
  // routine already encodes the permutation and phase pattern.
  for (Index idx = 0; idx < d; ++idx) {
    basis(idx) = 1.0;
    M.col(idx) = pauli_apply(p, basis);
    basis(idx) = 0.0;
  }
  return M;
}

StabilizerCode make_stabilizer_code(std::vector<std::string> generators,
                                    std::vector<std::string> logical_X,
                                    std::vector<std::string> logical_Z) {
  StabilizerCode code;
  if (generators.empty() || logical_X.empty() ||
      logical_X.size() != logical_Z.size())
    throw std::invalid_argument("make_stabilizer_code: bad shapes");
  code.n = int(generators.front().size());
  code.k = int(logical_X.size());
  if (int(generators.size()) != code.n - code.k)
    throw std::invalid_argument("make_stabilizer_code: need n-k generators");
  for (const auto& w : generators) validate_letters(w);
  for (const auto& w : logical_X) validate_letters(w);
  for (const auto& w : logical_Z) validate_letters(w);

  // Exact commutation structure.
  for (std::size_t a = 0; a < generators.size(); ++a)
    for (std::size_t b = a + 1; b < generators.size(); ++b)
      if (pauli_anticommutes(generators[a], generators[b]))
        throw std::invalid_argument("generators do not commute");
  for (int i = 0; i < code.k; ++i) {
    for (const auto& g : generators) {
      if (pauli_anticommutes(logical_X[std::size_t(i)], g) ||
          pauli_anticommutes(logical_Z[std::size_t(i)], g))
        throw std::invalid_argument("logical operator breaks the stabilizer");
    }
    for (int j = 0; j < code.k; ++j) {
      if (pauli_anticommutes(logical_X[std::size_t(i)],
                             logical_X[std::size_t(j)]) ||
          pauli_anticommutes(logical_Z[std::size_t(i)],
                             logical_Z[std::size_t(j)]))
        throw std::invalid_argument("logical operators of like type anticommute");
      const bool anti = pauli_anticommutes(logical_X[std::size_t(i)],
                                           logical_Z[std::size_t(j)]);
      if (anti != (i == j))
        throw std::invalid_argument("logical X/Z pairing violated");
    }
  }

  const Index d = Index(1) << code.n;
  const Index dk = Index(1) << code.k;

  // Project a seed basis vector into the joint +1 eigenspace of every
  // generator and every logical Z; the survivor is the all-zero codeword.
  Vec v0;
  for (Index seed = 0; seed < d; ++seed) {
    Vec v = Vec::Zero(d);
    v(seed) = 1.0;
    for (const auto& lz : logical_Z)
      v = 0.5 * (v + pauli_apply({lz, 0}, v));
    for (const auto& g : generators) v = 0.5 * (v + pauli_apply({g, 0}, v));
    if (v.norm() > 1e-8) {
      v0 = v / v.norm();
      break;
    }
  }
  if (v0.size() == 0)
    throw std::invalid_argument("code space is empty; inconsistent input");
  for (Index i = 0; i < d; ++i) {
    if (std::abs(v0(i)) > 1e-8) {
      v0 *= std::conj(v0(i)) / std::abs(v0(i));  // first big entry real > 0
      break;
    }
  }

  code.U_C = Mat(d, dk);
  for (Index m = 0; m < dk; ++m) {
    Vec w = v0;
    for (int t = 0; t < code.k; ++t)
      if ((m >> (code.k - 1 - t)) & 1)
        w = pauli_apply({logical_X[std::size_t(t)], 0}, w);
    code.U_C.col(m) = w;
  }

  if ((code.U_C.adjoint() * code.U_C - Mat::Identity(dk, dk)).norm() > 1e-10)
    throw std::invalid_argument("encoding is not an isometry");
  for (const auto& g : generators)
    if ((pauli_apply_cols({g, 0}, code.U_C) - code.U_C).norm() > 1e-10)
      throw std::invalid_argument("generator does not stabilize the code");

  code.generators = std::move(generators);
  code.logical_X = std::move(logical_X);
  code.logical_Z = std::move(logical_Z);
  return code;
}

StabilizerCode five_qubit_code() {
  return make_stabilizer_code({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"},
                              {"XXXXX"}, {"ZZZZZ"});
}

StabilizerCode steane_code() {
  return make_stabilizer_code({"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ",
                               "IZZIIZZ", "ZIZIZIZ"},
                              {"XXXXXXX"}, {"ZZZZZZZ"});
}

StabilizerCode shor_code() {
  return make_stabilizer_code(
      {"ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI",
       "IIIIIIIZZ", "XXXXXXIII", "IIIXXXXXX"},
      {"ZIIZIIZII"}, {"XXXIIIIII"});
}

Mat random_code(int n, int k, std::uint64_t seed) {
  if (k >= n) throw std::invalid_argument("random_code: need k < n");
  const Index d = Index(1) << n, dk = Index(1) << k;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat G(d, dk);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < dk; ++j) G(i, j) = cplx(nd(rng), nd(rng));
  const Mat U = orthonormal_basis(G);
  if (U.cols() != dk) throw std::runtime_error("random_code: rank deficiency");
  return U;
}

Mat SyndromeDecomposition::projector(Index q) const {
  return U_Cq[std::size_t(q)] * U_Cq[std::size_t(q)].adjoint();
}

Mat SyndromeDecomposition::transfer(Index q_from, Index q_to) const {
  return U_Cq[std::size_t(q_to)] * U_Cq[std::size_t(q_from)].adjoint();
}

SyndromeDecomposition syndrome_decomposition(const StabilizerCode& code) {
  SyndromeDecomposition sd;
  sd.n = code.n;
  sd.k = code.k;
  const int nk = code.n - code.k;
  const std::size_t nq = std::size_t(1) << nk;

  // Minimum-weight, then lexicographically smallest, word per syndrome.
  std::vector<std::string> raw(nq);
  std::vector<bool> have(nq, false);
  std::size_t found = 0;
  const std::string idword(std::size_t(code.n), 'I');
  raw[0] = idword;
  have[0] = true;
  ++found;
  for (int w = 1; w <= code.n && found < nq; ++w) {
    // All weight-w words, visited in lexicographic order.
    std::vector<std::string> words;
    std::vector<int> pos(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) pos[std::size_t(i)] = i;
    while (true) {
      std::vector<int> letter(std::size_t(w), 0);
      const char letters[3] = {'X', 'Y', 'Z'};
      while (true) {
        std::string s = idword;
        for (int i = 0; i < w; ++i)
          s[std::size_t(pos[std::size_t(i)])] = letters[letter[std::size_t(i)]];
        words.push_back(std::move(s));
        int c = w - 1;
        while (c >= 0 && ++letter[std::size_t(c)] == 3) letter[std::size_t(c--)] = 0;
        if (c < 0) break;
      }
      int c = w - 1;
      while (c >= 0 && pos[std::size_t(c)] == code.n - w + c) --c;
      if (c < 0) break;
      ++pos[std::size_t(c)];
      for (int i = c + 1; i < w; ++i) pos[std::size_t(i)] = pos[std::size_t(i - 1)] + 1;
    }
    std::sort(words.begin(), words.end());
    for (const auto& s : words) {
      const int q = syndrome_of(s, code.generators);
      if (!have[std::size_t(q)]) {
        raw[std::size_t(q)] = s;
        have[std::size_t(q)] = true;
        if (++found == nq) break;
      }
    }
  }
  if (found != nq)
    throw std::invalid_argument("syndrome_decomposition: syndromes missing");
  sd.raw_word = raw;

  // Adjust each word by logical operators so it commutes with all of them;
  // multiplying by logicals leaves the syndrome untouched.
  sd.T.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    PauliWord t{raw[q], 0};
    for (int i = 0; i < code.k; ++i) {
      if (pauli_anticommutes(code.logical_Z[std::size_t(i)], raw[q]))
        t = pauli_mul(t, {code.logical_X[std::size_t(i)], 0});
      if (pauli_anticommutes(code.logical_X[std::size_t(i)], raw[q]))
        t = pauli_mul(t, {code.logical_Z[std::size_t(i)], 0});
    }
    sd.T[q] = t;
  }

  sd.U_Cq.resize(nq);
  for (std::size_t q = 0; q < nq; ++q)
    sd.U_Cq[q] = pauli_apply_cols(sd.T[q], code.U_C);

  const std::size_t np = std::size_t(1) << (2 * code.k);
  sd.A_word.resize(np);
  sd.A.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    PauliWord a{idword, 0};
    for (int t = 0; t < code.k; ++t)
      if ((p >> (2 * code.k - 1 - t)) & 1)
        a = pauli_mul(a, {code.logical_X[std::size_t(t)], 0});
    for (int t = 0; t < code.k; ++t)
      if ((p >> (code.k - 1 - t)) & 1)
        a = pauli_mul(a, {code.logical_Z[std::size_t(t)], 0});
    sd.A_word[p] = a;
    sd.A[p] = pauli_word_dense(a);
  }
  return sd;
}

Mat normalizer_source_action(int k, Index p) {
  auto one_letter = [k](int t, char c) {
    std::string w(std::size_t(k), 'I');
    w[std::size_t(t)] = c;
    return w;
  };
  PauliWord a{std::string(std::size_t(k), 'I'), 0};
  for (int t = 0; t < k; ++t)
    if ((p >> (2 * k - 1 - t)) & 1) a = pauli_mul(a, {one_letter(t, 'X'), 0});
  for (int t = 0; t < k; ++t)
    if ((p >> (k - 1 - t)) & 1) a = pauli_mul(a, {one_letter(t, 'Z'), 0});
  return pauli_word_dense(a);
}

RMat pauli_error_coefficients(const StabilizerCode& code,
                              const SyndromeDecomposition& sd,
                              const PauliChannelSpec& spec) {
  if (spec.n != code.n)
    throw std::invalid_argument("pauli_error_coefficients: size mismatch");
  const std::size_t nq = std::size_t(1) << (code.n - code.k);
  const std::size_t np = std::size_t(1) << (2 * code.k);
  const double dk = double(Index(1) << code.k);
  RMat tab = RMat::Zero(Index(np), Index(nq));
  for (const PauliTerm& term : spec.terms) {
    const int q = syndrome_of(term.word, code.generators);
    std::size_t p = 0;
    for (int t = 0; t < code.k; ++t) {
      if (pauli_anticommutes(term.word, code.logical_Z[std::size_t(t)]))
        p |= std::size_t(1) << (2 * code.k - 1 - t);
      if (pauli_anticommutes(term.word, code.logical_X[std::size_t(t)]))
        p |= std::size_t(1) << (code.k - 1 - t);
    }
    const Mat EU = term.amp * pauli_apply_cols({term.word, 0}, code.U_C);
    const Mat F =
        pauli_apply_cols(pauli_mul(sd.A_word[p], sd.T[std::size_t(q)]), code.U_C);
    const cplx a = hs_inner(F, EU) / dk;
    if ((EU - a * F).norm() > 1e-10)
      throw std::runtime_error(
          "pauli_error_coefficients: term failed to classify");
    tab(Index(p), q) += std::norm(a);
  }
  return tab;
}

}  // namespace qer
