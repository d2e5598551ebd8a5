#pragma once

// Pauli tensor-product Hamiltonians: 2x2 Pauli matrices, Kronecker products of
// labelled terms, a parser for the `<real> * <labels>` sum language, and the
// five-coupling two-qubit model.
//
// Basis ordering: the leftmost label is the outermost Kronecker factor, so
// for two qubits index = 2*q0 + q1 and (a,b,c,d) <-> (|00>,|01>,|10>,|11>).

#include "cpn/core.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cpn {

enum class PauliLabel : unsigned char { I, X, Y, Z };

char to_char(PauliLabel label) noexcept;
/// Throws ValidationError for anything other than I, X, Y, Z.
PauliLabel label_from_char(char c);

struct PauliTerm {
  double coefficient = 0.0;
  std::vector<PauliLabel> labels;

  std::size_t qubits() const noexcept { return labels.size(); }
  bool operator==(const PauliTerm&) const = default;
};

/// Syntax or structure error in Pauli-string input; `position` is the
/// zero-based character offset where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline constexpr std::size_t kDefaultMaxQubits = 12;

template <typename Real = double>
HermitianOperator<Real> pauli_matrix(PauliLabel label) {
  using C = Complex<Real>;
  CMatrix<Real> m(2, 2);
  switch (label) {
    case PauliLabel::I: m << C(1), C(0), C(0), C(1); break;
    case PauliLabel::X: m << C(0), C(1), C(1), C(0); break;
    case PauliLabel::Y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case PauliLabel::Z: m << C(1), C(0), C(0), C(-1); break;
  }
  return HermitianOperator<Real>(m);
}

namespace detail {

template <typename Real>
CMatrix<Real> kronecker(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline void check_term(const PauliTerm& term, std::size_t max_qubits) {
  if (term.labels.empty()) {
    throw ValidationError("PauliTerm: label list is empty");
  }
  if (!std::isfinite(term.coefficient)) {
    throw ValidationError("PauliTerm: coefficient is not finite");
  }
  if (term.labels.size() > max_qubits) {
    throw DimensionError("PauliTerm: " + std::to_string(term.labels.size()) +
                         " qubits exceeds the cap of " + std::to_string(max_qubits));
  }
}

}  // namespace detail

/// coefficient * (P_0 (x) P_1 (x) ... ), dimension 2^n.
template <typename Real = double>
HermitianOperator<Real> tensor_term(const PauliTerm& term,
                                    std::size_t max_qubits = kDefaultMaxQubits) {
  detail::check_term(term, max_qubits);
  CMatrix<Real> acc = pauli_matrix<Real>(term.labels.front()).matrix();
  for (std::size_t q = 1; q < term.labels.size(); ++q) {
    acc = detail::kronecker<Real>(acc, pauli_matrix<Real>(term.labels[q]).matrix());
  }
  return HermitianOperator<Real>(acc * Real(term.coefficient));
}

/// Sum of tensor terms; all terms must act on the same number of qubits.
template <typename Real = double>
HermitianOperator<Real> build_hamiltonian(const std::vector<PauliTerm>& terms,
                                          std::size_t max_qubits = kDefaultMaxQubits) {
  if (terms.empty()) throw ValidationError("build_hamiltonian: no terms");
  const std::size_t n = terms.front().qubits();
  detail::check_term(terms.front(), max_qubits);
  const Index dim = Index(1) << n;
  CMatrix<Real> sum = CMatrix<Real>::Zero(dim, dim);
  for (const auto& t : terms) {
    if (t.qubits() != n) {
      throw DimensionError("build_hamiltonian: terms act on different qubit counts");
    }
    sum += tensor_term<Real>(t, max_qubits).matrix();
  }
  return HermitianOperator<Real>(sum);
}

/// Parses e.g. "1.0*ZI + 0.5*XY - 2*YY". Whitespace is ignored.
std::vector<PauliTerm> parse_hamiltonian(std::string_view text);

/// Inverse of parse_hamiltonian; coefficients use round-trip precision.
std::string format_hamiltonian(const std::vector<PauliTerm>& terms);

/// Couplings of the two-qubit model
///   C1 Z(x)I + C2 X(x)I + C3 Y(x)I + C4 Y(x)Y + C5 X(x)Y.
/// C4 and C5 are the entangling terms.
struct TwoQubitCouplings {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
};

std::vector<PauliTerm> two_qubit_terms(const TwoQubitCouplings& c);

template <typename Real = double>
HermitianOperator<Real> build_two_qubit_hamiltonian(const TwoQubitCouplings& c) {
  for (double v : {c.c1, c.c2, c.c3, c.c4, c.c5}) {
    if (!std::isfinite(v)) {
      throw ValidationError("build_two_qubit_hamiltonian: coupling is not finite");
    }
  }
  return build_hamiltonian<Real>(two_qubit_terms(c));
}

}  // namespace cpn
