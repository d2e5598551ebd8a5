#include "cpn/pauli.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace cpn {

char to_char(PauliLabel label) noexcept {
  switch (label) {
    case PauliLabel::I: return 'I';
    case PauliLabel::X: return 'X';
    case PauliLabel::Y: return 'Y';
    case PauliLabel::Z: return 'Z';
  }
  return '?';
}

PauliLabel label_from_char(char c) {
  switch (c) {
    case 'I': return PauliLabel::I;
    case 'X': return PauliLabel::X;
    case 'Y': return PauliLabel::Y;
    case 'Z': return PauliLabel::Z;
    default: break;
  }
  throw ValidationError(std::string("unknown Pauli label '") + c + "'");
}

namespace {

// Grammar (whitespace-insensitive):
//   sum    := ['+'|'-'] term { ('+'|'-') term }
//   term   := number '*' labels
//   labels := [IXYZ]+
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<PauliTerm> parse() {
    std::vector<PauliTerm> terms;
    skip_ws();
    if (at_end()) throw ParseError("empty Hamiltonian", pos_);

    double sign = read_sign(/*required=*/false);
    terms.push_back(term(sign));
    while (true) {
      skip_ws();
      if (at_end()) break;
      sign = read_sign(/*required=*/true);
      terms.push_back(term(sign));
    }
    return terms;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  double read_sign(bool required) {
    skip_ws();
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      return text_[pos_++] == '-' ? -1.0 : 1.0;
    }
    if (required) throw ParseError("expected '+' or '-' between terms", pos_);
    return 1.0;
  }

  PauliTerm term(double sign) {
    PauliTerm t;
    skip_ws();
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) {
      throw ParseError("expected a real coefficient", start);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    if (!std::isfinite(value)) throw ParseError("coefficient is not finite", start);
    t.coefficient = sign * value;

    skip_ws();
    if (at_end() || peek() != '*') throw ParseError("expected '*'", pos_);
    ++pos_;
    skip_ws();

    const std::size_t label_start = pos_;
    while (!at_end()) {
      const char c = peek();
      if (c == 'I' || c == 'X' || c == 'Y' || c == 'Z') {
        t.labels.push_back(label_from_char(c));
        ++pos_;
      } else {
        break;
      }
    }
    if (t.labels.empty()) {
      throw ParseError("expected Pauli labels over {I,X,Y,Z}", label_start);
    }
    if (!labels_seen_) {
      first_width_ = t.labels.size();
      labels_seen_ = true;
    } else if (t.labels.size() != first_width_) {
      throw ParseError("mixed-length labels (" + std::to_string(t.labels.size()) +
                           " vs " + std::to_string(first_width_) + ")",
                       label_start);
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t first_width_ = 0;
  bool labels_seen_ = false;
};

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::vector<PauliTerm> parse_hamiltonian(std::string_view text) {
  return Parser(text).parse();
}

std::string format_hamiltonian(const std::vector<PauliTerm>& terms) {
  std::ostringstream out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const bool negative = std::signbit(t.coefficient);
    if (i == 0) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    out << format_real(std::abs(t.coefficient)) << "*";
    for (auto l : t.labels) out << to_char(l);
  }
  return out.str();
}

std::vector<PauliTerm> two_qubit_terms(const TwoQubitCouplings& c) {
  using L = PauliLabel;
  return {
      {c.c1, {L::Z, L::I}},
      {c.c2, {L::X, L::I}},
      {c.c3, {L::Y, L::I}},
      {c.c4, {L::Y, L::Y}},
      {c.c5, {L::X, L::Y}},
  };
}

}  // namespace cpn
