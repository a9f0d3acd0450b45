#include "xyzbethe/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "xyzbethe/elliptic.hpp"

namespace xyzbethe {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  cplx run() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    const cplx v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail("value is not finite");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw ExpressionError("cannot parse '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool starts_primary() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  cplx sum() {
    cplx v = product();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return v;
      ++pos_;
      const cplx r = product();
      v = c == '+' ? v + r : v - r;
    }
  }

  cplx product() {
    cplx v = juxtaposed();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return v;
      ++pos_;
      const cplx r = juxtaposed();
      if (c == '/' && r == cplx(0.0, 0.0)) fail("division by zero");
      v = c == '*' ? v * r : v / r;
    }
  }

  cplx juxtaposed() {
    cplx v = unary();
    while (starts_primary()) v *= power();
    return v;
  }

  cplx unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  cplx power() {
    const cplx base = primary();
    if (peek() != '^') return base;
    ++pos_;
    const cplx ex = unary();
    if (ex.imag() == 0.0 && ex.real() == std::round(ex.real()) && std::abs(ex.real()) <= 64) {
      // Exact repeated multiplication keeps i^2 = -1 clean.
      const int n = static_cast<int>(ex.real());
      cplx r = 1.0;
      for (int k = 0; k < std::abs(n); ++k) r *= base;
      return n < 0 ? 1.0 / r : r;
    }
    return std::pow(base, ex);
  }

  cplx primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      const cplx v = sum();
      if (peek() != ')') fail("missing ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t b = pos_;
      // Identifiers are single constants; "pi" is the only two-letter one.
      if (s_.substr(pos_, 2) == "pi") {
        pos_ += 2;
        return kPi;
      }
      ++pos_;
      if (c == 'e') return std::exp(1.0);
      if (c == 'i') return cplx(0.0, 1.0);
      pos_ = b;
      fail("unknown symbol");
    }
    fail(c == '\0' ? "unexpected end" : "unexpected '" + std::string(1, c) + "'");
  }

  cplx number() {
    const std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    // An exponent only when digits follow, so "5e" stays 5 times e.
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
        pos_ = k;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok(s_.substr(b, pos_ - b));
    if (tok == ".") fail("lone '.'");
    return std::strtod(tok.c_str(), nullptr);
  }
};

}  // namespace

cplx parse_complex(std::string_view text) { return Parser(text).run(); }

}  // namespace xyzbethe
