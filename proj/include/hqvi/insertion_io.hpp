#pragma once

// Text form of insertions:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' integer)?
//   atom   := integer | 'c' integer '[' integer ']' | 'X' '[' integer ']'
//
// Whitespace is ignored. "1" is the empty product.

#include <cctype>
#include <string>

#include "hqvi/core.hpp"

namespace hqvi {

namespace detail {

class InsertionParser {
public:
  explicit InsertionParser(const std::string& text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) src_ += c;
  }

  Insertion parse() {
    if (src_.empty()) fail("empty insertion");
    Insertion out = Insertion::zero();
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
    }
    while (true) {
      InsertionTerm t = term();
      if (negative) t.coefficient = -t.coefficient;
      out.add_term(std::move(t));
      if (pos_ == src_.size()) break;
      const char op = src_[pos_++];
      if (op == '+') negative = false;
      else if (op == '-') negative = true;
      else fail(std::string("unexpected '") + op + "'");
    }
    return out;
  }

private:
  [[nodiscard]] char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::InsertionParse, why + " at position " + std::to_string(pos_));
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  long long integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (src_[pos_++] - '0');
      if (v > 1'000'000'000LL) fail("integer too large");
    }
    return v;
  }

  InsertionTerm term() {
    InsertionTerm t;
    while (true) {
      factor(t);
      if (peek() != '*') break;
      ++pos_;
    }
    return t;
  }

  void factor(InsertionTerm& t) {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = integer();
      if (peek() == '^') {
        ++pos_;
        const long long e = integer();
        long long p = 1;
        for (long long i = 0; i < e; ++i) p *= v;
        v = p;
      }
      t.coefficient *= v;
      return;
    }
    Primitive p;
    if (c == 'c') {
      ++pos_;
      const long long i = integer();
      expect('[');
      const long long j = integer();
      expect(']');
      p = Primitive::elem_sym(static_cast<int>(i), static_cast<int>(j));
    } else if (c == 'X') {
      ++pos_;
      expect('[');
      const long long l = integer();
      expect(']');
      p = Primitive::euler_cross(static_cast<int>(l));
    } else {
      fail(c == '\0' ? "unexpected end of input" : std::string("unexpected '") + c + "'");
    }
    long long power = 1;
    if (peek() == '^') {
      ++pos_;
      power = integer();
      if (power > 10000) fail("exponent too large");
    }
    for (long long i = 0; i < power; ++i) t.primitives.push_back(p);
  }

  std::string src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Insertion parse_insertion(const std::string& text) { return detail::InsertionParser(text).parse(); }

}  // namespace hqvi
