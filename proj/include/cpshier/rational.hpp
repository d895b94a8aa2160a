// Copyright 2026 The cps-hier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPSHIER_RATIONAL_HPP_
#define CPSHIER_RATIONAL_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "cpshier/error.hpp"

namespace cpshier {

using BigInt = boost::multiprecision::cpp_int;

// Exact fraction, kept in lowest terms with a positive denominator.
// Every probability in the library is carried by this type; the chain rule
// and all hierarchy equalities are decided with exact arithmetic, so there
// is no floating point anywhere on a decision path.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT(runtime/explicit)

  Rational(BigInt num, BigInt den) {
    if (den == 0) fail(Errc::bad_rational, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    v_ = boost::multiprecision::cpp_rational(std::move(num), std::move(den));
  }

  Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_ == 0; }
  bool is_negative() const { return v_ < 0; }

  // Canonical form: "p/q", or just "p" when q = 1.
  std::string str() const {
    std::string s = numerator().str();
    if (BigInt d = denominator(); d != 1) {
      s += '/';
      s += d.str();
    }
    return s;
  }

  // Accepts "p" and "p/q" with an optional leading minus; rejects q = 0.
  static Rational parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
      return Rational(parse_int(text, text), BigInt(1));
    return Rational(parse_int(text.substr(0, slash), text),
                    parse_int(text.substr(slash + 1), text));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.v_ + b.v_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.v_ - b.v_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.v_ * b.v_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(Errc::division_by_zero, "rational division by zero");
    return Rational(a.v_ / b.v_);
  }
  Rational operator-() const { return Rational(-v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return a.v_ != b.v_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return a.v_ <= b.v_;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return a.v_ > b.v_;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return a.v_ >= b.v_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  explicit Rational(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}

  static BigInt parse_int(std::string_view digits, std::string_view whole) {
    bool negative = !digits.empty() && digits.front() == '-';
    std::string_view body = negative ? digits.substr(1) : digits;
    if (body.empty())
      fail(Errc::bad_rational, "malformed rational '" + std::string(whole) + "'");
    for (char c : body)
      if (c < '0' || c > '9')
        fail(Errc::bad_rational,
             "malformed rational '" + std::string(whole) + "'");
    BigInt value{std::string(body)};
    return negative ? BigInt(-value) : value;
  }

  boost::multiprecision::cpp_rational v_;
};

}  // namespace cpshier

#endif  // CPSHIER_RATIONAL_HPP_
