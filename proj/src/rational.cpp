#include "fdp/rational.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fdp {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 floor_div128(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational value out of 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Rational r;
  r.num_ = narrow(num);
  r.den_ = narrow(den);
  return r;
}

std::int64_t Rational::floor() const {
  return narrow(floor_div128(num_, den_));
}

std::int64_t Rational::ceil() const {
  return narrow(-floor_div128(-static_cast<__int128>(num_), den_));
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw std::invalid_argument("empty number in '" + std::string(text) + "'");
    std::size_t pos = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      pos = 1;
    }
    if (pos == s.size()) throw std::invalid_argument("bad number '" + std::string(text) + "'");
    __int128 v = 0;
    for (; pos < s.size(); ++pos) {
      if (s[pos] < '0' || s[pos] > '9') {
        throw std::invalid_argument("bad number '" + std::string(text) + "'");
      }
      v = v * 10 + (s[pos] - '0');
      narrow(v);
    }
    return narrow(neg ? -v : v);
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    std::int64_t den = 1;
    for (char c : frac) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad number '" + std::string(text) + "'");
      digits.push_back(c);
      if (den > std::numeric_limits<std::int64_t>::max() / 10) {
        throw std::overflow_error("too many decimals in '" + std::string(text) + "'");
      }
      den *= 10;
    }
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    return Rational(parse_int(digits), den);
  }
  return Rational(parse_int(text));
}

Rational& Rational::operator+=(const Rational& o) {
  *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = from_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                    static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = from_wide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  *this = from_wide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::int64_t ceil_div(const Rational& a, const Rational& b) {
  if (b <= Rational(0)) throw std::domain_error("ceil_div by non-positive rational");
  return (a / b).ceil();
}

std::int64_t floor_div(const Rational& a, const Rational& b) {
  if (b <= Rational(0)) throw std::domain_error("floor_div by non-positive rational");
  return (a / b).floor();
}

}  // namespace fdp
