#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fdp {

/// Exact rational number with a positive denominator, always in lowest terms.
///
/// Times and speed factors are rationals; edge lengths stay integral. All
/// arithmetic goes through 128-bit intermediates and throws
/// std::overflow_error when the reduced result no longer fits in 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }

  [[nodiscard]] std::int64_t floor() const;
  [[nodiscard]] std::int64_t ceil() const;
  [[nodiscard]] double to_double() const;

  /// "7" for integers, "7/2" otherwise.
  [[nodiscard]] std::string str() const;
  /// Accepts "7", "-3", "7/2" and decimals such as "0.25".
  static Rational parse(std::string_view text);

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// ceil(a / b) and floor(a / b) for b > 0.
std::int64_t ceil_div(const Rational& a, const Rational& b);
std::int64_t floor_div(const Rational& a, const Rational& b);

}  // namespace fdp
