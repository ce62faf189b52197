#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hhcare {

/// Exact fraction over 64-bit integers, always kept in lowest terms with a
/// positive denominator. Intermediate products are formed in 128 bits; a
/// result that does not fit back into 64 bits throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit from integers
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  /// Accepts integers ("7", "-2"), plain decimals ("3.25") and fractions ("5/4").
  /// Exponent notation is rejected.
  static Rational parse(std::string_view text);

  /// Terminating fractions print as plain decimals ("3.25", "7"); anything
  /// else prints as "num/den". parse(to_string()) is the identity.
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  static __int128 gcd_wide(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 g = gcd_wide(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr __int128 lo = INT64_MIN;
    constexpr __int128 hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  auto parse_int = [&](std::string_view digits, bool allow_sign) -> std::int64_t {
    if (digits.empty()) fail();
    if (!allow_sign && (digits.front() == '-' || digits.front() == '+')) fail();
    if (digits.front() == '+') digits.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) fail();
    return v;
  };

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(text.substr(slash + 1), false);
    if (den == 0) fail();
    return Rational(parse_int(text.substr(0, slash), true), den);
  }

  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text, true));

  std::string_view whole = text.substr(0, dot);
  const std::string_view frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 18) fail();
  bool negative = false;
  if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
    negative = whole.front() == '-';
    whole.remove_prefix(1);
  }
  const std::int64_t int_part = whole.empty() ? 0 : parse_int(whole, false);
  const std::int64_t frac_part = parse_int(frac, false);
  std::int64_t scale = 1;
  for (std::size_t d = 0; d < frac.size(); ++d) scale *= 10;
  Rational r = Rational(int_part) + Rational(frac_part, scale);
  return negative ? -r : r;
}

inline std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);

  std::int64_t rest = den_;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  const int digits = std::max(twos, fives);
  if (rest != 1 || digits > 18) return std::to_string(num_) + "/" + std::to_string(den_);

  __int128 scale = 1;
  for (int d = 0; d < digits; ++d) scale *= 10;
  const __int128 magnitude = num_ < 0 ? -static_cast<__int128>(num_) : num_;
  const __int128 scaled = magnitude * (scale / den_);
  const auto int_part = static_cast<std::uint64_t>(scaled / scale);
  auto frac_part = static_cast<std::uint64_t>(scaled % scale);

  std::string frac(static_cast<std::size_t>(digits), '0');
  for (int d = digits - 1; d >= 0; --d) {
    frac[static_cast<std::size_t>(d)] = static_cast<char>('0' + frac_part % 10);
    frac_part /= 10;
  }
  return (num_ < 0 ? "-" : "") + std::to_string(int_part) + "." + frac;
}

}  // namespace hhcare
