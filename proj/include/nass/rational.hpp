#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace nass {

/// Exact fraction with a positive denominator, always stored in lowest terms.
/// Ordering goes through 128-bit cross-multiplication, so comparisons never
/// depend on floating-point precision.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "n/d"; integers print as "n/1" so the field shape never changes.
  std::string to_string() const;

  /// Accepts "n/d", integers and plain decimals ("0.6" -> 3/5) without going
  /// through binary floating point.
  static Rational parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace nass
