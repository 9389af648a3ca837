#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace batchsim {

__extension__ using int128 = __int128;

/// Exact non-negative-denominator fraction. Kept in lowest terms so that
/// defaulted equality is value equality.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// Fixed 4-decimal rendering used in every CSV output.
  std::string to_fixed4() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const int128 lhs = static_cast<int128>(a.num_) * b.den_;
    const int128 rhs = static_cast<int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace batchsim
