#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cubeadv {

using BigInt = mpz_class;

/// Exact rational number, always held in canonical form (den > 0, gcd = 1).
///
/// Thin value wrapper over GMP's mpq_class. Every constructor canonicalizes,
/// so structural equality is numeric equality.
class Rat {
public:
  Rat() = default;
  Rat(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(const BigInt& v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(const BigInt& num, const BigInt& den);
  explicit Rat(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }

  Rat& operator+=(const Rat& o) { value_ += o.value_; return *this; }
  Rat& operator-=(const Rat& o) { value_ -= o.value_; return *this; }
  Rat& operator*=(const Rat& o) { value_ *= o.value_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.value_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "p/q", with "0/1" for zero. Integers also carry the "/1".
  std::string to_string() const;
  /// Accepts "p/q" or a bare integer; canonicalizes. Throws InvalidArgument.
  static Rat parse(std::string_view text);

  /// Decimal rendering with `digits` significant digits. Display only.
  std::string to_decimal(int digits = 12) const;

private:
  mpq_class value_;
};

/// Exact power with a non-negative integer exponent.
Rat pow(const Rat& base, unsigned long exponent);
BigInt pow(const BigInt& base, unsigned long exponent);

BigInt floor(const Rat& r);
BigInt ceil(const Rat& r);

std::string to_string(const BigInt& v);
/// Decimal integer; throws InvalidArgument on junk.
BigInt parse_bigint(std::string_view text);

}  // namespace cubeadv
