#include "cubeadv/rational.hpp"

#include <cctype>
#include <memory>

#include <mpfr.h>

#include "cubeadv/errors.hpp"

namespace cubeadv {

Rat::Rat(const BigInt& num, const BigInt& den) : value_(num, den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  value_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw InvalidArgument("division by zero");
  value_ /= o.value_;
  return *this;
}

std::string Rat::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
  if (!is_integer_text(text)) {
    throw InvalidArgument("not a decimal integer: '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

Rat Rat::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den <= 0) throw InvalidArgument("rational needs a positive denominator: '" + std::string(text) + "'");
  return Rat(num, den);
}

std::string Rat::to_decimal(int digits) const {
  // Enough working precision that the rounding to `digits` is faithful.
  const mpfr_prec_t prec = 64 + 4 * static_cast<mpfr_prec_t>(digits);
  mpfr_t x;
  mpfr_init2(x, prec);
  mpfr_set_q(x, value_.get_mpq_t(), MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, x);
  std::string out(buf);
  mpfr_free_str(buf);
  mpfr_clear(x);
  return out;
}

Rat pow(const Rat& base, unsigned long exponent) {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), base.num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.den().get_mpz_t(), exponent);
  return Rat(num, den);
}

BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

BigInt floor(const Rat& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return out;
}

BigInt ceil(const Rat& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return out;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

}  // namespace cubeadv
