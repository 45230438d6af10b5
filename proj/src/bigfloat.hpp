#pragma once

#include <cstdlib>
#include <string>

#include <mpfr.h>

namespace cubeadv::detail {

/// Owning mpfr_t. Move-only.
class BigFloat {
public:
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~BigFloat() {
    if (owned_) mpfr_clear(v_);
  }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

private:
  mpfr_t v_;
  bool owned_ = true;
};

/// Working precision for interval logarithms; CUBEADV_PRECISION_BITS overrides.
inline mpfr_prec_t precision_bits(mpfr_prec_t fallback = 128) {
  if (const char* env = std::getenv("CUBEADV_PRECISION_BITS")) {
    try {
      const long bits = std::stol(env);
      if (bits >= MPFR_PREC_MIN && bits <= 1 << 20) return static_cast<mpfr_prec_t>(bits);
    } catch (...) {
    }
  }
  return fallback;
}

}  // namespace cubeadv::detail
