#include "eulerlab/modular.hpp"

#include <string>

#include "eulerlab/errors.hpp"

namespace eulerlab {

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

i64 ipow(i64 p, int k) {
  if (k < 0) throw DomainError("negative exponent in ipow");
  constexpr i64 kCap = i64{1} << 62;
  i64 r = 1;
  for (int i = 0; i < k; ++i) {
    if (r > kCap / p)
      throw PrecisionError(std::to_string(p) + "^" + std::to_string(k) +
                           " exceeds the 2^62 residue range");
    r *= p;
  }
  return r;
}

int vp(i64 x, i64 p) {
  if (x == 0) throw DomainError("valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

Modulus::Modulus(i64 p, int M) : p_(p), M_(M) {
  if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime");
  if (M < 1) throw PrecisionError("precision must be at least 1");
  q_ = ipow(p, M);
}

i64 Modulus::pow(i64 a, u64 e) const {
  i64 r = 1 % q_, b = red(a);
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

int Modulus::val(i64 a) const {
  a = red(a);
  if (a == 0) return M_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

i64 Modulus::inv(i64 a) const {
  a = red(a);
  if (a % p_ == 0) throw DomainError("inverse of a non-unit residue");
  i64 old_r = a, r = q_, old_s = 1, s = 0;
  while (r != 0) {
    i64 qt = old_r / r;
    i64 t = old_r - qt * r;
    old_r = r;
    r = t;
    t = old_s - qt * s;
    old_s = s;
    s = t;
  }
  return red(old_s);
}

}  // namespace eulerlab
