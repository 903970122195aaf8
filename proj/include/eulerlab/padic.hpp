#pragma once
// Truncated p-adic numbers with absolute-precision bookkeeping.
//
// A Padic stores p^val * unit with unit known modulo p^(abs_prec - val).
// Valuations may be negative. Zero at precision N means "divisible by
// p^N", and is stored with val == abs_prec.
#include <string>

#include "eulerlab/modular.hpp"
#include "eulerlab/rational.hpp"

namespace eulerlab {

// Stand-in precision for values known exactly (used for exact zeros).
inline constexpr int kExactPrec = 1 << 20;

class Padic {
 public:
  Padic() = default;

  static Padic zero(i64 p, int abs_prec);
  static Padic from_int(i64 p, i64 x, int abs_prec);
  static Padic from_bigint(i64 p, const BigInt& x, int abs_prec);
  static Padic from_rational(i64 p, const Rational& x, int abs_prec);
  // p^val * unit, unit taken modulo p^(abs_prec - val).
  static Padic from_parts(i64 p, int val, i64 unit, int abs_prec);

  i64 p() const { return p_; }
  int abs_prec() const { return N_; }
  // Valuation, equal to abs_prec() when the value is zero at precision.
  int val() const { return v_; }
  int rel_prec() const { return N_ - v_; }
  bool is_zero() const { return v_ >= N_; }
  i64 unit() const { return u_; }
  // The value modulo p^k for 0 <= k <= abs_prec; needs val >= 0.
  i64 residue(int k) const;
  // Canonical representative u * p^v with 0 <= u < p^rel.
  Rational to_rational() const;
  // Integer digits string, or "num/den" when the valuation is negative.
  std::string str() const;

  Padic operator-() const;
  Padic operator+(const Padic& o) const;
  Padic operator-(const Padic& o) const;
  Padic operator*(const Padic& o) const;
  Padic operator/(const Padic& o) const;
  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }

  Padic inverse() const;
  Padic pow(long e) const;
  // Multiplication by p^k, exact (precision shifts with the value).
  Padic shift(int k) const;
  // Exact product with an integer.
  Padic mul_int(i64 n) const;
  // Forget digits beyond p^N.
  Padic with_prec(int N) const;

  // True when the difference is zero at the common precision.
  bool eq(const Padic& o) const { return (*this - o).is_zero(); }

 private:
  Padic(i64 p, int v, i64 u, int N) : p_(p), N_(N), v_(v), u_(u) {}
  void check_same(const Padic& o) const;

  i64 p_ = 0;
  int N_ = 0;
  int v_ = 0;
  i64 u_ = 0;
};

// p^k with a per-thread table; PrecisionError above 2^62.
i64 ppow(i64 p, int k);
i64 inv_mod(i64 a, i64 m);

// Root of X^2 - a_p X + p of valuation 0. NotOrdinary when p | a_p.
Padic hensel_unit_root(i64 a_p, i64 p, int M);

// log_p on 1 + pZ_p. DomainError if u is not congruent to 1 mod p.
// The result's abs_prec is at most M and accounts for division by k.
Padic log_p(const Padic& u, int M);

// Iwasawa branch for arbitrary units: log_p(u^(p-1)) / (p-1).
Padic iwasawa_log(const Padic& u, int M);

// Teichmuller representative omega(a). DomainError if p | a.
Padic teichmuller(i64 a, i64 p, int M);

}  // namespace eulerlab
