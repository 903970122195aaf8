#include "eulerlab/padic.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "eulerlab/errors.hpp"

namespace eulerlab {

i64 ppow(i64 p, int k) {
  thread_local i64 last_p = 0;
  thread_local std::array<i64, 64> table{};
  thread_local int limit = 0;
  if (p != last_p) {
    constexpr i64 kCap = i64{1} << 62;
    table[0] = 1;
    limit = 0;
    while (limit + 1 < 64 && table[limit] <= kCap / p) {
      table[limit + 1] = table[limit] * p;
      ++limit;
    }
    last_p = p;
  }
  if (k < 0) throw DomainError("negative exponent");
  if (k > limit)
    throw PrecisionError("relative precision " + std::to_string(k) +
                         " exceeds the 2^62 residue range for p=" + std::to_string(p));
  return table[k];
}

i64 inv_mod(i64 a, i64 m) {
  a %= m;
  if (a < 0) a += m;
  i64 old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    i64 qt = old_r / r;
    i64 t = old_r - qt * r;
    old_r = r;
    r = t;
    t = old_s - qt * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw DomainError("inverse of a non-unit");
  old_s %= m;
  return old_s < 0 ? old_s + m : old_s;
}

namespace {

i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<i128>(a) * b) % m);
}

Padic make(i64 p, int v, i64 s, int N) { return Padic::from_parts(p, v, s, N); }

}  // namespace

Padic Padic::zero(i64 p, int abs_prec) { return Padic(p, abs_prec, 0, abs_prec); }

Padic Padic::from_parts(i64 p, int v, i64 s, int N) {
  if (N - v <= 0) return zero(p, N);
  i64 m = ppow(p, N - v);
  s %= m;
  if (s < 0) s += m;
  if (s == 0) return zero(p, N);
  while (s % p == 0) {
    s /= p;
    ++v;
  }
  return Padic(p, v, s % ppow(p, N - v), N);
}

Padic Padic::from_int(i64 p, i64 x, int abs_prec) {
  return from_bigint(p, BigInt(x), abs_prec);
}

Padic Padic::from_bigint(i64 p, const BigInt& x, int abs_prec) {
  if (x == 0) return zero(p, abs_prec);
  BigInt y = x;
  int v = 0;
  while (y % p == 0 && v < abs_prec) {
    y /= p;
    ++v;
  }
  if (v >= abs_prec) return zero(p, abs_prec);
  i64 m = ppow(p, abs_prec - v);
  BigInt r = y % m;
  if (r < 0) r += m;
  return Padic(p, v, static_cast<i64>(r), abs_prec);
}

Padic Padic::from_rational(i64 p, const Rational& x, int abs_prec) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  if (num == 0) return zero(p, abs_prec);
  int vn = 0, vd = 0;
  while (num % p == 0) {
    num /= p;
    ++vn;
  }
  while (den % p == 0) {
    den /= p;
    ++vd;
  }
  int v = vn - vd;
  if (v >= abs_prec) return zero(p, abs_prec);
  i64 m = ppow(p, abs_prec - v);
  BigInt a = num % m;
  if (a < 0) a += m;
  BigInt b = den % m;
  if (b < 0) b += m;
  i64 u = mulmod(static_cast<i64>(a), inv_mod(static_cast<i64>(b), m), m);
  return Padic(p, v, u, abs_prec);
}


i64 Padic::residue(int k) const {
  if (k > N_ || k < 0) throw PrecisionError("residue requested beyond precision");
  if (is_zero()) return 0;
  if (v_ < 0) throw DomainError("residue of a non-integral p-adic number");
  if (v_ >= k) return 0;
  i64 m = ppow(p_, k);
  return mulmod(u_ % m, ppow(p_, v_), m);
}

Rational Padic::to_rational() const {
  if (is_zero()) return Rational(0);
  BigInt pv = boost::multiprecision::pow(BigInt(p_), static_cast<unsigned>(std::abs(v_)));
  if (v_ >= 0) return Rational(BigInt(u_) * pv);
  return Rational(BigInt(u_), pv);
}

std::string Padic::str() const { return format_rational(to_rational()); }

void Padic::check_same(const Padic& o) const {
  if (p_ != o.p_) throw DomainError("mixing p-adic numbers for different primes");
}

Padic Padic::operator-() const {
  if (is_zero()) return *this;
  i64 m = ppow(p_, N_ - v_);
  return Padic(p_, v_, u_ == 0 ? 0 : m - u_, N_);
}

Padic Padic::operator+(const Padic& o) const {
  check_same(o);
  int N = std::min(N_, o.N_);
  int v0 = std::min({v_, o.v_, N});
  int rel = N - v0;
  if (rel <= 0) return zero(p_, N);
  i64 m = ppow(p_, rel);
  auto term = [&](const Padic& x) -> i64 {
    if (x.is_zero()) return 0;
    int sh = x.v_ - v0;
    if (sh >= rel) return 0;
    return mulmod(x.u_ % m, ppow(p_, sh), m);
  };
  i64 s = term(*this) + term(o);
  if (s >= m) s -= m;
  return make(p_, v0, s, N);
}

Padic Padic::operator-(const Padic& o) const { return *this + (-o); }

Padic Padic::operator*(const Padic& o) const {
  check_same(o);
  int v = v_ + o.v_;
  int N = std::min(N_ + o.v_, o.N_ + v_);
  if (is_zero() || o.is_zero() || v >= N) return zero(p_, N);
  i64 m = ppow(p_, N - v);
  return Padic(p_, v, mulmod(u_ % m, o.u_ % m, m), N);
}

Padic Padic::inverse() const {
  if (is_zero()) throw DomainError("division by a p-adic zero");
  i64 m = ppow(p_, N_ - v_);
  return Padic(p_, -v_, inv_mod(u_, m), N_ - 2 * v_);
}

Padic Padic::operator/(const Padic& o) const {
  check_same(o);
  if (o.is_zero()) throw DomainError("division by a p-adic zero");
  if (is_zero()) return zero(p_, N_ - o.v_);
  int v = v_ - o.v_;
  int rel = std::min(N_ - v_, o.N_ - o.v_);
  i64 m = ppow(p_, rel);
  return Padic(p_, v, mulmod(u_ % m, inv_mod(o.u_ % m, m), m), v + rel);
}

Padic Padic::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Padic r = from_int(p_, 1, std::max(1, N_ - v_));
  Padic b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Padic Padic::shift(int k) const {
  if (is_zero()) return zero(p_, N_ + k);
  return Padic(p_, v_ + k, u_, N_ + k);
}

Padic Padic::mul_int(i64 n) const {
  if (n == 0) return zero(p_, kExactPrec);
  int t = 0;
  while (n % p_ == 0) {
    n /= p_;
    ++t;
  }
  if (is_zero()) return zero(p_, N_ + t);
  i64 m = ppow(p_, N_ - v_);
  i64 w = n % m;
  if (w < 0) w += m;
  return Padic(p_, v_ + t, mulmod(u_, w, m), N_ + t);
}

Padic Padic::with_prec(int N) const {
  if (N >= N_) return *this;
  return make(p_, v_, u_, N);
}

Padic hensel_unit_root(i64 a_p, i64 p, int M) {
  Modulus mod(p, M);
  if (a_p % p == 0) throw NotOrdinary("p divides a_p; alpha is not a unit root");
  i64 a = mod.red(a_p);
  i64 x = a % p;
  for (int it = 0; it < 2 * M + 4; ++it) {
    i64 f = mod.add(mod.sub(mod.mul(x, x), mod.mul(a, x)), mod.red(p));
    if (f == 0) break;
    i64 df = mod.sub(mod.mul(2, x), a);
    x = mod.sub(x, mod.mul(f, mod.inv(df)));
  }
  return Padic::from_int(p, x, M);
}

Padic log_p(const Padic& u, int M) {
  i64 p = u.p();
  Padic one = Padic::from_int(p, 1, std::max(u.abs_prec(), M));
  Padic x = u - one;
  if (x.val() < 1) throw DomainError("log_p needs an argument congruent to 1 mod p");
  if (x.is_zero()) return Padic::zero(p, std::min(M, x.abs_prec()));
  int vx = x.val();
  // Smallest K with k*vx - floor(log_p k) >= M for all k > K.
  int K = 1;
  auto tail_ok = [&](int k) {
    int lg = 0;
    for (i64 t = p; t <= k; t *= p) ++lg;
    return static_cast<long>(k) * vx - lg >= M;
  };
  while (true) {
    bool ok = true;
    for (int k = K + 1; k <= K + 64 * static_cast<int>(p); ++k)
      if (!tail_ok(k)) {
        ok = false;
        break;
      }
    if (ok) break;
    ++K;
  }
  Padic sum = Padic::zero(p, M + K);
  Padic xk = x;
  for (int k = 1; k <= K; ++k) {
    Padic term = xk / Padic::from_int(p, k, vp(k, p) + x.rel_prec());
    sum = (k % 2 == 1) ? sum + term : sum - term;
    xk = xk * x;
  }
  return sum.with_prec(M);
}

Padic iwasawa_log(const Padic& u, int M) {
  i64 p = u.p();
  if (u.val() != 0) throw DomainError("iwasawa_log expects a unit");
  Padic l = log_p(u.pow(p - 1), M);
  return l / Padic::from_int(p, p - 1, std::max(1, l.rel_prec()));
}

Padic teichmuller(i64 a, i64 p, int M) {
  Modulus mod(p, M);
  if (a % p == 0) throw DomainError("Teichmuller lift of a non-unit");
  i64 x = mod.red(a);
  for (int i = 0; i < M; ++i) x = mod.pow(x, static_cast<u64>(p));
  return Padic::from_int(p, x, M);
}

}  // namespace eulerlab
