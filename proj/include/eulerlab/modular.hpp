#pragma once
// Residue arithmetic in Z/p^M with 64-bit storage. Products go through
// 128-bit intermediates, so p^M is capped below 2^62.
#include <cstdint>
#include <random>
#include <vector>

namespace eulerlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

bool is_prime(i64 n);

// p^k, throwing PrecisionError when the result would exceed 2^62.
i64 ipow(i64 p, int k);

// Exponent of the largest power of p dividing x (x != 0).
int vp(i64 x, i64 p);

// Uniform draw in [0, n) from the raw engine output. Distribution objects
// are avoided so that seeded runs agree across standard libraries.
inline u64 draw(std::mt19937_64& rng, u64 n) { return n == 0 ? 0 : rng() % n; }

class Modulus {
 public:
  Modulus() = default;
  Modulus(i64 p, int M);

  i64 p() const { return p_; }
  int M() const { return M_; }
  i64 q() const { return q_; }

  i64 red(i64 x) const {
    i64 r = x % q_;
    return r < 0 ? r + q_ : r;
  }
  i64 red128(i128 x) const {
    i128 r = x % q_;
    return static_cast<i64>(r < 0 ? r + q_ : r);
  }
  i64 add(i64 a, i64 b) const {
    i64 s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  i64 sub(i64 a, i64 b) const {
    i64 s = a - b;
    return s < 0 ? s + q_ : s;
  }
  i64 neg(i64 a) const { return a == 0 ? 0 : q_ - a; }
  i64 mul(i64 a, i64 b) const {
    return static_cast<i64>((static_cast<i128>(a) * b) % q_);
  }
  i64 pow(i64 a, u64 e) const;
  // Valuation of a residue; M for zero.
  int val(i64 a) const;
  bool is_unit(i64 a) const { return a % p_ != 0; }
  // Inverse of a unit residue; DomainError otherwise.
  i64 inv(i64 a) const;
  // Signed representative in (-q/2, q/2].
  i64 centered(i64 a) const { return a > q_ / 2 ? a - q_ : a; }

  bool operator==(const Modulus& o) const { return p_ == o.p_ && M_ == o.M_; }

 private:
  i64 p_ = 0;
  int M_ = 0;
  i64 q_ = 1;
};

using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

}  // namespace eulerlab
