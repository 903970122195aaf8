#include "eulerlab/ext.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "eulerlab/errors.hpp"

namespace eulerlab {

namespace {

// Monomial folding table for zeta_{p^m}^e, 0 <= e < p^m: a list of
// (basis index, sign) pairs. Exponents at or above (p-1)p^(m-1) use
// zeta^((p-1)p^(m-1)+r) = -sum_{t<p-1} zeta^(t p^(m-1) + r).
using Fold = std::vector<std::vector<std::pair<int, int>>>;

const Fold& fold_table(i64 p, int m) {
  static std::mutex mu;
  static std::map<std::pair<i64, int>, std::unique_ptr<Fold>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) {
    auto t = std::make_unique<Fold>();
    if (m == 0) {
      t->push_back({{0, 1}});
    } else {
      i64 pm = ppow(p, m), pm1 = ppow(p, m - 1);
      i64 deg = (p - 1) * pm1;
      t->resize(pm);
      for (i64 e = 0; e < pm; ++e) {
        if (e < deg) {
          (*t)[e].push_back({static_cast<int>(e), 1});
        } else {
          i64 r = e - deg;
          for (i64 s = 0; s < p - 1; ++s) (*t)[e].push_back({static_cast<int>(s * pm1 + r), -1});
        }
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

i64 level_order(const ExtField& F) { return F.m == 0 ? 1 : ppow(F.p, F.m); }

void require_same(const ExtField& a, const ExtField& b) {
  if (!(a == b)) throw DomainError("ExtScalar operands live in different fields");
}

}  // namespace

int ExtField::cdeg() const { return m == 0 ? 1 : static_cast<int>((p - 1) * ppow(p, m - 1)); }

ExtScalar::ExtScalar(const ExtField& F, int N)
    : F_(F), cdeg_(F.cdeg()), c_(F.dim(), Padic::zero(F.p, N)) {}

ExtScalar ExtScalar::from_padic(const ExtField& F, const Padic& x) {
  ExtScalar r(F, kExactPrec);
  r.c_[0] = x;
  return r;
}

ExtScalar ExtScalar::from_int(const ExtField& F, i64 x, int N) {
  return from_padic(F, Padic::from_int(F.p, x, N));
}

ExtScalar ExtScalar::zeta_power(const ExtField& F, i64 k, int N) {
  ExtScalar r(F, kExactPrec);
  r.add_monomial(0, k, Padic::from_int(F.p, 1, N));
  return r;
}

ExtScalar ExtScalar::alpha(const ExtField& F, int N) {
  if (!F.ap) throw DomainError("field has no quadratic factor");
  ExtScalar r(F, kExactPrec);
  r.c_[r.cdeg_] = Padic::from_int(F.p, 1, N);
  return r;
}

void ExtScalar::add_monomial(int i, i64 e, const Padic& v) {
  i64 ord = level_order(F_);
  e %= ord;
  if (e < 0) e += ord;
  const auto& fold = fold_table(F_.p, F_.m)[e];
  for (auto [idx, sgn] : fold) {
    Padic& slot = c_[i * cdeg_ + idx];
    slot = sgn > 0 ? slot + v : slot - v;
  }
}

bool ExtScalar::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Padic& x) { return x.is_zero(); });
}

int ExtScalar::abs_prec() const {
  int n = kExactPrec;
  for (const auto& x : c_) n = std::min(n, x.abs_prec());
  return n;
}

int ExtScalar::val() const {
  int v = kExactPrec;
  for (const auto& x : c_) v = std::min(v, x.val());
  return v;
}

bool ExtScalar::in_base() const {
  for (int i = 0; i < F_.qdeg(); ++i)
    for (int k = 1; k < cdeg_; ++k)
      if (!coeff(i, k).is_zero()) return false;
  return true;
}

ExtScalar ExtScalar::operator-() const {
  ExtScalar r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

ExtScalar ExtScalar::operator+(const ExtScalar& o) const {
  require_same(F_, o.F_);
  ExtScalar r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

ExtScalar ExtScalar::operator-(const ExtScalar& o) const {
  require_same(F_, o.F_);
  ExtScalar r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

ExtScalar ExtScalar::operator*(const Padic& s) const {
  ExtScalar r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

ExtScalar ExtScalar::operator/(const Padic& s) const {
  ExtScalar r = *this;
  for (auto& x : r.c_) x = x / s;
  return r;
}

ExtScalar ExtScalar::operator*(const ExtScalar& o) const {
  require_same(F_, o.F_);
  const i64 p = F_.p;
  const int q = F_.qdeg();
  const i64 ord = level_order(F_);
  // Zero coordinates are skipped, but their precision still bounds the
  // product: a zero known mod p^N times something of valuation v is only
  // known mod p^(N+v).
  int cap = kExactPrec;
  const int vx = val(), vy = o.val();
  for (const auto& x : c_)
    if (x.is_zero()) cap = std::min(cap, x.abs_prec() + vy);
  for (const auto& y : o.c_)
    if (y.is_zero()) cap = std::min(cap, y.abs_prec() + vx);

  std::vector<Padic> acc(static_cast<std::size_t>(3 * ord), Padic::zero(p, kExactPrec));
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < cdeg_; ++k) {
      const Padic& a = coeff(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < q; ++j)
        for (int l = 0; l < cdeg_; ++l) {
          const Padic& b = o.coeff(j, l);
          if (b.is_zero()) continue;
          i64 e = (k + l) % ord;
          acc[(i + j) * ord + e] += a * b;
        }
    }
  ExtScalar r(F_, kExactPrec);
  for (i64 e = 0; e < ord; ++e) {
    if (!acc[e].is_zero() || acc[e].abs_prec() < kExactPrec) r.add_monomial(0, e, acc[e]);
    if (q == 2) {
      const Padic& hi = acc[2 * ord + e];
      Padic a1 = acc[ord + e];
      Padic a0 = Padic::zero(p, kExactPrec);
      if (!hi.is_zero() || hi.abs_prec() < kExactPrec) {
        a1 += hi.mul_int(*F_.ap);
        a0 = -hi.mul_int(p);
      }
      r.add_monomial(0, e, a0);
      r.add_monomial(1, e, a1);
    }
  }
  if (cap < kExactPrec) r = r.with_prec(cap);
  return r;
}

ExtScalar ExtScalar::mul_zeta(i64 k) const {
  ExtScalar r(F_, kExactPrec);
  for (int i = 0; i < F_.qdeg(); ++i)
    for (int j = 0; j < cdeg_; ++j) r.add_monomial(i, j + k, coeff(i, j));
  return r;
}

ExtScalar ExtScalar::inverse() const {
  if (!in_base()) throw DomainError("inverse is only supported on Q_p(alpha)");
  ExtScalar r(F_, kExactPrec);
  if (F_.qdeg() == 1) {
    r.c_[0] = coeff(0, 0).inverse();
    for (int k = 1; k < cdeg_; ++k) r.c_[k] = Padic::zero(F_.p, kExactPrec);
    return r;
  }
  const Padic& c0 = coeff(0, 0);
  const Padic& c1 = coeff(1, 0);
  Padic norm = c0 * c0 + (c0 * c1).mul_int(*F_.ap) + (c1 * c1).mul_int(F_.p);
  if (norm.is_zero()) throw DomainError("inverse of an element of norm zero");
  r.c_[0] = (c0 + c1.mul_int(*F_.ap)) / norm;
  r.c_[cdeg_] = (-c1) / norm;
  return r;
}

ExtScalar ExtScalar::operator/(const ExtScalar& o) const { return *this * o.inverse(); }

ExtScalar ExtScalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return from_int(F_, 1, std::max(1, abs_prec() - std::min(0, val())));
  ExtScalar r;
  ExtScalar b = *this;
  bool first = true;
  while (e) {
    if (e & 1) {
      r = first ? b : r * b;
      first = false;
    }
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

ExtScalar ExtScalar::embed(int m2) const {
  if (m2 < F_.m) throw LevelError("embedding into a lower cyclotomic level");
  ExtField G = F_.at_level(m2);
  ExtScalar r(G, kExactPrec);
  i64 step = F_.m == 0 ? 0 : ppow(F_.p, m2 - F_.m);
  for (int i = 0; i < F_.qdeg(); ++i)
    for (int k = 0; k < cdeg_; ++k) r.add_monomial(i, k * step, coeff(i, k));
  return r;
}

ExtScalar ExtScalar::lift_to(const ExtField& target) const {
  if (F_.p != target.p) throw DomainError("lift between fields of different p");
  if (F_.ap && F_.ap != target.ap) throw DomainError("lift would drop the quadratic factor");
  ExtScalar e = embed(target.m);
  if (e.F_ == target) return e;
  ExtScalar r(target, kExactPrec);
  int cd = target.cdeg();
  for (int i = 0; i < F_.qdeg(); ++i)
    for (int k = 0; k < cd; ++k) r.c_[i * cd + k] = e.c_[i * cd + k];
  return r;
}

ExtScalar ExtScalar::with_prec(int N) const {
  ExtScalar r = *this;
  for (auto& x : r.c_) x = x.with_prec(N);
  return r;
}

ExtScalar ExtScalar::conj_alpha() const {
  if (F_.qdeg() == 1) return *this;
  // c0 + c1 alpha -> (c0 + a_p c1) - c1 alpha, coordinatewise in zeta.
  ExtScalar r = *this;
  for (int k = 0; k < cdeg_; ++k) {
    r.c_[k] = coeff(0, k) + coeff(1, k).mul_int(*F_.ap);
    r.c_[cdeg_ + k] = -coeff(1, k);
  }
  return r;
}

ExtScalar galois_act(i64 a, const ExtScalar& x) {
  const ExtField& F = x.F_;
  if (a % F.p == 0) throw DomainError("galois_act needs a unit");
  ExtScalar r(F, kExactPrec);
  i64 ord = level_order(F);
  i64 am = ((a % ord) + ord) % ord;
  for (int i = 0; i < F.qdeg(); ++i)
    for (int k = 0; k < x.cdeg_; ++k)
      r.add_monomial(i, static_cast<i64>((static_cast<i128>(am) * k) % ord), x.coeff(i, k));
  return r;
}

ExtScalar cyclo_trace(const ExtScalar& x, int m2) {
  const ExtField& F = x.F_;
  if (m2 > F.m) throw LevelError("trace target level exceeds source level");
  if (m2 < 0) throw LevelError("negative trace target level");
  if (m2 == F.m) return x;
  i64 ord = ppow(F.p, F.m);
  i64 step = m2 == 0 ? 1 : ppow(F.p, m2);
  ExtScalar sum(F, kExactPrec);
  for (i64 a = 1; a < ord; a += step) {
    if (a % F.p == 0) continue;
    sum += galois_act(a, x);
  }
  ExtField G = F.at_level(m2);
  ExtScalar r(G, kExactPrec);
  i64 stride = ppow(F.p, F.m - m2);
  int gdeg = G.cdeg();
  for (int i = 0; i < F.qdeg(); ++i)
    for (int k = 0; k < x.cdeg_; ++k) {
      const Padic& c = sum.coeff(i, k);
      if (k % stride == 0 && k / stride < gdeg) {
        r.c_[i * gdeg + k / stride] = c;
      } else if (!c.is_zero()) {
        throw std::logic_error("trace left a component outside the target level");
      }
    }
  return r;
}

}  // namespace eulerlab
