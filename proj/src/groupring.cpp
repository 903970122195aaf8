#include "eulerlab/groupring.hpp"

#include <algorithm>
#include <tuple>

#include "eulerlab/errors.hpp"

namespace eulerlab {

// ---------------------------------------------------------------- context

Ctx GroupRingCtx::get(i64 p, int n, int M) {
  static std::mutex mu;
  static std::map<std::tuple<i64, int, int>, Ctx> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, n, M);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  Ctx c(new GroupRingCtx(p, n, M));
  registry.emplace(key, c);
  return c;
}

GroupRingCtx::GroupRingCtx(i64 p, int n, int M) : mod_(p, M), n_(n) {
  if (n < 0) throw LevelError("negative level");
  N_ = static_cast<int>(ipow(p, n));
  if (N_ > 729) throw LevelError("group order beyond the supported desk-scale range");
  // Pascal triangle mod p^M up to row N.
  Mat C(N_ + 1, Vec(N_ + 1, 0));
  for (int j = 0; j <= N_; ++j) {
    C[j][0] = 1 % mod_.q();
    for (int k = 1; k <= j; ++k) C[j][k] = mod_.add(C[j - 1][k - 1], C[j - 1][k]);
  }
  g2u_.assign(N_, Vec(N_, 0));
  u2g_.assign(N_, Vec(N_, 0));
  for (int j = 0; j < N_; ++j)
    for (int k = 0; k <= j; ++k) {
      g2u_[k][j] = C[j][k];
      u2g_[k][j] = (j - k) % 2 ? mod_.neg(C[j][k]) : C[j][k];
    }
  top_.assign(N_, 0);
  for (int k = 1; k < N_; ++k) top_[k] = mod_.neg(C[N_][k]);
}

const Lattice& GroupRingCtx::aug_lattice(int a) const {
  if (a < 0) throw DomainError("negative augmentation power");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = lattices_.find(a);
    if (it != lattices_.end()) return *it->second;
  }
  Ctx self = get(p(), n_, M());
  Mat gens;
  GroupRingElement x = GroupRingElement::u_pow(self, a);
  for (int k = 0; k < N_; ++k) {
    gens.push_back(x.coeffs());
    x = x.times_u();
  }
  auto L = std::make_unique<Lattice>(Lattice::span(mod_, N_, gens));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = lattices_[a];
  if (!slot) slot = std::move(L);
  return *slot;
}

int GroupRingCtx::nilpotency() const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (nilpotency_ >= 0) return nilpotency_;
  }
  GroupRingElement x = GroupRingElement::scalar(get(p(), n_, M()), 1);
  int D = 0;
  while (!x.is_zero()) {
    x = x.times_u();
    ++D;
  }
  std::lock_guard<std::mutex> lock(mu_);
  nilpotency_ = D;
  return D;
}

int GroupRingCtx::faithful_depth() const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (faithful_ >= 0) return faithful_;
  }
  int depth = 0;
  try {
    Ctx wide = get(p(), n_, M() + 1);
    const i64 pM = mod_.q();
    // u^N is divisible by p, so I^(M N) already lies in p^M and the scan
    // can stop there. For the trivial group every depth is faithful.
    const int cap = M() * N_ + 1;
    for (int a = 1; a <= cap; ++a) {
      const Lattice& L = wide->aug_lattice(a);
      bool ok = true;
      for (int k = 1; k < N_ && ok; ++k) {
        Vec v(N_, 0);
        v[k] = pM;
        ok = L.contains(v);
      }
      if (!ok) break;
      depth = a;
    }
  } catch (const PrecisionError&) {
    depth = 0;
  }
  std::lock_guard<std::mutex> lock(mu_);
  faithful_ = depth;
  return depth;
}

// ---------------------------------------------------------------- elements

GroupRingElement::GroupRingElement(Ctx ctx) : ctx_(std::move(ctx)), c_(ctx_->N(), 0) {}

GroupRingElement::GroupRingElement(Ctx ctx, Vec u) : ctx_(std::move(ctx)), c_(std::move(u)) {
  if (static_cast<int>(c_.size()) != ctx_->N())
    throw DomainError("group ring coefficient vector has the wrong length");
  for (auto& v : c_) v = ctx_->mod().red(v);
}

GroupRingElement GroupRingElement::from_gamma(Ctx ctx, const Vec& g) {
  if (static_cast<int>(g.size()) != ctx->N()) throw DomainError("wrong gamma-vector length");
  Vec u = mat_vec(ctx->mod(), ctx->gamma_to_u(), g);
  return GroupRingElement(std::move(ctx), std::move(u));
}

GroupRingElement GroupRingElement::gamma_pow(Ctx ctx, i64 e) {
  Vec g(ctx->N(), 0);
  i64 N = ctx->N();
  g[((e % N) + N) % N] = 1;
  return from_gamma(std::move(ctx), g);
}

GroupRingElement GroupRingElement::u_pow(Ctx ctx, int k) {
  GroupRingElement x = scalar(ctx, 1);
  if (k < ctx->N()) {
    x.c_[0] = 0;
    x.c_[k] = 1 % ctx->mod().q();
    return x;
  }
  for (int i = 0; i < k; ++i) x = x.times_u();
  return x;
}

GroupRingElement GroupRingElement::scalar(Ctx ctx, i64 c) {
  GroupRingElement x(std::move(ctx));
  x.c_[0] = x.ctx_->mod().red(c);
  return x;
}

GroupRingElement GroupRingElement::norm_element(Ctx ctx) {
  return from_gamma(ctx, Vec(ctx->N(), 1));
}

Vec GroupRingElement::gamma_coeffs() const { return mat_vec(ctx_->mod(), ctx_->u_to_gamma(), c_); }

bool GroupRingElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
}

namespace {
void same_ctx(const Ctx& a, const Ctx& b) {
  if (a.get() != b.get()) throw DomainError("group ring elements from different rings");
}
}  // namespace

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  same_ctx(ctx_, o.ctx_);
  GroupRingElement r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = ctx_->mod().add(c_[i], o.c_[i]);
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  same_ctx(ctx_, o.ctx_);
  GroupRingElement r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = ctx_->mod().sub(c_[i], o.c_[i]);
  return r;
}

GroupRingElement GroupRingElement::operator-() const {
  GroupRingElement r = *this;
  for (auto& v : r.c_) v = ctx_->mod().neg(v);
  return r;
}

GroupRingElement GroupRingElement::operator*(i64 s) const {
  GroupRingElement r = *this;
  i64 t = ctx_->mod().red(s);
  for (auto& v : r.c_) v = ctx_->mod().mul(v, t);
  return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  same_ctx(ctx_, o.ctx_);
  const Modulus& mod = ctx_->mod();
  const int N = ctx_->N();
  std::vector<i128> acc(2 * N, 0);
  for (int i = 0; i < N; ++i) {
    if (!c_[i]) continue;
    for (int j = 0; j < N; ++j)
      if (o.c_[j]) acc[i + j] += mod.mul(c_[i], o.c_[j]);
  }
  const Vec& top = ctx_->top_relation();
  for (int d = 2 * N - 2; d >= N; --d) {
    i64 c = mod.red128(acc[d]);
    acc[d] = 0;
    if (!c) continue;
    for (int k = 1; k < N; ++k)
      if (top[k]) acc[d - N + k] += mod.mul(c, top[k]);
  }
  GroupRingElement r(ctx_);
  for (int i = 0; i < N; ++i) r.c_[i] = mod.red128(acc[i]);
  return r;
}

GroupRingElement GroupRingElement::times_u() const {
  const Modulus& mod = ctx_->mod();
  const int N = ctx_->N();
  GroupRingElement r(ctx_);
  i64 over = c_[N - 1];
  for (int k = N - 1; k >= 1; --k) r.c_[k] = c_[k - 1];
  r.c_[0] = 0;
  if (over) {
    const Vec& top = ctx_->top_relation();
    for (int k = 0; k < N; ++k) r.c_[k] = mod.add(r.c_[k], mod.mul(over, top[k]));
  }
  return r;
}

GroupRingElement GroupRingElement::involution() const {
  Vec g = gamma_coeffs();
  const int N = ctx_->N();
  Vec h(N, 0);
  for (int j = 0; j < N; ++j) h[(N - j) % N] = g[j];
  return from_gamma(ctx_, h);
}

GroupRingElement GroupRingElement::project(const Ctx& lower) const {
  if (lower->p() != ctx_->p() || lower->M() != ctx_->M() || lower->n() > ctx_->n())
    throw LevelError("projection needs a lower level with the same p and M");
  Vec g = gamma_coeffs();
  Vec h(lower->N(), 0);
  for (int j = 0; j < ctx_->N(); ++j) h[j % lower->N()] = lower->mod().add(h[j % lower->N()], g[j]);
  return from_gamma(lower, h);
}

// ---------------------------------------------------------------- filtration

AugOrder aug_order(const GroupRingElement& x, int a_max) {
  AugOrder r;
  if (x.is_zero()) {
    r.top = true;
    r.order = a_max;
    return r;
  }
  const Ctx& ctx = x.ctx();
  int a = 0;
  while (a < a_max && ctx->aug_lattice(a + 1).contains(x.coeffs())) ++a;
  r.order = a;
  r.precision_limited = (a == a_max && a_max > 0) || a + 1 > ctx->faithful_depth();
  return r;
}

AugClass quotient_class(const GroupRingElement& x, int a) {
  const Ctx& ctx = x.ctx();
  if (!ctx->aug_lattice(a).contains(x.coeffs()))
    throw NotInIdeal("element is not in I^" + std::to_string(a));
  AugClass c;
  c.level = ctx->n();
  c.degree = a;
  c.nf = ctx->aug_lattice(a + 1).reduce(x.coeffs());
  return c;
}

AugClass quotient_class(const IwasawaTrunc& x, int a) {
  if (a >= x.D()) throw PrecisionError("class degree beyond the u-adic truncation");
  for (int k = 0; k < a; ++k)
    if (x.coeffs()[k]) throw NotInIdeal("element is not in I^" + std::to_string(a));
  AugClass c;
  c.lambda = true;
  c.degree = a;
  c.coord = x.coeffs()[a];
  return c;
}

int quotient_order_exp(const Ctx& ctx, int a) {
  const Lattice& next = ctx->aug_lattice(a + 1);
  GroupRingElement g = GroupRingElement::u_pow(ctx, a);
  for (int e = 0; e < ctx->M(); ++e)
    if (next.contains((g * ipow(ctx->p(), e)).coeffs())) return e;
  return ctx->M();
}

std::pair<i64, int> class_coordinate(const GroupRingElement& x, int a) {
  const Ctx& ctx = x.ctx();
  if (!ctx->aug_lattice(a).contains(x.coeffs()))
    throw NotInIdeal("element is not in I^" + std::to_string(a));
  int e = quotient_order_exp(ctx, a);
  const i64 ord = ipow(ctx->p(), e);
  // Solve x = t u^a + sum_i s_i b_i with b_i the basis of I^(a+1).
  const Lattice& next = ctx->aug_lattice(a + 1);
  const Vec g = GroupRingElement::u_pow(ctx, a).coeffs();
  const int N = ctx->N();
  Mat A(N, Vec(1 + next.basis().size(), 0));
  for (int i = 0; i < N; ++i) {
    A[i][0] = g[i];
    for (std::size_t k = 0; k < next.basis().size(); ++k) A[i][k + 1] = next.basis()[k][i];
  }
  auto sol = solve(ctx->mod(), A, x.coeffs());
  if (!sol) throw std::logic_error("Q^a is not cyclic on u^a");
  return {(*sol)[0] % ord, e};
}

// ---------------------------------------------------------------- Lambda

IwasawaTrunc::IwasawaTrunc(i64 p, int M, int D) : mod_(p, M), c_(D, 0) {}

IwasawaTrunc::IwasawaTrunc(i64 p, int M, Vec coeffs) : mod_(p, M), c_(std::move(coeffs)) {
  for (auto& v : c_) v = mod_.red(v);
}

IwasawaTrunc IwasawaTrunc::scalar(i64 p, int M, int D, i64 c) {
  IwasawaTrunc x(p, M, D);
  if (D > 0) x.c_[0] = x.mod_.red(c);
  return x;
}

IwasawaTrunc IwasawaTrunc::u_pow(i64 p, int M, int D, int k) {
  IwasawaTrunc x(p, M, D);
  if (k < D) x.c_[k] = 1;
  return x;
}

IwasawaTrunc IwasawaTrunc::gamma_pow(i64 p, int M, int D, i64 e) {
  IwasawaTrunc base(p, M, D);
  if (D > 0) base.c_[0] = 1;
  if (D > 1) base.c_[1] = 1;
  bool neg = e < 0;
  u64 k = static_cast<u64>(neg ? -e : e);
  IwasawaTrunc r = scalar(p, M, D, 1);
  while (k) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return neg ? r.inverse() : r;
}

bool IwasawaTrunc::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
}

namespace {
void same_trunc(const IwasawaTrunc& a, const IwasawaTrunc& b) {
  if (!(a.mod() == b.mod()) || a.D() != b.D())
    throw DomainError("Iwasawa truncations with different parameters");
}
}  // namespace

IwasawaTrunc IwasawaTrunc::operator+(const IwasawaTrunc& o) const {
  same_trunc(*this, o);
  IwasawaTrunc r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_.add(c_[i], o.c_[i]);
  return r;
}

IwasawaTrunc IwasawaTrunc::operator-(const IwasawaTrunc& o) const {
  same_trunc(*this, o);
  IwasawaTrunc r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_.sub(c_[i], o.c_[i]);
  return r;
}

IwasawaTrunc IwasawaTrunc::operator-() const {
  IwasawaTrunc r = *this;
  for (auto& v : r.c_) v = mod_.neg(v);
  return r;
}

IwasawaTrunc IwasawaTrunc::operator*(i64 s) const {
  IwasawaTrunc r = *this;
  i64 t = mod_.red(s);
  for (auto& v : r.c_) v = mod_.mul(v, t);
  return r;
}

IwasawaTrunc IwasawaTrunc::operator*(const IwasawaTrunc& o) const {
  same_trunc(*this, o);
  const int D = this->D();
  std::vector<i128> acc(D, 0);
  for (int i = 0; i < D; ++i) {
    if (!c_[i]) continue;
    for (int j = 0; i + j < D; ++j)
      if (o.c_[j]) acc[i + j] += mod_.mul(c_[i], o.c_[j]);
  }
  IwasawaTrunc r(mod_.p(), mod_.M(), D);
  for (int i = 0; i < D; ++i) r.c_[i] = mod_.red128(acc[i]);
  return r;
}

IwasawaTrunc IwasawaTrunc::inverse() const {
  if (c_.empty() || !mod_.is_unit(c_[0])) throw DomainError("inverse of a non-unit in Lambda");
  const int D = this->D();
  IwasawaTrunc r(mod_.p(), mod_.M(), D);
  i64 inv0 = mod_.inv(c_[0]);
  r.c_[0] = inv0;
  for (int k = 1; k < D; ++k) {
    i128 s = 0;
    for (int j = 1; j <= k; ++j) s += mod_.mul(c_[j], r.c_[k - j]);
    r.c_[k] = mod_.mul(mod_.neg(mod_.red128(s)), inv0);
  }
  return r;
}

IwasawaTrunc IwasawaTrunc::shift_down(int k) const {
  Vec v(c_.begin() + std::min<std::size_t>(k, c_.size()), c_.end());
  v.resize(c_.size(), 0);
  return IwasawaTrunc(mod_.p(), mod_.M(), v);
}

GroupRingElement IwasawaTrunc::reduce_to_level(const Ctx& ctx) const {
  if (ctx->p() != mod_.p() || ctx->M() != mod_.M())
    throw DomainError("reduction to a ring with different p or M");
  if (D() < ctx->nilpotency())
    throw PrecisionError("u-adic truncation " + std::to_string(D()) +
                         " is below the nilpotency index " + std::to_string(ctx->nilpotency()) +
                         " at level " + std::to_string(ctx->n()));
  GroupRingElement acc(ctx);
  GroupRingElement pw = GroupRingElement::scalar(ctx, 1);
  for (int k = 0; k < D(); ++k) {
    if (c_[k]) acc += pw * c_[k];
    pw = pw.times_u();
    if (pw.is_zero()) break;
  }
  return acc;
}

// ---------------------------------------------------------------- characters

GammaCharacter GammaCharacter::inverse() const {
  if (k == 0) return *this;
  i64 pk = ipow(p, k);
  return {p, k, ((-j) % pk + pk) % pk};
}

std::vector<GammaCharacter> characters_of_exact_level(i64 p, int k) {
  if (k == 0) return {{p, 0, 0}};
  std::vector<GammaCharacter> out;
  i64 pk = ipow(p, k);
  for (i64 j = 1; j < pk; ++j)
    if (j % p) out.push_back({p, k, j});
  return out;
}

i64 gamma_exponent(i64 a, i64 p, int K) {
  if (K <= 1) return 0;
  static std::mutex mu;
  static std::map<std::pair<i64, int>, std::map<i64, i64>> tables;
  Modulus mod(p, K);
  i64 am = mod.red(a);
  if (am % p == 0) throw DomainError("gamma_exponent needs a unit");
  i64 omega = teichmuller(am, p, K).residue(K);
  i64 one_unit = mod.mul(am, mod.inv(omega));
  std::lock_guard<std::mutex> lock(mu);
  auto& tab = tables[{p, K}];
  if (tab.empty()) {
    i64 g = 1 % mod.q();
    for (i64 e = 0; e < ipow(p, K - 1); ++e) {
      tab[g] = e;
      g = mod.mul(g, 1 + p);
    }
  }
  return tab.at(one_unit);
}

i64 sigma_exponent(i64 a, const Ctx& ctx) {
  return gamma_exponent(a, ctx->p(), ctx->n() + 1) % ctx->N();
}

ExtScalar character_eval(const GroupRingElement& x, const GammaCharacter& chi,
                         const ExtField& target) {
  const Ctx& ctx = x.ctx();
  if (chi.p != ctx->p()) throw DomainError("character for a different prime");
  if (chi.k > ctx->n()) throw LevelError("character does not factor through G_n");
  if (target.m < chi.k) throw LevelError("target field lacks the character values");
  ExtField own{ctx->p(), std::nullopt, chi.k};
  const int M = ctx->M();
  ExtScalar z = ExtScalar::zeta_power(own, chi.j, M) - ExtScalar::from_int(own, 1, M);
  ExtScalar acc(own, M);
  const Vec& c = x.coeffs();
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    acc = acc * z + ExtScalar::from_int(own, c[k], M);
  return acc.lift_to(target);
}

ExtScalar character_eval(const GroupRingElement& x, const GammaCharacter& chi) {
  return character_eval(x, chi, ExtField{chi.p, std::nullopt, chi.k});
}

ExtScalar gauss_sum(const GammaCharacter& chi, const ExtField& target, int M) {
  if (chi.trivial()) return ExtScalar::from_int(target, 1, M);
  const i64 p = chi.p;
  if (chi.j % p == 0) throw ConductorError("character has smaller conductor than claimed");
  const int m = chi.k + 1;
  if (target.m < m) throw LevelError("target field lacks zeta_{p^m}");
  ExtField own{p, std::nullopt, m};
  const i64 pm = ipow(p, m), pk = ipow(p, chi.k);
  ExtScalar s(own, M);
  for (i64 a = 1; a < pm; ++a) {
    if (a % p == 0) continue;
    i64 e = gamma_exponent(a, p, m) % pk;
    i64 expo = (a + p * ((chi.j % pk) * e % pk)) % pm;
    s += ExtScalar::zeta_power(own, expo, M);
  }
  return s.lift_to(target);
}

ExtScalar gauss_sum(const GammaCharacter& chi, int M) {
  return gauss_sum(chi, ExtField{chi.p, std::nullopt, chi.conductor_exp()}, M);
}

GroupRingElement tcd_element(i64 c, i64 d, const Ctx& ctx) {
  auto coprime = [&](i64 x) { return x % 2 != 0 && x % 3 != 0 && x % ctx->p() != 0; };
  if (!coprime(c) || !coprime(d)) throw DomainError("c and d must be coprime to 6p");
  GroupRingElement sc = GroupRingElement::gamma_pow(ctx, sigma_exponent(c, ctx));
  GroupRingElement sd = GroupRingElement::gamma_pow(ctx, sigma_exponent(d, ctx));
  GroupRingElement fc = GroupRingElement::scalar(ctx, c) - sc;
  GroupRingElement fd = GroupRingElement::scalar(ctx, d) - sd;
  return fc * fd * ctx->mod().mul(ctx->mod().red(c), ctx->mod().red(d));
}

}  // namespace eulerlab
