#include "eulerlab/bockstein.hpp"

#include <algorithm>
#include <random>

namespace eulerlab {

namespace {

GroupRingElement one(const Ctx& ctx) { return GroupRingElement::scalar(ctx, 1); }

// psi restricted to the given rows, as functionals on all d basis vectors.
GRMatrix rows_of(const TwoTermComplex& C, int first, int last) {
  GRMatrix out;
  for (int i = first; i < last; ++i) out.push_back(C.psi.m[i]);
  return out;
}

}  // namespace

void TwoTermComplex::validate() const {
  if (d < 1 || r < 1 || r > d) throw RoleError("need 1 <= r <= d");
  if (psi.rows() != d || psi.cols() != d) throw RoleError("psi must be d x d");
  for (int j = 0; j < d; ++j)
    if (!psi.m[0][j].is_zero()) throw RoleError("row 1 of psi must vanish");
  for (int i = 1; i < r; ++i)
    for (int j = 0; j < d; ++j)
      if (psi.m[i][j].augmentation() != 0)
        throw RoleError("row " + std::to_string(i + 1) + " of psi leaves the augmentation ideal");
}

TwoTermComplex TwoTermComplex::project(const Ctx& lower) const {
  return {lower, d, r, psi.project(lower)};
}

Mat TwoTermComplex::level0() const {
  Mat A(d, Vec(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A[i][j] = psi.m[i][j].augmentation();
  return A;
}

TwoTermComplex LambdaComplex::at_level(const Ctx& ctx) const {
  TwoTermComplex C{ctx, d, r, ModuleMap{ctx, {}}};
  for (const auto& row : psi) {
    GRVector out;
    for (const auto& x : row) out.push_back(x.reduce_to_level(ctx));
    C.psi.m.push_back(std::move(out));
  }
  return C;
}

QuotientVector QuotientVector::from_reps(const Ctx& ctx, int degree, GRVector reps) {
  QuotientVector q{ctx, degree, std::move(reps), {}};
  for (const auto& x : q.reps) q.classes.push_back(quotient_class(x, degree));
  return q;
}

bool QuotientVector::is_zero() const {
  for (const auto& c : classes)
    for (i64 v : c.nf)
      if (v) return false;
  return true;
}

QuotientVector QuotientVector::operator-(const QuotientVector& o) const {
  if (reps.size() != o.reps.size() || degree != o.degree)
    throw DomainError("quotient vectors of different shape");
  GRVector diff;
  for (std::size_t k = 0; k < reps.size(); ++k) diff.push_back(reps[k] - o.reps[k]);
  return from_reps(ctx, degree, std::move(diff));
}

GroupRingElement beta_rep(const Vec& a, int i, const TwoTermComplex& C) {
  if (i < 2 || i > C.r) throw RoleError("beta is defined for 2 <= i <= r");
  if (static_cast<int>(a.size()) != C.d) throw ArityError("vector length differs from d");
  // The lift with sum_sigma sigma(a~) = a takes a's coordinates on b_{j,n}.
  GroupRingElement acc(C.ctx);
  for (int j = 0; j < C.d; ++j) acc += C.psi.m[i - 1][j] * a[j];
  return acc;
}

AugClass beta(const Vec& a, int i, const TwoTermComplex& C) {
  return quotient_class(beta_rep(a, i, C), 1);
}

namespace {

// (-1)^{r-1} sum_l (-1)^{l+1} y_l (x) det(beta_i(y_j))_{2<=i<=r, j != l},
// returned as representatives in P_0 coordinates.
GRVector boc_reps(const std::vector<Vec>& ys, const TwoTermComplex& C) {
  const Ctx& ctx = C.ctx;
  const int r = C.r;
  GRMatrix B(r - 1, GRVector(r, GroupRingElement(ctx)));
  for (int i = 2; i <= r; ++i)
    for (int j = 0; j < r; ++j) B[i - 2][j] = beta_rep(ys[j], i, C);
  GRVector coeff = r == 1 ? GRVector{one(ctx)} : wedge_dual_apply(B, r, ctx);
  GRVector out(C.d, GroupRingElement(ctx));
  for (int l = 0; l < r; ++l) {
    GroupRingElement c = r % 2 == 1 ? coeff[l] : -coeff[l];
    for (int k = 0; k < C.d; ++k)
      if (ys[l][k]) out[k] += c * ys[l][k];
  }
  return out;
}

}  // namespace

QuotientVector boc_map(const std::vector<Vec>& ys, const TwoTermComplex& C) {
  C.validate();
  if (static_cast<int>(ys.size()) != C.r) throw ArityError("Boc needs exactly r vectors");
  const Mat A = C.level0();
  const Modulus& mod = C.ctx->mod();
  for (std::size_t l = 0; l < ys.size(); ++l) {
    if (static_cast<int>(ys[l].size()) != C.d) throw ArityError("vector length differs from d");
    for (i64 v : mat_vec(mod, A, ys[l]))
      if (v) throw NotCocycle("y_" + std::to_string(l + 1) + " is not in ker psi_0");
  }
  return QuotientVector::from_reps(C.ctx, C.r - 1, boc_reps(ys, C));
}

QuotientVector boc_wedge(const std::map<unsigned, i64>& y, const TwoTermComplex& C) {
  C.validate();
  const Ctx& ctx = C.ctx;
  const Modulus& mod = ctx->mod();
  GRVector out(C.d, GroupRingElement(ctx));
  for (const auto& [K, c] : y) {
    if (__builtin_popcount(K) != C.r) throw ArityError("wedge term of the wrong degree");
    if (mod.red(c) == 0) continue;
    std::vector<Vec> ys;
    for (int k = 0; k < C.d; ++k) {
      if (!(K >> k & 1)) continue;
      Vec e(C.d, 0);
      e[k] = 1;
      ys.push_back(e);
    }
    GRVector part = boc_reps(ys, C);
    for (int k = 0; k < C.d; ++k) out[k] += part[k] * c;
  }
  return QuotientVector::from_reps(ctx, C.r - 1, std::move(out));
}

GRVector pi_n(const TwoTermComplex& C, const DetElement& z) {
  const Ctx& ctx = C.ctx;
  GRVector v = C.d == 1 ? GRVector{one(ctx)} : wedge_dual_apply(rows_of(C, 1, C.d), C.d, ctx);
  const bool neg = (C.d - 1) % 2 == 1;
  for (auto& x : v) x = neg ? -(z.s * x) : z.s * x;
  return v;
}

std::vector<IwasawaTrunc> pi_lambda(const LambdaComplex& C) {
  const IwasawaTrunc zero(C.p, C.M, C.D);
  const IwasawaTrunc unit = IwasawaTrunc::scalar(C.p, C.M, C.D, 1);
  if (C.d == 1) return {unit};
  std::vector<std::vector<IwasawaTrunc>> rows(C.psi.begin() + 1, C.psi.end());
  auto v = wedge_dual_apply(rows, C.d, zero, unit);
  if ((C.d - 1) % 2 == 1)
    for (auto& x : v) x = -x;
  return v;
}

i64 descend(const DetElement& z) { return z.s.augmentation(); }

std::map<unsigned, i64> pi_x(const TwoTermComplex& C, i64 s0) {
  const Modulus& mod = C.ctx->mod();
  const Mat A = C.level0();
  std::vector<Vec> rows(A.begin() + C.r, A.end());
  struct Z {
    const Modulus* m;
    i64 v;
    Z operator+(const Z& o) const { return {m, m->add(v, o.v)}; }
    Z operator-(const Z& o) const { return {m, m->sub(v, o.v)}; }
    Z operator*(const Z& o) const { return {m, m->mul(v, o.v)}; }
  };
  std::vector<std::vector<Z>> psi;
  for (const auto& row : rows) {
    std::vector<Z> zr;
    for (i64 x : row) zr.push_back({&mod, x});
    psi.push_back(zr);
  }
  auto w = wedge_contract(psi, C.d, Z{&mod, 0}, Z{&mod, 1});
  // With survivors listed first, the composite of this contraction with the
  // r-1 Bockstein functionals is the full (d-1)-fold contraction, so the
  // sign that makes the lower path agree with (-1)^{d-1} is (-1)^{d-r}.
  const bool neg = (C.d - C.r) % 2 == 1;
  std::map<unsigned, i64> out;
  for (const auto& [K, c] : w) {
    i64 v = mod.mul(c.v, mod.red(s0));
    if (v) out[K] = neg ? mod.neg(v) : v;
  }
  return out;
}

DescentResult descent_commutes(const TwoTermComplex& C, const DetElement& z) {
  C.validate();
  const Ctx& ctx = C.ctx;
  const int a = C.r - 1;
  const int N = ctx->N();

  // Upper path: the Darmon norm of Pi_n(z), whose entries on e_k gamma^m
  // all agree modulo I^r and give the coefficient of b_{k,0}.
  GRVector top = pi_n(C, z);
  GRVector nz = darmon_norm(EulerElement{ctx, top});
  GRVector left_reps;
  for (int k = 0; k < C.d; ++k) {
    const AugClass c0 = quotient_class(nz[k * N], a);
    for (int m = 1; m < N; ++m)
      if (quotient_class(nz[k * N + m], a) != c0)
        throw std::logic_error("Darmon norm entries are not G-invariant modulo I^r");
    left_reps.push_back(nz[k * N]);
  }

  DescentResult res;
  res.left = QuotientVector::from_reps(ctx, a, std::move(left_reps));
  res.right = boc_wedge(pi_x(C, descend(z)), C);
  res.residual = res.left - res.right;
  return res;
}

int descent_sign_exponent(int d, int r) {
  return ((r - 1) + r * (d - r) + (r - 1) * (d - r)) % 2;
}

LemmaAlgResult lemma_alg_check(const std::vector<std::vector<Padic>>& f,
                               const std::vector<Padic>& ell, const std::vector<Padic>& x,
                               bool require_symmetric) {
  const int r = static_cast<int>(f.size());
  if (r == 0 || static_cast<int>(ell.size()) != r || static_cast<int>(x.size()) != r)
    throw ArityError("lemma data must all have dimension r >= 1");
  const i64 p = ell[0].p();
  int prec = kExactPrec;
  for (const auto& row : f)
    for (const auto& v : row) prec = std::min(prec, v.abs_prec());
  for (const auto& v : ell) prec = std::min(prec, v.abs_prec());
  for (const auto& v : x) prec = std::min(prec, v.abs_prec());
  if (require_symmetric)
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (!f[i][j].eq(f[j][i])) throw HypothesisError("f is not symmetric at precision");

  const Padic zero = Padic::zero(p, prec);
  const Padic unit = Padic::from_int(p, 1, prec);

  // A complement m_0 of N = ker ell with ell(m_0) = 1, pivoting on the
  // coordinate of least valuation, and the basis n_k = e_k - ell_k/ell_j e_j.
  int j = -1;
  for (int k = 0; k < r; ++k)
    if (!ell[k].is_zero() && (j < 0 || ell[k].val() < ell[j].val())) j = k;
  if (j < 0) throw DomainError("ell must be nonzero");
  std::vector<std::vector<Padic>> B(r, std::vector<Padic>(r, zero));  // columns m_0, n_1..
  B[j][0] = unit / ell[j];
  int col = 1;
  std::vector<std::vector<Padic>> nbasis;
  for (int k = 0; k < r; ++k) {
    if (k == j) continue;
    std::vector<Padic> n(r, zero);
    n[k] = unit;
    n[j] = -(ell[k] / ell[j]);
    for (int i = 0; i < r; ++i) B[i][col] = n[i];
    nbasis.push_back(n);
    ++col;
  }

  auto fx = [&](const std::vector<Padic>& v, int i) {  // f(x_i)(v)
    Padic s = zero;
    for (int t = 0; t < r; ++t) s += f[i][t] * v[t];
    return s;
  };
  std::vector<Padic> fxx(r, zero);  // f(x)(x_i) = sum_t x_t f(x_t)(x_i)
  for (int i = 0; i < r; ++i)
    for (int t = 0; t < r; ++t) fxx[i] += x[t] * f[t][i];

  // wedge^{r-1} g on x_1 ^ .. ^ x_r against n_1^* ^ .. ^ n_{r-1}^*, then
  // delta(n^*) = m_0^* ^ n^* = det(B)^{-1} x^*, then f(x) (x) id.
  Padic lhs = zero;
  for (int i = 0; i < r; ++i) {
    std::vector<std::vector<Padic>> G;
    for (int k = 0; k < r; ++k) {
      if (k == i) continue;
      std::vector<Padic> row;
      for (const auto& n : nbasis) row.push_back(fx(n, k));
      G.push_back(row);
    }
    Padic term = fxx[i] * det(G, zero, unit);
    lhs = i % 2 == 0 ? lhs + term : lhs - term;
  }
  lhs = lhs / det(B, zero, unit);

  Padic ellx = zero;
  for (int t = 0; t < r; ++t) ellx += ell[t] * x[t];
  const Padic rhs = ellx * det(f, zero, unit);
  return {lhs, rhs, lhs - rhs};
}

SynthInstance synth_generate(i64 p, int M, int D, int d, int r, std::uint64_t seed,
                             const IwasawaTrunc& t) {
  if (r < 1 || r > d) throw InfeasibleTarget("need 1 <= r <= d");
  const Modulus mod(p, M);
  if (t.D() != D || t.p() != p || t.M() != M) throw DomainError("target of a different ring");
  const i64 t0 = t.coeffs()[0];
  if (t0 == 0) throw InfeasibleTarget("target factor has augmentation 0 at precision");
  if (d == r && mod.val(t0) > 0) throw InfeasibleTarget("no slot for torsion when d = r");

  std::mt19937_64 rng(seed);
  auto rnd = [&] {
    Vec c(D);
    for (auto& v : c) v = static_cast<i64>(draw(rng, mod.q()));
    return IwasawaTrunc(p, M, c);
  };
  auto unit = [&] {
    Vec c = rnd().coeffs();
    c[0] = mod.add(mod.mul(c[0], p), 1 + static_cast<i64>(draw(rng, p - 1)));
    return IwasawaTrunc(p, M, c);
  };
  const IwasawaTrunc zero(p, M, D);
  const IwasawaTrunc one = IwasawaTrunc::scalar(p, M, D, 1);
  const IwasawaTrunc u = IwasawaTrunc::u_pow(p, M, D, 1);
  using LMat = std::vector<std::vector<IwasawaTrunc>>;
  auto mul = [&](const LMat& A, const LMat& B) {
    LMat C(d, std::vector<IwasawaTrunc>(d, zero));
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        if (!A[i][k].is_zero())
          for (int j = 0; j < d; ++j) C[i][j] = C[i][j] + A[i][k] * B[k][j];
    return C;
  };
  // Unit lower triangular times upper triangular with unit diagonal on the
  // index range [lo, hi).
  auto invertible_block = [&](LMat& A, int lo, int hi) {
    LMat Lw(d, std::vector<IwasawaTrunc>(d, zero)), Up = Lw;
    for (int i = 0; i < d; ++i) Lw[i][i] = Up[i][i] = one;
    for (int i = lo; i < hi; ++i) {
      Up[i][i] = unit();
      for (int j = lo; j < i; ++j) Lw[i][j] = rnd();
      for (int j = i + 1; j < hi; ++j) Up[i][j] = rnd();
    }
    LMat P = mul(Lw, Up);
    for (int i = lo; i < hi; ++i)
      for (int j = lo; j < hi; ++j) A[i][j] = P[i][j];
  };

  LMat L(d, std::vector<IwasawaTrunc>(d, zero));
  L[0][0] = one;
  for (int i = 1; i < r; ++i) L[i][0] = rnd();
  invertible_block(L, 1, r);
  invertible_block(L, r, d);
  for (int i = r; i < d; ++i)
    for (int j = 0; j < r; ++j) L[i][j] = rnd();

  LMat Dg(d, std::vector<IwasawaTrunc>(d, zero));
  for (int i = 1; i < r; ++i) Dg[i][i] = u * unit();
  if (d > r) Dg[r][r] = t * unit();
  for (int i = r + 1; i < d; ++i) Dg[i][i] = unit();

  LMat R(d, std::vector<IwasawaTrunc>(d, zero));
  invertible_block(R, 0, d);

  SynthInstance out;
  out.complex = LambdaComplex{p, M, D, d, r, mul(mul(L, Dg), R)};
  out.tors_exp = d > r ? mod.val(t0) : 0;
  // ker psi_0 = R_0^{-1} <e_1, .., e_r>.
  Mat R0(d, Vec(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) R0[i][j] = R[i][j].coeffs()[0];
  for (int j = 0; j < r; ++j) {
    Vec e(d, 0);
    e[j] = 1;
    out.h1_basis0.push_back(*solve(mod, R0, e));
  }
  return out;
}

}  // namespace eulerlab
