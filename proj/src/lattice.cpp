#include "eulerlab/lattice.hpp"

#include <algorithm>
#include <stdexcept>

#include "eulerlab/errors.hpp"

namespace eulerlab {

namespace {

void axpy(const Modulus& mod, Vec& y, i64 a, const Vec& x) {
  if (a == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i]) y[i] = mod.add(y[i], mod.mul(a, x[i]));
}

void scale(const Modulus& mod, Vec& y, i64 a) {
  for (auto& v : y) v = mod.mul(v, a);
}

}  // namespace

Mat identity(int n) {
  Mat I(n, Vec(n, 0));
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

Mat mat_mul(const Modulus& mod, const Mat& A, const Mat& B) {
  if (A.empty()) return {};
  std::size_t inner = B.size();
  std::size_t cols = B.empty() ? 0 : B[0].size();
  Mat C(A.size(), Vec(cols, 0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (A[i][k]) axpy(mod, C[i], A[i][k], B[k]);
  return C;
}

Vec mat_vec(const Modulus& mod, const Mat& A, const Vec& x) {
  Vec y(A.size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] = mod.add(y[i], mod.mul(A[i][j], x[j]));
  return y;
}

HowellForm howell(const Modulus& mod, const Mat& A, int cols, bool track) {
  const int M = mod.M();
  std::vector<Vec> work(A.begin(), A.end());
  for (auto& r : work)
    for (auto& v : r) v = mod.red(v);
  std::vector<Vec> comb;
  if (track) comb = identity(static_cast<int>(A.size()));
  HowellForm out;
  for (int c = 0; c < cols; ++c) {
    int best = -1, bv = M;
    for (std::size_t i = 0; i < work.size(); ++i) {
      int v = mod.val(work[i][c]);
      if (v < bv) {
        bv = v;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) continue;
    Vec piv = work[best];
    Vec pc = track ? comb[best] : Vec{};
    work.erase(work.begin() + best);
    if (track) comb.erase(comb.begin() + best);
    i64 pk = ipow(mod.p(), bv);
    i64 u = mod.inv(piv[c] / pk);
    scale(mod, piv, u);
    if (track) scale(mod, pc, u);
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i][c] == 0) continue;
      i64 t = mod.neg(work[i][c] / pk);
      axpy(mod, work[i], t, piv);
      if (track) axpy(mod, comb[i], t, pc);
    }
    // Multiples of the pivot row that kill its pivot may survive further right.
    if (bv > 0) {
      Vec extra = piv;
      i64 f = ipow(mod.p(), M - bv);
      scale(mod, extra, f);
      if (std::any_of(extra.begin(), extra.end(), [](i64 x) { return x != 0; })) {
        work.push_back(extra);
        if (track) {
          Vec ec = pc;
          scale(mod, ec, f);
          comb.push_back(ec);
        }
      }
    }
    out.H.push_back(piv);
    if (track) out.T.push_back(pc);
    out.pivot_col.push_back(c);
    out.pivot_val.push_back(bv);
  }
  // Back-reduce entries above pivots into [0, p^k).
  for (std::size_t i = 0; i < out.H.size(); ++i) {
    int c = out.pivot_col[i];
    i64 pk = ipow(mod.p(), out.pivot_val[i]);
    for (std::size_t j = 0; j < i; ++j) {
      i64 t = out.H[j][c] / pk;
      if (t == 0) continue;
      axpy(mod, out.H[j], mod.neg(t), out.H[i]);
      if (track) axpy(mod, out.T[j], mod.neg(t), out.T[i]);
    }
  }
  return out;
}

SmithForm smith(const Modulus& mod, const Mat& A0) {
  const int r = static_cast<int>(A0.size());
  const int c = r ? static_cast<int>(A0[0].size()) : 0;
  SmithForm S;
  Mat A = A0;
  for (auto& row : A)
    for (auto& v : row) v = mod.red(v);
  S.U = identity(r);
  S.V = identity(c);
  const int n = std::min(r, c);
  for (int t = 0; t < n; ++t) {
    int bi = -1, bj = -1, bv = mod.M();
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j) {
        int v = mod.val(A[i][j]);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) {
      for (int k = t; k < n; ++k) S.exps.push_back(mod.M());
      break;
    }
    std::swap(A[t], A[bi]);
    std::swap(S.U[t], S.U[bi]);
    if (bj != t) {
      for (auto& row : A) std::swap(row[t], row[bj]);
      for (auto& row : S.V) std::swap(row[t], row[bj]);
    }
    i64 pk = ipow(mod.p(), bv);
    i64 u = mod.inv(A[t][t] / pk);
    scale(mod, A[t], u);
    scale(mod, S.U[t], u);
    for (int i = t + 1; i < r; ++i) {
      if (A[i][t] == 0) continue;
      i64 f = mod.neg(A[i][t] / pk);
      axpy(mod, A[i], f, A[t]);
      axpy(mod, S.U[i], f, S.U[t]);
    }
    for (int j = t + 1; j < c; ++j) {
      if (A[t][j] == 0) continue;
      i64 f = mod.neg(A[t][j] / pk);
      for (int i = 0; i < r; ++i) A[i][j] = mod.add(A[i][j], mod.mul(f, A[i][t]));
      for (int i = 0; i < c; ++i) S.V[i][j] = mod.add(S.V[i][j], mod.mul(f, S.V[i][t]));
    }
    S.exps.push_back(bv);
  }
  S.D = A;
  return S;
}

bool is_invertible(const Modulus& mod, const Mat& A) {
  if (A.empty()) return true;
  if (A.size() != A[0].size()) return false;
  SmithForm S = smith(mod, A);
  return std::all_of(S.exps.begin(), S.exps.end(), [](int e) { return e == 0; });
}

std::optional<Vec> solve(const Modulus& mod, const Mat& A, const Vec& b) {
  const int r = static_cast<int>(A.size());
  const int c = r ? static_cast<int>(A[0].size()) : 0;
  SmithForm S = smith(mod, A);
  Vec ub = mat_vec(mod, S.U, b);
  Vec y(c, 0);
  for (int i = 0; i < r; ++i) {
    int e = i < static_cast<int>(S.exps.size()) ? S.exps[i] : mod.M();
    if (mod.val(ub[i]) < e) return std::nullopt;
    if (e < mod.M()) y[i] = ub[i] / ipow(mod.p(), e);
  }
  return mat_vec(mod, S.V, y);
}

Mat kernel(const Modulus& mod, const Mat& A) {
  const int r = static_cast<int>(A.size());
  if (r == 0) return {};
  const int c = static_cast<int>(A[0].size());
  SmithForm S = smith(mod, A);
  Mat gens;
  for (int j = 0; j < c; ++j) {
    int e = j < static_cast<int>(S.exps.size()) ? S.exps[j] : mod.M();
    if (e == 0) continue;
    Vec y(c, 0);
    y[j] = e >= mod.M() ? 1 : ipow(mod.p(), mod.M() - e);
    gens.push_back(mat_vec(mod, S.V, y));
  }
  return gens;
}

Lattice Lattice::span(const Modulus& mod, int dim, const Mat& gens) {
  Lattice L(mod, dim);
  HowellForm h = howell(mod, gens, dim, false);
  L.rows_ = std::move(h.H);
  L.piv_col_ = std::move(h.pivot_col);
  L.piv_val_ = std::move(h.pivot_val);
  return L;
}

Lattice Lattice::full(const Modulus& mod, int dim) { return span(mod, dim, identity(dim)); }

Vec Lattice::reduce(const Vec& v0) const {
  Vec v = v0;
  for (auto& x : v) x = mod_.red(x);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int c = piv_col_[i];
    i64 t = v[c] / ipow(mod_.p(), piv_val_[i]);
    if (t) axpy(mod_, v, mod_.neg(t), rows_[i]);
  }
  return v;
}

bool Lattice::contains(const Vec& v) const {
  Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](i64 x) { return x == 0; });
}

bool Lattice::contains(const Lattice& o) const {
  for (const auto& r : o.rows_)
    if (!contains(r)) return false;
  return true;
}

Lattice Lattice::operator+(const Lattice& o) const {
  Mat g = rows_;
  g.insert(g.end(), o.rows_.begin(), o.rows_.end());
  return span(mod_, dim_, g);
}

int Lattice::colength() const {
  int total = dim_ * mod_.M();
  for (int v : piv_val_) total -= mod_.M() - v;
  return total;
}

}  // namespace eulerlab
