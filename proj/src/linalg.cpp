#include "eulerlab/linalg.hpp"

namespace eulerlab {

GRVector ModuleMap::apply(const GRVector& x) const {
  if (static_cast<int>(x.size()) != cols()) throw ArityError("vector length does not match map");
  GRVector y(rows(), GroupRingElement(ctx));
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) y[i] += m[i][j] * x[j];
  return y;
}

ModuleMap ModuleMap::compose(const ModuleMap& inner) const {
  if (cols() != inner.rows()) throw ArityError("maps do not compose");
  ModuleMap r{ctx, GRMatrix(rows(), GRVector(inner.cols(), GroupRingElement(ctx)))};
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < inner.cols(); ++j)
      for (int k = 0; k < cols(); ++k) r.m[i][j] += m[i][k] * inner.m[k][j];
  return r;
}

ModuleMap ModuleMap::transpose() const {
  ModuleMap r{ctx, GRMatrix(cols(), GRVector(rows(), GroupRingElement(ctx)))};
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) r.m[j][i] = m[i][j];
  return r;
}

ModuleMap ModuleMap::project(const Ctx& lower) const {
  ModuleMap r{lower, GRMatrix(rows(), GRVector(cols(), GroupRingElement(lower)))};
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) r.m[i][j] = m[i][j].project(lower);
  return r;
}

IdealZ IdealZ::generated(const Ctx& ctx, const GRVector& gens) {
  IdealZ I;
  I.ctx_ = ctx;
  I.gens_ = gens;
  Mat rows;
  for (const auto& g : gens) {
    GroupRingElement x = g;
    for (int k = 0; k < ctx->N(); ++k) {
      rows.push_back(x.coeffs());
      x = x.times_u();
    }
  }
  I.lat_ = Lattice::span(ctx->mod(), ctx->N(), rows);
  return I;
}

IdealZ IdealZ::aug_power(const Ctx& ctx, int a) {
  IdealZ I;
  I.ctx_ = ctx;
  I.gens_ = {GroupRingElement::u_pow(ctx, a)};
  I.lat_ = ctx->aug_lattice(a);
  return I;
}

IdealZ IdealZ::operator+(const IdealZ& J) const {
  IdealZ r;
  r.ctx_ = ctx_;
  r.gens_ = gens_;
  r.gens_.insert(r.gens_.end(), J.gens_.begin(), J.gens_.end());
  r.lat_ = lat_ + J.lat_;
  return r;
}

IdealZ IdealZ::operator*(const IdealZ& J) const {
  // Products of lattice bases span the product ideal.
  GRVector g;
  for (const auto& x : lat_.basis())
    for (const auto& y : J.lat_.basis())
      g.push_back(GroupRingElement(ctx_, x) * GroupRingElement(ctx_, y));
  return generated(ctx_, g);
}

int shuffle_sign(unsigned K, int d) {
  // Count inversions: pairs (k in K, j not in K) with j < k.
  int inv = 0, outside = 0;
  for (int j = 0; j < d; ++j) {
    if (K >> j & 1)
      inv += outside;
    else
      ++outside;
  }
  return inv % 2 ? -1 : 1;
}

GroupRingElement gr_det(const GRMatrix& A, const Ctx& ctx) {
  return det(A, GroupRingElement(ctx), GroupRingElement::scalar(ctx, 1));
}

GRVector wedge_dual_apply(const GRMatrix& psi, int d, const Ctx& ctx) {
  return wedge_dual_apply(psi, d, GroupRingElement(ctx), GroupRingElement::scalar(ctx, 1));
}

IdealZ fitting0(const ModuleMap& P) {
  const int r = P.rows(), c = P.cols();
  if (c < r) return IdealZ::zero(P.ctx);
  GRVector minors;
  for (unsigned S = 0; S < (1u << c); ++S) {
    if (__builtin_popcount(S) != r) continue;
    std::vector<int> cols;
    for (int j = 0; j < c; ++j)
      if (S >> j & 1) cols.push_back(j);
    GRMatrix sub(r, GRVector(r, GroupRingElement(P.ctx)));
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) sub[i][k] = P.m[i][cols[k]];
    minors.push_back(gr_det(sub, P.ctx));
  }
  return IdealZ::generated(P.ctx, minors);
}

}  // namespace eulerlab
