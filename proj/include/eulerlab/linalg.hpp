#pragma once
// Module maps over Z/p^M[G_n], exterior-algebra contractions, Fitting
// ideals and ideal lattices.
#include <map>
#include <vector>

#include "eulerlab/errors.hpp"
#include "eulerlab/groupring.hpp"
#include "eulerlab/lattice.hpp"

namespace eulerlab {

inline HowellForm hnf(const Modulus& mod, const Mat& A) {
  return howell(mod, A, A.empty() ? 0 : static_cast<int>(A[0].size()));
}
inline SmithForm snf(const Modulus& mod, const Mat& A) { return smith(mod, A); }

using GRMatrix = std::vector<std::vector<GroupRingElement>>;
using GRVector = std::vector<GroupRingElement>;

// Matrix of a map between free modules: rows index target coordinates,
// columns source coordinates.
struct ModuleMap {
  Ctx ctx;
  GRMatrix m;

  int rows() const { return static_cast<int>(m.size()); }
  int cols() const { return m.empty() ? 0 : static_cast<int>(m[0].size()); }
  GRVector apply(const GRVector& x) const;
  ModuleMap compose(const ModuleMap& inner) const;  // this o inner
  ModuleMap transpose() const;
  ModuleMap project(const Ctx& lower) const;
};

// Ideal of Z/p^M[G_n] stored as the lattice spanned by generator * gamma^j.
class IdealZ {
 public:
  IdealZ() = default;
  static IdealZ generated(const Ctx& ctx, const GRVector& gens);
  static IdealZ zero(const Ctx& ctx) { return generated(ctx, {}); }
  static IdealZ unit(const Ctx& ctx) { return generated(ctx, {GroupRingElement::scalar(ctx, 1)}); }
  static IdealZ aug_power(const Ctx& ctx, int a);

  const Ctx& ctx() const { return ctx_; }
  const Lattice& lattice() const { return lat_; }
  const GRVector& generators() const { return gens_; }

  bool contains(const GroupRingElement& x) const { return lat_.contains(x.coeffs()); }
  bool contains(const IdealZ& J) const { return lat_.contains(J.lat_); }
  IdealZ operator+(const IdealZ& J) const;
  IdealZ operator*(const IdealZ& J) const;
  bool operator==(const IdealZ& J) const { return lat_ == J.lat_; }

 private:
  Ctx ctx_;
  GRVector gens_;
  Lattice lat_;
};

inline bool ideal_contains(const IdealZ& I, const IdealZ& J) { return I.contains(J); }

// Ideal of maximal minors of a presentation (rows = generators, columns =
// relations); the zero ideal when there are fewer relations than generators.
IdealZ fitting0(const ModuleMap& presentation);

// Sign of the permutation listing the set bits of `K` first, then the rest,
// among d letters.
int shuffle_sign(unsigned K, int d);

// Contraction of functionals psi_1..psi_s (each a length-d row) against
// b_1 ^ ... ^ b_d. The result in wedge^{d-s} is returned as a map from the
// bitmask of the surviving basis vectors to its coefficient:
//   sum_K shuffle_sign(K) det(psi_i(b_j))_{i, j not in K} b_K.
template <class T>
std::map<unsigned, T> wedge_contract(const std::vector<std::vector<T>>& psi, int d, const T& zero,
                                     const T& one) {
  const int s = static_cast<int>(psi.size());
  if (s > d) throw ArityError("more functionals than the wedge degree");
  std::map<unsigned, T> out;
  for (unsigned K = 0; K < (1u << d); ++K) {
    if (__builtin_popcount(K) != d - s) continue;
    std::vector<int> cols;
    for (int j = 0; j < d; ++j)
      if (!(K >> j & 1)) cols.push_back(j);
    std::vector<std::vector<T>> sub(s, std::vector<T>(s, zero));
    for (int i = 0; i < s; ++i)
      for (int c = 0; c < s; ++c) sub[i][c] = psi[i][cols[c]];
    T v = det(sub, zero, one);
    out.emplace(K, shuffle_sign(K, d) > 0 ? v : zero - v);
  }
  return out;
}

// sum_k (-1)^{k+1} det(psi_i(b_j))_{j != k} b_k for exactly d-1 functionals.
template <class T>
std::vector<T> wedge_dual_apply(const std::vector<std::vector<T>>& psi, int d, const T& zero,
                                const T& one) {
  if (static_cast<int>(psi.size()) != d - 1) throw ArityError("wedge_dual_apply needs d-1 functionals");
  auto w = wedge_contract(psi, d, zero, one);
  std::vector<T> out(d, zero);
  for (int k = 0; k < d; ++k) out[k] = w.at(1u << k);
  return out;
}

// det(a_ij + c b_i b_j) against det(a) + c sum_i b_i det(a with column i
// replaced by b).
template <class T>
std::pair<T, T> det_rank_one_update(const std::vector<std::vector<T>>& a, const std::vector<T>& b,
                                    const T& c, const T& zero, const T& one) {
  const std::size_t r = a.size();
  auto upd = a;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) upd[i][j] = a[i][j] + c * b[i] * b[j];
  T lhs = det(upd, zero, one);
  T rhs = det(a, zero, one);
  for (std::size_t i = 0; i < r; ++i) {
    auto rep = a;
    for (std::size_t k = 0; k < r; ++k) rep[k][i] = b[k];
    rhs = rhs + c * b[i] * det(rep, zero, one);
  }
  return {lhs, rhs};
}

// Group-ring convenience wrappers.
GroupRingElement gr_det(const GRMatrix& A, const Ctx& ctx);
GRVector wedge_dual_apply(const GRMatrix& psi, int d, const Ctx& ctx);

}  // namespace eulerlab
