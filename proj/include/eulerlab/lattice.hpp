#pragma once
// Exact normal forms for submodules of (Z/p^M)^n and matrices over Z/p^M.
#include <optional>
#include <vector>

#include "eulerlab/modular.hpp"

namespace eulerlab {

// Row Howell form: rows of H span the same submodule as the rows of A,
// H = T * A, each pivot is a power of p, entries above a pivot p^k lie in
// [0, p^k), and for every column c the rows with pivot column >= c span
// the part of the module vanishing before c. Over Z/p^M this form is
// canonical, so two spans are equal iff their forms are equal.
struct HowellForm {
  Mat H;
  Mat T;
  std::vector<int> pivot_col;
  std::vector<int> pivot_val;
};
HowellForm howell(const Modulus& mod, const Mat& A, int cols, bool track = true);

// U * A * V = D with U, V invertible and D diagonal, diagonal entries p^e
// with e non-decreasing (zeros last, reported as exponent M).
struct SmithForm {
  Mat U, V, D;
  std::vector<int> exps;  // one per diagonal slot, min(rows, cols) entries
};
SmithForm smith(const Modulus& mod, const Mat& A);

Mat mat_mul(const Modulus& mod, const Mat& A, const Mat& B);
Vec mat_vec(const Modulus& mod, const Mat& A, const Vec& x);
Mat identity(int n);
bool is_invertible(const Modulus& mod, const Mat& A);

// Some x with A x = b, or nothing. Among solutions the one with each free
// Smith coordinate reduced to its least residue is returned.
std::optional<Vec> solve(const Modulus& mod, const Mat& A, const Vec& b);
// Generators of the kernel of x -> A x.
Mat kernel(const Modulus& mod, const Mat& A);

class Lattice {
 public:
  Lattice() = default;
  Lattice(const Modulus& mod, int dim) : mod_(mod), dim_(dim) {}
  static Lattice span(const Modulus& mod, int dim, const Mat& gens);
  static Lattice full(const Modulus& mod, int dim);

  const Modulus& modulus() const { return mod_; }
  int dim() const { return dim_; }
  const Mat& basis() const { return rows_; }
  const std::vector<int>& pivot_cols() const { return piv_col_; }
  const std::vector<int>& pivot_vals() const { return piv_val_; }

  // Canonical representative of v modulo the lattice.
  Vec reduce(const Vec& v) const;
  bool contains(const Vec& v) const;
  bool contains(const Lattice& o) const;
  Lattice operator+(const Lattice& o) const;
  bool operator==(const Lattice& o) const { return rows_ == o.rows_ && dim_ == o.dim_; }
  // log_p of the index in (Z/p^M)^dim.
  int colength() const;

 private:
  Modulus mod_;
  int dim_ = 0;
  Mat rows_;
  std::vector<int> piv_col_, piv_val_;
};

// Determinant over any commutative ring by expansion over column subsets.
template <class T>
T det(const std::vector<std::vector<T>>& A, const T& zero, const T& one) {
  const int n = static_cast<int>(A.size());
  if (n == 0) return one;
  std::vector<T> dp(std::size_t{1} << n, zero);
  std::vector<bool> have(dp.size(), false);
  dp[0] = one;
  have[0] = true;
  for (unsigned mask = 1; mask < dp.size(); ++mask) {
    int k = __builtin_popcount(mask);
    int pos = 0;
    bool init = false;
    T acc = zero;
    for (int c = 0; c < n; ++c) {
      if (!(mask >> c & 1)) continue;
      unsigned rest = mask & ~(1u << c);
      T term = A[k - 1][c] * dp[rest];
      if (((k - 1) + pos) % 2) term = zero - term;
      acc = init ? acc + term : term;
      init = true;
      ++pos;
    }
    dp[mask] = acc;
  }
  return dp.back();
}

}  // namespace eulerlab
