#include "pca/lp.hpp"

#include <stdexcept>

namespace pca {

LpResult lp_maximize(const std::vector<std::vector<Rat>>& A,
                     const std::vector<Rat>& b, const std::vector<Rat>& c) {
  size_t m = A.size(), n = c.size();
  for (auto& bi : b)
    if (bi < 0) throw std::invalid_argument("lp_maximize: negative rhs");
  if (b.size() != m) throw std::invalid_argument("lp_maximize: size mismatch");

  // tableau: m rows of [A | I | b], objective row holds -c
  std::vector<std::vector<Rat>> T(m + 1, std::vector<Rat>(n + m + 1, Rat(0)));
  for (size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("lp_maximize: size mismatch");
    for (size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][n + m] = b[i];
  }
  for (size_t j = 0; j < n; ++j) T[m][j] = -c[j];

  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    // Bland: entering = lowest index with negative reduced cost
    size_t enter = n + m;
    for (size_t j = 0; j < n + m; ++j)
      if (T[m][j] < 0) {
        enter = j;
        break;
      }
    if (enter == n + m) break;

    // ratio test; Bland ties by lowest basis index
    size_t leave = m;
    Rat best;
    for (size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rat ratio = T[i][n + m] / T[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw std::runtime_error("lp_maximize: unbounded");

    Rat piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rat factor = T[i][enter];
      for (size_t j = 0; j <= n + m; ++j) T[i][j] -= factor * T[leave][j];
    }
    basis[leave] = enter;
  }

  LpResult res;
  res.x.assign(n, Rat(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T[i][n + m];
  res.value = T[m][n + m];
  return res;
}

}  // namespace pca
