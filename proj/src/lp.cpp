#include "shortcutlab/lp.hpp"

#include <cmath>
#include <limits>

namespace shortcutlab {

LpResult simplex_max(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  for (double bi : b)
    if (bi < 0) throw std::invalid_argument("simplex_max requires b >= 0");

  // tableau: m rows x (n + m + 1) cols, slack basis
  std::vector<std::vector<double>> t(m + 1,
                                     std::vector<double>(n + m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i];
  }
  for (int j = 0; j < n; ++j) t[m][j] = -c[j];
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const double eps = 1e-9;
  int degenerate_steps = 0;
  for (long iter = 0;; ++iter) {
    // entering column: most negative reduced cost, Bland after degeneracy
    int col = -1;
    if (degenerate_steps < 64) {
      double best = -eps;
      for (int j = 0; j < n + m; ++j)
        if (t[m][j] < best) {
          best = t[m][j];
          col = j;
        }
    } else {
      for (int j = 0; j < n + m; ++j)
        if (t[m][j] < -eps) {
          col = j;
          break;
        }
    }
    if (col == -1) break;
    int row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t[i][col] <= eps) continue;
      double ratio = t[i][n + m] / t[i][col];
      if (ratio < best_ratio - eps ||
          (ratio < best_ratio + eps && (row == -1 || basis[i] < basis[row]))) {
        best_ratio = ratio;
        row = i;
      }
    }
    if (row == -1) {
      LpResult r;
      r.bounded = false;
      return r;
    }
    if (best_ratio < eps)
      ++degenerate_steps;
    else
      degenerate_steps = 0;
    // pivot
    double piv = t[row][col];
    for (double& v : t[row]) v /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      double f = t[i][col];
      if (std::fabs(f) < eps) continue;
      for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = col;
    if (iter > 200000)
      throw std::runtime_error("simplex_max: iteration limit exceeded");
  }

  LpResult r;
  r.objective = t[m][n + m];
  r.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) r.x[basis[i]] = t[i][n + m];
  return r;
}

}  // namespace shortcutlab
