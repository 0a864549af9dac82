#ifndef KPLANE_SIMPLEX_HPP
#define KPLANE_SIMPLEX_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"

namespace kplane {

struct Phase1Result {
  bool feasible = false;
  double objective = 0.0;          // residual infeasibility at the optimum
  Eigen::VectorXd solution;        // x >= 0 with A x = b when feasible
};

// Phase-1 simplex for { x >= 0 : A x = b }: minimize the sum of artificial
// variables with Bland's rule, which cannot cycle. Dense tableau; sized for
// a few dozen rows and a few thousand columns.
inline Phase1Result simplex_phase1(Eigen::MatrixXd a, Eigen::VectorXd b, double tol = 1e-11) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m) throw DimensionMismatch("right-hand side length disagrees with rows");

  for (int i = 0; i < m; ++i)
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }

  // Tableau columns: n structural + m artificial + rhs.
  Eigen::MatrixXd t(m + 1, n + m + 1);
  t.setZero();
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.block(0, n + m, m, 1) = b;
  // objective row: sum of artificials, expressed in terms of the basis
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  t.block(m, n, 1, m).setZero();

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    // Bland: entering column = lowest index with a negative reduced cost.
    int enter = -1;
    for (int j = 0; j < n + m; ++j)
      if (t(m, j) < -tol) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double aij = t(i, enter);
      if (aij > tol) {
        double ratio = t(i, n + m) / aij;
        if (leave < 0 || ratio < best_ratio - tol ||
            (ratio < best_ratio + tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0)
      throw Error("phase-1 objective unbounded below; tableau is corrupt");

    double pivot = t(leave, enter);
    t.row(leave) /= pivot;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double factor = t(i, enter);
      if (factor != 0.0) t.row(i) -= factor * t.row(leave);
    }
    basis[leave] = enter;
  }

  Phase1Result result;
  result.objective = -t(m, n + m);
  result.feasible = result.objective <= 1e-9;
  result.solution = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) result.solution[basis[i]] = t(i, n + m);
  return result;
}

}  // namespace kplane

#endif
