#include "ersg/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ersg {

namespace {
constexpr double kPivotEps = 1e-11;
constexpr int kMaxPivots = 20000;
}  // namespace

SimplexResult simplex_maximize(const Matrix& A, const Vector& b, const Vector& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex: inconsistent dimensions");
  if (b.minCoeff() < 0.0)
    throw std::invalid_argument("simplex: requires b >= 0");

  // tableau over structural + slack columns; last column is the rhs
  Matrix T = Matrix::Zero(m + 1, n + m + 1);
  T.block(0, 0, m, n) = A;
  T.block(0, n, m, m) = Matrix::Identity(m, m);
  T.block(0, n + m, m, 1) = b;
  T.block(m, 0, 1, n) = -c.transpose();

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  int pivots = 0;
  while (true) {
    // Bland: entering = lowest-index column with negative reduced cost
    int enter = -1;
    for (int j = 0; j < n + m; ++j)
      if (T(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    // ratio test; ties resolved toward the smallest basis variable index
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > kPivotEps) {
        double ratio = T(i, n + m) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - kPivotEps ||
            (ratio < best_ratio + kPivotEps && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) throw std::runtime_error("simplex: unbounded LP");

    if (++pivots > kMaxPivots)
      throw std::runtime_error("simplex: pivot budget exhausted");

    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    basis[leave] = enter;
  }

  SimplexResult res;
  res.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T(i, n + m);
  res.objective = T(m, n + m);
  res.pivots = pivots;
  return res;
}

namespace {

// One player's side of the game via the classical reciprocal form: with all
// entries of M positive, v = 1 / max{ sum z : M z <= 1, z >= 0 } and the
// minimizing mixture is tau = v z.
struct HalfGame {
  Vector tau;
  double value;
  int pivots;
};

HalfGame solve_min_side(const Matrix& rho) {
  const double shift = 1.0 - rho.minCoeff();
  const Matrix M = rho.array() + shift;
  const int n = static_cast<int>(rho.cols());
  SimplexResult lp = simplex_maximize(M, Vector::Ones(rho.rows()), Vector::Ones(n));
  const double total = lp.x.sum();
  if (!(total > 0.0)) throw std::runtime_error("matrix game LP degenerate");
  HalfGame h;
  h.value = 1.0 / total - shift;
  // pivoting can leave entries a few ulp below zero; the mixture must be an
  // exact distribution
  h.tau = lp.x.cwiseMax(0.0);
  h.tau /= h.tau.sum();
  h.pivots = lp.pivots;
  return h;
}

}  // namespace

MatrixGameSolution solve_matrix_lp(const Matrix& rho) {
  if (rho.rows() < 1 || rho.cols() < 1)
    throw std::invalid_argument("matrix game: empty payoff");
  if (rho.rows() > 64 || rho.cols() > 64)
    throw std::invalid_argument("matrix game: dimension above 64 rejected");
  if (!rho.allFinite())
    throw std::invalid_argument("matrix game: payoff entries must be finite");

  // player 2's mixture from the game itself, player 1's from the negated
  // transpose (the roles swap and the value flips sign)
  HalfGame p2 = solve_min_side(rho);
  HalfGame p1 = solve_min_side(-rho.transpose());

  MatrixGameSolution sol;
  sol.tau = p2.tau;
  sol.sigma = p1.tau;
  sol.value = 0.5 * (p2.value - p1.value);
  sol.pivots = p1.pivots + p2.pivots;
  return sol;
}

}  // namespace ersg
