#pragma once

#include "ersg/types.hpp"

namespace ersg {

// Solution of the matrix game max_sigma min_tau sigma' rho tau over mixed
// strategies. Player 1 mixes rows and maximizes.
struct MatrixGameSolution {
  Vector sigma;
  Vector tau;
  double value = 0.0;
  int pivots = 0;
};

// Dense primal simplex for max c'x s.t. Ax <= b, x >= 0 with b >= 0, so the
// origin is feasible and no phase-1 is needed. Entering and leaving variables
// follow Bland's rule, which rules out cycling. Throws on unboundedness or
// when the pivot budget is exhausted.
struct SimplexResult {
  Vector x;
  double objective = 0.0;
  int pivots = 0;
};
SimplexResult simplex_maximize(const Matrix& A, const Vector& b, const Vector& c);

// Solves the zero-sum matrix game exactly via two feasible-origin LPs (one
// per player, the second on the negated transpose). Dimensions are capped at
// 64x64. The two solves produce independent values; their average is
// returned and they agree to solver precision.
MatrixGameSolution solve_matrix_lp(const Matrix& rho);

}  // namespace ersg
