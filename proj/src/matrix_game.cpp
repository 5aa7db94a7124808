#include "nashgym/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nashgym/error.hpp"

namespace nashgym {

namespace {

constexpr double kTol = 1e-9;

// Primal simplex with Bland's rule on
//   max 1'q  s.t.  M q <= 1, q >= 0
// where every entry of M is >= 1, so the feasible region is a bounded
// polytope and q = 0 is a starting vertex. On return `q` holds the optimal
// point and `duals` the prices of the A constraints.
double simplex_unit_lp(const std::vector<double>& m, int num_rows, int num_cols,
                       std::vector<double>& q, std::vector<double>& duals) {
  const int width = num_cols + num_rows + 1;  // q vars, slacks, rhs
  std::vector<double> tableau(static_cast<std::size_t>(num_rows + 1) * width, 0.0);
  auto at = [&](int r, int c) -> double& { return tableau[static_cast<std::size_t>(r) * width + c]; };

  for (int i = 0; i < num_rows; ++i) {
    for (int j = 0; j < num_cols; ++j) at(i, j) = m[static_cast<std::size_t>(i) * num_cols + j];
    at(i, num_cols + i) = 1.0;
    at(i, width - 1) = 1.0;
  }
  // Objective row holds z_j - c_j; at optimum the slack entries are the duals.
  for (int j = 0; j < num_cols; ++j) at(num_rows, j) = -1.0;

  std::vector<int> basis(num_rows);
  for (int i = 0; i < num_rows; ++i) basis[i] = num_cols + i;

  const long max_iterations = 2000L * (num_rows + num_cols) + 1000L;
  for (long iter = 0;; ++iter) {
    require(iter < max_iterations, ErrorCode::kInternal, "simplex: iteration limit exceeded");

    int entering = -1;  // Bland: lowest variable index with negative reduced cost
    for (int j = 0; j < num_cols + num_rows; ++j) {
      if (at(num_rows, j) < -kTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < num_rows; ++i) {
      const double coeff = at(i, entering);
      if (coeff <= kTol) continue;
      const double ratio = at(i, width - 1) / coeff;
      if (leaving < 0 || ratio < best_ratio - kTol ||
          (ratio < best_ratio + kTol && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    require(leaving >= 0, ErrorCode::kInternal, "simplex: unbounded matrix-game LP");

    const double pivot = at(leaving, entering);
    for (int c = 0; c < width; ++c) at(leaving, c) /= pivot;
    at(leaving, entering) = 1.0;
    for (int r = 0; r <= num_rows; ++r) {
      if (r == leaving) continue;
      const double factor = at(r, entering);
      if (factor == 0.0) continue;
      for (int c = 0; c < width; ++c) at(r, c) -= factor * at(leaving, c);
      at(r, entering) = 0.0;
    }
    basis[leaving] = entering;
  }

  q.assign(num_cols, 0.0);
  for (int i = 0; i < num_rows; ++i) {
    if (basis[i] < num_cols) q[basis[i]] = std::max(0.0, at(i, width - 1));
  }
  duals.assign(num_rows, 0.0);
  for (int i = 0; i < num_rows; ++i) duals[i] = std::max(0.0, at(num_rows, num_cols + i));
  return at(num_rows, width - 1);
}

void normalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  require(sum > 0.0, ErrorCode::kInternal, "matrix game: degenerate strategy weights");
  for (double& x : v) x /= sum;
}

}  // namespace

MatrixGameSolution solve_matrix_game(std::span<const double> payoff, int num_rows, int num_cols) {
  require(num_rows >= 1 && num_cols >= 1, ErrorCode::kInvalidArgument,
          "solve_matrix_game: empty action set");
  require(payoff.size() == static_cast<std::size_t>(num_rows) * num_cols,
          ErrorCode::kDimensionMismatch, "solve_matrix_game: payoff size mismatch");

  double low = payoff[0];
  for (double x : payoff) {
    require(std::isfinite(x), ErrorCode::kInvalidArgument, "solve_matrix_game: non-finite payoff");
    low = std::min(low, x);
  }
  // Shift so every entry is >= 1; then the game value v' = v + shift is
  // positive and 1/v' equals the optimum of the unit LP below.
  const double shift = 1.0 - low;
  std::vector<double> shifted(payoff.begin(), payoff.end());
  for (double& x : shifted) x += shift;

  std::vector<double> q;
  std::vector<double> duals;
  const double inverse_value = simplex_unit_lp(shifted, num_rows, num_cols, q, duals);
  require(inverse_value > kTol, ErrorCode::kInternal, "matrix game: nonpositive LP optimum");

  MatrixGameSolution solution;
  solution.col_strategy = std::move(q);
  solution.row_strategy = std::move(duals);
  normalize(solution.col_strategy);
  normalize(solution.row_strategy);
  solution.value = 1.0 / inverse_value - shift;
  return solution;
}

}  // namespace nashgym
