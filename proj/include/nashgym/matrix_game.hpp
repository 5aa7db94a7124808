#pragma once

#include <span>
#include <vector>

namespace nashgym {

struct MatrixGameSolution {
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  double value = 0.0;
};

// Solves the zero-sum matrix game with payoff[r * num_cols + c] paid by the
// column player to the row player (row maximizes). Uses the value-variable LP
// reduction solved by a dense simplex with Bland's rule, so the result is
// deterministic across platforms.
MatrixGameSolution solve_matrix_game(std::span<const double> payoff, int num_rows, int num_cols);

}  // namespace nashgym
