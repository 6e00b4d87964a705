// Solves a random 10x10 matrix game (bilinear payoff over two simplices)
// with the single-loop conditional-gradient / projected-ascent method and
// prints how the ergodic duality gap of the running averages shrinks.
#include <cstdio>

#include "mmx/presets.hpp"
#include "mmx/problems/matrix_game.hpp"
#include "mmx/solver.hpp"

int main() {
  mmx::MatrixGame game = mmx::MatrixGame::random(10, 10, /*seed=*/7);

  // Convex-concave regime: primal Frank-Wolfe steps tau_t = 1/(t+1), dual
  // projected-gradient steps on the smoothed payoff with beta_t ~ t^{-1/3}.
  mmx::SolverPlan plan =
      mmx::plan_from_preset(game, mmx::Regime::kCC, mmx::OracleMode::kLmoPo);

  mmx::RunOptions options;
  options.iterations = 20000;
  options.cadence = 2000;

  mmx::RunResult result = mmx::run(game, plan, options);

  std::printf("%8s  %12s  %12s  %12s\n", "iter", "objective", "avg gap x",
              "duality gap");
  for (const mmx::TraceRow& row : result.rows) {
    std::printf("%8ld  %12.6f  %12.3e  %12.3e\n", row.iter, row.objective,
                row.avg_gap_x, row.duality_gap.value_or(0.0));
  }
  std::printf("\nfinal ergodic duality gap: %.3e after %ld iterations\n",
              result.final_row().duality_gap.value_or(0.0),
              result.iterations);
  return 0;
}
