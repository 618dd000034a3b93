#pragma once

#include <vector>

namespace spherekern {

inline constexpr double kCertificateTolerance = 1e-9;

/// Upper bound problem for A(n, theta), the largest spherical code on S^{n-1}
/// with minimal angular distance theta.
struct LPBoundProblem {
  int n = 3;
  double theta = 0.0;  // radians, in (0, pi]
  int d_max = 12;
  int grid_points = 400;
  /// Solve with columns P_k / P_k(1). The bound does not depend on this.
  bool normalize_columns = true;
  /// Initial tightening f(t_j) <= -margin on the grid.
  double initial_margin = 1e-9;
  int max_refinement_rounds = 3;

  /// Chebyshev-Lobatto points on [-1, cos theta], increasing, endpoints included.
  std::vector<double> grid() const;
  std::vector<double> grid(int points) const;
};

/// f(t) = sum_k coefficients[k] P_k^{n/2-1}(t) with coefficients >= 0, c_0 = 1,
/// f <= 0 on [-1, cos theta] (checked on a grid); then A(n, theta) <= f(1) / c_0.
struct LPCertificate {
  int n = 0;
  double theta = 0.0;
  int d_max = 0;
  std::vector<double> coefficients;
  double bound = 0.0;
  /// Largest value of f on the refined verification grid.
  double max_violation = 0.0;
  /// Grid actually used in the final solve and the number of re-solves needed.
  int solve_grid_points = 0;
  int refinement_rounds = 0;
  double margin = 0.0;
};

struct MarginReport {
  int grid_points = 0;
  double max_violation = 0.0;
  double argmax = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Delsarte linear program: minimize f(1) over c_k >= 0 with c_0 = 1 and
/// f(t_j) <= -margin on the grid. The result is re-checked on a 10x grid; on
/// failure the grid is densified and the margin raised (at most
/// max_refinement_rounds re-solves). Throws LPError if the LP is infeasible,
/// unbounded, or the certificate never verifies.
LPCertificate delsarte_lp(const LPBoundProblem& p);

/// Evaluates f on a grid of refine * p.grid_points points of [-1, cos theta].
MarginReport certify(const LPCertificate& cert, const LPBoundProblem& p, int refine = 10);

}  // namespace spherekern
