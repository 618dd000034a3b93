#pragma once

#include <Eigen/Dense>

namespace spherekern {

/// maximize c^T x  subject to  A x <= b, x >= 0.
struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class LPStatus { optimal, infeasible, unbounded };

struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd dual;  // multipliers of A x <= b at the optimum
  int pivots = 0;
};

/// Dense two-phase tableau simplex. Entering variable by most negative reduced
/// cost, leaving variable by minimum ratio; ties broken by variable index.
/// After a run of degenerate pivots it switches to Bland's rule. Throws LPError
/// once `max_pivots` is exceeded.
LPSolution solve_simplex(const LinearProgram& lp, double eps = 1e-10, int max_pivots = 200000);

}  // namespace spherekern
