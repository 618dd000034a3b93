#include "spherekern/lp_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spherekern/error.hpp"
#include "spherekern/gegenbauer.hpp"
#include "spherekern/simplex.hpp"

namespace spherekern {

namespace {

void validate(const LPBoundProblem& p) {
  if (p.n < 3) throw DomainError("delsarte_lp needs n >= 3");
  if (!(p.theta > 0.0 && p.theta <= std::numbers::pi)) {
    throw DomainError("theta must lie in (0, pi]");
  }
  if (p.d_max < 0 || p.d_max > 60) throw DomainError("d_max must lie in [0, 60]");
  if (p.grid_points < 2) throw DomainError("grid needs at least two points");
}

double evaluate(const std::vector<double>& coefficients, double alpha, double t) {
  return synthesize_univariate(coefficients, alpha, t);
}

struct Solve {
  std::vector<double> coefficients;
  double bound = 0.0;
};

Solve solve_on_grid(const LPBoundProblem& p, const std::vector<double>& grid, double margin) {
  const double alpha = p.n / 2.0 - 1.0;
  const int d = p.d_max;
  const auto rows = static_cast<Eigen::Index>(grid.size());

  Eigen::VectorXd scale = Eigen::VectorXd::Ones(d);
  const auto at_one = eval_gegenbauer_all(alpha, d, 1.0);
  if (p.normalize_columns)
    for (int k = 1; k <= d; ++k) scale(k - 1) = at_one[static_cast<std::size_t>(k)];

  // Unknowns c_1..c_d (c_0 = 1): maximize -sum c_k P_k(1) s.t. sum c_k P_k(t_j) <= -1 - margin.
  // The tableau is built for the dual (d rows, one column per grid point), which
  // starts feasible at y = 0 and stays small; c is read off its multipliers.
  LinearProgram dual;
  dual.a.resize(d, rows);
  dual.b.resize(d);
  dual.c = Eigen::VectorXd::Constant(rows, 1.0 + margin);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const auto values = eval_gegenbauer_all(alpha, d, grid[static_cast<std::size_t>(j)]);
    for (int k = 1; k <= d; ++k) {
      dual.a(k - 1, j) = -values[static_cast<std::size_t>(k)] / scale(k - 1);
    }
  }
  for (int k = 1; k <= d; ++k) dual.b(k - 1) = at_one[static_cast<std::size_t>(k)] / scale(k - 1);

  const LPSolution sol = solve_simplex(dual);
  if (sol.status == LPStatus::unbounded || d == 0) {
    throw LPError("Delsarte LP is infeasible for n = " + std::to_string(p.n) +
                  ", d_max = " + std::to_string(d));
  }
  if (sol.status == LPStatus::infeasible) throw LPError("Delsarte LP is unbounded");

  Solve out;
  out.coefficients.assign(static_cast<std::size_t>(d) + 1, 0.0);
  out.coefficients[0] = 1.0;
  for (int k = 1; k <= d; ++k) {
    out.coefficients[static_cast<std::size_t>(k)] = std::max(0.0, sol.dual(k - 1) / scale(k - 1));
  }
  out.bound = evaluate(out.coefficients, alpha, 1.0) / out.coefficients[0];
  return out;
}

}  // namespace

std::vector<double> LPBoundProblem::grid(int points) const {
  const double lo = -1.0;
  const double hi = std::cos(theta);
  if (points < 2 || hi - lo <= 0.0) return {lo};
  std::vector<double> out(static_cast<std::size_t>(points));
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int j = 0; j < points; ++j) {
    out[static_cast<std::size_t>(j)] = mid - half * std::cos(j * std::numbers::pi / (points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> LPBoundProblem::grid() const { return grid(grid_points); }

MarginReport certify(const LPCertificate& cert, const LPBoundProblem& p, int refine) {
  if (refine < 1) throw DomainError("refinement factor must be positive");
  if (cert.coefficients.empty()) throw DomainError("certificate has no coefficients");
  for (double c : cert.coefficients) {
    if (!std::isfinite(c)) throw DomainError("certificate coefficients must be finite");
  }
  const double alpha = p.n / 2.0 - 1.0;
  const auto points = p.grid(refine * p.grid_points);
  MarginReport report;
  report.grid_points = static_cast<int>(points.size());
  report.max_violation = -INFINITY;
  for (double t : points) {
    const double f = evaluate(cert.coefficients, alpha, t);
    if (f > report.max_violation) {
      report.max_violation = f;
      report.argmax = t;
    }
  }
  report.bound = evaluate(cert.coefficients, alpha, 1.0) / cert.coefficients[0];
  const bool signs_ok = cert.coefficients[0] > 0.0 &&
                        std::all_of(cert.coefficients.begin(), cert.coefficients.end(),
                                    [](double c) { return c >= 0.0; });
  report.pass = signs_ok && report.max_violation <= kCertificateTolerance;
  return report;
}

LPCertificate delsarte_lp(const LPBoundProblem& p) {
  validate(p);
  double margin = p.initial_margin;
  int points = p.grid_points;
  for (int round = 0; round <= p.max_refinement_rounds; ++round) {
    const Solve s = solve_on_grid(p, p.grid(points), margin);
    LPCertificate cert;
    cert.n = p.n;
    cert.theta = p.theta;
    cert.d_max = p.d_max;
    cert.coefficients = s.coefficients;
    cert.bound = s.bound;
    cert.solve_grid_points = points;
    cert.refinement_rounds = round;
    cert.margin = margin;
    const MarginReport check = certify(cert, p, 10);
    cert.max_violation = check.max_violation;
    if (check.pass) return cert;
    // Bumps between grid points shrink with the square of the spacing.
    margin = std::max(margin, 2.0 * check.max_violation);
    points *= 4;
  }
  throw LPError("Delsarte certificate failed verification after refinement");
}

}  // namespace spherekern
