#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spherekern/sphere.hpp"

namespace spherekern {

/// Constants c_{k,i} of the Gegenbauer addition theorem
///   P_k^a(cos th cos ta + sin th sin ta cos ga)
///     = sum_i c_{k,i} sin^i th sin^i ta P_i^{a-1/2}(cos ga) P_{k-i}^{a+i}(cos th) P_{k-i}^{a+i}(cos ta).
struct AdditionConstants {
  double alpha = 0.0;
  int k = 0;
  std::vector<double> c;  // i = 0..k
  /// Max absolute residual of the least-squares fit over the sample grid.
  double fit_residual = 0.0;
};

/// Fits c_{k,i} by least squares on a tensor grid of Chebyshev points in
/// (0.2, pi - 0.2)^3 with `grid` points per axis (0 picks max(4, k + 2)).
/// Requires alpha >= 0.75 and 0 <= k <= 30. Throws IllConditionedError if the
/// design matrix is singular to working precision or the fit residual exceeds 1e-9.
AdditionConstants addition_constants(double alpha, int k, int grid = 0);

/// The angles of the addition theorem read off sphere points relative to Z and [Z q].
struct AdditionAngles {
  double cos_theta = 0.0;  // <x,q>_Z / sqrt(<x,x>_Z <q,q>_Z)
  double sin_theta = 0.0;  // sqrt(1 - cos^2)
  double cos_tau = 0.0;    // <y,q>_Z / sqrt(<y,y>_Z <q,q>_Z)
  double sin_tau = 0.0;
  double cos_gamma = 0.0;  // <x,y>_[Zq] / sqrt(<x,x>_[Zq] <y,y>_[Zq]); 0 when undefined
  /// sqrt(<x,x>_[Zq] / <x,x>_Z) and the same for y; equal to sin_theta, sin_tau.
  double ratio_x = 0.0;
  double ratio_y = 0.0;
  /// <x,y>_Z / sqrt(<x,x>_Z <y,y>_Z), the argument of the left-hand side.
  double target = 0.0;
};

/// Throws SingularityError when <x,x>_Z, <y,y>_Z or <q,q>_Z vanish.
AdditionAngles addition_angles(const SphereConfig& cfg, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Eigen::VectorXd& q);

/// Left and right side of the addition identity in configuration form.
double addition_lhs(const AdditionConstants& c, const AdditionAngles& a);
double addition_rhs(const AdditionConstants& c, const AdditionAngles& a);

struct AdditionReport {
  int n = 0;
  int r = 0;
  int k_max = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<AdditionConstants> constants;  // degrees 0..k_max
  std::vector<double> max_residual;          // per degree
  double overall_residual = 0.0;
  bool pass = false;
};

/// Checks the identity for every degree 0..k_max on `samples` random (x, y, q, Z),
/// with alpha = (n - r)/2 - 1. Requires n >= r + 4.
AdditionReport verify_addition(int n, int r, int k_max, int samples, std::uint64_t seed,
                               double tol = 1e-8);

}  // namespace spherekern
