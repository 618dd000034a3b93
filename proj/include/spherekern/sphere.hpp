#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace spherekern {

using Rng = std::mt19937_64;

/// Generator seeded from (seed, stream) so that independent trials get
/// reproducible, uncorrelated streams regardless of scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Per-trial generator for the randomized checks. `purpose` separates the
/// checks from each other, and no trial stream coincides with make_rng(seed),
/// so a configuration drawn from the primary stream is never replayed as a
/// trial's sample point.
Rng trial_rng(std::uint64_t seed, std::uint32_t purpose, std::uint64_t trial);

/// Orthogonal projectors for the range of Z and its complement.
struct ProjectorPair {
  Eigen::MatrixXd pi;       // onto R(Z)
  Eigen::MatrixXd pi_perp;  // onto R(Z)^perp
  Eigen::MatrixXd ort;      // n x (n - r), orthonormal basis of R(Z)^perp
};

/// Coordinates of a sphere point relative to a configuration: x = T1(v, u).
struct FiberCoords {
  Eigen::VectorXd v;  // unit vector in R^(n-r)
  Eigen::VectorXd u;  // Z^T x, a point of B_Z
};

/// A configuration Z = [z_1 .. z_r] of unit vectors in R^n.
///
/// On construction the columns are checked to be unit length and the singular
/// values are computed; `full_rank()` is true iff the smallest one exceeds
/// `tol_rank` (default 1e-8 times the largest). All quantities that depend on
/// Z alone (projectors, the factor Z (Z^T Z)^-1, the basis Ort(Z)) are built
/// once here. r = 0 is allowed and describes the plain sphere.
class SphereConfig {
 public:
  static constexpr double kUnitTolerance = 1e-12;
  static constexpr double kDefaultRankFactor = 1e-8;
  static constexpr double kDefaultPerpTolerance = 1e-8;

  explicit SphereConfig(Eigen::MatrixXd z, std::optional<double> tol_rank = std::nullopt,
                        double tol_perp = kDefaultPerpTolerance);

  /// Empty configuration (r = 0) in dimension n.
  static SphereConfig empty(int n);
  /// Normalizes each column before construction.
  static SphereConfig normalized(Eigen::MatrixXd z);

  int n() const { return static_cast<int>(z_.rows()); }
  int r() const { return static_cast<int>(z_.cols()); }
  const Eigen::MatrixXd& z() const { return z_; }
  double tol_rank() const { return tol_rank_; }
  double tol_perp() const { return tol_perp_; }
  bool full_rank() const { return full_rank_; }
  const Eigen::VectorXd& singular_values() const { return singular_values_; }

  /// Z^T Z, the Gram matrix of the configuration (a point of Lambda^r).
  Eigen::MatrixXd gram() const { return z_.transpose() * z_; }

  /// Throws RankError unless full rank.
  const ProjectorPair& projectors() const;

  /// gamma_Z(u) = Z (Z^T Z)^-1 u.
  Eigen::VectorXd gamma(const Eigen::VectorXd& u) const;
  /// phi_Z(v) = Ort(Z) v.
  Eigen::VectorXd phi(const Eigen::VectorXd& v) const;

  /// (Z^T Z)^{-1/2}-whitened coordinates R^{-T} Z^T x, so that
  /// x^T Pi_Z y = whiten(x)^T whiten(y).
  Eigen::VectorXd whiten(const Eigen::VectorXd& x) const;

 private:
  void require_full_rank() const;

  Eigen::MatrixXd z_;
  double tol_rank_ = 0.0;
  double tol_perp_ = kDefaultPerpTolerance;
  bool full_rank_ = true;
  Eigen::VectorXd singular_values_;
  // Valid when full rank: thin QR factors Z = Q1 R.
  Eigen::MatrixXd q1_;
  Eigen::MatrixXd r_;
  ProjectorPair proj_;
};

ProjectorPair projectors(const SphereConfig& cfg);

/// x = Ort(Z) v sqrt(1 - |gamma_Z(u)|^2) + gamma_Z(u).
/// Throws DomainError if |v| != 1 or |gamma_Z(u)| > 1 + 1e-12.
Eigen::VectorXd map_t1(const SphereConfig& cfg, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& u);

/// Inverse of map_t1 off the range of Z: v = Ort(Z)^T x / |.|, u = Z^T x.
/// Throws SingularityError when |Pi_Z^perp x| <= cfg.tol_perp().
FiberCoords map_t2(const SphereConfig& cfg, const Eigen::VectorXd& x);

/// <x, y>_Z = (Pi_Z^perp x)^T Pi_Z^perp y, evaluated in the Schur form
/// x^T y - (Z^T x)^T (Z^T Z)^-1 (Z^T y).
double inner_z(const SphereConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Element of Stab_{O_n}(Z): Pi_Z + Ort(Z) Q Ort(Z)^T for orthogonal Q of size n - r.
Eigen::MatrixXd stabilizer_element(const SphereConfig& cfg, const Eigen::MatrixXd& q);

/// i.i.d. uniform points on S^{n-1} (normalized Gaussians).
std::vector<Eigen::VectorXd> sample_sphere(int n, int count, std::uint64_t seed);
std::vector<Eigen::VectorXd> sample_sphere(int n, int count, Rng& rng);
Eigen::VectorXd sample_sphere_point(int n, Rng& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, R diagonal made positive).
Eigen::MatrixXd sample_orthogonal(int n, std::uint64_t seed);
Eigen::MatrixXd sample_orthogonal(int n, Rng& rng);

/// Random configuration of r uniform unit vectors; redrawn until full rank.
SphereConfig sample_config(int n, int r, Rng& rng);

}  // namespace spherekern
