#include "spherekern/sphere.hpp"

#include <cmath>
#include <string>

#include "spherekern/error.hpp"

namespace spherekern {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Rng trial_rng(std::uint64_t seed, std::uint32_t purpose, std::uint64_t trial) {
  return make_rng(seed, (static_cast<std::uint64_t>(purpose) << 40) + trial + 1);
}

SphereConfig::SphereConfig(Eigen::MatrixXd z, std::optional<double> tol_rank, double tol_perp)
    : z_(std::move(z)), tol_perp_(tol_perp) {
  const auto n = z_.rows();
  const auto r = z_.cols();
  if (n < 1) throw DomainError("ambient dimension must be positive");
  if (r > n) throw RankError("configuration has more columns than the ambient dimension");
  for (Eigen::Index j = 0; j < r; ++j) {
    if (std::abs(z_.col(j).norm() - 1.0) > kUnitTolerance) {
      throw DomainError("column " + std::to_string(j) + " of Z is not a unit vector");
    }
  }

  if (r == 0) {
    singular_values_ = Eigen::VectorXd();
    tol_rank_ = tol_rank.value_or(0.0);
    full_rank_ = true;
    proj_.pi = Eigen::MatrixXd::Zero(n, n);
    proj_.pi_perp = Eigen::MatrixXd::Identity(n, n);
    proj_.ort = Eigen::MatrixXd::Identity(n, n);
    return;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z_);
    singular_values_ = svd.singularValues();
    tol_rank_ = tol_rank.value_or(kDefaultRankFactor * singular_values_(0));
    full_rank_ = singular_values_(r - 1) > tol_rank_;
  }
  if (!full_rank_) return;

  // Householder QR gives both Q1 (range) and the trailing columns (complement).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z_);
  Eigen::MatrixXd q = qr.householderQ();
  q1_ = q.leftCols(r);
  r_ = qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();

  Eigen::MatrixXd ort = q.rightCols(n - r);
  for (Eigen::Index j = 0; j < ort.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(ort(i, j)) > 1e-12) {
        if (ort(i, j) < 0.0) ort.col(j) *= -1.0;
        break;
      }
    }
  }
  // Pi_Z = Z (Z^T Z)^-1 Z^T = Q1 Q1^T.
  proj_.pi = q1_ * q1_.transpose();
  proj_.pi_perp = Eigen::MatrixXd::Identity(n, n) - proj_.pi;
  proj_.ort = std::move(ort);
}

SphereConfig SphereConfig::empty(int n) { return SphereConfig(Eigen::MatrixXd(n, 0)); }

SphereConfig SphereConfig::normalized(Eigen::MatrixXd z) {
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double norm = z.col(j).norm();
    if (norm == 0.0) throw DomainError("cannot normalize a zero column");
    z.col(j) /= norm;
  }
  return SphereConfig(std::move(z));
}

void SphereConfig::require_full_rank() const {
  if (!full_rank_) {
    throw RankError("configuration is rank deficient (smallest singular value " +
                    std::to_string(singular_values_(singular_values_.size() - 1)) +
                    " <= " + std::to_string(tol_rank_) + ")");
  }
}

const ProjectorPair& SphereConfig::projectors() const {
  require_full_rank();
  return proj_;
}

Eigen::VectorXd SphereConfig::whiten(const Eigen::VectorXd& x) const {
  require_full_rank();
  if (r() == 0) return Eigen::VectorXd();
  // Z^T Z = R^T R, so (Z^T x)^T (Z^T Z)^-1 (Z^T y) = (R^-T Z^T x)^T (R^-T Z^T y).
  return r_.transpose().triangularView<Eigen::Lower>().solve(z_.transpose() * x);
}

Eigen::VectorXd SphereConfig::gamma(const Eigen::VectorXd& u) const {
  require_full_rank();
  if (u.size() != r()) throw DomainError("gamma_Z expects a vector of length r");
  if (r() == 0) return Eigen::VectorXd::Zero(n());
  // Z (Z^T Z)^-1 u = Q1 R^-T u.
  return q1_ * r_.transpose().triangularView<Eigen::Lower>().solve(u);
}

Eigen::VectorXd SphereConfig::phi(const Eigen::VectorXd& v) const {
  const auto& p = projectors();
  if (v.size() != p.ort.cols()) throw DomainError("phi_Z expects a vector of length n - r");
  return p.ort * v;
}

ProjectorPair projectors(const SphereConfig& cfg) { return cfg.projectors(); }

Eigen::VectorXd map_t1(const SphereConfig& cfg, const Eigen::VectorXd& v,
                       const Eigen::VectorXd& u) {
  if (std::abs(v.norm() - 1.0) > 1e-10) throw DomainError("map_t1 expects a unit vector v");
  const Eigen::VectorXd g = cfg.gamma(u);
  const double g2 = g.squaredNorm();
  if (std::sqrt(g2) > 1.0 + 1e-12) throw DomainError("map_t1: |gamma_Z(u)| exceeds 1");
  return cfg.phi(v) * std::sqrt(std::max(0.0, 1.0 - g2)) + g;
}

FiberCoords map_t2(const SphereConfig& cfg, const Eigen::VectorXd& x) {
  const auto& p = cfg.projectors();
  if (x.size() != cfg.n()) throw DomainError("map_t2: dimension mismatch");
  Eigen::VectorXd v = p.ort.transpose() * x;
  const double perp = v.norm();
  if (perp <= cfg.tol_perp()) {
    throw SingularityError("map_t2: point lies in the range of Z (|Pi_perp x| = " +
                           std::to_string(perp) + ")");
  }
  return {v / perp, cfg.z().transpose() * x};
}

double inner_z(const SphereConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != cfg.n() || y.size() != cfg.n()) throw DomainError("inner_z: dimension mismatch");
  if (cfg.r() == 0) return x.dot(y);
  return x.dot(y) - cfg.whiten(x).dot(cfg.whiten(y));
}

Eigen::MatrixXd stabilizer_element(const SphereConfig& cfg, const Eigen::MatrixXd& q) {
  const auto& p = cfg.projectors();
  const auto m = p.ort.cols();
  if (q.rows() != m || q.cols() != m) {
    throw DomainError("stabilizer_element: Q must be " + std::to_string(m) + "x" +
                      std::to_string(m));
  }
  if ((q.transpose() * q - Eigen::MatrixXd::Identity(m, m)).norm() > 1e-10) {
    throw DomainError("stabilizer_element: Q is not orthogonal");
  }
  return p.pi + p.ort * q * p.ort.transpose();
}

Eigen::VectorXd sample_sphere_point(int n, Rng& rng) {
  if (n < 1) throw DomainError("sphere dimension must be positive");
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) x(i) = normal(rng);
    norm = x.norm();
  } while (norm < 1e-300);
  return x / norm;
}

std::vector<Eigen::VectorXd> sample_sphere(int n, int count, Rng& rng) {
  if (n < 1) throw DomainError("sphere dimension must be positive");
  if (count < 0) throw DomainError("sample count must be non-negative");
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) points.push_back(sample_sphere_point(n, rng));
  return points;
}

std::vector<Eigen::VectorXd> sample_sphere(int n, int count, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_sphere(n, count, rng);
}

Eigen::MatrixXd sample_orthogonal(int n, Rng& rng) {
  if (n < 1) throw DomainError("matrix dimension must be positive");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  for (int j = 0; j < n; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::MatrixXd sample_orthogonal(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_orthogonal(n, rng);
}

SphereConfig sample_config(int n, int r, Rng& rng) {
  if (r < 0 || r > n) throw DomainError("sample_config: need 0 <= r <= n");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd z(n, r);
    for (int j = 0; j < r; ++j) z.col(j) = sample_sphere_point(n, rng);
    SphereConfig cfg(std::move(z));
    if (cfg.full_rank()) return cfg;
  }
  throw RankError("sample_config: could not draw a full-rank configuration");
}

}  // namespace spherekern
