#include "spherekern/addition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spherekern/error.hpp"
#include "spherekern/gegenbauer.hpp"

namespace spherekern {

namespace {

constexpr double kMinAdditionOrder = 0.75;
constexpr int kMaxAdditionDegree = 30;
constexpr double kFitTolerance = 1e-9;
constexpr double kMaxCondition = 1e12;

std::vector<double> chebyshev_angles(int count) {
  constexpr double lo = 0.2;
  const double hi = std::numbers::pi - 0.2;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    out[static_cast<std::size_t>(j)] =
        0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * count));
  }
  return out;
}

// Term i of the right-hand side without its constant.
double rhs_term(double alpha, int k, int i, double sin_th, double sin_ta, double cos_ga,
                double cos_th, double cos_ta) {
  const double inner = i == 0 ? 1.0 : eval_gegenbauer(alpha - 0.5, i, cos_ga);
  return std::pow(sin_th * sin_ta, i) * inner * eval_gegenbauer(alpha + i, k - i, cos_th) *
         eval_gegenbauer(alpha + i, k - i, cos_ta);
}

double ratio_cosine(double num, double a, double b) {
  return std::clamp(num / std::sqrt(a * b), -1.0, 1.0);
}

}  // namespace

AdditionConstants addition_constants(double alpha, int k, int grid) {
  if (!(alpha >= kMinAdditionOrder)) {
    throw DomainError("addition constants need alpha >= 0.75, got " + std::to_string(alpha));
  }
  if (k < 0 || k > kMaxAdditionDegree) throw DomainError("addition degree must be in [0, 30]");

  AdditionConstants out;
  out.alpha = alpha;
  out.k = k;
  if (k == 0) {
    out.c = {1.0};
    return out;
  }

  const int p = grid > 0 ? grid : std::max(4, k + 2);
  if (p < k + 1) {
    throw IllConditionedError("grid of " + std::to_string(p) +
                              " angles per axis cannot determine " + std::to_string(k + 1) +
                              " constants; use a larger sample set");
  }
  const auto angles = chebyshev_angles(p);
  const Eigen::Index rows = static_cast<Eigen::Index>(p) * p * p;
  Eigen::MatrixXd a(rows, k + 1);
  Eigen::VectorXd rhs(rows);
  Eigen::Index row = 0;
  for (double th : angles) {
    for (double ta : angles) {
      for (double ga : angles) {
        const double ct = std::cos(th), st = std::sin(th);
        const double cu = std::cos(ta), su = std::sin(ta);
        const double cg = std::cos(ga);
        rhs(row) = eval_gegenbauer(alpha, k, clamp_cosine(ct * cu + st * su * cg));
        for (int i = 0; i <= k; ++i) a(row, i) = rhs_term(alpha, k, i, st, su, cg, ct, cu);
        ++row;
      }
    }
  }

  const Eigen::VectorXd scale = a.colwise().norm().transpose();
  if ((scale.array() == 0.0).any()) throw IllConditionedError("addition fit has a zero column");
  const Eigen::MatrixXd scaled = a * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kMaxCondition) {
    throw IllConditionedError("addition fit is ill-conditioned; use a larger sample set");
  }
  const Eigen::VectorXd c = svd.solve(rhs).cwiseQuotient(scale);
  const double residual = (a * c - rhs).cwiseAbs().maxCoeff();
  const double magnitude = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  if (residual > kFitTolerance * magnitude) {
    throw IllConditionedError("addition fit residual " + std::to_string(residual) +
                              " too large; use a larger sample set");
  }
  out.c.assign(c.data(), c.data() + c.size());
  out.fit_residual = residual;
  return out;
}

AdditionAngles addition_angles(const SphereConfig& cfg, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Eigen::VectorXd& q) {
  const double tol2 = cfg.tol_perp() * cfg.tol_perp();
  const double xx = inner_z(cfg, x, x);
  const double yy = inner_z(cfg, y, y);
  const double qq = inner_z(cfg, q, q);
  if (xx <= tol2 || yy <= tol2 || qq <= tol2) {
    throw SingularityError("addition angles undefined: a point lies in the range of Z");
  }
  Eigen::MatrixXd zq(cfg.n(), cfg.r() + 1);
  zq << cfg.z(), q;
  const SphereConfig ext(zq);
  const double xx_q = std::max(0.0, inner_z(ext, x, x));
  const double yy_q = std::max(0.0, inner_z(ext, y, y));

  AdditionAngles out;
  out.cos_theta = ratio_cosine(inner_z(cfg, x, q), xx, qq);
  out.sin_theta = std::sqrt(1.0 - out.cos_theta * out.cos_theta);
  out.cos_tau = ratio_cosine(inner_z(cfg, y, q), yy, qq);
  out.sin_tau = std::sqrt(1.0 - out.cos_tau * out.cos_tau);
  out.ratio_x = std::sqrt(xx_q / xx);
  out.ratio_y = std::sqrt(yy_q / yy);
  out.cos_gamma = (xx_q <= tol2 || yy_q <= tol2) ? 0.0 : ratio_cosine(inner_z(ext, x, y), xx_q, yy_q);
  out.target = ratio_cosine(inner_z(cfg, x, y), xx, yy);
  return out;
}

double addition_lhs(const AdditionConstants& c, const AdditionAngles& a) {
  return eval_gegenbauer(c.alpha, c.k, a.target);
}

double addition_rhs(const AdditionConstants& c, const AdditionAngles& a) {
  double sum = 0.0;
  const double damp = a.ratio_x * a.ratio_y;
  for (int i = 0; i <= c.k; ++i) {
    // Terms with i >= 1 carry (ratio_x ratio_y)^i and vanish when the cosine of gamma is undefined.
    if (i > 0 && damp == 0.0) break;
    const double inner = i == 0 ? 1.0 : eval_gegenbauer(c.alpha - 0.5, i, a.cos_gamma);
    sum += c.c[static_cast<std::size_t>(i)] * std::pow(damp, i) * inner *
           eval_gegenbauer(c.alpha + i, c.k - i, a.cos_theta) *
           eval_gegenbauer(c.alpha + i, c.k - i, a.cos_tau);
  }
  return sum;
}

AdditionReport verify_addition(int n, int r, int k_max, int samples, std::uint64_t seed,
                               double tol) {
  // alpha = (n - r)/2 - 1 must reach the fitting range of addition_constants.
  if (r < 0 || n < r + 4) throw DomainError("verify_addition needs n >= r + 4");
  if (samples < 1) throw DomainError("verify_addition needs at least one sample");
  if (k_max < 0) throw DomainError("degree must be non-negative");
  const double alpha = (n - r) / 2.0 - 1.0;

  AdditionReport report;
  report.n = n;
  report.r = r;
  report.k_max = k_max;
  report.samples = samples;
  report.seed = seed;
  report.tol = tol;
  for (int k = 0; k <= k_max; ++k) report.constants.push_back(addition_constants(alpha, k));
  report.max_residual.assign(static_cast<std::size_t>(k_max) + 1, 0.0);

  Rng rng = make_rng(seed);
  for (int s = 0; s < samples; ++s) {
    std::optional<AdditionAngles> angles;
    for (int attempt = 0; attempt < 100 && !angles; ++attempt) {
      const SphereConfig cfg = sample_config(n, r, rng);
      const Eigen::VectorXd x = sample_sphere_point(n, rng);
      const Eigen::VectorXd y = sample_sphere_point(n, rng);
      const Eigen::VectorXd q = sample_sphere_point(n, rng);
      try {
        auto a = addition_angles(cfg, x, y, q);
        const double floor = cfg.tol_perp();
        if (a.ratio_x > floor && a.ratio_y > floor) angles = a;
      } catch (const SingularityError&) {
      } catch (const RankError&) {
      }
    }
    if (!angles) throw SingularityError("verify_addition: could not draw a non-degenerate sample");
    for (int k = 0; k <= k_max; ++k) {
      const auto& c = report.constants[static_cast<std::size_t>(k)];
      const double res = std::abs(addition_lhs(c, *angles) - addition_rhs(c, *angles));
      auto& slot = report.max_residual[static_cast<std::size_t>(k)];
      slot = std::max(slot, res);
    }
  }
  report.overall_residual = *std::max_element(report.max_residual.begin(), report.max_residual.end());
  report.pass = report.overall_residual < tol;
  return report;
}

}  // namespace spherekern
