#include "spherekern/gegenbauer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spherekern/error.hpp"

namespace spherekern {

namespace {

constexpr double kCosineSlack = 1e-12;

void require_order(double alpha) {
  if (!(alpha >= kMinGegenbauerOrder)) {
    throw DomainError("Gegenbauer order " + std::to_string(alpha) + " below supported minimum " +
                      std::to_string(kMinGegenbauerOrder));
  }
}

}  // namespace

double clamp_cosine(double t) {
  if (t > 1.0 && t <= 1.0 + kCosineSlack) return 1.0;
  if (t < -1.0 && t >= -1.0 - kCosineSlack) return -1.0;
  return t;
}

double gegenbauer_weight_mass(double alpha) {
  // Beta(1/2, alpha + 1/2).
  return std::exp(std::lgamma(0.5) + std::lgamma(alpha + 0.5) - std::lgamma(alpha + 1.0));
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) sum += weights[j] * f(nodes[j]);
  return sum;
}

QuadratureRule gauss_gegenbauer(double alpha, int nodes) {
  require_order(alpha);
  if (nodes < 1) throw DomainError("quadrature needs at least one node");

  // Monic recurrence p_{k+1} = t p_k - beta_k p_{k-1} has zero diagonal and
  // beta_k = k (k + 2 alpha - 1) / (4 (k + alpha)(k + alpha - 1)).
  const auto m = static_cast<Eigen::Index>(nodes);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    const double k = static_cast<double>(i + 1);
    sub(i) = std::sqrt(k * (k + 2.0 * alpha - 1.0) / (4.0 * (k + alpha) * (k + alpha - 1.0)));
  }

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  const double mass = gegenbauer_weight_mass(alpha);
  if (m == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = mass;
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw QuadratureError("Golub-Welsch eigensolve failed");

  for (Eigen::Index j = 0; j < m; ++j) {
    const double v0 = solver.eigenvectors()(0, j);
    rule.nodes[static_cast<std::size_t>(j)] = solver.eigenvalues()(j);
    rule.weights[static_cast<std::size_t>(j)] = mass * v0 * v0;
  }
  // The weight is even, so symmetrize to remove eigensolver round-off.
  for (Eigen::Index j = 0; j < m / 2; ++j) {
    auto lo = static_cast<std::size_t>(j);
    auto hi = static_cast<std::size_t>(m - 1 - j);
    const double t = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
    rule.nodes[lo] = -t;
    rule.nodes[hi] = t;
    rule.weights[lo] = rule.weights[hi] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return rule;
}

double eval_gegenbauer(double alpha, int d, double t) {
  if (d < 0) throw DomainError("Gegenbauer degree must be non-negative");
  if (!(std::abs(t) <= 1.0 + kCosineSlack)) {
    throw DomainError("Gegenbauer argument " + std::to_string(t) + " outside [-1, 1]");
  }
  if (d == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * alpha * t;
  for (int k = 2; k <= d; ++k) {
    const double next = (2.0 * t * (k + alpha - 1.0) * cur - (k + 2.0 * alpha - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> eval_gegenbauer_all(double alpha, int max_degree, double t) {
  if (max_degree < 0) throw DomainError("Gegenbauer degree must be non-negative");
  if (!(std::abs(t) <= 1.0 + kCosineSlack)) {
    throw DomainError("Gegenbauer argument " + std::to_string(t) + " outside [-1, 1]");
  }
  std::vector<double> values(static_cast<std::size_t>(max_degree) + 1);
  values[0] = 1.0;
  if (max_degree >= 1) values[1] = 2.0 * alpha * t;
  for (int k = 2; k <= max_degree; ++k) {
    const auto i = static_cast<std::size_t>(k);
    values[i] = (2.0 * t * (k + alpha - 1.0) * values[i - 1] -
                 (k + 2.0 * alpha - 2.0) * values[i - 2]) /
                k;
  }
  return values;
}

double gegenbauer_norm(const QuadratureRule& rule, int k) {
  if (k < 0) throw DomainError("Gegenbauer degree must be non-negative");
  if (rule.exact_degree() < 2 * k) {
    throw QuadratureError("rule with " + std::to_string(rule.size()) +
                          " nodes cannot integrate degree " + std::to_string(2 * k));
  }
  return rule.integrate([&](double t) {
    const double p = eval_gegenbauer(rule.alpha, k, t);
    return p * p;
  });
}

double gegenbauer_norm(double alpha, int k) {
  if (k < 0) throw DomainError("Gegenbauer degree must be non-negative");
  return gegenbauer_norm(gauss_gegenbauer(alpha, k + 8), k);
}

double synthesize_univariate(std::span<const double> coefficients, double alpha, double t) {
  if (coefficients.empty()) return 0.0;
  const auto values = eval_gegenbauer_all(alpha, static_cast<int>(coefficients.size()) - 1, t);
  return std::inner_product(coefficients.begin(), coefficients.end(), values.begin(), 0.0);
}

GegenbauerBasis::GegenbauerBasis(double alpha, int max_degree, int extra_nodes)
    : alpha_(alpha), max_degree_(max_degree) {
  require_order(alpha);
  if (max_degree < 0) throw DomainError("max_degree must be non-negative");
  if (extra_nodes < 1) throw DomainError("extra_nodes must be positive");
  quad_ = gauss_gegenbauer(alpha, max_degree + extra_nodes);

  const std::size_t width = static_cast<std::size_t>(max_degree) + 1;
  node_values_.reserve(quad_.size() * width);
  norms_.assign(width, 0.0);
  for (std::size_t j = 0; j < quad_.size(); ++j) {
    const auto values = eval_gegenbauer_all(alpha, max_degree, quad_.nodes[j]);
    for (std::size_t k = 0; k < width; ++k) norms_[k] += quad_.weights[j] * values[k] * values[k];
    node_values_.insert(node_values_.end(), values.begin(), values.end());
  }
}

std::vector<double> GegenbauerBasis::expand(const std::function<double(double)>& f) const {
  const std::size_t width = norms_.size();
  std::vector<double> coeffs(width, 0.0);
  for (std::size_t j = 0; j < quad_.size(); ++j) {
    const double fw = f(quad_.nodes[j]) * quad_.weights[j];
    const double* row = node_values_.data() + j * width;
    for (std::size_t k = 0; k < width; ++k) coeffs[k] += fw * row[k];
  }
  for (std::size_t k = 0; k < width; ++k) coeffs[k] /= norms_[k];
  return coeffs;
}

double GegenbauerBasis::synthesize(std::span<const double> coefficients, double t) const {
  return synthesize_univariate(coefficients, alpha_, t);
}

std::vector<double> expand_univariate(const std::function<double(double)>& f, double alpha,
                                      int d_max, int extra_nodes) {
  return GegenbauerBasis(alpha, d_max, extra_nodes).expand(f);
}

}  // namespace spherekern
