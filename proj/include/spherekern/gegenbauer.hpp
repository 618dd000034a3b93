#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spherekern {

/// Smallest order accepted by basis construction and quadrature. Below it the
/// three-term recurrence degenerates (P_1^0 vanishes identically).
inline constexpr double kMinGegenbauerOrder = 0.25;

/// Gauss rule for the weight (1 - t^2)^(alpha - 1/2) on [-1, 1].
///
/// An m-node rule integrates polynomials of degree <= 2m - 1 exactly against
/// the weight. Nodes are sorted ascending.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha = 0.0;

  std::size_t size() const { return nodes.size(); }
  /// Highest polynomial degree integrated exactly.
  int exact_degree() const { return 2 * static_cast<int>(nodes.size()) - 1; }
  double integrate(const std::function<double(double)>& f) const;
};

/// Golub-Welsch construction from the symmetric Jacobi matrix of the monic
/// Gegenbauer recurrence.
QuadratureRule gauss_gegenbauer(double alpha, int nodes);

/// Integral of (1 - t^2)^(alpha - 1/2) over [-1, 1].
double gegenbauer_weight_mass(double alpha);

/// P_d^alpha(t) by forward recurrence:
///   d P_d = 2 t (d + alpha - 1) P_{d-1} - (d + 2 alpha - 2) P_{d-2},
/// with P_0 = 1 and P_1 = 2 alpha t. Throws DomainError for d < 0 or |t| > 1 + 1e-12.
double eval_gegenbauer(double alpha, int d, double t);

/// P_0^alpha(t) .. P_{max_degree}^alpha(t) in one recurrence sweep.
std::vector<double> eval_gegenbauer_all(double alpha, int max_degree, double t);

/// Squared weighted L2 norm of P_k^alpha using a rule with k + 8 nodes.
double gegenbauer_norm(double alpha, int k);

/// Same, on a caller-provided rule. Throws QuadratureError if the rule is not
/// exact for degree 2k.
double gegenbauer_norm(const QuadratureRule& rule, int k);

/// Sum_k coefficients[k] * P_k^alpha(t).
double synthesize_univariate(std::span<const double> coefficients, double alpha, double t);

/// Evaluator for the Gegenbauer family of one order, with precomputed norms and
/// a quadrature rule of max_degree + extra_nodes nodes.
class GegenbauerBasis {
 public:
  GegenbauerBasis(double alpha, int max_degree, int extra_nodes = 8);

  double alpha() const { return alpha_; }
  int max_degree() const { return max_degree_; }
  const std::vector<double>& norms() const { return norms_; }
  double norm(int k) const { return norms_.at(static_cast<std::size_t>(k)); }
  const QuadratureRule& quadrature() const { return quad_; }

  double eval(int d, double t) const { return eval_gegenbauer(alpha_, d, t); }
  std::vector<double> eval_all(double t) const {
    return eval_gegenbauer_all(alpha_, max_degree_, t);
  }

  /// c_k = (1 / p_k) * integral of f P_k against the weight, k = 0..max_degree.
  std::vector<double> expand(const std::function<double(double)>& f) const;

  double synthesize(std::span<const double> coefficients, double t) const;

 private:
  double alpha_;
  int max_degree_;
  QuadratureRule quad_;
  std::vector<double> norms_;
  // P_k(node_j), row-major by node.
  std::vector<double> node_values_;
};

/// Gegenbauer coefficients of f up to degree d_max, with a rule of d_max + extra_nodes nodes.
std::vector<double> expand_univariate(const std::function<double(double)>& f, double alpha,
                                      int d_max, int extra_nodes = 8);

/// Clamp a computed cosine into [-1, 1]; values further than 1e-12 outside are left alone
/// so that eval_gegenbauer still reports them.
double clamp_cosine(double t);

}  // namespace spherekern
