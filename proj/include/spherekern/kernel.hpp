#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spherekern/sphere.hpp"

namespace spherekern {

/// Where a kernel lives. r == 0: a kernel on S^{n-1}. r > 0: a kernel on the
/// projection bundle S^{n-1} x (S^{n-1})^r -> (S^{n-1})^r, i.e. a function
/// K(x, y, Z) that is a kernel in (x, y) for each configuration Z.
struct KernelDomain {
  int n = 0;
  int r = 0;
  bool operator==(const KernelDomain&) const = default;
};

/// Symmetric continuous function evaluated on pairs of sphere points, with an
/// optional base configuration. Evaluators must be pure: they are called
/// concurrently by the verification routines.
class Kernel {
 public:
  using Evaluator =
      std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&, const SphereConfig&)>;
  using SphereEvaluator = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  Kernel(KernelDomain domain, Evaluator eval, std::string name = {});

  /// Kernel on S^{n-1} that ignores any configuration.
  static Kernel on_sphere(int n, SphereEvaluator eval, std::string name = {});

  const KernelDomain& domain() const { return domain_; }
  int n() const { return domain_.n; }
  int r() const { return domain_.r; }
  bool is_bundle() const { return domain_.r > 0; }
  const std::string& name() const { return name_; }

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                    const SphereConfig& cfg) const;

 private:
  KernelDomain domain_;
  Evaluator eval_;
  std::string name_;
};

/// A sphere kernel viewed on the bundle with r-column configurations: K(x, y, Z) = K(x, y).
/// Bundle kernels and r == 0 are returned unchanged.
Kernel lift_to_bundle(const Kernel& k, int r);

Kernel kernel_sum(const Kernel& a, const Kernel& b);
Kernel kernel_product(const Kernel& a, const Kernel& b);

/// Built-in kernels on S^{n-1}: "dot", "neg-dot", "const", "coord" (x_1 y_1, not
/// invariant) and "gegenbauer:k" (P_k^{n/2-1}(x^T y)). Throws DomainError for
/// unknown names.
Kernel builtin_kernel(const std::string& name, int n);

/// Gram matrix G_ij = K(p_i, p_j[, Z]). Only the upper triangle is evaluated.
Eigen::MatrixXd gram(const Kernel& k, std::span<const Eigen::VectorXd> points);
Eigen::MatrixXd gram(const Kernel& k, std::span<const Eigen::VectorXd> points,
                     const SphereConfig& cfg);

struct GramReport {
  int m = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// tol * max(1, ||G||_inf), with the max-row-sum norm.
  double scaled_tolerance = 0.0;
  bool pass = false;
};

GramReport gram_report(const Eigen::MatrixXd& g, double tol = 1e-8);

/// Point set on which a Gram matrix had an eigenvalue below the scaled tolerance.
struct PdWitness {
  int trial = 0;
  std::vector<Eigen::VectorXd> points;
  Eigen::MatrixXd z;  // n x r; empty for sphere kernels
  double min_eigenvalue = 0.0;
};

struct PdCheck {
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<GramReport> trials;
  bool pass = false;
  std::optional<PdWitness> witness;
};

/// Randomized positive-definiteness test. Each trial draws `points` uniform
/// sphere points (and a random full-rank Z for bundle kernels) and inspects
/// the Gram spectrum. Sampling gives evidence only: a pass is not a proof,
/// while a failure comes with the offending point set.
PdCheck check_pd(const Kernel& k, int trials, int points, std::uint64_t seed, double tol = 1e-8);

struct InvarianceReport {
  std::uint64_t seed = 0;
  int trials = 0;
  double tol = 0.0;
  double max_residual = 0.0;
  bool pass = false;
};

/// max |K(Mx, My, MZ) - K(x, y, Z)| over random x, y, Z and Haar M in O_n.
InvarianceReport check_invariance(const Kernel& k, int trials, std::uint64_t seed,
                                  double tol = 1e-9);

/// max |K(Mx, My) - K(x, y)| for M drawn from Stab_{O_n}(Z) with Z fixed.
InvarianceReport check_stabilizer_invariance(const Kernel& k, const SphereConfig& cfg,
                                             int trials, std::uint64_t seed, double tol = 1e-9);

/// Monte-Carlo estimate of the double integral of K(x, y) g(x) g(y) against
/// the normalized surface measure, as the V-statistic over `samples` points.
/// A low-precision cross-check (about 1e-2) of the Gram-based test.
double bochner_form(const Kernel& k, const std::function<double(const Eigen::VectorXd&)>& g,
                    int samples, std::uint64_t seed);

/// Kernel on a cylinder S^{n-1} x A over a bundle A -> B. The evaluator takes
/// the base point b and two fiber points (a1, u1), (a2, u2) with u_i on S^{n-1}.
struct CylinderKernel {
  using Evaluator = std::function<double(const Eigen::VectorXd& b, const Eigen::VectorXd& a1,
                                         const Eigen::VectorXd& u1, const Eigen::VectorXd& a2,
                                         const Eigen::VectorXd& u2)>;
  int n = 0;
  Evaluator eval;

  double operator()(const Eigen::VectorXd& b, const Eigen::VectorXd& a1,
                    const Eigen::VectorXd& u1, const Eigen::VectorXd& a2,
                    const Eigen::VectorXd& u2) const {
    return eval(b, a1, u1, a2, u2);
  }
};

/// Gram matrix of K_b on the points (a_i, u_i).
Eigen::MatrixXd cylinder_gram(const CylinderKernel& k, const Eigen::VectorXd& b,
                              std::span<const Eigen::VectorXd> a,
                              std::span<const Eigen::VectorXd> u);

/// Horizontal invariance: M in O_n acts on the sphere factor only.
InvarianceReport check_horizontal_invariance(const CylinderKernel& k, const Eigen::VectorXd& b,
                                             const Eigen::VectorXd& a1,
                                             const Eigen::VectorXd& a2, int trials,
                                             std::uint64_t seed, double tol = 1e-9);

}  // namespace spherekern
