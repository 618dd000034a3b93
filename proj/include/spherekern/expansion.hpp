#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spherekern/gegenbauer.hpp"
#include "spherekern/kernel.hpp"
#include "spherekern/sphere.hpp"

namespace spherekern {

inline constexpr int kDefaultExpansionDegree = 16;

/// Knobs shared by the analysis routines.
struct AnalysisOptions {
  /// Quadrature nodes beyond d_max + 1.
  int extra_nodes = 8;
  /// Sampled invariance precondition; disabled when trials == 0.
  int invariance_trials = 64;
  double invariance_tol = 1e-8;
  std::uint64_t seed = 0;
};

/// Schoenberg expansion K(x, y) = sum_k c_k P_k^{n/2-1}(x^T y) truncated at d_max.
struct ScalarExpansion {
  int n = 0;
  std::vector<double> coefficients;

  double alpha() const { return n / 2.0 - 1.0; }
  int d_max() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Coefficients of an O_n-invariant kernel. The double sphere integral is
/// reduced to one integral in t = x^T y, normalized so that analysis inverts
/// synth_schoenberg on degree <= d_max kernels.
ScalarExpansion schoenberg_coeffs(const Kernel& k, int d_max, const AnalysisOptions& opts = {});

Kernel synth_schoenberg(const ScalarExpansion& e);

/// (c_k)_b(a1, a2) for k = 0..d_max of a horizontally invariant cylinder kernel,
/// via the one-dimensional reduction along u1 = e_1, u2 = t e_1 + sqrt(1 - t^2) e_2.
std::vector<double> cylinder_coeffs(const CylinderKernel& k, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                                    int d_max, const AnalysisOptions& opts = {});

/// The same coefficients estimated from the full double integral over S^{n-1} x S^{n-1}
/// with `samples` Monte-Carlo pairs. Accurate to roughly 1e-2.
std::vector<double> cylinder_coeffs_monte_carlo(const CylinderKernel& k, const Eigen::VectorXd& b,
                                                const Eigen::VectorXd& a1,
                                                const Eigen::VectorXd& a2, int d_max,
                                                int samples, std::uint64_t seed);

/// One cosine feature a cos(w^T y + v^T offdiag(Y) + phase), where offdiag(Y)
/// lists Y_ij for i < j row by row.
struct CosineFeature {
  double amplitude = 0.0;
  Eigen::VectorXd frequency;  // length r
  Eigen::VectorXd coupling;   // length r (r - 1) / 2
  double phase = 0.0;
};

/// Feature map g(y, Y) in R^s; the induced c(y1, y2, Y) = g(y1, Y)^T g(y2, Y) is
/// positive definite in (y1, y2) for every Y.
class FeatureMap {
 public:
  FeatureMap(int r, std::vector<CosineFeature> features);

  /// `features` random cosine features with amplitudes in (0, amplitude_scale].
  static FeatureMap random(int r, int features, Rng& rng, double amplitude_scale = 1.0);
  /// Single feature with zero frequency: the constant kernel c == value (value >= 0).
  static FeatureMap constant(int r, double value);

  int r() const { return r_; }
  const std::vector<CosineFeature>& features() const { return features_; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& y, const Eigen::MatrixXd& gram) const;

 private:
  int r_;
  std::vector<CosineFeature> features_;
};

/// A coefficient kernel c(y1, y2, Y) of a bundle expansion, defined for Y > 0 in
/// Lambda^r and [1 y^T; y Y] in Lambda^{r+1}.
class CoefficientKernel {
 public:
  using Evaluator = std::function<double(const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                                         const Eigen::MatrixXd& gram)>;

  /// Arbitrary evaluator; positive definiteness is checked by sampling before synthesis.
  explicit CoefficientKernel(Evaluator eval);
  /// Positive definite by construction.
  explicit CoefficientKernel(FeatureMap map);

  double operator()(const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                    const Eigen::MatrixXd& gram) const {
    return eval_(y1, y2, gram);
  }
  bool pd_by_construction() const { return feature_map_.has_value(); }
  const std::optional<FeatureMap>& feature_map() const { return feature_map_; }

 private:
  Evaluator eval_;
  std::optional<FeatureMap> feature_map_;
};

/// K_Z(x, y) = sum_i c_i(Z^T x, Z^T y, Z^T Z) P_i^{(n-r)/2-1}(cos of the angle between
/// Pi_Z^perp x and Pi_Z^perp y).
struct BundleExpansion {
  int n = 0;
  int r = 0;
  std::vector<CoefficientKernel> coefficients;

  double alpha() const { return (n - r) / 2.0 - 1.0; }
  int d_max() const { return static_cast<int>(coefficients.size()) - 1; }

  /// Random feature-map coefficients for degrees 0..d_max.
  static BundleExpansion random(int n, int r, int d_max, int features, std::uint64_t seed);
};

/// Sampled check that c(y_i, y_j, Y) is positive semidefinite on fibers: each
/// trial draws Z and sphere points x_i and uses Y = Z^T Z, y_i = Z^T x_i.
PdCheck check_coefficient_pd(const CoefficientKernel& c, int n, int r, int trials, int points,
                             std::uint64_t seed, double tol = 1e-8);

struct SynthOptions {
  int fiber_trials = 10;
  int fiber_points = 30;
  std::uint64_t seed = 0;
  double tol = 1e-8;
};

/// Kernel on the bundle S^{n-1} x (S^{n-1})^r -> (S^{n-1})^r. Evaluation raises
/// SingularityError when x or y lies in R(Z) and RankError for degenerate Z.
/// Coefficients that are not feature maps must pass check_coefficient_pd first.
Kernel synth_bundle_kernel(const BundleExpansion& e, const SynthOptions& opts = {});

/// Per-configuration expansion of a Stab(Z)-invariant kernel,
///   K(x, y) = sum_k d_k(Z^T x, Z^T y) P_k^{(n-r)/2-1}(angle term),
/// with d_k obtained by transporting K through T1 onto the cylinder over
/// S^{n-r-1} and applying the cylinder analysis.
class MusinExpansion {
 public:
  MusinExpansion(Kernel k, SphereConfig cfg, int d_max, int extra_nodes = 8);

  const SphereConfig& config() const { return cfg_; }
  double alpha() const { return basis_.alpha(); }
  int d_max() const { return basis_.max_degree(); }

  /// d_0..d_{d_max} at (u1, u2) in B_Z x B_Z. SingularityError on the fiber boundary,
  /// i.e. when sqrt(1 - |gamma_Z(u)|^2) is below max(tol_perp, 1e-7).
  std::vector<double> coefficients(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) const;

  /// sum_k d_k(Z^T x, Z^T y) P_k(angle term) for x, y off R(Z).
  double reconstruct(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  double transported(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, double t) const;

  Kernel kernel_;
  SphereConfig cfg_;
  GegenbauerBasis basis_;
};

/// Builds a MusinExpansion after checking Stab(Z)-invariance by sampling.
MusinExpansion musin_coeffs(const Kernel& k, const SphereConfig& cfg, int d_max,
                            const AnalysisOptions& opts = {});

}  // namespace spherekern
