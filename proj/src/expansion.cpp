#include "spherekern/expansion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spherekern/error.hpp"
#include "spherekern/parallel.hpp"

namespace spherekern {

namespace {

void require_degree(int d_max) {
  if (d_max < 0) throw DomainError("expansion degree must be non-negative");
}

// Unit vectors e_1 and t e_1 + sqrt(1 - t^2) e_2 in R^m: a pair with inner product t.
constexpr double kMinFiberRadius = 1e-7;

Eigen::VectorXd first_axis(int m) { return Eigen::VectorXd::Unit(m, 0); }

Eigen::VectorXd rotated_axis(int m, double t) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  v(0) = t;
  v(1) = std::sqrt(std::max(0.0, 1.0 - t * t));
  return v;
}

Eigen::VectorXd off_diagonal(const Eigen::MatrixXd& y) {
  const auto r = y.rows();
  Eigen::VectorXd out(r * (r - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = i + 1; j < r; ++j) out(k++) = y(i, j);
  return out;
}

}  // namespace

ScalarExpansion schoenberg_coeffs(const Kernel& k, int d_max, const AnalysisOptions& opts) {
  require_degree(d_max);
  if (k.is_bundle()) throw DomainError("schoenberg_coeffs expects a kernel on the sphere");
  const int n = k.n();
  if (n < 3) throw DomainError("schoenberg_coeffs needs n >= 3");
  if (opts.invariance_trials > 0) {
    const auto inv = check_invariance(k, opts.invariance_trials, opts.seed, opts.invariance_tol);
    if (!inv.pass) {
      throw InvarianceError("kernel is not O_n-invariant (residual " +
                            std::to_string(inv.max_residual) + ")");
    }
  }
  const GegenbauerBasis basis(n / 2.0 - 1.0, d_max, opts.extra_nodes);
  const Eigen::VectorXd e1 = first_axis(n);
  ScalarExpansion e;
  e.n = n;
  e.coefficients = basis.expand([&](double t) { return k(e1, rotated_axis(n, t)); });
  return e;
}

Kernel synth_schoenberg(const ScalarExpansion& e) {
  if (e.coefficients.empty()) throw DomainError("expansion has no coefficients");
  if (e.n < 3) throw DomainError("synth_schoenberg needs n >= 3");
  const double alpha = e.alpha();
  return Kernel::on_sphere(
      e.n,
      [alpha, c = e.coefficients](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return synthesize_univariate(c, alpha, clamp_cosine(x.dot(y)));
      },
      "schoenberg");
}

std::vector<double> cylinder_coeffs(const CylinderKernel& k, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                                    int d_max, const AnalysisOptions& opts) {
  require_degree(d_max);
  if (k.n < 3) throw DomainError("cylinder_coeffs needs a sphere factor with n >= 3");
  if (opts.invariance_trials > 0) {
    const auto inv =
        check_horizontal_invariance(k, b, a1, a2, opts.invariance_trials, opts.seed,
                                    opts.invariance_tol);
    if (!inv.pass) {
      throw InvarianceError("cylinder kernel is not horizontally invariant (residual " +
                            std::to_string(inv.max_residual) + ")");
    }
  }
  const GegenbauerBasis basis(k.n / 2.0 - 1.0, d_max, opts.extra_nodes);
  const Eigen::VectorXd e1 = first_axis(k.n);
  return basis.expand([&](double t) { return k(b, a1, e1, a2, rotated_axis(k.n, t)); });
}

std::vector<double> cylinder_coeffs_monte_carlo(const CylinderKernel& k, const Eigen::VectorXd& b,
                                                const Eigen::VectorXd& a1,
                                                const Eigen::VectorXd& a2, int d_max,
                                                int samples, std::uint64_t seed) {
  require_degree(d_max);
  if (samples < 1) throw DomainError("need at least one Monte-Carlo sample");
  const double alpha = k.n / 2.0 - 1.0;
  const GegenbauerBasis basis(alpha, d_max);
  Rng rng = make_rng(seed);
  std::vector<double> sums(static_cast<std::size_t>(d_max) + 1, 0.0);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd u1 = sample_sphere_point(k.n, rng);
    const Eigen::VectorXd u2 = sample_sphere_point(k.n, rng);
    const double value = k(b, a1, u1, a2, u2);
    const auto p = eval_gegenbauer_all(alpha, d_max, clamp_cosine(u1.dot(u2)));
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += value * p[i];
  }
  // Under the uniform probability measure t = u1^T u2 has density w(t) / mass.
  const double mass = gegenbauer_weight_mass(alpha);
  for (std::size_t i = 0; i < sums.size(); ++i) {
    sums[i] = mass * sums[i] / samples / basis.norm(static_cast<int>(i));
  }
  return sums;
}

FeatureMap::FeatureMap(int r, std::vector<CosineFeature> features)
    : r_(r), features_(std::move(features)) {
  if (r < 0) throw DomainError("feature map base rank must be non-negative");
  const Eigen::Index pairs = static_cast<Eigen::Index>(r) * (r - 1) / 2;
  for (const auto& f : features_) {
    if (f.frequency.size() != r || f.coupling.size() != pairs) {
      throw DomainError("cosine feature has the wrong shape for r = " + std::to_string(r));
    }
  }
}

FeatureMap FeatureMap::random(int r, int features, Rng& rng, double amplitude_scale) {
  if (features < 1) throw DomainError("need at least one feature");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index pairs = static_cast<Eigen::Index>(r) * (r - 1) / 2;
  std::vector<CosineFeature> out;
  for (int j = 0; j < features; ++j) {
    CosineFeature f;
    f.amplitude = amplitude_scale * (1.0 - unit(rng));
    f.frequency.resize(r);
    for (int i = 0; i < r; ++i) f.frequency(i) = normal(rng);
    f.coupling.resize(pairs);
    for (Eigen::Index i = 0; i < pairs; ++i) f.coupling(i) = normal(rng);
    f.phase = 2.0 * std::numbers::pi * unit(rng);
    out.push_back(std::move(f));
  }
  return FeatureMap(r, std::move(out));
}

FeatureMap FeatureMap::constant(int r, double value) {
  if (value < 0.0) throw DomainError("constant coefficient must be non-negative");
  CosineFeature f;
  f.amplitude = std::sqrt(value);
  f.frequency = Eigen::VectorXd::Zero(r);
  f.coupling = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r) * (r - 1) / 2);
  return FeatureMap(r, {f});
}

Eigen::VectorXd FeatureMap::operator()(const Eigen::VectorXd& y, const Eigen::MatrixXd& gram) const {
  if (y.size() != r_ || gram.rows() != r_ || gram.cols() != r_) {
    throw DomainError("feature map argument has the wrong dimension");
  }
  const Eigen::VectorXd off = off_diagonal(gram);
  Eigen::VectorXd g(static_cast<Eigen::Index>(features_.size()));
  for (std::size_t j = 0; j < features_.size(); ++j) {
    const auto& f = features_[j];
    g(static_cast<Eigen::Index>(j)) =
        f.amplitude * std::cos(f.frequency.dot(y) + f.coupling.dot(off) + f.phase);
  }
  return g;
}

CoefficientKernel::CoefficientKernel(Evaluator eval) : eval_(std::move(eval)) {
  if (!eval_) throw DomainError("coefficient kernel evaluator is empty");
}

CoefficientKernel::CoefficientKernel(FeatureMap map) : feature_map_(std::move(map)) {
  eval_ = [g = *feature_map_](const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                              const Eigen::MatrixXd& gram) {
    return g(y1, gram).dot(g(y2, gram));
  };
}

BundleExpansion BundleExpansion::random(int n, int r, int d_max, int features,
                                        std::uint64_t seed) {
  require_degree(d_max);
  Rng rng = make_rng(seed);
  BundleExpansion e;
  e.n = n;
  e.r = r;
  for (int i = 0; i <= d_max; ++i) {
    e.coefficients.emplace_back(FeatureMap::random(r, features, rng, 1.0 / (1.0 + i)));
  }
  return e;
}

PdCheck check_coefficient_pd(const CoefficientKernel& c, int n, int r, int trials, int points,
                             std::uint64_t seed, double tol) {
  if (points < 2) throw DomainError("need at least two points per trial");
  if (trials < 1) throw DomainError("need at least one trial");
  struct TrialResult {
    GramReport report;
    std::vector<Eigen::VectorXd> points;
    Eigen::MatrixXd z;
  };
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  parallel_for(results.size(), [&](std::size_t t) {
    Rng rng = trial_rng(seed, 5, t);
    const SphereConfig cfg = sample_config(n, r, rng);
    auto xs = sample_sphere(n, points, rng);
    const Eigen::MatrixXd y = cfg.gram();
    std::vector<Eigen::VectorXd> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(cfg.z().transpose() * x);
    Eigen::MatrixXd g(points, points);
    for (int i = 0; i < points; ++i) {
      for (int j = i; j < points; ++j) {
        g(i, j) = c(ys[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)], y);
        g(j, i) = g(i, j);
      }
    }
    results[t].report = gram_report(g, tol);
    if (!results[t].report.pass) {
      results[t].points = std::move(xs);
      results[t].z = cfg.z();
    }
  });
  PdCheck check;
  check.seed = seed;
  check.tol = tol;
  check.pass = true;
  for (std::size_t t = 0; t < results.size(); ++t) {
    check.trials.push_back(results[t].report);
    if (!results[t].report.pass && check.pass) {
      check.pass = false;
      check.witness = PdWitness{static_cast<int>(t), std::move(results[t].points),
                                std::move(results[t].z), results[t].report.min_eigenvalue};
    }
  }
  return check;
}

Kernel synth_bundle_kernel(const BundleExpansion& e, const SynthOptions& opts) {
  if (e.coefficients.empty()) throw DomainError("bundle expansion has no coefficients");
  if (e.r < 0 || e.n < e.r + 2) throw DomainError("bundle synthesis needs n >= r + 2");
  const double alpha = e.alpha();
  if (alpha < kMinGegenbauerOrder) {
    throw DomainError("Gegenbauer order (n - r)/2 - 1 = " + std::to_string(alpha) +
                      " is below the supported minimum");
  }
  for (std::size_t i = 0; i < e.coefficients.size(); ++i) {
    const auto& c = e.coefficients[i];
    if (c.pd_by_construction()) continue;
    const auto check = check_coefficient_pd(c, e.n, e.r, opts.fiber_trials, opts.fiber_points,
                                            opts.seed + i, opts.tol);
    if (!check.pass) {
      throw NotPositiveDefiniteError("coefficient kernel " + std::to_string(i) +
                                     " is not positive definite on sampled fibers");
    }
  }

  const int r = e.r;
  return Kernel(
      {e.n, e.r},
      [alpha, r, coeffs = e.coefficients](const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                          const SphereConfig& cfg) {
        if (cfg.r() != r) throw DomainError("configuration has the wrong number of columns");
        const auto& p = cfg.projectors();
        const Eigen::VectorXd px = p.ort.transpose() * x;
        const Eigen::VectorXd py = p.ort.transpose() * y;
        const double nx = px.norm();
        const double ny = py.norm();
        if (nx <= cfg.tol_perp() || ny <= cfg.tol_perp()) {
          throw SingularityError("bundle kernel evaluated at a point in the range of Z");
        }
        const double t = clamp_cosine(px.dot(py) / (nx * ny));
        const Eigen::VectorXd u1 = cfg.z().transpose() * x;
        const Eigen::VectorXd u2 = cfg.z().transpose() * y;
        const Eigen::MatrixXd gram = cfg.gram();
        const auto poly = eval_gegenbauer_all(alpha, static_cast<int>(coeffs.size()) - 1, t);
        double sum = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) sum += coeffs[i](u1, u2, gram) * poly[i];
        return sum;
      },
      "bundle");
}

MusinExpansion::MusinExpansion(Kernel k, SphereConfig cfg, int d_max, int extra_nodes)
    : kernel_(std::move(k)),
      cfg_(std::move(cfg)),
      basis_((cfg_.n() - cfg_.r()) / 2.0 - 1.0, d_max, extra_nodes) {
  if (kernel_.n() != cfg_.n()) throw DomainError("kernel and configuration dimensions differ");
  if (kernel_.is_bundle() && kernel_.r() != cfg_.r()) {
    throw DomainError("bundle kernel and configuration have different r");
  }
  cfg_.projectors();  // rank check
}

double MusinExpansion::transported(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                                   double t) const {
  const int m = cfg_.n() - cfg_.r();
  const Eigen::VectorXd x1 = map_t1(cfg_, first_axis(m), u1);
  const Eigen::VectorXd x2 = map_t1(cfg_, rotated_axis(m, t), u2);
  return kernel_(x1, x2, cfg_);
}

std::vector<double> MusinExpansion::coefficients(const Eigen::VectorXd& u1,
                                                 const Eigen::VectorXd& u2) const {
  for (const auto* u : {&u1, &u2}) {
    // 1 - |gamma|^2 carries rounding of order 1e-16, so radii below 1e-7 are not resolvable.
    const double radius2 = 1.0 - cfg_.gamma(*u).squaredNorm();
    if (radius2 <= std::max(cfg_.tol_perp() * cfg_.tol_perp(), kMinFiberRadius * kMinFiberRadius)) {
      throw SingularityError("fiber coordinate lies on the boundary of B_Z");
    }
  }
  return basis_.expand([&](double t) { return transported(u1, u2, t); });
}

double MusinExpansion::reconstruct(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const FiberCoords fx = map_t2(cfg_, x);
  const FiberCoords fy = map_t2(cfg_, y);
  const auto d = coefficients(fx.u, fy.u);
  return basis_.synthesize(d, clamp_cosine(fx.v.dot(fy.v)));
}

MusinExpansion musin_coeffs(const Kernel& k, const SphereConfig& cfg, int d_max,
                            const AnalysisOptions& opts) {
  require_degree(d_max);
  if (opts.invariance_trials > 0) {
    const auto inv =
        check_stabilizer_invariance(k, cfg, opts.invariance_trials, opts.seed, opts.invariance_tol);
    if (!inv.pass) {
      throw InvarianceError("kernel is not invariant under the stabilizer of Z (residual " +
                            std::to_string(inv.max_residual) + ")");
    }
  }
  return MusinExpansion(k, cfg, d_max, opts.extra_nodes);
}

}  // namespace spherekern
