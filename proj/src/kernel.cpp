#include "spherekern/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spherekern/error.hpp"
#include "spherekern/gegenbauer.hpp"
#include "spherekern/parallel.hpp"

namespace spherekern {

Kernel::Kernel(KernelDomain domain, Evaluator eval, std::string name)
    : domain_(domain), eval_(std::move(eval)), name_(std::move(name)) {
  if (domain_.n < 1) throw DomainError("kernel dimension must be positive");
  if (domain_.r < 0 || domain_.r > domain_.n) throw DomainError("kernel base rank out of range");
  if (!eval_) throw DomainError("kernel evaluator is empty");
}

Kernel Kernel::on_sphere(int n, SphereEvaluator eval, std::string name) {
  if (!eval) throw DomainError("kernel evaluator is empty");
  return Kernel(
      {n, 0},
      [f = std::move(eval)](const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const SphereConfig&) { return f(x, y); },
      std::move(name));
}

double Kernel::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (is_bundle()) throw DomainError("bundle kernel '" + name_ + "' needs a configuration Z");
  return eval_(x, y, SphereConfig::empty(domain_.n));
}

double Kernel::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const SphereConfig& cfg) const {
  return eval_(x, y, cfg);
}

Kernel lift_to_bundle(const Kernel& k, int r) {
  if (k.is_bundle() || r == 0) return k;
  if (r < 0 || r > k.n()) throw DomainError("lift_to_bundle: need 0 <= r <= n");
  return Kernel({k.n(), r},
                [k](const Eigen::VectorXd& x, const Eigen::VectorXd& y, const SphereConfig&) {
                  return k(x, y);
                },
                k.name());
}

namespace {

void require_same_domain(const Kernel& a, const Kernel& b) {
  if (!(a.domain() == b.domain())) throw DomainError("kernels live on different domains");
}

void require_points(const Kernel& k, std::span<const Eigen::VectorXd> points) {
  for (const auto& p : points) {
    if (p.size() != k.n()) throw DomainError("point dimension does not match kernel domain");
  }
}

}  // namespace

Kernel kernel_sum(const Kernel& a, const Kernel& b) {
  require_same_domain(a, b);
  return Kernel(
      a.domain(),
      [a, b](const Eigen::VectorXd& x, const Eigen::VectorXd& y, const SphereConfig& cfg) {
        return a(x, y, cfg) + b(x, y, cfg);
      },
      "(" + a.name() + " + " + b.name() + ")");
}

Kernel kernel_product(const Kernel& a, const Kernel& b) {
  require_same_domain(a, b);
  return Kernel(
      a.domain(),
      [a, b](const Eigen::VectorXd& x, const Eigen::VectorXd& y, const SphereConfig& cfg) {
        return a(x, y, cfg) * b(x, y, cfg);
      },
      "(" + a.name() + " * " + b.name() + ")");
}

Kernel builtin_kernel(const std::string& name, int n) {
  if (name == "dot") {
    return Kernel::on_sphere(n, [](const auto& x, const auto& y) { return x.dot(y); }, name);
  }
  if (name == "neg-dot") {
    return Kernel::on_sphere(n, [](const auto& x, const auto& y) { return -x.dot(y); }, name);
  }
  if (name == "const") {
    return Kernel::on_sphere(n, [](const auto&, const auto&) { return 1.0; }, name);
  }
  if (name == "coord") {
    return Kernel::on_sphere(n, [](const auto& x, const auto& y) { return x(0) * y(0); }, name);
  }
  const std::string prefix = "gegenbauer:";
  if (name.rfind(prefix, 0) == 0) {
    int k = -1;
    try {
      std::size_t used = 0;
      k = std::stoi(name.substr(prefix.size()), &used);
      if (used != name.size() - prefix.size()) k = -1;
    } catch (const std::exception&) {
      k = -1;
    }
    if (k < 0) throw DomainError("bad Gegenbauer degree in kernel name '" + name + "'");
    const double alpha = n / 2.0 - 1.0;
    return Kernel::on_sphere(
        n,
        [alpha, k](const auto& x, const auto& y) {
          return eval_gegenbauer(alpha, k, clamp_cosine(x.dot(y)));
        },
        name);
  }
  throw DomainError("unknown kernel '" + name + "'");
}

Eigen::MatrixXd gram(const Kernel& k, std::span<const Eigen::VectorXd> points,
                     const SphereConfig& cfg) {
  require_points(k, points);
  if (cfg.n() != k.n()) throw DomainError("configuration dimension does not match kernel");
  if (k.is_bundle()) {
    if (cfg.r() != k.r()) throw DomainError("configuration has the wrong number of columns");
    if (!cfg.full_rank()) throw RankError("gram: configuration is rank deficient");
  }
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      g(i, j) = k(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)], cfg);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

Eigen::MatrixXd gram(const Kernel& k, std::span<const Eigen::VectorXd> points) {
  if (k.is_bundle()) throw DomainError("bundle kernel '" + k.name() + "' needs a configuration Z");
  return gram(k, points, SphereConfig::empty(k.n()));
}

GramReport gram_report(const Eigen::MatrixXd& g, double tol) {
  GramReport report;
  report.m = static_cast<int>(g.rows());
  if (g.rows() == 0) {
    report.pass = true;
    report.scaled_tolerance = tol;
    return report;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("gram_report: eigensolver failed");
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.max_eigenvalue = solver.eigenvalues().maxCoeff();
  // Induced infinity norm (largest absolute row sum); it bounds every eigenvalue.
  report.scaled_tolerance = tol * std::max(1.0, g.cwiseAbs().rowwise().sum().maxCoeff());
  report.pass = report.min_eigenvalue >= -report.scaled_tolerance;
  return report;
}

PdCheck check_pd(const Kernel& k, int trials, int points, std::uint64_t seed, double tol) {
  if (points < 2) throw DomainError("check_pd needs at least two points per trial");
  if (trials < 1) throw DomainError("check_pd needs at least one trial");

  struct TrialResult {
    GramReport report;
    std::vector<Eigen::VectorXd> points;
    Eigen::MatrixXd z;
  };
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  parallel_for(results.size(), [&](std::size_t t) {
    Rng rng = trial_rng(seed, 1, t);
    SphereConfig cfg = k.is_bundle() ? sample_config(k.n(), k.r(), rng) : SphereConfig::empty(k.n());
    auto pts = sample_sphere(k.n(), points, rng);
    results[t].report = gram_report(gram(k, pts, cfg), tol);
    if (!results[t].report.pass) {
      results[t].points = std::move(pts);
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

namespace {

InvarianceReport collect(std::uint64_t seed, int trials, double tol,
                         const std::vector<double>& residuals) {
  InvarianceReport report;
  report.seed = seed;
  report.trials = trials;
  report.tol = tol;
  report.max_residual = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  report.pass = report.max_residual < tol;
  return report;
}

}  // namespace

InvarianceReport check_invariance(const Kernel& k, int trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw DomainError("check_invariance needs at least one trial");
  std::vector<double> residuals(static_cast<std::size_t>(trials));
  parallel_for(residuals.size(), [&](std::size_t t) {
    Rng rng = trial_rng(seed, 2, t);
    const SphereConfig cfg = sample_config(k.n(), k.r(), rng);
    const Eigen::VectorXd x = sample_sphere_point(k.n(), rng);
    const Eigen::VectorXd y = sample_sphere_point(k.n(), rng);
    const Eigen::MatrixXd m = sample_orthogonal(k.n(), rng);
    const SphereConfig moved = SphereConfig::normalized(m * cfg.z());
    residuals[t] = std::abs(k(m * x, m * y, moved) - k(x, y, cfg));
  });
  return collect(seed, trials, tol, residuals);
}

InvarianceReport check_stabilizer_invariance(const Kernel& k, const SphereConfig& cfg,
                                             int trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw DomainError("check_stabilizer_invariance needs at least one trial");
  if (cfg.n() != k.n()) throw DomainError("configuration dimension does not match kernel");
  const int m = cfg.n() - cfg.r();
  std::vector<double> residuals(static_cast<std::size_t>(trials));
  parallel_for(residuals.size(), [&](std::size_t t) {
    Rng rng = trial_rng(seed, 3, t);
    const Eigen::VectorXd x = sample_sphere_point(k.n(), rng);
    const Eigen::VectorXd y = sample_sphere_point(k.n(), rng);
    const Eigen::MatrixXd s = stabilizer_element(cfg, sample_orthogonal(m, rng));
    residuals[t] = std::abs(k(s * x, s * y, cfg) - k(x, y, cfg));
  });
  return collect(seed, trials, tol, residuals);
}

double bochner_form(const Kernel& k, const std::function<double(const Eigen::VectorXd&)>& g,
                    int samples, std::uint64_t seed) {
  if (k.is_bundle()) throw DomainError("bochner_form expects a kernel on the sphere");
  if (samples < 1) throw DomainError("bochner_form needs at least one sample");
  const auto pts = sample_sphere(k.n(), samples, seed);
  std::vector<double> gv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) gv[i] = g(pts[i]);
  const SphereConfig none = SphereConfig::empty(k.n());
  std::vector<double> rows(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    double acc = 0.5 * k(pts[i], pts[i], none) * gv[i];
    for (std::size_t j = i + 1; j < pts.size(); ++j) acc += k(pts[i], pts[j], none) * gv[j];
    rows[i] = 2.0 * acc * gv[i];
  });
  double total = 0.0;
  for (double v : rows) total += v;
  const double m = static_cast<double>(samples);
  return total / (m * m);
}

Eigen::MatrixXd cylinder_gram(const CylinderKernel& k, const Eigen::VectorXd& b,
                              std::span<const Eigen::VectorXd> a,
                              std::span<const Eigen::VectorXd> u) {
  if (a.size() != u.size()) throw DomainError("cylinder_gram: fiber coordinate counts differ");
  const auto m = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto si = static_cast<std::size_t>(i);
    for (Eigen::Index j = i; j < m; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      g(i, j) = k(b, a[si], u[si], a[sj], u[sj]);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

InvarianceReport check_horizontal_invariance(const CylinderKernel& k, const Eigen::VectorXd& b,
                                             const Eigen::VectorXd& a1,
                                             const Eigen::VectorXd& a2, int trials,
                                             std::uint64_t seed, double tol) {
  if (trials < 1) throw DomainError("check_horizontal_invariance needs at least one trial");
  std::vector<double> residuals(static_cast<std::size_t>(trials));
  parallel_for(residuals.size(), [&](std::size_t t) {
    Rng rng = trial_rng(seed, 4, t);
    const Eigen::VectorXd u1 = sample_sphere_point(k.n, rng);
    const Eigen::VectorXd u2 = sample_sphere_point(k.n, rng);
    const Eigen::MatrixXd m = sample_orthogonal(k.n, rng);
    residuals[t] = std::abs(k(b, a1, m * u1, a2, m * u2) - k(b, a1, u1, a2, u2));
  });
  return collect(seed, trials, tol, residuals);
}

}  // namespace spherekern
