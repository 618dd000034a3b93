#include "spherekern/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "spherekern/error.hpp"
#include "spherekern/parallel.hpp"

namespace spherekern::cli {

namespace {

constexpr int kSchemaVersion = 1;

struct Common {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
  unsigned threads = 0;
  bool no_timestamp = false;
};

struct Options {
  std::string kernel = "dot";
  std::string expansion_file;
  std::string save_file;
  std::string certificate_file;
  std::string theta = "60deg";
  std::vector<double> t_values;
  double alpha = -1.0;
  int n = 3;
  int r = 0;
  int k = 6;
  int d_max = -1;
  int trials = -1;
  int points = -1;
  int samples = -1;
  int features = 3;
  int grid = 400;
  int refine = 10;
  int extra_nodes = 8;
  double tol = -1.0;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int pick(int value, int fallback) { return value >= 0 ? value : fallback; }
double pick(double value, double fallback) { return value >= 0.0 ? value : fallback; }

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& v, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw DomainError("unknown format '" + s + "'");
}

BundleExpansion load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
  if (is_bundle_expansion(j)) return bundle_expansion_from_json(j);
  // A scalar expansion is a bundle expansion with r = 0 and constant coefficients.
  const ScalarExpansion s = scalar_expansion_from_json(j);
  BundleExpansion b;
  b.n = s.n;
  b.r = 0;
  for (double c : s.coefficients) {
    if (c >= 0.0) {
      b.coefficients.emplace_back(FeatureMap::constant(0, c));
    } else {
      b.coefficients.emplace_back(CoefficientKernel(
          [c](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::MatrixXd&) { return c; }));
    }
  }
  return b;
}

struct ResolvedKernel {
  Kernel kernel;
  Json description;
};

ResolvedKernel resolve_kernel(const Options& o, const Common& c, int default_dmax) {
  if (!o.expansion_file.empty()) {
    const BundleExpansion e = load_bundle(o.expansion_file);
    return {synth_bundle_kernel(e, {.seed = c.seed}),
            {{"source", o.expansion_file}, {"n", e.n}, {"r", e.r}, {"d_max", e.d_max()}}};
  }
  if (o.kernel == "bundle-random") {
    const int d = pick(o.d_max, default_dmax);
    const BundleExpansion e = BundleExpansion::random(o.n, o.r, d, o.features, c.seed);
    return {synth_bundle_kernel(e, {.seed = c.seed}), to_json(e)};
  }
  return {lift_to_bundle(builtin_kernel(o.kernel, o.n), o.r), {{"name", o.kernel}, {"n", o.n}, {"r", o.r}}};
}

Json header(const std::string& command, const Common& c) {
  Json j = {{"schema", kSchemaVersion}, {"command", command}, {"seed", c.seed}};
  if (!c.no_timestamp) j["timestamp"] = timestamp();
  return j;
}

struct Outcome {
  Json report;
  int code = kSuccess;
};

Outcome cmd_gegenbauer(const Options& o, const Common& c) {
  const double alpha = o.alpha > 0.0 ? o.alpha : o.n / 2.0 - 1.0;
  const int d = pick(o.d_max, 5);
  const GegenbauerBasis basis(alpha, d, o.extra_nodes);
  Json values = Json::array();
  for (double t : o.t_values) values.push_back({{"t", t}, {"p", eval_gegenbauer_all(alpha, d, t)}});
  Json j = header("gegenbauer", c);
  j["alpha"] = alpha;
  j["d_max"] = d;
  j["norms"] = basis.norms();
  j["values"] = values;
  return {j, kSuccess};
}

Outcome cmd_expand(const Options& o, const Common& c) {
  const Kernel k = builtin_kernel(o.kernel, o.n);
  AnalysisOptions opts;
  opts.seed = c.seed;
  opts.extra_nodes = o.extra_nodes;
  opts.invariance_tol = pick(o.tol, 1e-8);
  Json j = header("expand", c);
  j["kernel"] = o.kernel;
  try {
    const ScalarExpansion e = schoenberg_coeffs(k, pick(o.d_max, kDefaultExpansionDegree), opts);
    j["expansion"] = to_json(e);
    bool nonnegative = true;
    for (double v : e.coefficients) nonnegative = nonnegative && v >= -opts.invariance_tol;
    j["nonnegative"] = nonnegative;
    return {j, kSuccess};
  } catch (const InvarianceError& e) {
    j["error"] = e.what();
    return {j, kVerificationFailed};
  }
}

Outcome cmd_check_pd(const Options& o, const Common& c) {
  const auto resolved = resolve_kernel(o, c, 4);
  const PdCheck check = check_pd(resolved.kernel, pick(o.trials, 20), pick(o.points, 40), c.seed,
                                 pick(o.tol, 1e-8));
  Json j = header("check-pd", c);
  j["kernel"] = resolved.description;
  j["result"] = to_json(check);
  j["pass"] = check.pass;
  return {j, check.pass ? kSuccess : kVerificationFailed};
}

Outcome cmd_check_invariance(const Options& o, const Common& c) {
  const auto resolved = resolve_kernel(o, c, 4);
  const InvarianceReport report =
      check_invariance(resolved.kernel, pick(o.trials, 500), c.seed, pick(o.tol, 1e-9));
  Json j = header("check-invariance", c);
  j["kernel"] = resolved.description;
  j["result"] = to_json(report);
  j["pass"] = report.pass;
  return {j, report.pass ? kSuccess : kVerificationFailed};
}

Outcome cmd_synth_bundle(const Options& o, const Common& c) {
  BundleExpansion e = o.expansion_file.empty()
                          ? BundleExpansion::random(o.n, o.r, pick(o.d_max, 4), o.features, c.seed)
                          : load_bundle(o.expansion_file);
  const Kernel k = synth_bundle_kernel(e, {.seed = c.seed});
  const PdCheck pd = check_pd(k, pick(o.trials, 20), pick(o.points, 40), c.seed, pick(o.tol, 1e-7));
  const InvarianceReport inv = check_invariance(k, pick(o.samples, 500), c.seed, 1e-9);
  Json j = header("synth-bundle", c);
  const bool serializable = std::all_of(e.coefficients.begin(), e.coefficients.end(),
                                        [](const auto& ck) { return ck.feature_map().has_value(); });
  if (serializable) {
    j["expansion"] = to_json(e);
    if (!o.save_file.empty()) {
      std::ofstream f(o.save_file);
      if (!f) throw DomainError("cannot write '" + o.save_file + "'");
      f << to_json(e).dump(2) << "\n";
    }
  }
  j["check_pd"] = to_json(pd);
  j["check_invariance"] = to_json(inv);
  j["pass"] = pd.pass && inv.pass;
  return {j, pd.pass && inv.pass ? kSuccess : kVerificationFailed};
}

Outcome cmd_musin(const Options& o, const Common& c) {
  const auto resolved = resolve_kernel(o, c, 4);
  const Kernel& k = resolved.kernel;
  Rng rng = make_rng(c.seed);
  const SphereConfig cfg = sample_config(o.n, o.r, rng);
  AnalysisOptions opts;
  opts.seed = c.seed;
  opts.extra_nodes = o.extra_nodes;
  const int d = pick(o.d_max, kDefaultExpansionDegree);
  const double tol = pick(o.tol, 1e-8);
  Json j = header("musin", c);
  j["kernel"] = resolved.description;
  Json z = Json::array();
  for (Eigen::Index col = 0; col < cfg.z().cols(); ++col) {
    z.push_back(std::vector<double>(cfg.z().col(col).data(), cfg.z().col(col).data() + cfg.n()));
  }
  j["z"] = z;
  try {
    const MusinExpansion m = musin_coeffs(k, cfg, d, opts);
    const int count = pick(o.points, 200);
    double worst = 0.0;
    Json first;
    for (int i = 0; i < count; ++i) {
      const Eigen::VectorXd x = sample_sphere_point(o.n, rng);
      const Eigen::VectorXd y = sample_sphere_point(o.n, rng);
      worst = std::max(worst, std::abs(m.reconstruct(x, y) - k(x, y, cfg)));
      if (i == 0) {
        first = {{"u1", std::vector<double>(cfg.r())}, {"u2", std::vector<double>(cfg.r())}};
        const Eigen::VectorXd u1 = cfg.z().transpose() * x;
        const Eigen::VectorXd u2 = cfg.z().transpose() * y;
        first["u1"] = std::vector<double>(u1.data(), u1.data() + u1.size());
        first["u2"] = std::vector<double>(u2.data(), u2.data() + u2.size());
        first["d"] = m.coefficients(u1, u2);
      }
    }
    j["d_max"] = d;
    j["alpha"] = m.alpha();
    j["points"] = count;
    j["sample_coefficients"] = first;
    j["max_reconstruction_error"] = worst;
    j["tol"] = tol;
    j["pass"] = worst < tol;
    return {j, worst < tol ? kSuccess : kVerificationFailed};
  } catch (const InvarianceError& e) {
    j["error"] = e.what();
    j["pass"] = false;
    return {j, kVerificationFailed};
  }
}

Outcome cmd_verify_addition(const Options& o, const Common& c) {
  const AdditionReport report =
      verify_addition(o.n, o.r, o.k, pick(o.samples, 200), c.seed, pick(o.tol, 1e-8));
  Json j = header("verify-addition", c);
  j["result"] = to_json(report);
  j["pass"] = report.pass;
  return {j, report.pass ? kSuccess : kVerificationFailed};
}

Outcome cmd_verify_t1t2(const Options& o, const Common& c) {
  const int samples = pick(o.samples, 1000);
  const double tol = pick(o.tol, 1e-12);
  Rng rng = make_rng(c.seed);
  double worst = 0.0;
  double min_separation = INFINITY;
  for (int s = 0; s < samples; ++s) {
    const SphereConfig cfg = sample_config(o.n, o.r, rng);
    const Eigen::VectorXd x1 = sample_sphere_point(o.n, rng);
    const Eigen::VectorXd x2 = sample_sphere_point(o.n, rng);
    const FiberCoords f1 = map_t2(cfg, x1);
    const FiberCoords f2 = map_t2(cfg, x2);
    worst = std::max(worst, (map_t1(cfg, f1.v, f1.u) - x1).cwiseAbs().maxCoeff());
    const double input = (x1 - x2).norm();
    if (input > 1e-6) {
      const double output = std::sqrt((f1.v - f2.v).squaredNorm() + (f1.u - f2.u).squaredNorm());
      min_separation = std::min(min_separation, output);
    }
  }
  const bool pass = worst < tol && min_separation > 1e-9;
  Json j = header("verify-t1t2", c);
  j["n"] = o.n;
  j["r"] = o.r;
  j["samples"] = samples;
  j["tol"] = tol;
  j["max_roundtrip_error"] = worst;
  j["min_output_separation"] = min_separation;
  j["pass"] = pass;
  return {j, pass ? kSuccess : kVerificationFailed};
}

LPBoundProblem problem_for(int n, double theta, int d_max, int grid) {
  LPBoundProblem p;
  p.n = n;
  p.theta = theta;
  p.d_max = d_max;
  p.grid_points = grid;
  return p;
}

Outcome cmd_lp_bound(const Options& o, const Common& c) {
  const LPBoundProblem p = problem_for(o.n, parse_angle(o.theta), pick(o.d_max, 12), o.grid);
  const LPCertificate cert = delsarte_lp(p);
  Json j = header("lp-bound", c);
  j.update(to_json(cert));
  if (!o.save_file.empty()) {
    std::ofstream f(o.save_file);
    if (!f) throw DomainError("cannot write '" + o.save_file + "'");
    f << to_json(cert).dump(2) << "\n";
  }
  return {j, kSuccess};
}

Outcome cmd_certify(const Options& o, const Common& c) {
  std::ifstream in(o.certificate_file);
  if (!in) throw DomainError("cannot open '" + o.certificate_file + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw DomainError("certificate is not valid JSON: " + std::string(e.what()));
  }
  const LPCertificate cert = certificate_from_json(doc);
  const LPBoundProblem p = problem_for(cert.n, cert.theta, cert.d_max, o.grid);
  const MarginReport m = certify(cert, p, o.refine);
  Json j = header("certify", c);
  j["n"] = cert.n;
  j["theta"] = cert.theta;
  j["refine"] = o.refine;
  j["result"] = to_json(m);
  j["pass"] = m.pass;
  return {j, m.pass ? kSuccess : kVerificationFailed};
}

std::uint64_t default_seed() {
  const char* env = std::getenv("SPHEREKERN_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw DomainError(std::string("SPHEREKERN_SEED is not an unsigned integer: ") + env);
  }
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string body = text;
  bool degrees = false;
  if (body.size() > 3 && body.compare(body.size() - 3, 3, "deg") == 0) {
    degrees = true;
    body.resize(body.size() - 3);
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw DomainError("cannot parse angle '" + text + "'");
  }
  return degrees ? value * std::numbers::pi / 180.0 : value;
}

std::string format_report(const Json& report, Format format) {
  if (format == Format::json) return report.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> flat;
  flatten(report, "", flat);
  std::ostringstream os;
  if (format == Format::csv) {
    for (std::size_t i = 0; i < flat.size(); ++i) os << (i ? "," : "") << csv_field(flat[i].first);
    os << "\n";
    for (std::size_t i = 0; i < flat.size(); ++i) os << (i ? "," : "") << csv_field(flat[i].second);
    os << "\n";
  } else {
    for (const auto& [key, value] : flat) os << key << " = " << value << "\n";
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive definite kernels on spheres and sphere bundles", "spherekern"};
  app.require_subcommand(1);
  Common common;
  Options o;
  try {
    common.seed = default_seed();
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "RNG seed (default: $SPHEREKERN_SEED or 0)");
    sub->add_option("--format", common.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--output,-o", common.output, "Write the report to this file");
    sub->add_option("--threads", common.threads, "Cap on worker threads (0 = all cores)");
    sub->add_flag("--no-timestamp", common.no_timestamp, "Omit the timestamp field");
  };
  auto add_kernel = [&](CLI::App* sub) {
    sub->add_option("--kernel", o.kernel,
                    "dot | neg-dot | const | coord | gegenbauer:k | bundle-random");
    sub->add_option("--expansion", o.expansion_file, "Expansion JSON to synthesize a kernel from");
    sub->add_option("--features", o.features, "Features per coefficient for bundle-random");
  };

  auto* geg = app.add_subcommand("gegenbauer", "Evaluate Gegenbauer polynomials and norms");
  geg->add_option("--alpha", o.alpha, "Order (default n/2 - 1)");
  geg->add_option("--n", o.n, "Sphere dimension used when --alpha is absent");
  geg->add_option("--dmax", o.d_max, "Highest degree");
  geg->add_option("--t", o.t_values, "Evaluation points in [-1, 1]")->required();

  auto* expand = app.add_subcommand("expand", "Schoenberg coefficients of a built-in kernel");
  expand->add_option("--kernel", o.kernel, "dot | neg-dot | const | coord | gegenbauer:k");
  expand->add_option("--n", o.n, "Ambient dimension");
  expand->add_option("--dmax", o.d_max, "Truncation degree");
  expand->add_option("--nodes", o.extra_nodes, "Extra quadrature nodes");
  expand->add_option("--tol", o.tol, "Invariance tolerance");

  auto* pd = app.add_subcommand("check-pd", "Randomized positive-definiteness test");
  add_kernel(pd);
  pd->add_option("--n", o.n);
  pd->add_option("--r", o.r);
  pd->add_option("--dmax", o.d_max);
  pd->add_option("--trials", o.trials);
  pd->add_option("--points", o.points);
  pd->add_option("--tol", o.tol);

  auto* inv = app.add_subcommand("check-invariance", "Sampled O_n-invariance test");
  add_kernel(inv);
  inv->add_option("--n", o.n);
  inv->add_option("--r", o.r);
  inv->add_option("--dmax", o.d_max);
  inv->add_option("--trials", o.trials);
  inv->add_option("--tol", o.tol);

  auto* synth = app.add_subcommand("synth-bundle", "Synthesize and verify a bundle kernel");
  synth->add_option("--n", o.n);
  synth->add_option("--r", o.r);
  synth->add_option("--dmax", o.d_max);
  synth->add_option("--features", o.features);
  synth->add_option("--trials", o.trials);
  synth->add_option("--points", o.points);
  synth->add_option("--samples", o.samples, "Invariance draws");
  synth->add_option("--tol", o.tol);
  synth->add_option("--expansion", o.expansion_file, "Load the expansion instead of sampling");
  synth->add_option("--save", o.save_file, "Write the expansion JSON here");

  auto* musin = app.add_subcommand("musin", "Per-configuration expansion and reconstruction");
  add_kernel(musin);
  musin->add_option("--n", o.n);
  musin->add_option("--r", o.r);
  musin->add_option("--dmax", o.d_max);
  musin->add_option("--points", o.points);
  musin->add_option("--nodes", o.extra_nodes);
  musin->add_option("--tol", o.tol);

  auto* add = app.add_subcommand("verify-addition", "Check the configuration addition formula");
  add->add_option("--n", o.n)->required();
  add->add_option("--r", o.r)->required();
  add->add_option("--k", o.k, "Highest degree checked");
  add->add_option("--samples", o.samples);
  add->add_option("--tol", o.tol);

  auto* t1t2 = app.add_subcommand("verify-t1t2", "Check T1(T2(x)) = x and T2 injectivity");
  t1t2->add_option("--n", o.n)->required();
  t1t2->add_option("--r", o.r)->required();
  t1t2->add_option("--samples", o.samples);
  t1t2->add_option("--tol", o.tol);

  auto* lp = app.add_subcommand("lp-bound", "Delsarte LP bound for spherical codes");
  lp->add_option("--n", o.n)->required();
  lp->add_option("--theta", o.theta, "Minimal angle: radians, or degrees with suffix 'deg'");
  lp->add_option("--dmax", o.d_max);
  lp->add_option("--grid", o.grid, "Constraint grid size");
  lp->add_option("--save", o.save_file, "Write the certificate JSON here");

  auto* cert = app.add_subcommand("certify", "Re-verify an LP certificate");
  cert->add_option("--certificate", o.certificate_file)->required();
  cert->add_option("--grid", o.grid, "Base grid size");
  cert->add_option("--refine", o.refine, "Refinement factor");

  for (auto* sub : {geg, expand, pd, inv, synth, musin, add, t1t2, lp, cert}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  set_max_threads(common.threads);
  Outcome outcome;
  try {
    const Format format = parse_format(common.format);
    auto* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "gegenbauer") outcome = cmd_gegenbauer(o, common);
    else if (name == "expand") outcome = cmd_expand(o, common);
    else if (name == "check-pd") outcome = cmd_check_pd(o, common);
    else if (name == "check-invariance") outcome = cmd_check_invariance(o, common);
    else if (name == "synth-bundle") outcome = cmd_synth_bundle(o, common);
    else if (name == "musin") outcome = cmd_musin(o, common);
    else if (name == "verify-addition") outcome = cmd_verify_addition(o, common);
    else if (name == "verify-t1t2") outcome = cmd_verify_t1t2(o, common);
    else if (name == "lp-bound") outcome = cmd_lp_bound(o, common);
    else outcome = cmd_certify(o, common);

    const std::string text = format_report(outcome.report, format);
    if (common.output.empty()) {
      out << text;
    } else {
      std::ofstream f(common.output);
      if (!f) throw DomainError("cannot write '" + common.output + "'");
      f << text;
    }
  } catch (const LPError& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return outcome.code;
}

}  // namespace spherekern::cli
