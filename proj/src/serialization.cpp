#include "spherekern/serialization.hpp"

#include <string>

#include "spherekern/error.hpp"

namespace spherekern {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw DomainError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const ScalarExpansion& e) {
  return {{"n", e.n}, {"r", 0}, {"alpha", e.alpha()}, {"d_max", e.d_max()},
          {"coefficients", e.coefficients}};
}

Json to_json(const BundleExpansion& e) {
  Json spec = Json::array();
  for (const auto& c : e.coefficients) {
    if (!c.feature_map()) {
      throw DomainError("only feature-map coefficient kernels can be serialized");
    }
    Json features = Json::array();
    for (const auto& f : c.feature_map()->features()) {
      features.push_back({{"amplitude", f.amplitude},
                          {"frequency", vector_json(f.frequency)},
                          {"coupling", vector_json(f.coupling)},
                          {"phase", f.phase}});
    }
    spec.push_back({{"features", features}});
  }
  return {{"n", e.n},         {"r", e.r}, {"alpha", e.alpha()}, {"d_max", e.d_max()},
          {"feature_map_spec", spec}};
}

bool is_bundle_expansion(const Json& j) { return j.is_object() && j.contains("feature_map_spec"); }

ScalarExpansion scalar_expansion_from_json(const Json& j) {
  ScalarExpansion e;
  e.n = field<int>(j, "n");
  e.coefficients = field<std::vector<double>>(j, "coefficients");
  if (j.contains("d_max") && j.at("d_max").get<int>() != e.d_max()) {
    throw DomainError("d_max does not match the number of coefficients");
  }
  return e;
}

BundleExpansion bundle_expansion_from_json(const Json& j) {
  BundleExpansion e;
  e.n = field<int>(j, "n");
  e.r = field<int>(j, "r");
  if (e.r < 0) throw DomainError("r must be non-negative");
  const Json spec = field<Json>(j, "feature_map_spec");
  if (!spec.is_array()) throw DomainError("feature_map_spec must be an array");
  try {
    for (const auto& degree : spec) {
      std::vector<CosineFeature> features;
      for (const auto& f : degree.at("features")) {
        CosineFeature cf;
        cf.amplitude = f.at("amplitude").get<double>();
        cf.frequency = vector_from(f.at("frequency"));
        cf.coupling = vector_from(f.at("coupling"));
        cf.phase = f.at("phase").get<double>();
        features.push_back(std::move(cf));
      }
      e.coefficients.emplace_back(FeatureMap(e.r, std::move(features)));
    }
  } catch (const Json::exception& ex) {
    throw DomainError(std::string("malformed feature_map_spec: ") + ex.what());
  }
  if (j.contains("d_max") && j.at("d_max").get<int>() != e.d_max()) {
    throw DomainError("d_max does not match the feature_map_spec length");
  }
  return e;
}

Json to_json(const LPCertificate& c) {
  return {{"n", c.n},
          {"theta", c.theta},
          {"d_max", c.d_max},
          {"coefficients", c.coefficients},
          {"bound", c.bound},
          {"max_violation", c.max_violation},
          {"solve_grid_points", c.solve_grid_points},
          {"refinement_rounds", c.refinement_rounds},
          {"margin", c.margin}};
}

LPCertificate certificate_from_json(const Json& j) {
  LPCertificate c;
  c.n = field<int>(j, "n");
  c.theta = field<double>(j, "theta");
  c.coefficients = field<std::vector<double>>(j, "coefficients");
  c.d_max = j.contains("d_max") ? field<int>(j, "d_max") : static_cast<int>(c.coefficients.size()) - 1;
  if (c.coefficients.empty()) throw DomainError("certificate has no coefficients");
  if (c.d_max != static_cast<int>(c.coefficients.size()) - 1) {
    throw DomainError("d_max does not match the number of coefficients");
  }
  // Provenance fields are optional: a hand-written certificate needs only n, theta, coefficients.
  if (j.contains("bound")) c.bound = field<double>(j, "bound");
  if (j.contains("max_violation")) c.max_violation = field<double>(j, "max_violation");
  if (j.contains("solve_grid_points")) c.solve_grid_points = field<int>(j, "solve_grid_points");
  if (j.contains("refinement_rounds")) c.refinement_rounds = field<int>(j, "refinement_rounds");
  if (j.contains("margin")) c.margin = field<double>(j, "margin");
  return c;
}

Json to_json(const MarginReport& m) {
  return {{"grid_points", m.grid_points},
          {"max_violation", m.max_violation},
          {"argmax", m.argmax},
          {"bound", m.bound},
          {"pass", m.pass}};
}

Json to_json(const GramReport& g) {
  return {{"m", g.m},
          {"min_eigenvalue", g.min_eigenvalue},
          {"max_eigenvalue", g.max_eigenvalue},
          {"scaled_tolerance", g.scaled_tolerance},
          {"pass", g.pass}};
}

Json to_json(const PdWitness& w) {
  Json points = Json::array();
  for (const auto& p : w.points) points.push_back(vector_json(p));
  Json z = Json::array();
  for (Eigen::Index j = 0; j < w.z.cols(); ++j) z.push_back(vector_json(w.z.col(j)));
  return {{"trial", w.trial}, {"min_eigenvalue", w.min_eigenvalue}, {"points", points}, {"z", z}};
}

Json to_json(const PdCheck& c) {
  Json trials = Json::array();
  double worst = INFINITY;
  for (const auto& t : c.trials) {
    trials.push_back(to_json(t));
    worst = std::min(worst, t.min_eigenvalue);
  }
  Json out = {{"seed", c.seed},
              {"tol", c.tol},
              {"pass", c.pass},
              {"min_eigenvalue", c.trials.empty() ? 0.0 : worst},
              {"trials", trials}};
  if (c.witness) out["witness"] = to_json(*c.witness);
  return out;
}

Json to_json(const InvarianceReport& r) {
  return {{"seed", r.seed},
          {"trials", r.trials},
          {"tol", r.tol},
          {"max_residual", r.max_residual},
          {"pass", r.pass}};
}

Json to_json(const AdditionConstants& c) {
  return {{"alpha", c.alpha}, {"k", c.k}, {"c", c.c}, {"fit_residual", c.fit_residual}};
}

Json to_json(const AdditionReport& r) {
  Json constants = Json::array();
  for (const auto& c : r.constants) constants.push_back(to_json(c));
  return {{"n", r.n},
          {"r", r.r},
          {"k", r.k_max},
          {"samples", r.samples},
          {"seed", r.seed},
          {"tol", r.tol},
          {"max_residual", r.max_residual},
          {"overall_residual", r.overall_residual},
          {"constants", constants},
          {"pass", r.pass}};
}

}  // namespace spherekern
