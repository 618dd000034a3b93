#pragma once

#include "json.hpp"

#include "spherekern/addition.hpp"
#include "spherekern/expansion.hpp"
#include "spherekern/kernel.hpp"
#include "spherekern/lp_bound.hpp"

namespace spherekern {

using Json = nlohmann::json;

/// {n, r: 0, alpha, d_max, coefficients}
Json to_json(const ScalarExpansion& e);
/// {n, r, alpha, d_max, feature_map_spec: [{features: [{amplitude, frequency, coupling, phase}]}]}
/// Throws DomainError if a coefficient kernel is not a feature map.
Json to_json(const BundleExpansion& e);
ScalarExpansion scalar_expansion_from_json(const Json& j);
BundleExpansion bundle_expansion_from_json(const Json& j);
/// True when the document carries feature_map_spec rather than coefficients.
bool is_bundle_expansion(const Json& j);

/// {n, theta, d_max, coefficients, bound, max_violation, ...}
Json to_json(const LPCertificate& c);
LPCertificate certificate_from_json(const Json& j);
Json to_json(const MarginReport& m);

Json to_json(const GramReport& g);
Json to_json(const PdWitness& w);
Json to_json(const PdCheck& c);
Json to_json(const InvarianceReport& r);
Json to_json(const AdditionConstants& c);
Json to_json(const AdditionReport& r);

}  // namespace spherekern
