#pragma once

#include <json.hpp>

#include "momentsep/criteria.hpp"
#include "momentsep/hierarchy.hpp"
#include "momentsep/quantum.hpp"
#include "momentsep/sdp.hpp"
#include "momentsep/semialgebraic.hpp"
#include "momentsep/tms.hpp"

namespace momentsep {

// Density matrix: {"dims": [d1,...], "re": [[...]], "im": [[...]]}
nlohmann::json density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

// Partition: {"parties": [...], "symmetry_classes": [[...]],
//             "purity_flags": [...], "known_support": [[...]] (optional)}
nlohmann::json partition_to_json(const PartitionSpec& spec);
PartitionSpec partition_from_json(const nlohmann::json& j);

// Tensor: {"partition": {...}, "coords": [{"mu": [..], "value": x}, ...]}
nlohmann::json tensor_to_json(const StateTensor& tensor);
StateTensor tensor_from_json(const nlohmann::json& j);

// Tms: {"n": int, "degree": int, "moments": [{"alpha": [..], "value": x}]}
nlohmann::json tms_to_json(const Tms& y);
Tms tms_from_json(const nlohmann::json& j);

// Polynomial: {"n": int, "terms": [{"alpha": [..], "coef": x}]}
nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

// Set: {"n": int, "constraints": [{"poly": {...}, "relation": "GEQ"|"EQ"}]}
nlohmann::json semialgebraic_to_json(const SemialgebraicSet& set);
SemialgebraicSet semialgebraic_from_json(const nlohmann::json& j);

nlohmann::json decomposition_to_json(const Decomposition& dec);
Decomposition decomposition_from_json(const nlohmann::json& j);

nlohmann::json witness_to_json(const InfeasibilityWitness& witness);
InfeasibilityWitness witness_from_json(const nlohmann::json& j);

// Certificate: {"verdict": "...", "order": k, "witness": {...}|null,
//               "atoms": [{"w": x, "point": [..]}]|null, "diagnostics": {...}}
nlohmann::json certificate_to_json(const SeparabilityCertificate& cert);

// Problem dump for cross-checking with external solvers (export only).
nlohmann::json sdp_problem_to_json(const SdpProblem& prob);

std::string verdict_to_string(Verdict v);

}  // namespace momentsep
