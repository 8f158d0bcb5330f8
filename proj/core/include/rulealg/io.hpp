#pragma once

#include <string>

#include <json.hpp>

#include "rulealg/rule_algebra.hpp"
#include "rulealg/representation.hpp"
#include "rulealg/stochastic.hpp"

namespace rulealg {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Graph files:
//   {"kind": "directed"|"undirected",
//    "vertices": ["v1", ...],
//    "edges": [{"id": "e1", "src": "v1", "tgt": "v2"}]          (directed)
//           or [{"id": "e1", "ends": ["v1", "v2"]}]             (undirected;
//            a single entry denotes a self-loop)}
nlohmann::json graph_to_json(const Multigraph& g);
Multigraph graph_from_json(const nlohmann::json& j);

// Morphisms are id-level maps: {"vmap": {"a": "x"}, "emap": {"e": "f"}}.
nlohmann::json morphism_to_json(const GraphMorphism& m);
GraphMorphism morphism_from_json(const nlohmann::json& j, const Multigraph& source,
                                 const Multigraph& target);

// Rule files: {"output": g, "context": g, "input": g, "o": morphism, "i": morphism}.
nlohmann::json rule_to_json(const LinearRule& p);
LinearRule rule_from_json(const nlohmann::json& j);

nlohmann::json overlap_to_json(const RuleOverlap& ov);

// Rule vectors serialize as a list of {"coefficient": "p/q", "rule": {...}}
// sorted by canonical key; a bare rule object is accepted as its basis
// vector on input.
nlohmann::json rule_vector_to_json(const RuleVector& v);
RuleVector rule_vector_from_json(const nlohmann::json& j);

// State vectors mirror rule vectors with "graph" entries; a bare graph
// object is accepted as its basis state.
nlohmann::json state_vector_to_json(const StateVector& v);
StateVector state_vector_from_json(const nlohmann::json& j);

// CTMC spec: {"transitions": [{"rule": {...}, "rate": 1.0}], "initial": g}.
nlohmann::json ctmc_spec_to_json(const CTMCSpec& spec);
CTMCSpec ctmc_spec_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rulealg
