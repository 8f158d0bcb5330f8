#include "rulealg/io.hpp"

#include <fstream>
#include <sstream>

namespace rulealg {

using nlohmann::json;

std::string rational_to_string(const Rational& r) {
    std::ostringstream out;
    out << numerator(r) << '/' << denominator(r);
    return out.str();
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer p(s.substr(0, slash));
        Integer q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational '" + s + "'");
    }
}

namespace {

const json& require(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string(what) + ": missing field '" + key + "'");
    }
    return *it;
}

std::string require_string(const json& j, const char* key, const char* what) {
    const json& v = require(j, key, what);
    if (!v.is_string()) {
        throw ParseError(std::string(what) + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

json graph_to_json(const Multigraph& g) {
    json edges = json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.ends(e);
        if (g.kind() == GraphKind::Directed) {
            edges.push_back({{"id", g.edge_id(e)},
                             {"src", g.vertex_id(a)},
                             {"tgt", g.vertex_id(b)}});
        } else {
            json ends = json::array({g.vertex_id(a)});
            if (a != b) ends.push_back(g.vertex_id(b));
            edges.push_back({{"id", g.edge_id(e)}, {"ends", ends}});
        }
    }
    return {{"kind", std::string(to_string(g.kind()))},
            {"vertices", g.vertex_ids()},
            {"edges", edges}};
}

Multigraph graph_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("graph: expected an object");
    std::string kind_s = require_string(j, "kind", "graph");
    GraphKind kind;
    if (kind_s == "directed") kind = GraphKind::Directed;
    else if (kind_s == "undirected") kind = GraphKind::Undirected;
    else throw ParseError("graph: kind must be 'directed' or 'undirected'");

    const json& jv = require(j, "vertices", "graph");
    if (!jv.is_array()) throw ParseError("graph: 'vertices' must be an array");
    std::vector<std::string> vertices;
    for (const json& v : jv) {
        if (!v.is_string()) throw ParseError("graph: vertex ids must be strings");
        vertices.push_back(v.get<std::string>());
    }

    const json& je = require(j, "edges", "graph");
    if (!je.is_array()) throw ParseError("graph: 'edges' must be an array");
    std::vector<EdgeSpec> edges;
    for (const json& e : je) {
        if (!e.is_object()) throw ParseError("graph: edge entries must be objects");
        std::string id = require_string(e, "id", "edge");
        if (kind == GraphKind::Directed) {
            edges.push_back({id, require_string(e, "src", "edge"),
                             require_string(e, "tgt", "edge")});
        } else {
            const json& ends = require(e, "ends", "edge");
            if (!ends.is_array() || ends.empty() || ends.size() > 2) {
                throw ParseError("edge '" + id +
                                 "': 'ends' must list one or two vertex ids");
            }
            std::string a = ends[0].is_string() ? ends[0].get<std::string>() : "";
            std::string b = ends.size() == 2 && ends[1].is_string()
                                ? ends[1].get<std::string>()
                                : a;
            if (a.empty() || b.empty()) {
                throw ParseError("edge '" + id + "': 'ends' entries must be strings");
            }
            edges.push_back({id, a, b});
        }
    }
    try {
        return Multigraph(kind, std::move(vertices), std::move(edges));
    } catch (const GraphError& err) {
        throw ParseError(std::string("graph: ") + err.what());
    }
}

json morphism_to_json(const GraphMorphism& m) {
    json vmap = json::object(), emap = json::object();
    for (int v = 0; v < m.source().vertex_count(); ++v) {
        vmap[m.source().vertex_id(v)] = m.target().vertex_id(m.vertex_image(v));
    }
    for (int e = 0; e < m.source().edge_count(); ++e) {
        emap[m.source().edge_id(e)] = m.target().edge_id(m.edge_image(e));
    }
    return {{"vmap", vmap}, {"emap", emap}};
}

GraphMorphism morphism_from_json(const json& j, const Multigraph& source,
                                 const Multigraph& target) {
    if (!j.is_object()) throw ParseError("morphism: expected an object");
    const json& jv = require(j, "vmap", "morphism");
    const json& je = require(j, "emap", "morphism");
    if (!jv.is_object() || !je.is_object()) {
        throw ParseError("morphism: 'vmap' and 'emap' must be objects");
    }
    std::vector<int> vmap(source.vertex_count(), -1), emap(source.edge_count(), -1);
    for (auto& [from, to] : jv.items()) {
        auto s = source.vertex_index(from);
        auto t = to.is_string() ? target.vertex_index(to.get<std::string>())
                                : std::nullopt;
        if (!s || !t) throw ParseError("morphism: unknown vertex in vmap");
        vmap[*s] = *t;
    }
    for (auto& [from, to] : je.items()) {
        auto s = source.edge_index(from);
        auto t = to.is_string() ? target.edge_index(to.get<std::string>())
                                : std::nullopt;
        if (!s || !t) throw ParseError("morphism: unknown edge in emap");
        emap[*s] = *t;
    }
    for (int v : vmap) {
        if (v < 0) throw ParseError("morphism: vmap is not total");
    }
    for (int e : emap) {
        if (e < 0) throw ParseError("morphism: emap is not total");
    }
    try {
        return GraphMorphism(source, target, std::move(vmap), std::move(emap));
    } catch (const GraphError& err) {
        throw ParseError(std::string("morphism: ") + err.what());
    }
}

json rule_to_json(const LinearRule& p) {
    return {{"output", graph_to_json(p.output())},
            {"context", graph_to_json(p.context())},
            {"input", graph_to_json(p.input())},
            {"o", morphism_to_json(p.into_output())},
            {"i", morphism_to_json(p.into_input())}};
}

LinearRule rule_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("rule: expected an object");
    Multigraph output = graph_from_json(require(j, "output", "rule"));
    Multigraph context = graph_from_json(require(j, "context", "rule"));
    Multigraph input = graph_from_json(require(j, "input", "rule"));
    GraphMorphism o = morphism_from_json(require(j, "o", "rule"), context, output);
    GraphMorphism i = morphism_from_json(require(j, "i", "rule"), context, input);
    try {
        return LinearRule(std::move(output), std::move(context), std::move(input),
                          std::move(o), std::move(i));
    } catch (const GraphError& err) {
        throw ParseError(std::string("rule: ") + err.what());
    }
}

json overlap_to_json(const RuleOverlap& ov) {
    return {{"apex", graph_to_json(ov.apex)},
            {"into_input2", morphism_to_json(ov.into_input2)},
            {"into_output1", morphism_to_json(ov.into_output1)}};
}

json rule_vector_to_json(const RuleVector& v) {
    json out = json::array();
    for (const auto& [key, term] : v.terms()) {
        out.push_back({{"coefficient", rational_to_string(term.coefficient)},
                       {"rule", rule_to_json(term.rule)}});
    }
    return out;
}

RuleVector rule_vector_from_json(const json& j) {
    RuleVector v;
    if (j.is_object()) {  // a bare rule stands for its basis vector
        v.add(1, rule_from_json(j));
        return v;
    }
    if (!j.is_array()) throw ParseError("rule vector: expected an array or a rule");
    for (const json& entry : j) {
        if (!entry.is_object()) throw ParseError("rule vector: entries must be objects");
        Rational c;
        try {
            c = rational_from_string(require_string(entry, "coefficient", "rule vector"));
        } catch (const std::invalid_argument& err) {
            throw ParseError(std::string("rule vector: ") + err.what());
        }
        v.add(c, rule_from_json(require(entry, "rule", "rule vector")));
    }
    return v;
}

json state_vector_to_json(const StateVector& v) {
    json out = json::array();
    for (const auto& [key, term] : v.terms()) {
        out.push_back({{"coefficient", rational_to_string(term.coefficient)},
                       {"graph", graph_to_json(term.graph)}});
    }
    return out;
}

StateVector state_vector_from_json(const json& j) {
    StateVector v;
    if (j.is_object()) {
        v.add(1, graph_from_json(j));
        return v;
    }
    if (!j.is_array()) throw ParseError("state vector: expected an array or a graph");
    for (const json& entry : j) {
        if (!entry.is_object()) throw ParseError("state vector: entries must be objects");
        Rational c;
        try {
            c = rational_from_string(require_string(entry, "coefficient", "state vector"));
        } catch (const std::invalid_argument& err) {
            throw ParseError(std::string("state vector: ") + err.what());
        }
        v.add(c, graph_from_json(require(entry, "graph", "state vector")));
    }
    return v;
}

json ctmc_spec_to_json(const CTMCSpec& spec) {
    json transitions = json::array();
    for (const Transition& tr : spec.transitions) {
        transitions.push_back({{"rule", rule_to_json(tr.rule)}, {"rate", tr.rate}});
    }
    return {{"transitions", transitions}, {"initial", graph_to_json(spec.initial)}};
}

CTMCSpec ctmc_spec_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("ctmc spec: expected an object");
    const json& jt = require(j, "transitions", "ctmc spec");
    if (!jt.is_array()) throw ParseError("ctmc spec: 'transitions' must be an array");
    CTMCSpec spec{{}, graph_from_json(require(j, "initial", "ctmc spec"))};
    for (const json& entry : jt) {
        if (!entry.is_object()) throw ParseError("ctmc spec: transitions must be objects");
        const json& jr = require(entry, "rate", "transition");
        if (!jr.is_number()) throw ParseError("ctmc spec: 'rate' must be a number");
        spec.transitions.push_back(
            {rule_from_json(require(entry, "rule", "transition")), jr.get<double>()});
    }
    try {
        spec.validate();
    } catch (const GraphError& err) {
        throw ParseError(std::string("ctmc spec: ") + err.what());
    }
    return spec;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw ParseError("invalid JSON in '" + path + "': " + err.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace rulealg
