#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rulealg/category.hpp"
#include "rulealg/multigraph.hpp"

namespace rulealg {

/// A linear rewriting rule: a span of monos O <- K -> I (output, context,
/// input). Applying the rule to X along a match I -> X deletes the m-image
/// of I minus K and glues in O along K.
class LinearRule {
public:
    /// Validates: monos, kind homogeneity. Throws GraphError.
    LinearRule(Multigraph output, Multigraph context, Multigraph input,
               GraphMorphism into_output, GraphMorphism into_input);

    const Multigraph& output() const { return output_; }
    const Multigraph& context() const { return context_; }
    const Multigraph& input() const { return input_; }
    const GraphMorphism& into_output() const { return o_; }
    const GraphMorphism& into_input() const { return i_; }
    GraphKind kind() const { return output_.kind(); }

    bool operator==(const LinearRule& other) const;

private:
    Multigraph output_, context_, input_;
    GraphMorphism o_;  // K -> O
    GraphMorphism i_;  // K -> I
};

// Common rule constructors.
LinearRule empty_rule(GraphKind kind);                 // (0 <- 0 -> 0), the unit
LinearRule identity_rule(const Multigraph& g);         // (G <- G -> G)
/// Context-free rule between discrete graphs: (n_out vertices <- 0 -> n_in).
LinearRule discrete_rule(GraphKind kind, int n_out, int n_in);
LinearRule vertex_create_rule(GraphKind kind);         // (. <- 0 -> 0)
LinearRule vertex_delete_rule(GraphKind kind);         // (0 <- 0 -> .)
/// Undirected: creates one edge between two preserved vertices.
LinearRule edge_create_rule();
/// Undirected: deletes one edge, preserving its endpoints.
LinearRule edge_delete_rule();
/// Undirected identity rule on two discrete vertices.
LinearRule vertex_pair_rule();

/// Canonical byte string for the isomorphism class of the whole span: equal
/// keys exactly when there are isomorphisms of O, K, I commuting with the
/// rule legs.
using RuleKey = std::string;

struct RuleCanonicalForm {
    RuleKey key;
    LinearRule rule;            // canonical representative
    GraphMorphism output_iso;   // original O -> canonical O
    GraphMorphism context_iso;  // original K -> canonical K
    GraphMorphism input_iso;    // original I -> canonical I
};

RuleCanonicalForm canonical_rule(const LinearRule& p);
RuleKey rule_key(const LinearRule& p);

/// An overlap (admissible match) of rule p2 into rule p1: a mono span
/// I2 <- M -> O1. Stored normalized: the apex is the induced subgraph of I2
/// on the paired items (keeping I2's ids), into_input2 is the inclusion.
/// Two overlaps are the same class iff their item pairings agree.
struct RuleOverlap {
    Multigraph apex;              // M
    GraphMorphism into_input2;    // M -> I2 (inclusion)
    GraphMorphism into_output1;   // M -> O1

    bool operator==(const RuleOverlap& other) const;
};

/// All admissible matches of p in x: monos I -> X passing the gluing
/// condition, each as a concrete morphism, deterministic order.
std::vector<GraphMorphism> find_matches(const LinearRule& p, const Multigraph& x);

/// Full data of one derivation step (before canonical relabeling of the
/// result, which the public derive() applies).
struct Derivation {
    Multigraph result;            // p_m(X), canonically labelled
    CanonicalKey result_key;      // canonical_key(result)
    GraphMorphism comatch;        // O -> result
    GraphMorphism kept;           // K-bar -> result (image of the preserved part)
    Multigraph context;           // K-bar, subgraph of X with X's ids
    GraphMorphism context_in_x;   // K-bar -> X
    GraphMorphism context_from_k; // K -> K-bar
};

/// Applies p to x along admissible match m; throws GraphError if m is not
/// admissible. Result is canonically labelled.
Multigraph derive(const LinearRule& p, const GraphMorphism& m, const Multigraph& x);
Derivation derive_full(const LinearRule& p, const GraphMorphism& m, const Multigraph& x);

/// One representative per span-isomorphism class of overlaps of p2 into p1,
/// filtered by admissibility (both pushout complements of the glued object
/// must exist). Deterministic order.
std::vector<RuleOverlap> enumerate_rule_overlaps(const LinearRule& p2,
                                                 const LinearRule& p1);

bool overlap_is_admissible(const LinearRule& p2, const RuleOverlap& ov,
                           const LinearRule& p1);

/// Composite rule construction together with the diagram pieces the
/// concurrency theorem machinery needs.
struct RuleComposite {
    LinearRule rule;                    // canonical composite
    RuleKey key;                        // rule_key(rule)
    Multigraph glue;                    // N21, pushout of the overlap
    GraphMorphism input2_to_glue;       // I2 -> N21
    GraphMorphism output1_to_glue;      // O1 -> N21
    PushoutComplement left_complement;  // K2 -> K2bar -> N21
    PushoutComplement right_complement; // K1 -> K1bar -> N21
    Multigraph raw_output;              // O21 before relabeling
    Multigraph raw_input;               // I21 before relabeling
    GraphMorphism output2_in;           // O2 -> raw O21
    GraphMorphism left_context_in;      // K2bar -> raw O21
    GraphMorphism input1_in;            // I1 -> raw I21
    GraphMorphism right_context_in;     // K1bar -> raw I21
    GraphMorphism output_relabel;       // raw O21 -> rule.output()
    GraphMorphism context_relabel;      // raw K21 -> rule.context()
    GraphMorphism input_relabel;        // raw I21 -> rule.input()
};

/// DPO concurrent composite of p2 with p1 along ov. Throws GraphError if the
/// overlap is not admissible. Returned canonically labelled.
LinearRule compose_rules(const LinearRule& p2, const RuleOverlap& ov,
                         const LinearRule& p1);
RuleComposite compose_rules_full(const LinearRule& p2, const RuleOverlap& ov,
                                 const LinearRule& p1);

/// Disjoint-union of rules: composition along the empty overlap.
LinearRule disjoint_union(const LinearRule& p2, const LinearRule& p1);
RuleOverlap empty_overlap(const LinearRule& p2, const LinearRule& p1);

struct SynthesisResult {
    RuleOverlap overlap;     // the unique overlap mediating the two steps
    LinearRule composite;    // compose_rules(p2, overlap, p1), canonical
    GraphMorphism match;     // composite input -> X0
};

/// Concurrency theorem, synthesis direction: from a two-step derivation
/// (p1 at m1, then p2 at m2 in derive(p1, m1, x0)) produce the composite
/// rule, its overlap and the match n with derive(q, n, x0) isomorphic to the
/// sequential result.
SynthesisResult synthesize(const LinearRule& p2, const GraphMorphism& m2,
                           const LinearRule& p1, const GraphMorphism& m1,
                           const Multigraph& x0);

struct AnalysisResult {
    GraphMorphism first_match;   // m1: I1 -> X0
    GraphMorphism second_match;  // m2: I2 -> derive(p1, m1, x0)
};

/// Concurrency theorem, analysis direction: from a match n of the composite
/// of (p2, ov, p1) into x0, recover the unique two-step match pair.
AnalysisResult analyze(const LinearRule& p2, const RuleOverlap& ov,
                       const LinearRule& p1, const GraphMorphism& n,
                       const Multigraph& x0);

}  // namespace rulealg
