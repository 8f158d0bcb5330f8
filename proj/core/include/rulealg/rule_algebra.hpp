#pragma once

#include <map>
#include <optional>

#include "rulealg/dpo.hpp"
#include "rulealg/rational.hpp"

namespace rulealg {

/// Element of the free vector space over isomorphism classes of linear
/// rules. Terms are keyed by RuleKey with exact rational coefficients; no
/// zero coefficient is ever stored. Each term keeps the first-seen canonical
/// representative rule.
class RuleVector {
public:
    struct Term {
        Rational coefficient;
        LinearRule rule;  // canonical representative
    };

    RuleVector() = default;

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<RuleKey, Term>& terms() const { return terms_; }

    /// Kind shared by all terms; empty vectors are kind-agnostic.
    std::optional<GraphKind> kind() const;

    Rational coefficient(const RuleKey& key) const;

    /// Adds c * [rule]; canonicalizes the rule first.
    void add(const Rational& c, const LinearRule& rule);
    /// Adds c * [key] where the representative is already canonical.
    void add_keyed(const RuleKey& key, const Rational& c, const LinearRule& canonical);

    RuleVector& operator+=(const RuleVector& other);
    RuleVector& operator-=(const RuleVector& other);
    RuleVector& operator*=(const Rational& scalar);

    friend RuleVector operator+(RuleVector a, const RuleVector& b) { return a += b; }
    friend RuleVector operator-(RuleVector a, const RuleVector& b) { return a -= b; }
    friend RuleVector operator*(const Rational& s, RuleVector a) { return a *= s; }

    /// Exact term-by-term equality (keys and coefficients).
    bool operator==(const RuleVector& other) const;

private:
    std::map<RuleKey, Term> terms_;
};

/// Basis vector of a rule's isomorphism class.
RuleVector delta(const LinearRule& p);

/// Unit element: the basis vector of the empty rule.
RuleVector rule_unit(GraphKind kind);

/// The bilinear rule algebra product: on basis rules, the sum over all
/// admissible overlaps of p2 into p1 of the composite's basis vector. An
/// empty overlap set contributes the zero vector.
RuleVector product(const RuleVector& r2, const RuleVector& r1);

/// a * b - b * a, exactly.
RuleVector commutator(const RuleVector& a, const RuleVector& b);

/// True iff delta(p3) * (delta(p2) * delta(p1)) equals
/// (delta(p3) * delta(p2)) * delta(p1) term by term.
bool check_associativity(const LinearRule& p1, const LinearRule& p2,
                         const LinearRule& p3);

// Generators over discrete undirected graphs (vertex creation / deletion).
RuleVector vertex_creation_element(GraphKind kind = GraphKind::Undirected);
RuleVector vertex_deletion_element(GraphKind kind = GraphKind::Undirected);
/// delta of the context-free rule between discrete graphs with n_out output
/// and n_in input vertices: the normal-ordered word with n_out creations
/// after n_in deletions.
RuleVector creation_annihilation_word(int n_out, int n_in,
                                      GraphKind kind = GraphKind::Undirected);

/// Closed-form normal-ordered expansion of the product of two such words:
/// sum over n of s!k!/((s-n)! n! (k-n)!) times the word with r+k-n creations
/// and s+l-n deletions. Must agree with the engine product exactly.
RuleVector hw_normal_order(int r, int s, int k, int l);

// Half-coefficient generators of the undirected edge algebra; the 1/2
// compensates the two-fold symmetry of the underlying two-vertex rules.
RuleVector edge_creation_element();        // e+
RuleVector edge_deletion_element();        // e-
RuleVector vertex_pair_counter_element();  // d

}  // namespace rulealg
