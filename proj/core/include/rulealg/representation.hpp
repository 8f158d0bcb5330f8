#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "rulealg/multigraph.hpp"
#include "rulealg/rational.hpp"
#include "rulealg/rule_algebra.hpp"

namespace rulealg {

namespace detail {
template <typename C>
struct coeff_cast_t {
    static C from(const Rational& r) { return static_cast<C>(r); }
};
template <>
struct coeff_cast_t<double> {
    static double from(const Rational& r) { return r.template convert_to<double>(); }
};
}  // namespace detail

/// Finitely supported vector over graph isomorphism classes, keyed by
/// canonical key; each term keeps its first-seen canonical representative.
/// Instantiated with Rational for the exact algebraic layer and with double
/// for the stochastic layer — distinct types, never mixed silently.
template <typename Coeff>
class StateVec {
public:
    struct Term {
        Coeff coefficient;
        Multigraph graph;  // canonical representative
    };

    StateVec() = default;

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<CanonicalKey, Term>& terms() const { return terms_; }

    std::optional<GraphKind> kind() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->second.graph.kind();
    }

    Coeff coefficient(const CanonicalKey& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Coeff(0) : it->second.coefficient;
    }

    void add(const Coeff& c, const Multigraph& g) {
        if (c == Coeff(0)) return;
        CanonicalForm can = canonical_form(g);
        add_keyed(can.key, c, can.representative);
    }

    void add_keyed(const CanonicalKey& key, const Coeff& c, const Multigraph& canonical) {
        if (c == Coeff(0)) return;
        if (auto k = kind(); k && *k != canonical.kind()) {
            throw GraphError("state vector: mixed graph kinds");
        }
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, Term{c, canonical});
            return;
        }
        it->second.coefficient += c;
        if (it->second.coefficient == Coeff(0)) terms_.erase(it);
    }

    StateVec& operator+=(const StateVec& other) {
        for (const auto& [key, t] : other.terms_) add_keyed(key, t.coefficient, t.graph);
        return *this;
    }
    StateVec& operator-=(const StateVec& other) {
        for (const auto& [key, t] : other.terms_) add_keyed(key, -t.coefficient, t.graph);
        return *this;
    }
    StateVec& operator*=(const Coeff& s) {
        if (s == Coeff(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [key, t] : terms_) t.coefficient *= s;
        return *this;
    }
    friend StateVec operator+(StateVec a, const StateVec& b) { return a += b; }
    friend StateVec operator-(StateVec a, const StateVec& b) { return a -= b; }
    friend StateVec operator*(const Coeff& s, StateVec a) { return a *= s; }

    bool operator==(const StateVec& other) const {
        if (terms_.size() != other.terms_.size()) return false;
        auto it = terms_.begin();
        auto jt = other.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt) {
            if (it->first != jt->first || it->second.coefficient != jt->second.coefficient) {
                return false;
            }
        }
        return true;
    }

private:
    std::map<CanonicalKey, Term> terms_;
};

using StateVector = StateVec<Rational>;        // exact algebraic mode
using NumericStateVector = StateVec<double>;   // stochastic mode

/// Basis state of a graph's isomorphism class.
template <typename C = Rational>
StateVec<C> ket(const Multigraph& g) {
    StateVec<C> v;
    v.add(C(1), g);
    return v;
}

/// The canonical representation: a rule basis vector acts on a graph basis
/// vector as the sum of derivations over all admissible matches (zero when
/// there are none); extended bilinearly.
template <typename C>
StateVec<C> apply_rep(const RuleVector& r, const StateVec<C>& psi) {
    if (auto rk = r.kind(), sk = psi.kind(); rk && sk && *rk != *sk) {
        throw GraphError("apply_rep: rule and state kinds differ");
    }
    StateVec<C> out;
    for (const auto& [rkey, rt] : r.terms()) {
        C rc = detail::coeff_cast_t<C>::from(rt.coefficient);
        for (const auto& [skey, st] : psi.terms()) {
            C c = rc * st.coefficient;
            for (const GraphMorphism& m : find_matches(rt.rule, st.graph)) {
                Derivation d = derive_full(rt.rule, m, st.graph);
                out.add_keyed(d.result_key, c, d.result);
            }
        }
    }
    return out;
}

/// Sum of coefficients.
template <typename C>
C projection(const StateVec<C>& psi) {
    C s(0);
    for (const auto& [key, t] : psi.terms()) s += t.coefficient;
    return s;
}

/// A diagonal operator given by a motif M and a context mono t: K -> M used
/// for both legs of the identity-shaped rule (M <-t- K -t-> M). Its
/// eigenvalue on |G> is the number of admissible matches of that rule.
class Observable {
public:
    Observable(Multigraph motif, GraphMorphism context);
    /// Identity context: plain mono-embedding count of the motif.
    static Observable counting(const Multigraph& motif);

    const Multigraph& motif() const { return motif_; }
    const GraphMorphism& context() const { return context_; }
    const LinearRule& as_rule() const { return rule_; }

private:
    Multigraph motif_;
    GraphMorphism context_;
    LinearRule rule_;
};

/// Admissible match count of the observable's rule in g (any scalar
/// prefactor is the caller's).
Rational observable_eigenvalue(const Observable& o, const Multigraph& g);

/// sum_o psi_o * prod_j omega_j(o).
Rational correlator(const std::vector<Observable>& obs, const StateVector& psi);

struct SequenceTerm {
    std::array<int, 3> partition;  // f >= g >= h, f+g+h = n
    Rational coefficient;          // T(n, k); raw coefficient for n = 0
};

/// Applies the edge-creation element n times to the discrete undirected
/// 3-vertex graph and decodes the resulting basis graphs into edge-count
/// triples, reverse-lexicographically ordered. For n >= 1 coefficients are
/// divided by the common prefactor 3; n = 0 returns the raw identity term.
std::vector<SequenceTerm> hw_sequence(int n);

}  // namespace rulealg
