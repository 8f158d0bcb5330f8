#include "rulealg/rule_algebra.hpp"

#include <algorithm>

namespace rulealg {

std::optional<GraphKind> RuleVector::kind() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->second.rule.kind();
}

Rational RuleVector::coefficient(const RuleKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second.coefficient;
}

void RuleVector::add(const Rational& c, const LinearRule& rule) {
    if (c == 0) return;
    RuleCanonicalForm can = canonical_rule(rule);
    add_keyed(can.key, c, can.rule);
}

void RuleVector::add_keyed(const RuleKey& key, const Rational& c,
                           const LinearRule& canonical) {
    if (c == 0) return;
    if (auto k = kind(); k && *k != canonical.kind()) {
        throw GraphError("rule vector: mixed graph kinds");
    }
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, Term{c, canonical});
        return;
    }
    it->second.coefficient += c;
    if (it->second.coefficient == 0) terms_.erase(it);
}

RuleVector& RuleVector::operator+=(const RuleVector& other) {
    for (const auto& [key, term] : other.terms_) {
        add_keyed(key, term.coefficient, term.rule);
    }
    return *this;
}

RuleVector& RuleVector::operator-=(const RuleVector& other) {
    for (const auto& [key, term] : other.terms_) {
        add_keyed(key, -term.coefficient, term.rule);
    }
    return *this;
}

RuleVector& RuleVector::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, term] : terms_) term.coefficient *= scalar;
    return *this;
}

bool RuleVector::operator==(const RuleVector& other) const {
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

RuleVector delta(const LinearRule& p) {
    RuleVector v;
    v.add(1, p);
    return v;
}

RuleVector rule_unit(GraphKind kind) { return delta(empty_rule(kind)); }

RuleVector product(const RuleVector& r2, const RuleVector& r1) {
    if (auto k2 = r2.kind(), k1 = r1.kind(); k2 && k1 && *k2 != *k1) {
        throw GraphError("product: operands over different graph kinds");
    }
    RuleVector out;
    for (const auto& [key2, t2] : r2.terms()) {
        for (const auto& [key1, t1] : r1.terms()) {
            Rational c = t2.coefficient * t1.coefficient;
            for (const RuleOverlap& ov : enumerate_rule_overlaps(t2.rule, t1.rule)) {
                RuleComposite comp = compose_rules_full(t2.rule, ov, t1.rule);
                out.add_keyed(comp.key, c, comp.rule);
            }
        }
    }
    return out;
}

RuleVector commutator(const RuleVector& a, const RuleVector& b) {
    return product(a, b) - product(b, a);
}

bool check_associativity(const LinearRule& p1, const LinearRule& p2,
                         const LinearRule& p3) {
    RuleVector d1 = delta(p1), d2 = delta(p2), d3 = delta(p3);
    return product(d3, product(d2, d1)) == product(product(d3, d2), d1);
}

RuleVector vertex_creation_element(GraphKind kind) {
    return delta(vertex_create_rule(kind));
}

RuleVector vertex_deletion_element(GraphKind kind) {
    return delta(vertex_delete_rule(kind));
}

RuleVector creation_annihilation_word(int n_out, int n_in, GraphKind kind) {
    return delta(discrete_rule(kind, n_out, n_in));
}

RuleVector hw_normal_order(int r, int s, int k, int l) {
    if (r < 0 || s < 0 || k < 0 || l < 0) {
        throw GraphError("hw_normal_order: exponents must be non-negative");
    }
    auto factorial = [](int n) {
        Integer f = 1;
        for (int j = 2; j <= n; ++j) f *= j;
        return f;
    };
    RuleVector out;
    for (int n = 0; n <= std::min(s, k); ++n) {
        Rational c(factorial(s) * factorial(k),
                   factorial(s - n) * factorial(n) * factorial(k - n));
        out += c * creation_annihilation_word(r + k - n, s + l - n);
    }
    return out;
}

RuleVector edge_creation_element() {
    return Rational(1, 2) * delta(edge_create_rule());
}

RuleVector edge_deletion_element() {
    return Rational(1, 2) * delta(edge_delete_rule());
}

RuleVector vertex_pair_counter_element() {
    return Rational(1, 2) * delta(vertex_pair_rule());
}

}  // namespace rulealg
