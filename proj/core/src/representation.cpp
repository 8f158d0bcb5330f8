#include "rulealg/representation.hpp"

#include <algorithm>

namespace rulealg {

Observable::Observable(Multigraph motif, GraphMorphism context)
    : motif_(std::move(motif)),
      context_(std::move(context)),
      rule_(motif_, context_.source(), motif_, context_, context_) {
    if (!(context_.target() == motif_)) {
        throw GraphError("observable: context does not map into the motif");
    }
    if (!context_.is_mono()) throw GraphError("observable: context must be mono");
}

Observable Observable::counting(const Multigraph& motif) {
    return Observable(motif, GraphMorphism::identity(motif));
}

Rational observable_eigenvalue(const Observable& o, const Multigraph& g) {
    if (o.motif().kind() != g.kind()) {
        throw GraphError("observable_eigenvalue: graph kinds differ");
    }
    return Rational(find_matches(o.as_rule(), g).size());
}

Rational correlator(const std::vector<Observable>& obs, const StateVector& psi) {
    Rational total(0);
    for (const auto& [key, t] : psi.terms()) {
        Rational w = t.coefficient;
        for (const Observable& o : obs) w *= observable_eigenvalue(o, t.graph);
        total += w;
    }
    return total;
}

std::vector<SequenceTerm> hw_sequence(int n) {
    if (n < 0) throw GraphError("hw_sequence: n must be non-negative");
    StateVector psi = ket(discrete_graph(GraphKind::Undirected, 3));
    RuleVector eplus = edge_creation_element();
    for (int step = 0; step < n; ++step) psi = apply_rep(eplus, psi);

    std::vector<SequenceTerm> out;
    for (const auto& [key, t] : psi.terms()) {
        const Multigraph& g = t.graph;
        std::array<int, 3> part{g.multiplicity(0, 1), g.multiplicity(0, 2),
                                g.multiplicity(1, 2)};
        std::sort(part.begin(), part.end(), std::greater<>());
        Rational c = n == 0 ? t.coefficient : t.coefficient / 3;
        out.push_back(SequenceTerm{part, c});
    }
    std::sort(out.begin(), out.end(), [](const SequenceTerm& a, const SequenceTerm& b) {
        return a.partition > b.partition;
    });
    return out;
}

}  // namespace rulealg
