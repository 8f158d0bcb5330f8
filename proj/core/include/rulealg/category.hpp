#pragma once

#include <optional>

#include "rulealg/multigraph.hpp"

namespace rulealg {

/// Two morphisms out of a common apex. For M-spans both legs are monos.
struct Span {
    Multigraph apex;
    GraphMorphism left;   // apex -> left foot
    GraphMorphism right;  // apex -> right foot
};

/// Two morphisms into a common target.
struct Cospan {
    GraphMorphism left;   // left foot -> target
    GraphMorphism right;  // right foot -> target
};

struct PushoutResult {
    Multigraph object;      // D
    GraphMorphism from_b;   // B -> D
    GraphMorphism from_c;   // C -> D
};

struct PullbackResult {
    Multigraph apex;      // A
    GraphMorphism to_b;   // A -> B
    GraphMorphism to_c;   // A -> C
};

struct PushoutComplement {
    Multigraph context;       // K-bar, a subgraph of X keeping X's ids
    GraphMorphism from_k;     // K -> K-bar
    GraphMorphism into_x;     // K-bar -> X (inclusion)
};

/// Pushout of b: A -> B, c: A -> C. At least one leg must be mono. The
/// result is the quotient of the disjoint union B + C by the identifications
/// induced through A; fresh ids are assigned deterministically (classes
/// ordered by their lexicographically least member id).
PushoutResult pushout(const GraphMorphism& b, const GraphMorphism& c);

/// Pullback of f: B -> D, g: C -> D: the agreement subobject of B x C.
PullbackResult pullback(const GraphMorphism& f, const GraphMorphism& g);

/// Pushout complement of K -> I -> X for monos i, m. Empty when the gluing
/// (dangling) condition fails. The construction is re-verified by a pushout
/// round-trip before returning.
std::optional<PushoutComplement> pushout_complement(const GraphMorphism& i,
                                                    const GraphMorphism& m);

/// True iff pushout_complement(i, m) would return a value (dangling check
/// only, no construction).
bool gluing_condition_holds(const GraphMorphism& i, const GraphMorphism& m);

/// Span composition via pullback: (E <- D -> C) o (C <- B -> A) -> E <- F -> A.
/// The middle objects must be equal; use align_span_to to adjust first.
Span compose_spans(const Span& s, const Span& r);

/// Mediating morphism D -> Z for a cocone (f: B -> Z, g: C -> Z) commuting
/// with the pushout legs. Throws if the cocone does not commute.
GraphMorphism pushout_mediator(const PushoutResult& po, const GraphMorphism& f,
                               const GraphMorphism& g);

/// Mediating morphism Z -> A for a cone (f: Z -> B, g: Z -> C) commuting
/// with the pullback legs.
GraphMorphism pullback_mediator(const PullbackResult& pb, const GraphMorphism& f,
                                const GraphMorphism& g);

/// Replaces the right foot of s by an equal-up-to-iso object through its
/// canonical relabeling, so that compose_spans(s', r) applies. Throws if the
/// feet are not isomorphic.
Span align_span_to(const Span& s, const Multigraph& middle);

}  // namespace rulealg
