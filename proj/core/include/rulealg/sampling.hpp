#pragma once

#include "rulealg/dpo.hpp"
#include "rulealg/rng.hpp"

namespace rulealg {

/// Random multigraph with up to max_vertices vertices and max_edges edges
/// (loops included); used by the verification suites and tests.
Multigraph random_multigraph(CounterRng& rng, GraphKind kind, int max_vertices,
                             int max_edges);

/// Random linear rule: a random input graph, a random subgraph as context,
/// and an output extending the context by fresh vertices and edges. The
/// interface graphs stay within the given bounds.
LinearRule random_linear_rule(CounterRng& rng, GraphKind kind,
                              int max_interface_vertices, int max_interface_edges);

}  // namespace rulealg
