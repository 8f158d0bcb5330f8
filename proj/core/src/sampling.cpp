#include "rulealg/sampling.hpp"

namespace rulealg {

Multigraph random_multigraph(CounterRng& rng, GraphKind kind, int max_vertices,
                             int max_edges) {
    int nv = static_cast<int>(rng.next_below(max_vertices + 1));
    int ne = nv == 0 ? 0 : static_cast<int>(rng.next_below(max_edges + 1));
    std::vector<std::string> vs;
    for (int v = 0; v < nv; ++v) vs.push_back("v" + std::to_string(v));
    std::vector<EdgeSpec> es;
    for (int e = 0; e < ne; ++e) {
        int a = static_cast<int>(rng.next_below(nv));
        int b = static_cast<int>(rng.next_below(nv));
        es.push_back({"e" + std::to_string(e), vs[a], vs[b]});
    }
    return Multigraph(kind, vs, es);
}

LinearRule random_linear_rule(CounterRng& rng, GraphKind kind,
                              int max_interface_vertices, int max_interface_edges) {
    Multigraph input =
        random_multigraph(rng, kind, max_interface_vertices, max_interface_edges);

    // context: random subgraph of the input
    std::vector<char> keep_v(input.vertex_count(), 0);
    for (int v = 0; v < input.vertex_count(); ++v) keep_v[v] = rng.next_below(2) == 0;
    std::vector<std::string> kvs;
    std::vector<EdgeSpec> kes;
    for (int v = 0; v < input.vertex_count(); ++v) {
        if (keep_v[v]) kvs.push_back(input.vertex_id(v));
    }
    for (int e = 0; e < input.edge_count(); ++e) {
        auto [a, b] = input.ends(e);
        if (keep_v[a] && keep_v[b] && rng.next_below(2) == 0) {
            kes.push_back({input.edge_id(e), input.vertex_id(a), input.vertex_id(b)});
        }
    }
    Multigraph context(kind, kvs, kes);

    // output: the context plus fresh vertices and edges
    std::vector<std::string> ovs = context.vertex_ids();
    int extra_v = static_cast<int>(rng.next_below(max_interface_vertices + 1));
    extra_v = std::min(extra_v, max_interface_vertices - context.vertex_count());
    for (int v = 0; v < extra_v; ++v) ovs.push_back("w" + std::to_string(v));
    std::vector<EdgeSpec> oes;
    for (int e = 0; e < context.edge_count(); ++e) {
        auto [a, b] = context.ends(e);
        oes.push_back({context.edge_id(e), context.vertex_id(a), context.vertex_id(b)});
    }
    if (!ovs.empty()) {
        int extra_e = static_cast<int>(rng.next_below(max_interface_edges + 1));
        extra_e = std::min(extra_e, max_interface_edges - context.edge_count());
        for (int e = 0; e < extra_e; ++e) {
            int a = static_cast<int>(rng.next_below(ovs.size()));
            int b = static_cast<int>(rng.next_below(ovs.size()));
            oes.push_back({"f" + std::to_string(e), ovs[a], ovs[b]});
        }
    }
    Multigraph output(kind, ovs, oes);

    auto inclusion = [](const Multigraph& sub, const Multigraph& sup) {
        std::vector<int> vm(sub.vertex_count()), em(sub.edge_count());
        for (int v = 0; v < sub.vertex_count(); ++v) {
            vm[v] = *sup.vertex_index(sub.vertex_id(v));
        }
        for (int e = 0; e < sub.edge_count(); ++e) {
            em[e] = *sup.edge_index(sub.edge_id(e));
        }
        return GraphMorphism(sub, sup, std::move(vm), std::move(em));
    };
    return LinearRule(output, context, input, inclusion(context, output),
                      inclusion(context, input));
}

}  // namespace rulealg
