#include "rulealg/category.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace rulealg {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string padded(char prefix, int i, int total) {
    int width = 1;
    for (int t = total - 1; t >= 10; t /= 10) ++width;
    std::string s = std::to_string(i);
    return prefix + std::string(width - s.size(), '0') + s;
}

}  // namespace

PushoutResult pushout(const GraphMorphism& b, const GraphMorphism& c) {
    if (!(b.source() == c.source())) {
        throw GraphError("pushout: legs do not share a source");
    }
    if (!b.is_mono() && !c.is_mono()) {
        throw GraphError("pushout: at least one leg must be mono");
    }
    const Multigraph& A = b.source();
    const Multigraph& B = b.target();
    const Multigraph& C = c.target();

    int nb = B.vertex_count(), nc = C.vertex_count();
    int mb = B.edge_count(), mc = C.edge_count();
    UnionFind vuf(nb + nc), euf(mb + mc);
    for (int v = 0; v < A.vertex_count(); ++v) {
        vuf.unite(b.vertex_image(v), nb + c.vertex_image(v));
    }
    for (int e = 0; e < A.edge_count(); ++e) {
        euf.unite(b.edge_image(e), mb + c.edge_image(e));
    }

    // order classes by their lexicographically least member id (ties: B side)
    auto item_tag = [&](int item, bool vertex) {
        if (vertex) {
            return item < nb ? std::make_pair(B.vertex_id(item), 0)
                             : std::make_pair(C.vertex_id(item - nb), 1);
        }
        return item < mb ? std::make_pair(B.edge_id(item), 0)
                         : std::make_pair(C.edge_id(item - mb), 1);
    };
    auto classes_of = [&](UnionFind& uf, int total, bool vertex) {
        std::map<int, std::pair<std::string, int>> least;  // root -> least tag
        for (int i = 0; i < total; ++i) {
            int r = uf.find(i);
            auto tag = item_tag(i, vertex);
            auto it = least.find(r);
            if (it == least.end() || tag < it->second) least[r] = tag;
        }
        std::vector<std::pair<std::pair<std::string, int>, int>> ordered;
        ordered.reserve(least.size());
        for (auto& [root, tag] : least) ordered.emplace_back(tag, root);
        std::sort(ordered.begin(), ordered.end());
        std::map<int, int> index;  // root -> class index
        for (size_t i = 0; i < ordered.size(); ++i) index[ordered[i].second] = static_cast<int>(i);
        return index;
    };
    auto vclass = classes_of(vuf, nb + nc, true);
    auto eclass = classes_of(euf, mb + mc, false);

    int nv = static_cast<int>(vclass.size());
    int ne = static_cast<int>(eclass.size());
    std::vector<std::string> vs;
    vs.reserve(nv);
    for (int i = 0; i < nv; ++i) vs.push_back(padded('v', i, nv));

    std::vector<int> vmap_b(nb), vmap_c(nc);
    for (int v = 0; v < nb; ++v) vmap_b[v] = vclass[vuf.find(v)];
    for (int v = 0; v < nc; ++v) vmap_c[v] = vclass[vuf.find(nb + v)];

    // incidence per edge class, induced from any member; commutativity of the
    // square makes this independent of the member chosen.
    std::vector<EdgeSpec> es(ne);
    std::vector<char> have(ne, 0);
    auto place_edge = [&](int cls, int va, int vb, GraphKind kind) {
        int a = va, bb = vb;
        if (kind == GraphKind::Undirected && a > bb) std::swap(a, bb);
        if (!have[cls]) {
            es[cls] = {padded('e', cls, ne), vs[a], vs[bb]};
            have[cls] = 1;
        }
    };
    std::vector<int> emap_b(mb), emap_c(mc);
    for (int e = 0; e < mb; ++e) {
        int cls = eclass[euf.find(e)];
        emap_b[e] = cls;
        auto [a, bb] = B.ends(e);
        place_edge(cls, vmap_b[a], vmap_b[bb], B.kind());
    }
    for (int e = 0; e < mc; ++e) {
        int cls = eclass[euf.find(mb + e)];
        emap_c[e] = cls;
        auto [a, bb] = C.ends(e);
        place_edge(cls, vmap_c[a], vmap_c[bb], C.kind());
    }

    Multigraph D(B.kind(), vs, es);
    // generated ids are zero-padded, so class index == sorted index in D
    GraphMorphism inB(B, D, std::move(vmap_b), std::move(emap_b));
    GraphMorphism inC(C, D, std::move(vmap_c), std::move(emap_c));
    return PushoutResult{std::move(D), std::move(inB), std::move(inC)};
}

PullbackResult pullback(const GraphMorphism& f, const GraphMorphism& g) {
    if (!(f.target() == g.target())) {
        throw GraphError("pullback: legs do not share a target");
    }
    const Multigraph& B = f.source();
    const Multigraph& C = g.source();
    GraphKind kind = B.kind();

    std::vector<std::pair<int, int>> vpairs;
    std::map<std::pair<int, int>, int> vindex;
    for (int x = 0; x < B.vertex_count(); ++x) {
        for (int y = 0; y < C.vertex_count(); ++y) {
            if (f.vertex_image(x) == g.vertex_image(y)) {
                vindex[{x, y}] = static_cast<int>(vpairs.size());
                vpairs.emplace_back(x, y);
            }
        }
    }
    std::vector<std::pair<int, int>> epairs;
    std::vector<std::pair<int, int>> eends;
    for (int e1 = 0; e1 < B.edge_count(); ++e1) {
        for (int e2 = 0; e2 < C.edge_count(); ++e2) {
            if (f.edge_image(e1) != g.edge_image(e2)) continue;
            if (kind == GraphKind::Directed) {
                auto [s1, t1] = B.ends(e1);
                auto [s2, t2] = C.ends(e2);
                epairs.emplace_back(e1, e2);
                eends.emplace_back(vindex.at({s1, s2}), vindex.at({t1, t2}));
            } else {
                auto [u1, v1] = B.ends(e1);
                auto [u2, v2] = C.ends(e2);
                std::set<std::pair<int, int>> agree;
                for (int x : {u1, v1}) {
                    for (int y : {u2, v2}) {
                        if (f.vertex_image(x) == g.vertex_image(y)) agree.insert({x, y});
                    }
                }
                std::set<int> proj1, proj2;
                for (auto& [x, y] : agree) {
                    proj1.insert(x);
                    proj2.insert(y);
                }
                std::set<int> ends1{u1, v1}, ends2{u2, v2};
                if (agree.empty() || agree.size() > 2 || proj1 != ends1 || proj2 != ends2) {
                    throw GraphError(
                        "pullback: incidence of an edge pair is not a valid "
                        "1- or 2-element vertex set (non-mono legs)");
                }
                auto it = agree.begin();
                int a = vindex.at(*it);
                int bb = agree.size() == 2 ? vindex.at(*std::next(it)) : a;
                epairs.emplace_back(e1, e2);
                eends.emplace_back(a, bb);
            }
        }
    }

    int nv = static_cast<int>(vpairs.size());
    int ne = static_cast<int>(epairs.size());
    std::vector<std::string> vs;
    vs.reserve(nv);
    for (int i = 0; i < nv; ++i) vs.push_back(padded('v', i, nv));
    std::vector<EdgeSpec> es;
    es.reserve(ne);
    for (int i = 0; i < ne; ++i) {
        es.push_back({padded('e', i, ne), vs[eends[i].first], vs[eends[i].second]});
    }
    Multigraph A(kind, vs, es);

    std::vector<int> vb(nv), vc(nv), eb(ne), ec(ne);
    for (int i = 0; i < nv; ++i) {
        vb[i] = vpairs[i].first;
        vc[i] = vpairs[i].second;
    }
    for (int i = 0; i < ne; ++i) {
        eb[i] = epairs[i].first;
        ec[i] = epairs[i].second;
    }
    GraphMorphism pB(A, B, std::move(vb), std::move(eb));
    GraphMorphism pC(A, C, std::move(vc), std::move(ec));
    return PullbackResult{std::move(A), std::move(pB), std::move(pC)};
}

bool gluing_condition_holds(const GraphMorphism& i, const GraphMorphism& m) {
    if (!i.is_mono() || !m.is_mono()) {
        throw GraphError("gluing condition requires mono i and m");
    }
    if (!(i.target() == m.source())) {
        throw GraphError("gluing condition: i and m do not compose");
    }
    const Multigraph& I = i.target();
    const Multigraph& X = m.target();

    std::vector<char> kept_v(I.vertex_count(), 0), kept_e(I.edge_count(), 0);
    for (int v = 0; v < i.source().vertex_count(); ++v) kept_v[i.vertex_image(v)] = 1;
    for (int e = 0; e < i.source().edge_count(); ++e) kept_e[i.edge_image(e)] = 1;

    std::vector<char> del_v(X.vertex_count(), 0), del_e(X.edge_count(), 0);
    for (int v = 0; v < I.vertex_count(); ++v) {
        if (!kept_v[v]) del_v[m.vertex_image(v)] = 1;
    }
    for (int e = 0; e < I.edge_count(); ++e) {
        if (!kept_e[e]) del_e[m.edge_image(e)] = 1;
    }
    // an edge of X may not dangle: incident to a deleted vertex => deleted
    for (int e = 0; e < X.edge_count(); ++e) {
        if (del_e[e]) continue;
        auto [a, b] = X.ends(e);
        if (del_v[a] || del_v[b]) return false;
    }
    return true;
}

std::optional<PushoutComplement> pushout_complement(const GraphMorphism& i,
                                                    const GraphMorphism& m) {
    if (!gluing_condition_holds(i, m)) return std::nullopt;
    const Multigraph& K = i.source();
    const Multigraph& I = i.target();
    const Multigraph& X = m.target();

    std::vector<char> kept_v(I.vertex_count(), 0), kept_e(I.edge_count(), 0);
    for (int v = 0; v < K.vertex_count(); ++v) kept_v[i.vertex_image(v)] = 1;
    for (int e = 0; e < K.edge_count(); ++e) kept_e[i.edge_image(e)] = 1;
    std::vector<char> del_v(X.vertex_count(), 0), del_e(X.edge_count(), 0);
    for (int v = 0; v < I.vertex_count(); ++v) {
        if (!kept_v[v]) del_v[m.vertex_image(v)] = 1;
    }
    for (int e = 0; e < I.edge_count(); ++e) {
        if (!kept_e[e]) del_e[m.edge_image(e)] = 1;
    }

    std::vector<std::string> vs;
    std::vector<EdgeSpec> es;
    for (int v = 0; v < X.vertex_count(); ++v) {
        if (!del_v[v]) vs.push_back(X.vertex_id(v));
    }
    for (int e = 0; e < X.edge_count(); ++e) {
        if (del_e[e]) continue;
        auto [a, b] = X.ends(e);
        es.push_back({X.edge_id(e), X.vertex_id(a), X.vertex_id(b)});
    }
    Multigraph Kbar(X.kind(), vs, es);

    std::vector<int> incl_v(Kbar.vertex_count()), incl_e(Kbar.edge_count());
    for (int v = 0; v < Kbar.vertex_count(); ++v) {
        incl_v[v] = *X.vertex_index(Kbar.vertex_id(v));
    }
    for (int e = 0; e < Kbar.edge_count(); ++e) {
        incl_e[e] = *X.edge_index(Kbar.edge_id(e));
    }
    GraphMorphism into_x(Kbar, X, incl_v, incl_e);

    std::vector<int> kv(K.vertex_count()), ke(K.edge_count());
    for (int v = 0; v < K.vertex_count(); ++v) {
        int xv = m.vertex_image(i.vertex_image(v));
        kv[v] = *Kbar.vertex_index(X.vertex_id(xv));
    }
    for (int e = 0; e < K.edge_count(); ++e) {
        int xe = m.edge_image(i.edge_image(e));
        ke[e] = *Kbar.edge_index(X.edge_id(xe));
    }
    GraphMorphism from_k(K, Kbar, std::move(kv), std::move(ke));

    // round-trip guard: pushout(i, from_k) must reproduce X
    PushoutResult po = pushout(i, from_k);
    GraphMorphism u = pushout_mediator(po, m, into_x);
    if (!u.is_iso()) {
        throw std::logic_error("pushout_complement: round-trip verification failed");
    }
    return PushoutComplement{std::move(Kbar), std::move(from_k), std::move(into_x)};
}

Span compose_spans(const Span& s, const Span& r) {
    if (!(s.right.target() == r.left.target())) {
        throw GraphError("compose_spans: middle objects differ");
    }
    PullbackResult pb = pullback(s.right, r.left);
    GraphMorphism left = GraphMorphism::compose(s.left, pb.to_b);
    GraphMorphism right = GraphMorphism::compose(r.right, pb.to_c);
    return Span{std::move(pb.apex), std::move(left), std::move(right)};
}

GraphMorphism pushout_mediator(const PushoutResult& po, const GraphMorphism& f,
                               const GraphMorphism& g) {
    const Multigraph& D = po.object;
    const Multigraph& Z = f.target();
    if (!(g.target() == Z)) throw GraphError("pushout_mediator: cocone targets differ");
    if (!(f.source() == po.from_b.source()) || !(g.source() == po.from_c.source())) {
        throw GraphError("pushout_mediator: cocone feet do not match the pushout");
    }
    std::vector<int> vmap(D.vertex_count(), -1), emap(D.edge_count(), -1);
    auto put = [](std::vector<int>& mp, int at, int value) {
        if (mp[at] >= 0 && mp[at] != value) {
            throw GraphError("pushout_mediator: cocone does not commute");
        }
        mp[at] = value;
    };
    for (int v = 0; v < f.source().vertex_count(); ++v) {
        put(vmap, po.from_b.vertex_image(v), f.vertex_image(v));
    }
    for (int v = 0; v < g.source().vertex_count(); ++v) {
        put(vmap, po.from_c.vertex_image(v), g.vertex_image(v));
    }
    for (int e = 0; e < f.source().edge_count(); ++e) {
        put(emap, po.from_b.edge_image(e), f.edge_image(e));
    }
    for (int e = 0; e < g.source().edge_count(); ++e) {
        put(emap, po.from_c.edge_image(e), g.edge_image(e));
    }
    return GraphMorphism(po.object, Z, std::move(vmap), std::move(emap));
}

GraphMorphism pullback_mediator(const PullbackResult& pb, const GraphMorphism& f,
                                const GraphMorphism& g) {
    const Multigraph& Z = f.source();
    if (!(g.source() == Z)) throw GraphError("pullback_mediator: cone sources differ");
    std::map<std::pair<int, int>, int> vindex, eindex;
    for (int v = 0; v < pb.apex.vertex_count(); ++v) {
        vindex[{pb.to_b.vertex_image(v), pb.to_c.vertex_image(v)}] = v;
    }
    for (int e = 0; e < pb.apex.edge_count(); ++e) {
        eindex[{pb.to_b.edge_image(e), pb.to_c.edge_image(e)}] = e;
    }
    std::vector<int> vmap(Z.vertex_count()), emap(Z.edge_count());
    for (int v = 0; v < Z.vertex_count(); ++v) {
        auto it = vindex.find({f.vertex_image(v), g.vertex_image(v)});
        if (it == vindex.end()) throw GraphError("pullback_mediator: cone does not commute");
        vmap[v] = it->second;
    }
    for (int e = 0; e < Z.edge_count(); ++e) {
        auto it = eindex.find({f.edge_image(e), g.edge_image(e)});
        if (it == eindex.end()) throw GraphError("pullback_mediator: cone does not commute");
        emap[e] = it->second;
    }
    return GraphMorphism(f.source_ptr(), std::make_shared<Multigraph>(pb.apex),
                         std::move(vmap), std::move(emap));
}

Span align_span_to(const Span& s, const Multigraph& middle) {
    if (s.right.target() == middle) return s;
    CanonicalForm a = canonical_form(s.right.target());
    CanonicalForm b = canonical_form(middle);
    if (a.key != b.key) {
        throw GraphError("align_span_to: feet are not isomorphic");
    }
    GraphMorphism iso = GraphMorphism::compose(b.relabeling.inverse(), a.relabeling);
    return Span{s.apex, s.left, GraphMorphism::compose(iso, s.right)};
}

}  // namespace rulealg
