#include "rulealg/dpo.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace rulealg {

// ---------------------------------------------------------------------------
// LinearRule
// ---------------------------------------------------------------------------

LinearRule::LinearRule(Multigraph output, Multigraph context, Multigraph input,
                       GraphMorphism into_output, GraphMorphism into_input)
    : output_(std::move(output)),
      context_(std::move(context)),
      input_(std::move(input)),
      o_(std::move(into_output)),
      i_(std::move(into_input)) {
    if (output_.kind() != context_.kind() || context_.kind() != input_.kind()) {
        throw GraphError("linear rule: graph kinds differ");
    }
    if (!(o_.source() == context_) || !(o_.target() == output_) ||
        !(i_.source() == context_) || !(i_.target() == input_)) {
        throw GraphError("linear rule: legs do not match the span objects");
    }
    if (!o_.is_mono() || !i_.is_mono()) {
        throw GraphError("linear rule: legs must be monos");
    }
}

bool LinearRule::operator==(const LinearRule& other) const {
    return output_ == other.output_ && context_ == other.context_ &&
           input_ == other.input_ && o_ == other.o_ && i_ == other.i_;
}

LinearRule empty_rule(GraphKind kind) {
    Multigraph e = Multigraph::empty(kind);
    GraphMorphism id = GraphMorphism::identity(e);
    return LinearRule(e, e, e, id, id);
}

LinearRule identity_rule(const Multigraph& g) {
    GraphMorphism id = GraphMorphism::identity(g);
    return LinearRule(g, g, g, id, id);
}

LinearRule discrete_rule(GraphKind kind, int n_out, int n_in) {
    Multigraph O = discrete_graph(kind, n_out);
    Multigraph K = Multigraph::empty(kind);
    Multigraph I = discrete_graph(kind, n_in);
    return LinearRule(O, K, I, GraphMorphism(K, O, {}, {}),
                      GraphMorphism(K, I, {}, {}));
}

LinearRule vertex_create_rule(GraphKind kind) { return discrete_rule(kind, 1, 0); }
LinearRule vertex_delete_rule(GraphKind kind) { return discrete_rule(kind, 0, 1); }

LinearRule edge_create_rule() {
    Multigraph O(GraphKind::Undirected, {"v0", "v1"}, {{"e0", "v0", "v1"}});
    Multigraph K = discrete_graph(GraphKind::Undirected, 2);
    GraphMorphism o(K, O, {0, 1}, {});
    GraphMorphism i = GraphMorphism::identity(K);
    return LinearRule(O, K, K, o, i);
}

LinearRule edge_delete_rule() {
    Multigraph I(GraphKind::Undirected, {"v0", "v1"}, {{"e0", "v0", "v1"}});
    Multigraph K = discrete_graph(GraphKind::Undirected, 2);
    GraphMorphism o = GraphMorphism::identity(K);
    GraphMorphism i(K, I, {0, 1}, {});
    return LinearRule(K, K, I, o, i);
}

LinearRule vertex_pair_rule() {
    return identity_rule(discrete_graph(GraphKind::Undirected, 2));
}

// ---------------------------------------------------------------------------
// Rule canonical form
//
// A linear rule is determined up to production isomorphism by the pair
// (O, I) together with the item pairing induced by the context: K embeds in
// both O and I, so o, i induce a partial bijection on vertices and edges.
// The canonical form minimizes, over refinement-respecting orderings of O's
// and I's vertices, a row encoding of O's adjacency, I's adjacency, the
// vertex pairing (as partner ranks) and the edge pairing (as per-parallel-
// class counts; parallel paired edges are interchangeable).
// ---------------------------------------------------------------------------

namespace {

constexpr int kNone = -1;

struct RuleCanonSearch {
    const LinearRule& p;
    bool directed;
    int nO, nI;
    std::vector<std::vector<int>> multO, multI;    // non-loop multiplicities
    std::vector<std::vector<int>> pmultO, pmultI;  // paired portion thereof
    std::vector<int> loopO, loopI, ploopO, ploopI;
    std::vector<int> partnerO, partnerI;    // vertex pairing, kNone if absent
    std::vector<int> epartnerO, epartnerI;  // edge pairing, kNone if absent
    std::vector<int> colorO, colorI;

    // search state
    std::vector<int> orderO, orderI;  // position -> vertex
    std::vector<char> placedO, placedI;
    std::vector<int> rankO;  // valid once the O stage is complete
    std::vector<int> posColorO, posColorI;
    std::vector<std::vector<int>> rows, best_rows;
    std::vector<int> bestOrderO, bestOrderI;
    bool have_best = false;

    explicit RuleCanonSearch(const LinearRule& rule)
        : p(rule), directed(rule.kind() == GraphKind::Directed),
          nO(rule.output().vertex_count()), nI(rule.input().vertex_count()) {
        const Multigraph& O = p.output();
        const Multigraph& I = p.input();
        const Multigraph& K = p.context();

        partnerO.assign(nO, kNone);
        partnerI.assign(nI, kNone);
        for (int w = 0; w < K.vertex_count(); ++w) {
            int vo = p.into_output().vertex_image(w);
            int vi = p.into_input().vertex_image(w);
            partnerO[vo] = vi;
            partnerI[vi] = vo;
        }
        epartnerO.assign(O.edge_count(), kNone);
        epartnerI.assign(I.edge_count(), kNone);
        for (int e = 0; e < K.edge_count(); ++e) {
            int eo = p.into_output().edge_image(e);
            int ei = p.into_input().edge_image(e);
            epartnerO[eo] = ei;
            epartnerI[ei] = eo;
        }

        auto fill = [&](const Multigraph& g, const std::vector<int>& epartner,
                        std::vector<std::vector<int>>& mult,
                        std::vector<std::vector<int>>& pmult,
                        std::vector<int>& loop, std::vector<int>& ploop) {
            int n = g.vertex_count();
            mult.assign(n, std::vector<int>(n, 0));
            pmult.assign(n, std::vector<int>(n, 0));
            loop.assign(n, 0);
            ploop.assign(n, 0);
            for (int e = 0; e < g.edge_count(); ++e) {
                auto [a, b] = g.ends(e);
                bool paired = epartner[e] != kNone;
                if (a == b) {
                    ++loop[a];
                    if (paired) ++ploop[a];
                } else {
                    ++mult[a][b];
                    if (paired) ++pmult[a][b];
                    if (!directed) {
                        ++mult[b][a];
                        if (paired) ++pmult[b][a];
                    }
                }
            }
        };
        fill(O, epartnerO, multO, pmultO, loopO, ploopO);
        fill(I, epartnerI, multI, pmultI, loopI, ploopI);

        refine();
        placedO.assign(nO, 0);
        placedI.assign(nI, 0);
        rankO.assign(nO, -1);
        posColorO = colorO;
        std::sort(posColorO.begin(), posColorO.end());
        posColorI = colorI;
        std::sort(posColorI.begin(), posColorI.end());
    }

    void refine() {
        using Sig = std::vector<long long>;
        colorO.assign(nO, 0);
        colorI.assign(nI, 0);
        auto assign_colors = [&](std::vector<Sig>& sigs) {
            std::vector<Sig> sorted = sigs;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (int v = 0; v < nO; ++v) {
                colorO[v] = static_cast<int>(
                    std::lower_bound(sorted.begin(), sorted.end(), sigs[v]) -
                    sorted.begin());
            }
            for (int v = 0; v < nI; ++v) {
                colorI[v] = static_cast<int>(
                    std::lower_bound(sorted.begin(), sorted.end(), sigs[nO + v]) -
                    sorted.begin());
            }
            return static_cast<int>(sorted.size());
        };

        std::vector<Sig> init(nO + nI);
        for (int v = 0; v < nO; ++v) {
            init[v] = {0, loopO[v], ploopO[v],
                       std::accumulate(multO[v].begin(), multO[v].end(), 0),
                       partnerO[v] == kNone ? 0 : 1};
        }
        for (int v = 0; v < nI; ++v) {
            init[nO + v] = {1, loopI[v], ploopI[v],
                            std::accumulate(multI[v].begin(), multI[v].end(), 0),
                            partnerI[v] == kNone ? 0 : 1};
        }
        int classes = assign_colors(init);

        for (int round = 0; round < nO + nI; ++round) {
            std::vector<Sig> sigs(nO + nI);
            auto side_sig = [&](int v, bool is_output) {
                const auto& mult = is_output ? multO : multI;
                const auto& pmult = is_output ? pmultO : pmultI;
                const auto& color = is_output ? colorO : colorI;
                const auto& partner = is_output ? partnerO : partnerI;
                const auto& pcolor = is_output ? colorI : colorO;
                int n = is_output ? nO : nI;
                Sig s{is_output ? 0 : 1, color[v],
                      partner[v] == kNone ? -1 : pcolor[partner[v]]};
                std::vector<std::array<long long, 4>> nb;
                for (int u = 0; u < n; ++u) {
                    if (u == v) continue;
                    long long m = mult[v][u], pm = pmult[v][u];
                    long long mr = directed ? mult[u][v] : 0;
                    long long pmr = directed ? pmult[u][v] : 0;
                    if (m || mr) nb.push_back({(long long)color[u], m * 4096 + pm, mr, pmr});
                }
                std::sort(nb.begin(), nb.end());
                for (auto& t : nb) s.insert(s.end(), t.begin(), t.end());
                return s;
            };
            for (int v = 0; v < nO; ++v) sigs[v] = side_sig(v, true);
            for (int v = 0; v < nI; ++v) sigs[nO + v] = side_sig(v, false);
            int c = assign_colors(sigs);
            if (c == classes || c == nO + nI) break;
            classes = c;
        }
    }

    bool bare_in_output(int v) const {
        return p.output().degree(v) == 0;
    }
    bool bare_in_input(int v) const {
        return p.input().degree(v) == 0;
    }

    std::vector<int> output_row(int v) const {
        std::vector<int> row{loopO[v], ploopO[v]};
        for (int u : orderO) {
            row.push_back(multO[v][u]);
            row.push_back(pmultO[v][u]);
            if (directed) {
                row.push_back(multO[u][v]);
                row.push_back(pmultO[u][v]);
            }
        }
        return row;
    }

    // Ranked O endpoints of an O-edge (normalized for undirected).
    std::pair<int, int> ranked_output_ends(int eo) const {
        auto [a, b] = p.output().ends(eo);
        int ra = rankO[a], rb = rankO[b];
        if (!directed && ra > rb) std::swap(ra, rb);
        return {ra, rb};
    }

    // Appends the paired-edge block of the edges of I between v and u that
    // run in the given direction (directed) or all (undirected).
    void append_pair_block(std::vector<int>& row, int v, int u, bool reverse) const {
        const Multigraph& I = p.input();
        std::map<std::pair<int, int>, int> counts;
        int from = reverse ? u : v, to = reverse ? v : u;
        for (int e : I.edges_between(from, to)) {
            if (epartnerI[e] == kNone) continue;
            counts[ranked_output_ends(epartnerI[e])]++;
        }
        row.push_back(static_cast<int>(counts.size()));
        for (auto& [key, c] : counts) {
            row.push_back(key.first);
            row.push_back(key.second);
            row.push_back(c);
        }
    }

    std::vector<int> input_row(int v) const {
        const Multigraph& I = p.input();
        std::vector<int> row{loopI[v]};
        {  // paired loops: counts per O-loop vertex rank
            std::map<int, int> counts;
            for (int e : I.edges_between(v, v)) {
                if (epartnerI[e] == kNone) continue;
                counts[ranked_output_ends(epartnerI[e]).first]++;
            }
            row.push_back(static_cast<int>(counts.size()));
            for (auto& [r, c] : counts) {
                row.push_back(r);
                row.push_back(c);
            }
        }
        row.push_back(partnerI[v] == kNone ? -1 : rankO[partnerI[v]]);
        for (int u : orderI) {
            row.push_back(multI[v][u]);
            append_pair_block(row, v, u, false);
            if (directed) {
                row.push_back(multI[u][v]);
                append_pair_block(row, v, u, true);
            }
        }
        return row;
    }

    void dfs_output(size_t pos, bool strict) {
        if (pos == static_cast<size_t>(nO)) {
            for (int q = 0; q < nO; ++q) rankO[orderO[q]] = q;
            dfs_input(0, strict);
            return;
        }
        std::vector<std::pair<std::vector<int>, int>> cands;
        bool bare_unpaired_taken = false, bare_paired_taken = false;
        for (int v = 0; v < nO; ++v) {
            if (placedO[v] || colorO[v] != posColorO[pos]) continue;
            if (bare_in_output(v)) {
                bool paired = partnerO[v] != kNone;
                if (paired && bare_in_input(partnerO[v])) {
                    if (bare_paired_taken) continue;  // interchangeable with partner swap
                    bare_paired_taken = true;
                } else if (!paired) {
                    if (bare_unpaired_taken) continue;
                    bare_unpaired_taken = true;
                }
            }
            cands.emplace_back(output_row(v), v);
        }
        std::sort(cands.begin(), cands.end());
        const std::vector<int>& minrow = cands.front().first;
        for (auto& [row, v] : cands) {
            if (row != minrow) break;
            bool child_strict = strict;
            if (!child_strict && have_best) {
                if (row > best_rows[pos]) continue;
                if (row < best_rows[pos]) child_strict = true;
            }
            placedO[v] = 1;
            orderO.push_back(v);
            rows.push_back(row);
            dfs_output(pos + 1, child_strict);
            rows.pop_back();
            orderO.pop_back();
            placedO[v] = 0;
        }
    }

    void dfs_input(size_t pos, bool strict) {
        if (pos == static_cast<size_t>(nI)) {
            if (strict || !have_best) {
                best_rows = rows;
                bestOrderO = orderO;
                bestOrderI = orderI;
                have_best = true;
            }
            return;
        }
        std::vector<std::pair<std::vector<int>, int>> cands;
        bool bare_taken = false;
        for (int v = 0; v < nI; ++v) {
            if (placedI[v] || colorI[v] != posColorI[pos]) continue;
            if (bare_in_input(v) && partnerI[v] == kNone) {
                if (bare_taken) continue;
                bare_taken = true;
            }
            cands.emplace_back(input_row(v), v);
        }
        std::sort(cands.begin(), cands.end());
        const std::vector<int>& minrow = cands.front().first;
        size_t global_pos = nO + pos;
        for (auto& [row, v] : cands) {
            if (row != minrow) break;
            bool child_strict = strict;
            if (!child_strict && have_best) {
                if (row > best_rows[global_pos]) continue;
                if (row < best_rows[global_pos]) child_strict = true;
            }
            placedI[v] = 1;
            orderI.push_back(v);
            rows.push_back(row);
            dfs_input(pos + 1, child_strict);
            rows.pop_back();
            orderI.pop_back();
            placedI[v] = 0;
        }
    }
};

std::string padded_item(char prefix, int i, int total) {
    int width = 1;
    for (int t = total - 1; t >= 10; t /= 10) ++width;
    std::string s = std::to_string(i);
    return prefix + std::string(width - s.size(), '0') + s;
}

/// Relabels one side of the rule by vertex rank. Edge ids are assigned in a
/// deterministic order: by ranked endpoints, with paired edges first within
/// a parallel class (sorted by the ranked endpoints of their partner, then
/// by original id, so the construction is reproducible).
struct SideRelabel {
    Multigraph graph;            // relabelled copy
    std::vector<int> vertex_to;  // old index -> new index
    std::vector<int> edge_to;    // old index -> new index
};

SideRelabel relabel_side(const Multigraph& g, const std::vector<int>& rank,
                         const std::vector<int>& epartner,
                         const Multigraph& other,
                         const std::vector<int>& other_rank) {
    int n = g.vertex_count(), m = g.edge_count();
    bool directed = g.kind() == GraphKind::Directed;
    std::vector<std::string> vs(n);
    for (int v = 0; v < n; ++v) vs[rank[v]] = padded_item('v', rank[v], n);

    using EdgeKey = std::tuple<int, int, int, int, int, std::string>;
    std::vector<std::pair<EdgeKey, int>> keyed;
    keyed.reserve(m);
    for (int e = 0; e < m; ++e) {
        auto [a, b] = g.ends(e);
        int ra = rank[a], rb = rank[b];
        if (!directed && ra > rb) std::swap(ra, rb);
        int paired = epartner[e] == kNone ? 1 : 0;
        int plo = std::numeric_limits<int>::max(), phi = plo;
        if (!paired) {
            auto [pa, pb] = other.ends(epartner[e]);
            plo = other_rank[pa];
            phi = other_rank[pb];
            if (!directed && plo > phi) std::swap(plo, phi);
        }
        keyed.emplace_back(EdgeKey{ra, rb, paired, plo, phi, g.edge_id(e)}, e);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<EdgeSpec> es;
    es.reserve(m);
    std::vector<int> edge_to(m);
    for (int j = 0; j < m; ++j) {
        auto& [key, e] = keyed[j];
        auto [a, b] = g.ends(e);
        es.push_back({padded_item('e', j, m), vs[rank[a]], vs[rank[b]]});
        edge_to[e] = j;
    }
    Multigraph out(g.kind(), vs, es);
    return SideRelabel{std::move(out), rank, std::move(edge_to)};
}

}  // namespace

RuleCanonicalForm canonical_rule(const LinearRule& p) {
    RuleCanonSearch search(p);
    if (search.nO + search.nI > 0) {
        search.dfs_output(0, false);
    } else {
        search.best_rows = {};
        search.have_best = true;
    }

    const Multigraph& O = p.output();
    const Multigraph& I = p.input();
    const Multigraph& K = p.context();
    int nO = search.nO, nI = search.nI;

    std::vector<int> rankO(nO), rankI(nI);
    for (int q = 0; q < nO; ++q) rankO[search.bestOrderO[q]] = q;
    for (int q = 0; q < nI; ++q) rankI[search.bestOrderI[q]] = q;

    SideRelabel relO = relabel_side(O, rankO, search.epartnerO, I, rankI);
    SideRelabel relI = relabel_side(I, rankI, search.epartnerI, O, rankO);

    // context: vertices ordered by the rank of their output image, edges by
    // the canonical index of their output image
    int nK = K.vertex_count(), mK = K.edge_count();
    std::vector<int> kv_order(nK), ke_order(mK);
    std::iota(kv_order.begin(), kv_order.end(), 0);
    std::iota(ke_order.begin(), ke_order.end(), 0);
    std::sort(kv_order.begin(), kv_order.end(), [&](int a, int b) {
        return rankO[p.into_output().vertex_image(a)] <
               rankO[p.into_output().vertex_image(b)];
    });
    std::sort(ke_order.begin(), ke_order.end(), [&](int a, int b) {
        return relO.edge_to[p.into_output().edge_image(a)] <
               relO.edge_to[p.into_output().edge_image(b)];
    });
    std::vector<int> kv_rank(nK), ke_rank(mK);
    for (int j = 0; j < nK; ++j) kv_rank[kv_order[j]] = j;
    for (int j = 0; j < mK; ++j) ke_rank[ke_order[j]] = j;

    std::vector<std::string> kvs(nK);
    for (int j = 0; j < nK; ++j) kvs[j] = padded_item('v', j, nK);
    std::vector<EdgeSpec> kes;
    kes.reserve(mK);
    for (int j = 0; j < mK; ++j) {
        int e = ke_order[j];
        auto [a, b] = K.ends(e);
        kes.push_back({padded_item('e', j, mK), kvs[kv_rank[a]], kvs[kv_rank[b]]});
    }
    Multigraph Kc(K.kind(), kvs, kes);

    std::vector<int> ov(nK), oe(mK), iv(nK), ie(mK);
    // maps indexed by canonical K items
    for (int w = 0; w < nK; ++w) {
        ov[kv_rank[w]] = rankO[p.into_output().vertex_image(w)];
        iv[kv_rank[w]] = rankI[p.into_input().vertex_image(w)];
    }
    for (int e = 0; e < mK; ++e) {
        oe[ke_rank[e]] = relO.edge_to[p.into_output().edge_image(e)];
        ie[ke_rank[e]] = relI.edge_to[p.into_input().edge_image(e)];
    }
    GraphMorphism oc(Kc, relO.graph, ov, oe);
    GraphMorphism ic(Kc, relI.graph, iv, ie);
    LinearRule rule(relO.graph, Kc, relI.graph, oc, ic);

    GraphMorphism output_iso(O, relO.graph, rankO, relO.edge_to);
    GraphMorphism input_iso(I, relI.graph, rankI, relI.edge_to);
    std::vector<int> kvm(nK), kem(mK);
    for (int w = 0; w < nK; ++w) kvm[w] = kv_rank[w];
    for (int e = 0; e < mK; ++e) kem[e] = ke_rank[e];
    GraphMorphism context_iso(K, Kc, kvm, kem);

    std::ostringstream key;
    key << "R|" << (p.kind() == GraphKind::Directed ? 'd' : 'u') << '|' << nO
        << '.' << O.edge_count() << '.' << nI << '.' << I.edge_count() << '.'
        << nK << '.' << mK << '|';
    for (size_t q = 0; q < search.best_rows.size(); ++q) {
        if (q == static_cast<size_t>(nO)) key << '#';
        else if (q) key << ';';
        const auto& row = search.best_rows[q];
        for (size_t t = 0; t < row.size(); ++t) {
            if (t) key << ',';
            key << row[t];
        }
    }
    return RuleCanonicalForm{key.str(), std::move(rule), std::move(output_iso),
                             std::move(context_iso), std::move(input_iso)};
}

RuleKey rule_key(const LinearRule& p) { return canonical_rule(p).key; }

// ---------------------------------------------------------------------------
// Matches and derivations
// ---------------------------------------------------------------------------

std::vector<GraphMorphism> find_matches(const LinearRule& p, const Multigraph& x) {
    if (p.kind() != x.kind()) throw GraphError("find_matches: graph kinds differ");
    std::vector<GraphMorphism> out;
    for (GraphMorphism& m : enumerate_monos(p.input(), x)) {
        if (gluing_condition_holds(p.into_input(), m)) out.push_back(std::move(m));
    }
    return out;
}

Derivation derive_full(const LinearRule& p, const GraphMorphism& m,
                       const Multigraph& x) {
    if (!(m.source() == p.input()) || !(m.target() == x)) {
        throw GraphError("derive: match does not connect the rule input to x");
    }
    if (!m.is_mono()) throw GraphError("derive: match must be mono");
    auto poc = pushout_complement(p.into_input(), m);
    if (!poc) throw GraphError("derive: inadmissible match (gluing condition fails)");
    PushoutResult po = pushout(p.into_output(), poc->from_k);
    CanonicalForm can = canonical_form(po.object);
    GraphMorphism comatch = GraphMorphism::compose(can.relabeling, po.from_b);
    GraphMorphism kept = GraphMorphism::compose(can.relabeling, po.from_c);
    return Derivation{std::move(can.representative), std::move(can.key),
                      std::move(comatch), std::move(kept), poc->context,
                      poc->into_x, poc->from_k};
}

Multigraph derive(const LinearRule& p, const GraphMorphism& m, const Multigraph& x) {
    return derive_full(p, m, x).result;
}

// ---------------------------------------------------------------------------
// Overlaps and rule composition
// ---------------------------------------------------------------------------

bool RuleOverlap::operator==(const RuleOverlap& other) const {
    return apex == other.apex && into_input2 == other.into_input2 &&
           into_output1 == other.into_output1;
}

namespace {

/// Induced subgraph of g on the given item sets, keeping g's ids, together
/// with the inclusion morphism.
std::pair<Multigraph, GraphMorphism> subgraph_with_inclusion(
    const Multigraph& g, const std::vector<char>& keep_v,
    const std::vector<char>& keep_e) {
    std::vector<std::string> vs;
    std::vector<EdgeSpec> es;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (keep_v[v]) vs.push_back(g.vertex_id(v));
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!keep_e[e]) continue;
        auto [a, b] = g.ends(e);
        es.push_back({g.edge_id(e), g.vertex_id(a), g.vertex_id(b)});
    }
    Multigraph sub(g.kind(), vs, es);
    std::vector<int> vmap(sub.vertex_count()), emap(sub.edge_count());
    for (int v = 0; v < sub.vertex_count(); ++v) {
        vmap[v] = *g.vertex_index(sub.vertex_id(v));
    }
    for (int e = 0; e < sub.edge_count(); ++e) {
        emap[e] = *g.edge_index(sub.edge_id(e));
    }
    GraphMorphism incl(sub, g, std::move(vmap), std::move(emap));
    return {std::move(sub), std::move(incl)};
}

/// Normalizes a mono span (I2 <- M -> O1) into the stored overlap form:
/// apex = image subgraph in I2, left leg the inclusion.
RuleOverlap normalize_overlap(const GraphMorphism& to_input2,
                              const GraphMorphism& to_output1) {
    const Multigraph& M = to_input2.source();
    const Multigraph& I2 = to_input2.target();
    if (!to_input2.is_mono() || !to_output1.is_mono()) {
        throw GraphError("overlap legs must be monos");
    }
    std::vector<char> keep_v(I2.vertex_count(), 0), keep_e(I2.edge_count(), 0);
    std::vector<int> v_pre(I2.vertex_count(), -1), e_pre(I2.edge_count(), -1);
    for (int v = 0; v < M.vertex_count(); ++v) {
        keep_v[to_input2.vertex_image(v)] = 1;
        v_pre[to_input2.vertex_image(v)] = v;
    }
    for (int e = 0; e < M.edge_count(); ++e) {
        keep_e[to_input2.edge_image(e)] = 1;
        e_pre[to_input2.edge_image(e)] = e;
    }
    auto [sub, incl] = subgraph_with_inclusion(I2, keep_v, keep_e);
    std::vector<int> vmap(sub.vertex_count()), emap(sub.edge_count());
    for (int v = 0; v < sub.vertex_count(); ++v) {
        vmap[v] = to_output1.vertex_image(v_pre[incl.vertex_image(v)]);
    }
    for (int e = 0; e < sub.edge_count(); ++e) {
        emap[e] = to_output1.edge_image(e_pre[incl.edge_image(e)]);
    }
    GraphMorphism into_o1(sub, to_output1.target(), std::move(vmap), std::move(emap));
    return RuleOverlap{std::move(sub), std::move(incl), std::move(into_o1)};
}

}  // namespace

bool overlap_is_admissible(const LinearRule& p2, const RuleOverlap& ov,
                           const LinearRule& p1) {
    PushoutResult po = pushout(ov.into_input2, ov.into_output1);
    return gluing_condition_holds(p2.into_input(), po.from_b) &&
           gluing_condition_holds(p1.into_output(), po.from_c);
}

std::vector<RuleOverlap> enumerate_rule_overlaps(const LinearRule& p2,
                                                 const LinearRule& p1) {
    if (p2.kind() != p1.kind()) {
        throw GraphError("enumerate_rule_overlaps: graph kinds differ");
    }
    const Multigraph& I2 = p2.input();
    const Multigraph& O1 = p1.output();
    int nv = I2.vertex_count(), me = I2.edge_count();
    if (nv > 30 || me > 30) {
        throw GraphError("enumerate_rule_overlaps: interface too large");
    }

    std::vector<RuleOverlap> out;
    for (std::uint64_t emask = 0; emask < (1ULL << me); ++emask) {
        std::vector<char> keep_e(me, 0);
        std::vector<char> required_v(nv, 0);
        for (int e = 0; e < me; ++e) {
            if (emask >> e & 1) {
                keep_e[e] = 1;
                auto [a, b] = I2.ends(e);
                required_v[a] = required_v[b] = 1;
            }
        }
        std::vector<int> optional_v;
        for (int v = 0; v < nv; ++v) {
            if (!required_v[v]) optional_v.push_back(v);
        }
        for (std::uint64_t vmask = 0; vmask < (1ULL << optional_v.size()); ++vmask) {
            std::vector<char> keep_v = required_v;
            for (size_t j = 0; j < optional_v.size(); ++j) {
                if (vmask >> j & 1) keep_v[optional_v[j]] = 1;
            }
            auto [sub, incl] = subgraph_with_inclusion(I2, keep_v, keep_e);
            for (GraphMorphism& phi : enumerate_monos(sub, O1)) {
                RuleOverlap ov{sub, incl, std::move(phi)};
                if (overlap_is_admissible(p2, ov, p1)) out.push_back(std::move(ov));
            }
        }
    }
    return out;
}

RuleOverlap empty_overlap(const LinearRule& p2, const LinearRule& p1) {
    Multigraph m = Multigraph::empty(p2.kind());
    return RuleOverlap{m, GraphMorphism(m, p2.input(), {}, {}),
                       GraphMorphism(m, p1.output(), {}, {})};
}

RuleComposite compose_rules_full(const LinearRule& p2, const RuleOverlap& ov,
                                 const LinearRule& p1) {
    if (!(ov.into_input2.target() == p2.input()) ||
        !(ov.into_output1.target() == p1.output())) {
        throw GraphError("compose_rules: overlap does not connect the rules");
    }
    PushoutResult po = pushout(ov.into_input2, ov.into_output1);
    auto pocL = pushout_complement(p2.into_input(), po.from_b);
    auto pocR = pushout_complement(p1.into_output(), po.from_c);
    if (!pocL || !pocR) throw GraphError("compose_rules: inadmissible overlap");

    PushoutResult poO = pushout(p2.into_output(), pocL->from_k);
    PushoutResult poI = pushout(p1.into_input(), pocR->from_k);

    Span left{pocL->context, poO.from_c, pocL->into_x};
    Span right{pocR->context, pocR->into_x, poI.from_c};
    Span comp = compose_spans(left, right);

    LinearRule raw(poO.object, comp.apex, poI.object, comp.left, comp.right);
    RuleCanonicalForm can = canonical_rule(raw);

    return RuleComposite{std::move(can.rule),
                         std::move(can.key),
                         std::move(po.object),
                         std::move(po.from_b),
                         std::move(po.from_c),
                         std::move(*pocL),
                         std::move(*pocR),
                         std::move(poO.object),
                         std::move(poI.object),
                         std::move(poO.from_b),
                         std::move(poO.from_c),
                         std::move(poI.from_b),
                         std::move(poI.from_c),
                         std::move(can.output_iso),
                         std::move(can.context_iso),
                         std::move(can.input_iso)};
}

LinearRule compose_rules(const LinearRule& p2, const RuleOverlap& ov,
                         const LinearRule& p1) {
    return compose_rules_full(p2, ov, p1).rule;
}

LinearRule disjoint_union(const LinearRule& p2, const LinearRule& p1) {
    return compose_rules(p2, empty_overlap(p2, p1), p1);
}

// ---------------------------------------------------------------------------
// Concurrency theorem: synthesis and analysis
// ---------------------------------------------------------------------------

namespace {

/// Inverse image lookup for a mono: target item -> source item or -1.
struct MonoInverse {
    std::vector<int> v, e;
    explicit MonoInverse(const GraphMorphism& m)
        : v(m.target().vertex_count(), -1), e(m.target().edge_count(), -1) {
        for (int i = 0; i < m.source().vertex_count(); ++i) v[m.vertex_image(i)] = i;
        for (int i = 0; i < m.source().edge_count(); ++i) e[m.edge_image(i)] = i;
    }
};

}  // namespace

SynthesisResult synthesize(const LinearRule& p2, const GraphMorphism& m2,
                           const LinearRule& p1, const GraphMorphism& m1,
                           const Multigraph& x0) {
    if (!(m1.source() == p1.input()) || !(m1.target() == x0)) {
        throw GraphError("synthesize: m1 does not match p1 and x0");
    }
    Derivation d1 = derive_full(p1, m1, x0);
    const Multigraph& x1 = d1.result;
    if (!(m2.source() == p2.input()) || !(m2.target() == x1)) {
        throw GraphError("synthesize: m2 does not match p2 and derive(p1, m1, x0)");
    }
    if (!m2.is_mono() || !gluing_condition_holds(p2.into_input(), m2)) {
        throw GraphError("synthesize: m2 is not an admissible match");
    }

    PullbackResult pb = pullback(m2, d1.comatch);
    RuleOverlap ov = normalize_overlap(pb.to_b, pb.to_c);
    RuleComposite comp = compose_rules_full(p2, ov, p1);

    // N21 -> X1, induced by the pushout property
    PushoutResult glue_po{comp.glue, comp.input2_to_glue, comp.output1_to_glue};
    GraphMorphism u = pushout_mediator(glue_po, m2, d1.comatch);

    // K1bar -> X0 through the kept part of step one
    const Multigraph& k1bar = comp.right_complement.context;
    MonoInverse kept_inv(d1.kept);
    std::vector<int> fv(k1bar.vertex_count()), fe(k1bar.edge_count());
    for (int v = 0; v < k1bar.vertex_count(); ++v) {
        int x1v = u.vertex_image(comp.right_complement.into_x.vertex_image(v));
        int cv = kept_inv.v[x1v];
        if (cv < 0) throw std::logic_error("synthesize: overlap complement leaves the kept part");
        fv[v] = d1.context_in_x.vertex_image(cv);
    }
    for (int e = 0; e < k1bar.edge_count(); ++e) {
        int x1e = u.edge_image(comp.right_complement.into_x.edge_image(e));
        int ce = kept_inv.e[x1e];
        if (ce < 0) throw std::logic_error("synthesize: overlap complement leaves the kept part");
        fe[e] = d1.context_in_x.edge_image(ce);
    }
    GraphMorphism phi(k1bar, x0, std::move(fv), std::move(fe));

    PushoutResult input_po{comp.raw_input, comp.input1_in, comp.right_context_in};
    GraphMorphism n_raw = pushout_mediator(input_po, m1, phi);
    GraphMorphism n = GraphMorphism::compose(n_raw, comp.input_relabel.inverse());

    if (!n.is_mono() || !gluing_condition_holds(comp.rule.into_input(), n)) {
        throw std::logic_error("synthesize: constructed match is not admissible");
    }
    return SynthesisResult{std::move(ov), comp.rule, std::move(n)};
}

AnalysisResult analyze(const LinearRule& p2, const RuleOverlap& ov,
                       const LinearRule& p1, const GraphMorphism& n,
                       const Multigraph& x0) {
    RuleComposite comp = compose_rules_full(p2, ov, p1);
    if (!(n.source() == comp.rule.input()) || !(n.target() == x0)) {
        throw GraphError("analyze: n does not match the composite input and x0");
    }
    if (!n.is_mono() || !gluing_condition_holds(comp.rule.into_input(), n)) {
        throw GraphError("analyze: n is not an admissible match");
    }

    GraphMorphism n_raw = GraphMorphism::compose(n, comp.input_relabel);
    GraphMorphism m1 = GraphMorphism::compose(n_raw, comp.input1_in);
    if (!gluing_condition_holds(p1.into_input(), m1)) {
        throw std::logic_error("analyze: recovered first match is not admissible");
    }
    Derivation d1 = derive_full(p1, m1, x0);

    const Multigraph& I2 = p2.input();
    MonoInverse o1_inv(comp.output1_to_glue);
    MonoInverse k1bar_inv(comp.right_complement.into_x);
    const Multigraph& ctx = d1.context;  // subgraph of x0 with x0's ids
    std::vector<int> mv(I2.vertex_count()), me(I2.edge_count());
    for (int a = 0; a < I2.vertex_count(); ++a) {
        int z = comp.input2_to_glue.vertex_image(a);
        if (o1_inv.v[z] >= 0) {
            mv[a] = d1.comatch.vertex_image(o1_inv.v[z]);
        } else {
            int y = k1bar_inv.v[z];
            if (y < 0) throw std::logic_error("analyze: glue item neither in O1 nor kept");
            int x0v = n_raw.vertex_image(comp.right_context_in.vertex_image(y));
            auto cv = ctx.vertex_index(x0.vertex_id(x0v));
            if (!cv) throw std::logic_error("analyze: kept item was deleted by step one");
            mv[a] = d1.kept.vertex_image(*cv);
        }
    }
    for (int a = 0; a < I2.edge_count(); ++a) {
        int z = comp.input2_to_glue.edge_image(a);
        if (o1_inv.e[z] >= 0) {
            me[a] = d1.comatch.edge_image(o1_inv.e[z]);
        } else {
            int y = k1bar_inv.e[z];
            if (y < 0) throw std::logic_error("analyze: glue item neither in O1 nor kept");
            int x0e = n_raw.edge_image(comp.right_context_in.edge_image(y));
            auto ce = ctx.edge_index(x0.edge_id(x0e));
            if (!ce) throw std::logic_error("analyze: kept item was deleted by step one");
            me[a] = d1.kept.edge_image(*ce);
        }
    }
    GraphMorphism m2(I2, d1.result, std::move(mv), std::move(me));
    if (!m2.is_mono() || !gluing_condition_holds(p2.into_input(), m2)) {
        throw std::logic_error("analyze: recovered second match is not admissible");
    }
    return AnalysisResult{std::move(m1), std::move(m2)};
}

}  // namespace rulealg
