#include "rulealg/multigraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace rulealg {

std::string_view to_string(GraphKind kind) {
    return kind == GraphKind::Directed ? "directed" : "undirected";
}

Multigraph::Multigraph() = default;

Multigraph Multigraph::empty(GraphKind kind) {
    return Multigraph(kind, {}, {});
}

Multigraph::Multigraph(GraphKind kind, std::vector<std::string> vertices,
                       std::vector<EdgeSpec> edges)
    : kind_(kind), vertex_ids_(std::move(vertices)) {
    std::sort(vertex_ids_.begin(), vertex_ids_.end());
    if (std::adjacent_find(vertex_ids_.begin(), vertex_ids_.end()) !=
        vertex_ids_.end()) {
        throw GraphError("duplicate vertex id");
    }
    std::sort(edges.begin(), edges.end(),
              [](const EdgeSpec& x, const EdgeSpec& y) { return x.id < y.id; });
    edge_ids_.reserve(edges.size());
    ends_.reserve(edges.size());
    for (const EdgeSpec& e : edges) {
        if (!edge_ids_.empty() && edge_ids_.back() == e.id) {
            throw GraphError("duplicate edge id '" + e.id + "'");
        }
        auto a = vertex_index(e.a);
        auto b = vertex_index(e.b);
        if (!a || !b) {
            throw GraphError("edge '" + e.id + "' references undeclared vertex");
        }
        int lo = *a, hi = *b;
        if (kind_ == GraphKind::Undirected && lo > hi) std::swap(lo, hi);
        edge_ids_.push_back(e.id);
        ends_.emplace_back(lo, hi);
    }
}

std::optional<int> Multigraph::vertex_index(std::string_view id) const {
    auto it = std::lower_bound(vertex_ids_.begin(), vertex_ids_.end(), id);
    if (it == vertex_ids_.end() || *it != id) return std::nullopt;
    return static_cast<int>(it - vertex_ids_.begin());
}

std::optional<int> Multigraph::edge_index(std::string_view id) const {
    auto it = std::lower_bound(edge_ids_.begin(), edge_ids_.end(), id);
    if (it == edge_ids_.end() || *it != id) return std::nullopt;
    return static_cast<int>(it - edge_ids_.begin());
}

int Multigraph::loop_count(int v) const {
    int n = 0;
    for (const auto& [a, b] : ends_) n += (a == v && b == v);
    return n;
}

int Multigraph::degree(int v) const {
    int n = 0;
    for (const auto& [a, b] : ends_) n += (a == v) + (b == v);
    return n;
}

int Multigraph::multiplicity(int u, int v) const {
    int lo = u, hi = v;
    if (kind_ == GraphKind::Undirected && lo > hi) std::swap(lo, hi);
    int n = 0;
    for (const auto& [a, b] : ends_) n += (a == lo && b == hi);
    return n;
}

std::vector<int> Multigraph::edges_between(int u, int v) const {
    int lo = u, hi = v;
    if (kind_ == GraphKind::Undirected && lo > hi) std::swap(lo, hi);
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e) {
        if (ends_[e].first == lo && ends_[e].second == hi) out.push_back(e);
    }
    return out;
}

Multigraph discrete_graph(GraphKind kind, int n) {
    std::vector<std::string> vs;
    vs.reserve(n);
    int width = 1;
    for (int t = n - 1; t >= 10; t /= 10) ++width;
    for (int i = 0; i < n; ++i) {
        std::string s = std::to_string(i);
        vs.push_back("v" + std::string(width - s.size(), '0') + s);
    }
    return Multigraph(kind, std::move(vs), {});
}

// ---------------------------------------------------------------------------
// GraphMorphism
// ---------------------------------------------------------------------------

GraphMorphism::GraphMorphism(Multigraph source, Multigraph target,
                             std::vector<int> vmap, std::vector<int> emap)
    : source_(std::make_shared<Multigraph>(std::move(source))),
      target_(std::make_shared<Multigraph>(std::move(target))),
      vmap_(std::move(vmap)),
      emap_(std::move(emap)) {
    validate();
}

GraphMorphism::GraphMorphism(std::shared_ptr<const Multigraph> source,
                             std::shared_ptr<const Multigraph> target,
                             std::vector<int> vmap, std::vector<int> emap)
    : source_(std::move(source)),
      target_(std::move(target)),
      vmap_(std::move(vmap)),
      emap_(std::move(emap)) {
    validate();
}

void GraphMorphism::validate() const {
    const Multigraph& s = *source_;
    const Multigraph& t = *target_;
    if (s.kind() != t.kind()) throw GraphError("morphism across graph kinds");
    if (static_cast<int>(vmap_.size()) != s.vertex_count() ||
        static_cast<int>(emap_.size()) != s.edge_count()) {
        throw GraphError("morphism maps are not total");
    }
    for (int im : vmap_) {
        if (im < 0 || im >= t.vertex_count()) throw GraphError("vertex image out of range");
    }
    for (int e = 0; e < s.edge_count(); ++e) {
        int ie = emap_[e];
        if (ie < 0 || ie >= t.edge_count()) throw GraphError("edge image out of range");
        auto [a, b] = s.ends(e);
        auto [ta, tb] = t.ends(ie);
        int ma = vmap_[a], mb = vmap_[b];
        if (s.kind() == GraphKind::Undirected && ma > mb) std::swap(ma, mb);
        if (ma != ta || mb != tb) {
            throw GraphError("morphism does not preserve incidence of edge '" +
                             s.edge_id(e) + "'");
        }
    }
}

GraphMorphism GraphMorphism::identity(const Multigraph& g) {
    std::vector<int> v(g.vertex_count()), e(g.edge_count());
    std::iota(v.begin(), v.end(), 0);
    std::iota(e.begin(), e.end(), 0);
    return GraphMorphism(g, g, std::move(v), std::move(e));
}

GraphMorphism GraphMorphism::compose(const GraphMorphism& g, const GraphMorphism& f) {
    if (!(f.target() == g.source())) {
        throw GraphError("morphism composition: middle objects differ");
    }
    std::vector<int> v(f.vmap_.size()), e(f.emap_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = g.vmap_[f.vmap_[i]];
    for (size_t i = 0; i < e.size(); ++i) e[i] = g.emap_[f.emap_[i]];
    return GraphMorphism(f.source_, g.target_, std::move(v), std::move(e));
}

namespace {
bool injective(const std::vector<int>& m, int range) {
    std::vector<char> seen(range, 0);
    for (int x : m) {
        if (seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}
}  // namespace

bool GraphMorphism::is_mono() const {
    return injective(vmap_, target_->vertex_count()) &&
           injective(emap_, target_->edge_count());
}

bool GraphMorphism::is_iso() const {
    return is_mono() && source_->vertex_count() == target_->vertex_count() &&
           source_->edge_count() == target_->edge_count();
}

GraphMorphism GraphMorphism::inverse() const {
    if (!is_iso()) throw GraphError("inverse of a non-isomorphism");
    std::vector<int> v(vmap_.size()), e(emap_.size());
    for (size_t i = 0; i < vmap_.size(); ++i) v[vmap_[i]] = static_cast<int>(i);
    for (size_t i = 0; i < emap_.size(); ++i) e[emap_[i]] = static_cast<int>(i);
    return GraphMorphism(target_, source_, std::move(v), std::move(e));
}

bool GraphMorphism::operator==(const GraphMorphism& other) const {
    if (vmap_ != other.vmap_ || emap_ != other.emap_) return false;
    if (source_ != other.source_ && !(*source_ == *other.source_)) return false;
    if (target_ != other.target_ && !(*target_ == *other.target_)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Mono enumeration
// ---------------------------------------------------------------------------

namespace {

/// Backtracking search over injective vertex assignments; pattern vertices
/// are processed in a connectivity-first order so adjacency constraints
/// prune early.
struct MonoSearch {
    const Multigraph& p;
    const Multigraph& h;
    std::vector<int> order;        // pattern vertex visit order
    std::vector<int> assign;       // pattern vertex -> host vertex or -1
    std::vector<char> used;        // host vertex used
    std::vector<GraphMorphism> out;
    std::shared_ptr<const Multigraph> pp, hp;

    MonoSearch(const Multigraph& pattern, const Multigraph& host)
        : p(pattern), h(host), assign(pattern.vertex_count(), -1),
          used(host.vertex_count(), 0),
          pp(std::make_shared<Multigraph>(pattern)),
          hp(std::make_shared<Multigraph>(host)) {
        // visit higher-degree vertices first, neighbors of visited next
        int n = p.vertex_count();
        std::vector<char> queued(n, 0);
        std::vector<int> rest(n);
        std::iota(rest.begin(), rest.end(), 0);
        std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
            return p.degree(a) > p.degree(b);
        });
        for (int seed : rest) {
            if (queued[seed]) continue;
            std::vector<int> frontier{seed};
            queued[seed] = 1;
            while (!frontier.empty()) {
                int v = frontier.front();
                frontier.erase(frontier.begin());
                order.push_back(v);
                for (int e = 0; e < p.edge_count(); ++e) {
                    auto [a, b] = p.ends(e);
                    int u = (a == v) ? b : (b == v ? a : -1);
                    if (u >= 0 && !queued[u]) {
                        queued[u] = 1;
                        frontier.push_back(u);
                    }
                }
            }
        }
    }

    bool compatible(int pv, int hv) const {
        if (p.loop_count(pv) > h.loop_count(hv)) return false;
        if (p.degree(pv) > h.degree(hv)) return false;
        for (int q : order) {
            if (assign[q] < 0 || q == pv) continue;
            if (p.kind() == GraphKind::Directed) {
                if (p.multiplicity(pv, q) > h.multiplicity(hv, assign[q])) return false;
                if (p.multiplicity(q, pv) > h.multiplicity(assign[q], hv)) return false;
            } else {
                if (p.multiplicity(pv, q) > h.multiplicity(hv, assign[q])) return false;
            }
        }
        return true;
    }

    void emit_edge_maps() {
        // Group pattern edges by (host) parallel class and enumerate all
        // injections per class; the product over classes yields the emaps.
        std::map<std::pair<int, int>, std::vector<int>> classes;
        for (int e = 0; e < p.edge_count(); ++e) {
            auto [a, b] = p.ends(e);
            int ma = assign[a], mb = assign[b];
            if (p.kind() == GraphKind::Undirected && ma > mb) std::swap(ma, mb);
            classes[{ma, mb}].push_back(e);
        }
        std::vector<std::vector<int>> slots;      // per class: host edges
        std::vector<std::vector<int>> members;    // per class: pattern edges
        for (auto& [key, es] : classes) {
            std::vector<int> host_edges = h.edges_between(key.first, key.second);
            if (host_edges.size() < es.size()) return;  // cannot embed
            slots.push_back(std::move(host_edges));
            members.push_back(es);
        }
        std::vector<int> emap(p.edge_count(), -1);
        emit_class(0, slots, members, emap);
    }

    void emit_class(size_t c, const std::vector<std::vector<int>>& slots,
                    const std::vector<std::vector<int>>& members,
                    std::vector<int>& emap) {
        if (c == slots.size()) {
            out.emplace_back(pp, hp, assign, emap);
            return;
        }
        const auto& host_edges = slots[c];
        const auto& es = members[c];
        std::vector<int> pick(es.size());
        enumerate_injection(0, es, host_edges, pick, c, slots, members, emap);
    }

    void enumerate_injection(size_t i, const std::vector<int>& es,
                             const std::vector<int>& host_edges,
                             std::vector<int>& pick, size_t c,
                             const std::vector<std::vector<int>>& slots,
                             const std::vector<std::vector<int>>& members,
                             std::vector<int>& emap) {
        if (i == es.size()) {
            for (size_t j = 0; j < es.size(); ++j) emap[es[j]] = host_edges[pick[j]];
            emit_class(c + 1, slots, members, emap);
            return;
        }
        for (size_t s = 0; s < host_edges.size(); ++s) {
            bool taken = false;
            for (size_t j = 0; j < i; ++j) taken |= (pick[j] == static_cast<int>(s));
            if (taken) continue;
            pick[i] = static_cast<int>(s);
            enumerate_injection(i + 1, es, host_edges, pick, c, slots, members, emap);
        }
    }

    void run(size_t depth) {
        if (depth == order.size()) {
            emit_edge_maps();
            return;
        }
        int pv = order[depth];
        for (int hv = 0; hv < h.vertex_count(); ++hv) {
            if (used[hv] || !compatible(pv, hv)) continue;
            assign[pv] = hv;
            used[hv] = 1;
            run(depth + 1);
            assign[pv] = -1;
            used[hv] = 0;
        }
    }
};

}  // namespace

std::vector<GraphMorphism> enumerate_monos(const Multigraph& pattern,
                                           const Multigraph& host) {
    if (pattern.kind() != host.kind()) {
        throw GraphError("enumerate_monos: graph kinds differ");
    }
    if (pattern.vertex_count() > host.vertex_count() ||
        pattern.edge_count() > host.edge_count()) {
        return {};
    }
    MonoSearch search(pattern, host);
    search.run(0);
    return search.out;
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

namespace {

/// Iterative color refinement. Colors are ranks of structural signatures,
/// hence invariant under isomorphism.
std::vector<int> refine_colors(const Multigraph& g) {
    int n = g.vertex_count();
    bool directed = g.kind() == GraphKind::Directed;

    // adjacency multiplicities
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // v -> (u, mult out)
    std::vector<std::vector<std::pair<int, int>>> radj(n);
    std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
    std::vector<int> loops(n, 0);
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.ends(e);
        if (a == b) {
            ++loops[a];
        } else {
            ++mult[a][b];
            if (!directed) ++mult[b][a];
        }
    }

    using Sig = std::vector<long long>;
    std::vector<int> color(n, 0);
    {
        std::vector<Sig> init(n);
        for (int v = 0; v < n; ++v) init[v] = {loops[v], g.degree(v)};
        std::vector<Sig> sorted = init;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < n; ++v) {
            color[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), init[v]) - sorted.begin());
        }
    }

    int classes = 0;
    for (int round = 0; round < n; ++round) {
        std::vector<Sig> sig(n);
        for (int v = 0; v < n; ++v) {
            Sig s{color[v]};
            std::vector<std::pair<long long, long long>> nb;
            for (int u = 0; u < n; ++u) {
                if (u == v) continue;
                long long m = mult[v][u];
                long long mr = directed ? mult[u][v] : 0;
                if (m || mr) nb.emplace_back(color[u] * 1000003LL + m, mr);
            }
            std::sort(nb.begin(), nb.end());
            for (auto& [x, y] : nb) {
                s.push_back(x);
                s.push_back(y);
            }
            sig[v] = std::move(s);
        }
        std::vector<Sig> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < n; ++v) {
            color[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        }
        int c = static_cast<int>(sorted.size());
        if (c == classes || c == n) break;
        classes = c;
    }
    return color;
}

/// Lexicographically minimal ordering search. Vertices are placed class by
/// class (classes in color order); at each position only candidates whose
/// row is minimal are explored. Bare vertices (no incident edges) within a
/// class are interchangeable, so only the first is tried.
struct CanonSearch {
    const Multigraph& g;
    bool directed;
    std::vector<int> color;
    std::vector<int> pos_color;          // required color per position
    std::vector<std::vector<int>> mult;  // out-multiplicities (symmetric if undirected)
    std::vector<int> loops;
    std::vector<char> placed;
    std::vector<int> order;              // position -> vertex
    std::vector<std::vector<int>> rows;  // committed rows per position
    std::vector<std::vector<int>> best_rows;
    std::vector<int> best_order;
    bool have_best = false;

    explicit CanonSearch(const Multigraph& graph)
        : g(graph), directed(graph.kind() == GraphKind::Directed),
          color(refine_colors(graph)) {
        int n = g.vertex_count();
        pos_color = color;
        std::sort(pos_color.begin(), pos_color.end());
        mult.assign(n, std::vector<int>(n, 0));
        loops.assign(n, 0);
        for (int e = 0; e < g.edge_count(); ++e) {
            auto [a, b] = g.ends(e);
            if (a == b) {
                ++loops[a];
            } else {
                ++mult[a][b];
                if (!directed) ++mult[b][a];
            }
        }
        placed.assign(n, 0);
    }

    std::vector<int> row_for(int v) const {
        std::vector<int> row;
        row.reserve(1 + order.size() * (directed ? 2 : 1));
        row.push_back(loops[v]);
        for (int u : order) {
            row.push_back(mult[v][u]);
            if (directed) row.push_back(mult[u][v]);
        }
        return row;
    }

    // strict = prefix already strictly below best; no pruning applies.
    void dfs(size_t p, bool strict) {
        int n = g.vertex_count();
        if (p == static_cast<size_t>(n)) {
            if (strict || !have_best) {
                best_rows = rows;
                best_order = order;
                have_best = true;
            }
            return;
        }
        // candidates of the class owning position p, minimal row first
        std::vector<std::pair<std::vector<int>, int>> cands;
        bool bare_taken = false;
        for (int v = 0; v < n; ++v) {
            if (placed[v] || color[v] != pos_color[p]) continue;
            bool bare = g.degree(v) == 0;
            if (bare) {
                if (bare_taken) continue;
                bare_taken = true;
            }
            cands.emplace_back(row_for(v), v);
        }
        std::sort(cands.begin(), cands.end());
        const std::vector<int>& minrow = cands.front().first;
        for (auto& [row, v] : cands) {
            if (row != minrow) break;
            bool child_strict = strict;
            if (!child_strict && have_best) {
                if (row > best_rows[p]) continue;   // prune
                if (row < best_rows[p]) child_strict = true;
            }
            placed[v] = 1;
            order.push_back(v);
            rows.push_back(row);
            dfs(p + 1, child_strict);
            rows.pop_back();
            order.pop_back();
            placed[v] = 0;
        }
    }
};

std::string padded_id(char prefix, int i, int total) {
    int width = 1;
    for (int t = total - 1; t >= 10; t /= 10) ++width;
    std::string s = std::to_string(i);
    return prefix + std::string(width - s.size(), '0') + s;
}

}  // namespace

CanonicalForm canonical_form(const Multigraph& g) {
    int n = g.vertex_count();
    CanonSearch search(g);
    if (n > 0) search.dfs(0, false);

    const std::vector<int>& order = search.best_order;  // position -> vertex
    std::vector<int> rank(n, 0);                        // vertex -> position
    for (int p = 0; p < n; ++p) rank[order[p]] = p;

    // key from the committed rows
    std::ostringstream key;
    key << (g.kind() == GraphKind::Directed ? 'd' : 'u') << '|' << n << '|'
        << g.edge_count() << '|';
    for (int p = 0; p < n; ++p) {
        if (p) key << ';';
        const auto& row = search.best_rows[p];
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) key << ',';
            key << row[i];
        }
    }

    // canonical representative: vertices by rank, edges sorted by ranked ends
    std::vector<std::string> vs;
    vs.reserve(n);
    for (int p = 0; p < n; ++p) vs.push_back(padded_id('v', p, n));
    std::vector<int> edge_order(g.edge_count());
    std::iota(edge_order.begin(), edge_order.end(), 0);
    auto ranked_ends = [&](int e) {
        auto [a, b] = g.ends(e);
        int ra = rank[a], rb = rank[b];
        if (g.kind() == GraphKind::Undirected && ra > rb) std::swap(ra, rb);
        return std::make_pair(ra, rb);
    };
    std::stable_sort(edge_order.begin(), edge_order.end(), [&](int x, int y) {
        return ranked_ends(x) < ranked_ends(y);
    });
    std::vector<EdgeSpec> es;
    es.reserve(g.edge_count());
    std::vector<int> edge_rank(g.edge_count(), 0);
    for (size_t i = 0; i < edge_order.size(); ++i) {
        auto [ra, rb] = ranked_ends(edge_order[i]);
        es.push_back({padded_id('e', static_cast<int>(i), g.edge_count()),
                      vs[ra], vs[rb]});
        edge_rank[edge_order[i]] = static_cast<int>(i);
    }
    Multigraph rep(g.kind(), vs, es);

    // relabeling morphism g -> rep. Representative ids are zero-padded, so
    // the i-th generated id sits at sorted index i in rep.
    std::vector<int> vmap(n), emap(g.edge_count());
    for (int v = 0; v < n; ++v) vmap[v] = *rep.vertex_index(vs[rank[v]]);
    for (int e = 0; e < g.edge_count(); ++e) {
        emap[e] = *rep.edge_index(es[edge_rank[e]].id);
    }
    GraphMorphism relabel(g, rep, std::move(vmap), std::move(emap));
    return CanonicalForm{key.str(), std::move(rep), std::move(relabel)};
}

CanonicalKey canonical_key(const Multigraph& g) {
    return canonical_form(g).key;
}

bool is_isomorphic(const Multigraph& g, const Multigraph& h) {
    if (g.kind() != h.kind()) throw GraphError("is_isomorphic: graph kinds differ");
    if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) {
        return false;
    }
    return canonical_key(g) == canonical_key(h);
}

}  // namespace rulealg
