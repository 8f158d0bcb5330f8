#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rulealg {

enum class GraphKind { Directed, Undirected };

std::string_view to_string(GraphKind kind);

/// Error raised by graph/morphism validation and by operations whose
/// preconditions are violated.
struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Edge description used when constructing a graph. For directed graphs
/// (a, b) is (source, target); for undirected graphs the order is irrelevant
/// and a == b denotes a self-loop.
struct EdgeSpec {
    std::string id;
    std::string a;
    std::string b;
};

/// A finite directed or undirected multigraph over opaque string ids.
///
/// Values are immutable after construction. Vertex and edge ids are stored
/// sorted, so two graphs compare equal exactly when they have the same kind,
/// the same id sets and the same incidence. Undirected incidence is kept as
/// a normalized index pair (lo, hi); lo == hi encodes a self-loop.
class Multigraph {
public:
    Multigraph();  // empty undirected graph
    Multigraph(GraphKind kind, std::vector<std::string> vertices,
               std::vector<EdgeSpec> edges);

    static Multigraph empty(GraphKind kind);

    GraphKind kind() const { return kind_; }
    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int edge_count() const { return static_cast<int>(edge_ids_.size()); }
    int item_count() const { return vertex_count() + edge_count(); }

    const std::string& vertex_id(int v) const { return vertex_ids_.at(v); }
    const std::string& edge_id(int e) const { return edge_ids_.at(e); }
    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
    const std::vector<std::string>& edge_ids() const { return edge_ids_; }

    /// Endpoint indices of an edge. Directed: (source, target). Undirected:
    /// normalized (lo, hi), equal entries for a self-loop.
    std::pair<int, int> ends(int e) const { return ends_.at(e); }

    std::optional<int> vertex_index(std::string_view id) const;
    std::optional<int> edge_index(std::string_view id) const;

    bool is_loop(int e) const { return ends_[e].first == ends_[e].second; }
    int loop_count(int v) const;
    /// Number of non-loop edge endpoints at v plus 2 per loop (directed:
    /// out-degree + in-degree).
    int degree(int v) const;
    /// Parallel-edge multiplicity between u and v. Directed: edges u -> v.
    /// Undirected: unordered, including u == v (loops).
    int multiplicity(int u, int v) const;
    /// Edge indices between u and v (same conventions as multiplicity).
    std::vector<int> edges_between(int u, int v) const;

    bool operator==(const Multigraph& other) const = default;

private:
    GraphKind kind_ = GraphKind::Undirected;
    std::vector<std::string> vertex_ids_;
    std::vector<std::string> edge_ids_;
    std::vector<std::pair<int, int>> ends_;
};

/// Discrete (edgeless) graph on n vertices with ids "v0".."v{n-1}".
Multigraph discrete_graph(GraphKind kind, int n);

/// A total structure-preserving map between multigraphs of the same kind.
///
/// Graphs are held through shared pointers so that morphisms are cheap to
/// copy; equality is structural.
class GraphMorphism {
public:
    /// Validates totality and structure preservation; throws GraphError.
    GraphMorphism(Multigraph source, Multigraph target, std::vector<int> vmap,
                  std::vector<int> emap);
    GraphMorphism(std::shared_ptr<const Multigraph> source,
                  std::shared_ptr<const Multigraph> target,
                  std::vector<int> vmap, std::vector<int> emap);

    static GraphMorphism identity(const Multigraph& g);
    /// g after f (first f, then g). Throws if f's target != g's source.
    static GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f);

    const Multigraph& source() const { return *source_; }
    const Multigraph& target() const { return *target_; }
    std::shared_ptr<const Multigraph> source_ptr() const { return source_; }
    std::shared_ptr<const Multigraph> target_ptr() const { return target_; }

    int vertex_image(int v) const { return vmap_.at(v); }
    int edge_image(int e) const { return emap_.at(e); }
    const std::vector<int>& vertex_map() const { return vmap_; }
    const std::vector<int>& edge_map() const { return emap_; }

    bool is_mono() const;
    bool is_iso() const;
    /// Inverse of an isomorphism; throws if not bijective.
    GraphMorphism inverse() const;

    bool operator==(const GraphMorphism& other) const;

private:
    void validate() const;

    std::shared_ptr<const Multigraph> source_;
    std::shared_ptr<const Multigraph> target_;
    std::vector<int> vmap_;
    std::vector<int> emap_;
};

/// All injective structure-preserving morphisms pattern -> host, each exactly
/// once as a concrete morphism (not up to isomorphism), in a deterministic
/// order. Throws GraphError on kind mismatch.
std::vector<GraphMorphism> enumerate_monos(const Multigraph& pattern,
                                           const Multigraph& host);

/// Total isomorphism invariant: key(g) == key(h) iff g and h are isomorphic.
using CanonicalKey = std::string;

struct CanonicalForm {
    CanonicalKey key;
    Multigraph representative;   // canonically labelled copy
    GraphMorphism relabeling;    // input graph -> representative (iso)
};

/// Exact canonical form: color refinement followed by a lexicographically
/// minimal ordering search within refinement classes.
CanonicalForm canonical_form(const Multigraph& g);

/// Key only (same computation, no representative construction shortcut).
CanonicalKey canonical_key(const Multigraph& g);

bool is_isomorphic(const Multigraph& g, const Multigraph& h);

}  // namespace rulealg
