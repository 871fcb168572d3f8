#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "tropdiv/errors.hpp"
#include "tropdiv/rational.hpp"

namespace tropdiv {

using VertexId = int;
using EdgeId = int;

struct Edge {
    VertexId u = -1;
    VertexId v = -1;
    Rational length;
};

// A point of the metric graph: either a model vertex or a point strictly
// inside an edge, addressed by an exact rational offset from the edge's
// u-endpoint.
struct PointRef {
    VertexId vertex = -1;
    EdgeId edge = -1;
    Rational offset;

    static PointRef at_vertex(VertexId v) {
        PointRef p;
        p.vertex = v;
        return p;
    }
    static PointRef on_edge(EdgeId e, Rational off) {
        PointRef p;
        p.edge = e;
        p.offset = std::move(off);
        return p;
    }

    bool is_vertex() const { return vertex >= 0; }
    std::string str() const;

    friend bool operator==(const PointRef& a, const PointRef& b) {
        if (a.is_vertex() != b.is_vertex()) return false;
        if (a.is_vertex()) return a.vertex == b.vertex;
        return a.edge == b.edge && a.offset == b.offset;
    }
    friend bool operator!=(const PointRef& a, const PointRef& b) { return !(a == b); }
    friend bool operator<(const PointRef& a, const PointRef& b) {
        if (a.is_vertex() != b.is_vertex()) return a.is_vertex();
        if (a.is_vertex()) return a.vertex < b.vertex;
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.offset < b.offset;
    }
};

// Finite model of a metric graph: a connected multigraph (loops and parallel
// edges allowed) with positive rational edge lengths.  Immutable after build.
class Model {
public:
    static Model build(int num_vertices, std::vector<Edge> edges);

    int vertex_count() const { return num_vertices_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(EdgeId e) const { return edges_[static_cast<size_t>(e)]; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool is_loop(EdgeId e) const { return edges_[static_cast<size_t>(e)].u == edges_[static_cast<size_t>(e)].v; }

    // Incident (edge, end) pairs; a loop at v appears twice (end 0 and 1).
    const std::vector<std::pair<EdgeId, int>>& incident(VertexId v) const {
        return incidence_[static_cast<size_t>(v)];
    }
    int valence(VertexId v) const { return static_cast<int>(incidence_[static_cast<size_t>(v)].size()); }
    bool is_intrinsic_vertex(VertexId v) const { return valence(v) != 2; }
    std::vector<VertexId> intrinsic_vertices() const;

    int genus() const { return edge_count() - vertex_count() + 1; }
    Rational total_length() const;
    bool has_loops() const;

    void check_point(const PointRef& p) const;

private:
    Model() = default;
    int num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<EdgeId, int>>> incidence_;
};

// Deterministic spanning tree: BFS from vertex 0 scanning incidences in
// edge-id order.  non_tree_edges come out in ascending edge id.
struct SpanningTree {
    std::vector<EdgeId> tree_edges;
    std::vector<EdgeId> non_tree_edges;
    std::vector<char> in_tree;         // indexed by edge
    std::vector<VertexId> parent;      // -1 at the root
    std::vector<EdgeId> parent_edge;   // -1 at the root
    std::vector<VertexId> bfs_order;
};
SpanningTree spanning_tree(const Model& m);

// Point re-addressing data carried by refine_with_points / unit_subdivision.
// New lengths are old lengths times `scale`; intervals in edge_origin are in
// old-model coordinates.
struct Refinement {
    Rational scale = Rational(1);
    std::vector<VertexId> vertex_map;                          // old vertex -> new vertex
    std::vector<PointRef> vertex_origin;                       // new vertex -> old point
    std::vector<std::tuple<EdgeId, Rational, Rational>> edge_origin;  // new edge -> (old edge, lo, hi)

    PointRef push(const PointRef& p) const;
    PointRef pull(const PointRef& p) const;
    static Refinement compose(const Refinement& ab, const Refinement& bc);
    static Refinement identity(const Model& m);

    // Builds the lookup indexes; every producer calls this, after which the
    // object is safe for concurrent reads.
    void finalize();

private:
    struct Piece {
        EdgeId edge;
        Rational lo, hi;
    };
    std::vector<std::vector<Piece>> pieces_;                      // per old edge
    std::map<std::pair<EdgeId, Rational>, VertexId> cut_vertex_;  // (old edge, offset) -> new vertex
};

struct RefineResult {
    Model model;
    Refinement map;
};

// Inserts the given points as vertices; same metric space, genus preserved.
RefineResult refine_with_points(const Model& m, const std::vector<PointRef>& pts);

// Midpoint-splits every loop; used before handing a model to finite-graph
// divisor theory, which wants loopless multigraphs.
RefineResult split_loops(const Model& m);

struct SubdivisionResult {
    Model model;
    Refinement map;
    long long scale;  // lcm of length denominators
};

// Rescales by the lcm of length denominators and splits each edge into unit
// pieces.  Multigraph structure is kept (loops stay loops).
SubdivisionResult unit_subdivision(const Model& m);

struct RdsResult {
    bool tree_with_loops = false;
    std::vector<PointRef> points;  // g+1 points when !tree_with_loops
};

// The g+1-point rank-determining set built from two spanning trees; flags the
// all-loops case, which has its own degree-2 construction.
RdsResult rank_determining_set(const Model& m);

}  // namespace tropdiv
