#include "tropdiv/model.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace tropdiv {

std::string PointRef::str() const {
    if (is_vertex()) return "v:" + std::to_string(vertex);
    return "e:" + std::to_string(edge) + "@" + offset.str();
}

Model Model::build(int num_vertices, std::vector<Edge> edges) {
    if (num_vertices < 1) fail(Errc::InvalidSpec, "model needs at least one vertex");
    for (size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u < 0 || e.u >= num_vertices || e.v < 0 || e.v >= num_vertices)
            fail(Errc::DanglingEndpoint,
                 "edge " + std::to_string(i) + " references vertex outside [0," + std::to_string(num_vertices) + ")");
        if (!(e.length > Rational(0)))
            fail(Errc::NonpositiveLength, "edge " + std::to_string(i) + " has length " + e.length.str());
    }

    Model m;
    m.num_vertices_ = num_vertices;
    m.edges_ = std::move(edges);
    m.incidence_.assign(static_cast<size_t>(num_vertices), {});
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        m.incidence_[static_cast<size_t>(m.edges_[static_cast<size_t>(e)].u)].push_back({e, 0});
        m.incidence_[static_cast<size_t>(m.edges_[static_cast<size_t>(e)].v)].push_back({e, 1});
    }
    for (auto& inc : m.incidence_)
        std::sort(inc.begin(), inc.end());

    // connectivity
    std::vector<char> seen(static_cast<size_t>(num_vertices), 0);
    std::queue<VertexId> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (auto [e, end] : m.incident(v)) {
            VertexId w = end == 0 ? m.edge(e).v : m.edge(e).u;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                ++reached;
                q.push(w);
            }
        }
    }
    if (reached != num_vertices) fail(Errc::DisconnectedGraph, "model is not connected");
    return m;
}

std::vector<VertexId> Model::intrinsic_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < vertex_count(); ++v)
        if (is_intrinsic_vertex(v)) out.push_back(v);
    return out;
}

Rational Model::total_length() const {
    Rational s(0);
    for (const Edge& e : edges_) s += e.length;
    return s;
}

bool Model::has_loops() const {
    for (EdgeId e = 0; e < edge_count(); ++e)
        if (is_loop(e)) return true;
    return false;
}

void Model::check_point(const PointRef& p) const {
    if (p.is_vertex()) {
        if (p.vertex >= vertex_count()) fail(Errc::InvalidPoint, "no vertex " + std::to_string(p.vertex));
        return;
    }
    if (p.edge < 0 || p.edge >= edge_count()) fail(Errc::InvalidPoint, "no edge " + std::to_string(p.edge));
    if (!(p.offset > Rational(0)) || !(p.offset < edge(p.edge).length))
        fail(Errc::InvalidPoint, "offset " + p.offset.str() + " not strictly inside edge " + std::to_string(p.edge));
}

SpanningTree spanning_tree(const Model& m) {
    SpanningTree t;
    int n = m.vertex_count();
    t.in_tree.assign(static_cast<size_t>(m.edge_count()), 0);
    t.parent.assign(static_cast<size_t>(n), -1);
    t.parent_edge.assign(static_cast<size_t>(n), -1);
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::queue<VertexId> q;
    q.push(0);
    seen[0] = 1;
    t.bfs_order.push_back(0);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (auto [e, end] : m.incident(v)) {
            VertexId w = end == 0 ? m.edge(e).v : m.edge(e).u;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                t.parent[static_cast<size_t>(w)] = v;
                t.parent_edge[static_cast<size_t>(w)] = e;
                t.in_tree[static_cast<size_t>(e)] = 1;
                t.tree_edges.push_back(e);
                t.bfs_order.push_back(w);
                q.push(w);
            }
        }
    }
    for (EdgeId e = 0; e < m.edge_count(); ++e)
        if (!t.in_tree[static_cast<size_t>(e)]) t.non_tree_edges.push_back(e);
    return t;
}

void Refinement::finalize() {
    EdgeId max_old = -1;
    for (const auto& [oe, lo, hi] : edge_origin) max_old = std::max(max_old, oe);
    pieces_.assign(static_cast<size_t>(max_old + 1), {});
    for (EdgeId ne = 0; ne < static_cast<EdgeId>(edge_origin.size()); ++ne) {
        const auto& [oe, lo, hi] = edge_origin[static_cast<size_t>(ne)];
        pieces_[static_cast<size_t>(oe)].push_back({ne, lo, hi});
    }
    for (auto& v : pieces_)
        std::sort(v.begin(), v.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    cut_vertex_.clear();
    for (VertexId w = 0; w < static_cast<VertexId>(vertex_origin.size()); ++w) {
        const PointRef& org = vertex_origin[static_cast<size_t>(w)];
        if (!org.is_vertex()) cut_vertex_[{org.edge, org.offset}] = w;
    }
}

PointRef Refinement::push(const PointRef& p) const {
    if (p.is_vertex()) return PointRef::at_vertex(vertex_map[static_cast<size_t>(p.vertex)]);
    auto cut = cut_vertex_.find({p.edge, p.offset});
    if (cut != cut_vertex_.end()) return PointRef::at_vertex(cut->second);
    for (const Piece& pc : pieces_[static_cast<size_t>(p.edge)])
        if (p.offset > pc.lo && p.offset < pc.hi)
            return PointRef::on_edge(pc.edge, (p.offset - pc.lo) * scale);
    fail(Errc::InvalidPoint, "point " + p.str() + " outside its edge");
}

PointRef Refinement::pull(const PointRef& p) const {
    if (p.is_vertex()) return vertex_origin[static_cast<size_t>(p.vertex)];
    const auto& [oe, lo, hi] = edge_origin[static_cast<size_t>(p.edge)];
    return PointRef::on_edge(oe, lo + p.offset / scale);
}

Refinement Refinement::compose(const Refinement& ab, const Refinement& bc) {
    Refinement r;
    r.scale = ab.scale * bc.scale;
    r.vertex_map.resize(ab.vertex_map.size());
    for (size_t v = 0; v < ab.vertex_map.size(); ++v)
        r.vertex_map[v] = bc.vertex_map[static_cast<size_t>(ab.vertex_map[v])];
    r.vertex_origin.resize(bc.vertex_origin.size());
    for (size_t w = 0; w < bc.vertex_origin.size(); ++w)
        r.vertex_origin[w] = ab.pull(bc.vertex_origin[w]);
    r.edge_origin.resize(bc.edge_origin.size());
    for (size_t f = 0; f < bc.edge_origin.size(); ++f) {
        const auto& [eb, lo2, hi2] = bc.edge_origin[f];
        const auto& [ea, lo1, hi1] = ab.edge_origin[static_cast<size_t>(eb)];
        (void)hi1;
        r.edge_origin[f] = {ea, lo1 + lo2 / ab.scale, lo1 + hi2 / ab.scale};
    }
    r.finalize();
    return r;
}

Refinement Refinement::identity(const Model& m) {
    Refinement r;
    r.vertex_map.resize(static_cast<size_t>(m.vertex_count()));
    r.vertex_origin.resize(static_cast<size_t>(m.vertex_count()));
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        r.vertex_map[static_cast<size_t>(v)] = v;
        r.vertex_origin[static_cast<size_t>(v)] = PointRef::at_vertex(v);
    }
    r.edge_origin.resize(static_cast<size_t>(m.edge_count()));
    for (EdgeId e = 0; e < m.edge_count(); ++e)
        r.edge_origin[static_cast<size_t>(e)] = {e, Rational(0), m.edge(e).length};
    r.finalize();
    return r;
}

RefineResult refine_with_points(const Model& m, const std::vector<PointRef>& pts) {
    // interior cut offsets per edge, sorted and deduplicated
    std::map<EdgeId, std::set<Rational>> cuts;
    for (const PointRef& p : pts) {
        m.check_point(p);
        if (!p.is_vertex()) cuts[p.edge].insert(p.offset);
    }

    Refinement map;
    map.vertex_map.resize(static_cast<size_t>(m.vertex_count()));
    map.vertex_origin.resize(static_cast<size_t>(m.vertex_count()));
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        map.vertex_map[static_cast<size_t>(v)] = v;
        map.vertex_origin[static_cast<size_t>(v)] = PointRef::at_vertex(v);
    }

    std::vector<Edge> new_edges;
    int next_vertex = m.vertex_count();
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(e);
        auto it = cuts.find(e);
        if (it == cuts.end() || it->second.empty()) {
            map.edge_origin.push_back({e, Rational(0), ed.length});
            new_edges.push_back(ed);
            continue;
        }
        Rational prev(0);
        VertexId prev_v = ed.u;
        for (const Rational& off : it->second) {
            VertexId cut_v = next_vertex++;
            map.vertex_origin.push_back(PointRef::on_edge(e, off));
            map.edge_origin.push_back({e, prev, off});
            new_edges.push_back({prev_v, cut_v, off - prev});
            prev = off;
            prev_v = cut_v;
        }
        map.edge_origin.push_back({e, prev, ed.length});
        new_edges.push_back({prev_v, ed.v, ed.length - prev});
    }

    map.finalize();
    RefineResult out{Model::build(next_vertex, std::move(new_edges)), std::move(map)};
    return out;
}

RefineResult split_loops(const Model& m) {
    std::vector<PointRef> mids;
    for (EdgeId e = 0; e < m.edge_count(); ++e)
        if (m.is_loop(e)) mids.push_back(PointRef::on_edge(e, m.edge(e).length / Rational(2)));
    return refine_with_points(m, mids);
}

SubdivisionResult unit_subdivision(const Model& m) {
    std::vector<Rational> lens;
    lens.reserve(static_cast<size_t>(m.edge_count()));
    for (const Edge& e : m.edges()) lens.push_back(e.length);
    mpz_class lcm = denominator_lcm(lens.begin(), lens.end());
    Rational scale{mpq_class(lcm)};

    Refinement map;
    map.scale = scale;
    map.vertex_map.resize(static_cast<size_t>(m.vertex_count()));
    map.vertex_origin.resize(static_cast<size_t>(m.vertex_count()));
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        map.vertex_map[static_cast<size_t>(v)] = v;
        map.vertex_origin[static_cast<size_t>(v)] = PointRef::at_vertex(v);
    }

    std::vector<Edge> new_edges;
    int next_vertex = m.vertex_count();
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(e);
        long long k = (ed.length * scale).to_integer();
        Rational step = ed.length / Rational(k);
        VertexId prev_v = ed.u;
        for (long long i = 1; i <= k; ++i) {
            VertexId hi_v;
            if (i == k) {
                hi_v = ed.v;
            } else {
                hi_v = next_vertex++;
                map.vertex_origin.push_back(PointRef::on_edge(e, step * Rational(i)));
            }
            map.edge_origin.push_back({e, step * Rational(i - 1), step * Rational(i)});
            new_edges.push_back({prev_v, hi_v, Rational(1)});
            prev_v = hi_v;
        }
    }

    long long scale_ll = scale.to_integer();
    map.finalize();
    return {Model::build(next_vertex, std::move(new_edges)), std::move(map), scale_ll};
}

RdsResult rank_determining_set(const Model& m) {
    int g = m.genus();
    if (g < 1) fail(Errc::TreeInput, "rank-determining set needs genus >= 1");
    SpanningTree t = spanning_tree(m);

    // a non-loop chord plays the role of the last one; all loops -> flag
    EdgeId chord_nonloop = -1;
    for (EdgeId e : t.non_tree_edges)
        if (!m.is_loop(e)) chord_nonloop = e;  // keep the largest id for determinism
    if (chord_nonloop < 0) return {true, {}};

    RdsResult out;
    auto midpoint = [&](EdgeId e) { return PointRef::on_edge(e, m.edge(e).length / Rational(2)); };
    for (EdgeId e : t.non_tree_edges)
        if (e != chord_nonloop) out.points.push_back(midpoint(e));
    out.points.push_back(midpoint(chord_nonloop));

    // walk the fundamental cycle of the chosen chord; any tree edge on it can
    // be traded to get the second spanning tree
    const Edge& ch = m.edge(chord_nonloop);
    std::vector<EdgeId> path_u, path_v;
    auto root_path = [&](VertexId x, std::vector<EdgeId>& out_path) {
        for (VertexId c = x; t.parent[static_cast<size_t>(c)] != -1; c = t.parent[static_cast<size_t>(c)])
            out_path.push_back(t.parent_edge[static_cast<size_t>(c)]);
    };
    root_path(ch.u, path_u);
    root_path(ch.v, path_v);
    // symmetric difference of the two root paths = tree part of the cycle
    std::set<EdgeId> on_cycle;
    for (EdgeId e : path_u) on_cycle.insert(e);
    for (EdgeId e : path_v) {
        if (on_cycle.count(e))
            on_cycle.erase(e);
        else
            on_cycle.insert(e);
    }
    if (on_cycle.empty()) fail(Errc::InvalidSpec, "chord cycle has no tree edge");  // cannot happen for non-loops
    EdgeId traded = *on_cycle.begin();
    out.points.push_back(midpoint(traded));
    return out;
}

}  // namespace tropdiv
