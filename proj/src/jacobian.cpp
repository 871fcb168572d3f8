#include "tropdiv/jacobian.hpp"

#include <algorithm>
#include <map>

#include "tropdiv/reduction.hpp"

namespace tropdiv {

namespace {

// signed tree-edge chain from the BFS root to each vertex
std::vector<std::vector<std::pair<EdgeId, int>>> root_chains(const Model& m, const SpanningTree& t) {
    std::vector<std::vector<std::pair<EdgeId, int>>> chain(static_cast<size_t>(m.vertex_count()));
    for (VertexId v : t.bfs_order) {
        if (t.parent[static_cast<size_t>(v)] < 0) continue;
        VertexId p = t.parent[static_cast<size_t>(v)];
        EdgeId e = t.parent_edge[static_cast<size_t>(v)];
        chain[static_cast<size_t>(v)] = chain[static_cast<size_t>(p)];
        chain[static_cast<size_t>(v)].push_back({e, m.edge(e).u == p ? 1 : -1});
    }
    return chain;
}

}  // namespace

PeriodLattice period_basis(const Model& m) {
    int g = m.genus();
    if (g < 1) fail(Errc::TreeInput, "period basis needs genus >= 1");
    SpanningTree t = spanning_tree(m);
    auto chains = root_chains(m, t);

    PeriodLattice L;
    L.genus = g;
    for (EdgeId c : t.non_tree_edges) {
        std::vector<int> cyc(static_cast<size_t>(m.edge_count()), 0);
        cyc[static_cast<size_t>(c)] += 1;  // chord traversed u -> v
        // close up along the tree: path v -> u = chain(u) - chain(v)
        for (auto [e, s] : chains[static_cast<size_t>(m.edge(c).u)]) cyc[static_cast<size_t>(e)] += s;
        for (auto [e, s] : chains[static_cast<size_t>(m.edge(c).v)]) cyc[static_cast<size_t>(e)] -= s;
        L.cycles.push_back(std::move(cyc));
    }

    L.gram.resize(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            Rational q(0);
            for (EdgeId e = 0; e < m.edge_count(); ++e) {
                int a = L.cycles[static_cast<size_t>(i)][static_cast<size_t>(e)];
                int b = L.cycles[static_cast<size_t>(j)][static_cast<size_t>(e)];
                if (a != 0 && b != 0) q += m.edge(e).length * Rational(static_cast<long long>(a) * b);
            }
            L.gram(i, j) = q;
        }

    // positive definiteness via leading principal minors
    for (int k = 1; k <= g; ++k) {
        RatMat minor = L.gram.topLeftCorner(k, k);
        Rational det = Eigen::FullPivLU<RatMat>(minor).determinant();
        if (!(det > Rational(0))) fail(Errc::InvalidSpec, "Gram matrix not positive definite");
    }
    return L;
}

AJVector abel_jacobi(const Model& m, const PeriodLattice& lattice, const Divisor& d, const PointRef& base) {
    m.check_point(base);
    SpanningTree t = spanning_tree(m);
    auto chains = root_chains(m, t);

    int g = lattice.genus;
    AJVector out;
    out.base = base;
    out.degree = d.degree();
    out.coords = RatVec::Zero(g);

    // pairing of the path root -> P against every cycle
    auto pair_path_to = [&](const PointRef& p, RatVec& acc, long long mult) {
        // full tree edges to the anchor vertex, then a partial edge for interior points
        VertexId anchor = p.is_vertex() ? p.vertex : m.edge(p.edge).u;
        for (auto [e, s] : chains[static_cast<size_t>(anchor)]) {
            for (int i = 0; i < g; ++i) {
                int c = lattice.cycles[static_cast<size_t>(i)][static_cast<size_t>(e)];
                if (c != 0) acc(i) += m.edge(e).length * Rational(static_cast<long long>(s) * c) * Rational(mult);
            }
        }
        if (!p.is_vertex()) {
            for (int i = 0; i < g; ++i) {
                int c = lattice.cycles[static_cast<size_t>(i)][static_cast<size_t>(p.edge)];
                if (c != 0) acc(i) += p.offset * Rational(c) * Rational(mult);
            }
        }
    };

    for (const auto& [p, c] : d.entries()) pair_path_to(p, out.coords, c);
    // subtract degree times the base path: AJ uses paths base -> P_i
    RatVec base_part = RatVec::Zero(g);
    pair_path_to(base, base_part, d.degree());
    out.coords -= base_part;
    return out;
}

bool is_lattice_member(const PeriodLattice& lattice, const RatVec& v) {
    Eigen::FullPivLU<RatMat> lu(lattice.gram);
    RatVec x = lu.solve(v);
    for (int i = 0; i < x.size(); ++i)
        if (!x(i).is_integer()) return false;
    return true;
}

bool are_equivalent(const Model& m, const Divisor& d1, const Divisor& d2) {
    if (d1.degree() != d2.degree()) return false;
    if (m.genus() == 0) return true;
    PeriodLattice L = period_basis(m);
    PointRef base = PointRef::at_vertex(0);
    AJVector a1 = abel_jacobi(m, L, d1, base);
    AJVector a2 = abel_jacobi(m, L, d2, base);
    return is_lattice_member(L, a1.coords - a2.coords);
}

PLFunction equivalence_witness(const Model& m, const Divisor& d1, const Divisor& d2, long long max_subdiv) {
    if (!are_equivalent(m, d1, d2)) fail(Errc::NotEquivalent, "divisors are not linearly equivalent");

    std::vector<PointRef> pts = d1.support();
    for (const PointRef& p : d2.support()) pts.push_back(p);
    UnitBridge bp = bridge_to_unit(m, pts, /*loopless=*/false, max_subdiv);

    auto dense_of = [&](const Divisor& d) {
        std::vector<long long> dense(static_cast<size_t>(bp.model.vertex_count()), 0);
        for (const auto& [p, c] : d.entries()) dense[static_cast<size_t>(bp.total.push(p).vertex)] += c;
        return dense;
    };
    std::vector<long long> v1 = dense_of(d1), v2 = dense_of(d2);
    VertexId q = bp.total.vertex_map[0];
    Reducer red(bp.model, q);
    std::vector<long long> s1, s2;
    red.reduce(v1, &s1);
    red.reduce(v2, &s2);
    if (v1 != v2) fail(Errc::NotEquivalent, "reduced representatives differ");

    // d2 - d1 = div(f) for f = (s1 - s2)/scale: the division undoes the metric
    // rescaling of the unit subdivision, keeping slopes integral
    std::vector<Rational> fval(static_cast<size_t>(bp.model.vertex_count()));
    for (size_t i = 0; i < fval.size(); ++i) fval[i] = Rational(s1[i] - s2[i], bp.scale);

    // reassemble per original edge from the ordered unit pieces
    std::vector<std::vector<std::pair<Rational, EdgeId>>> pieces(static_cast<size_t>(m.edge_count()));
    for (EdgeId ne = 0; ne < bp.model.edge_count(); ++ne) {
        const auto& [oe, lo, hi] = bp.total.edge_origin[static_cast<size_t>(ne)];
        pieces[static_cast<size_t>(oe)].push_back({lo, ne});
    }
    PLFunction f;
    f.tracks.resize(static_cast<size_t>(m.edge_count()));
    for (EdgeId oe = 0; oe < m.edge_count(); ++oe) {
        auto& ps = pieces[static_cast<size_t>(oe)];
        std::sort(ps.begin(), ps.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        auto& track = f.tracks[static_cast<size_t>(oe)];
        track.offsets.push_back(Rational(0));
        track.values.push_back(fval[static_cast<size_t>(bp.model.edge(ps.front().second).u)]);
        for (const auto& [lo, ne] : ps) {
            const auto& [o2, plo, phi] = bp.total.edge_origin[static_cast<size_t>(ne)];
            track.offsets.push_back(phi);
            track.values.push_back(fval[static_cast<size_t>(bp.model.edge(ne).v)]);
        }
        // drop collinear interior breakpoints
        PLFunction::Track packed;
        size_t n = track.offsets.size();
        packed.offsets.push_back(track.offsets[0]);
        packed.values.push_back(track.values[0]);
        for (size_t i = 1; i + 1 < n; ++i) {
            Rational sl = (track.values[i] - track.values[i - 1]) / (track.offsets[i] - track.offsets[i - 1]);
            Rational sr = (track.values[i + 1] - track.values[i]) / (track.offsets[i + 1] - track.offsets[i]);
            if (sl != sr) {
                packed.offsets.push_back(track.offsets[i]);
                packed.values.push_back(track.values[i]);
            }
        }
        packed.offsets.push_back(track.offsets[n - 1]);
        packed.values.push_back(track.values[n - 1]);
        track = std::move(packed);
    }
    validate_pl(f, m);
    return f;
}

}  // namespace tropdiv
