#include "tropdiv/reduction.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace tropdiv {

FiniteGraph FiniteGraph::from_model(const Model& m) {
    FiniteGraph g;
    g.n = m.vertex_count();
    std::vector<int> deg(static_cast<size_t>(g.n), 0);
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        if (m.is_loop(e)) continue;
        ++deg[static_cast<size_t>(m.edge(e).u)];
        ++deg[static_cast<size_t>(m.edge(e).v)];
    }
    g.xadj.assign(static_cast<size_t>(g.n) + 1, 0);
    for (int v = 0; v < g.n; ++v) g.xadj[static_cast<size_t>(v) + 1] = g.xadj[static_cast<size_t>(v)] + deg[static_cast<size_t>(v)];
    g.adj.resize(static_cast<size_t>(g.xadj[static_cast<size_t>(g.n)]));
    std::vector<int> fill(g.xadj.begin(), g.xadj.end() - 1);
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        if (m.is_loop(e)) continue;
        const Edge& ed = m.edge(e);
        g.adj[static_cast<size_t>(fill[static_cast<size_t>(ed.u)]++)] = ed.v;
        g.adj[static_cast<size_t>(fill[static_cast<size_t>(ed.v)]++)] = ed.u;
    }
    return g;
}

Reducer::Reducer(const Model& m, VertexId sink) : Reducer(FiniteGraph::from_model(m), sink) {}

Reducer::Reducer(FiniteGraph g, VertexId sink) : g_(std::move(g)), sink_(sink) {
    int n = g_.n;
    dist_.assign(static_cast<size_t>(n), -1);
    std::vector<int> q;
    q.push_back(sink_);
    dist_[static_cast<size_t>(sink_)] = 0;
    for (size_t head = 0; head < q.size(); ++head) {
        int v = q[head];
        for (int a = g_.xadj[static_cast<size_t>(v)]; a < g_.xadj[static_cast<size_t>(v) + 1]; ++a) {
            int w = g_.adj[static_cast<size_t>(a)];
            if (dist_[static_cast<size_t>(w)] < 0) {
                dist_[static_cast<size_t>(w)] = dist_[static_cast<size_t>(v)] + 1;
                q.push_back(w);
            }
        }
    }
    int maxd = 0;
    for (int v = 0; v < n; ++v) maxd = std::max(maxd, dist_[static_cast<size_t>(v)]);
    shells_.assign(static_cast<size_t>(maxd) + 1, {});
    for (int v = 0; v < n; ++v) shells_[static_cast<size_t>(dist_[static_cast<size_t>(v)])].push_back(v);
    out_shell_.assign(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        for (int a = g_.xadj[static_cast<size_t>(v)]; a < g_.xadj[static_cast<size_t>(v) + 1]; ++a)
            if (dist_[static_cast<size_t>(g_.adj[static_cast<size_t>(a)])] == dist_[static_cast<size_t>(v)] - 1)
                ++out_shell_[static_cast<size_t>(v)];
    burnt_.assign(static_cast<size_t>(n), 0);
    burn_count_.assign(static_cast<size_t>(n), 0);
}

bool Reducer::burn(const std::vector<long long>& d) {
    int n = g_.n;
    std::fill(burnt_.begin(), burnt_.end(), 0);
    std::fill(burn_count_.begin(), burn_count_.end(), 0);
    queue_.clear();
    burnt_[static_cast<size_t>(sink_)] = 1;
    queue_.push_back(sink_);
    int nburnt = 1;
    for (size_t head = 0; head < queue_.size(); ++head) {
        int v = queue_[head];
        for (int a = g_.xadj[static_cast<size_t>(v)]; a < g_.xadj[static_cast<size_t>(v) + 1]; ++a) {
            int w = g_.adj[static_cast<size_t>(a)];
            if (burnt_[static_cast<size_t>(w)]) continue;
            if (++burn_count_[static_cast<size_t>(w)] > d[static_cast<size_t>(w)]) {
                burnt_[static_cast<size_t>(w)] = 1;
                queue_.push_back(w);
                ++nburnt;
            }
        }
    }
    return nburnt == n;
}

void Reducer::ensure_nonnegative(std::vector<long long>& d, std::vector<long long>* script) {
    // Borrow distance shells farthest-first: after treating shell k every
    // vertex at distance >= k is nonnegative and stays so.
    int maxd = static_cast<int>(shells_.size()) - 1;
    std::vector<long long> borrow(static_cast<size_t>(maxd) + 1, 0);
    for (int k = maxd; k >= 1; --k) {
        long long t = 0;
        for (int v : shells_[static_cast<size_t>(k)])
            if (d[static_cast<size_t>(v)] < 0) {
                long long need = (-d[static_cast<size_t>(v)] + out_shell_[static_cast<size_t>(v)] - 1) /
                                 out_shell_[static_cast<size_t>(v)];
                t = std::max(t, need);
            }
        if (t == 0) continue;
        borrow[static_cast<size_t>(k)] = t;
        for (int v : shells_[static_cast<size_t>(k)])
            for (int a = g_.xadj[static_cast<size_t>(v)]; a < g_.xadj[static_cast<size_t>(v) + 1]; ++a) {
                int w = g_.adj[static_cast<size_t>(a)];
                if (dist_[static_cast<size_t>(w)] == k - 1) {
                    d[static_cast<size_t>(v)] += t;
                    d[static_cast<size_t>(w)] -= t;
                }
            }
    }
    if (script) {
        // borrowing S_k once means one negative firing for every v with dist >= k
        std::vector<long long> prefix(static_cast<size_t>(maxd) + 1, 0);
        for (int k = 1; k <= maxd; ++k) prefix[static_cast<size_t>(k)] = prefix[static_cast<size_t>(k) - 1] + borrow[static_cast<size_t>(k)];
        for (int v = 0; v < g_.n; ++v)
            (*script)[static_cast<size_t>(v)] -= prefix[static_cast<size_t>(dist_[static_cast<size_t>(v)])];
    }
}

void Reducer::reduce(std::vector<long long>& d, std::vector<long long>* script) {
    if (script) script->assign(static_cast<size_t>(g_.n), 0);
    ensure_nonnegative(d, script);
    for (;;) {
        if (burn(d)) return;
        long long t = std::numeric_limits<long long>::max();
        for (int v = 0; v < g_.n; ++v) {
            if (burnt_[static_cast<size_t>(v)] || burn_count_[static_cast<size_t>(v)] == 0) continue;
            t = std::min(t, d[static_cast<size_t>(v)] / burn_count_[static_cast<size_t>(v)]);
        }
        if (t < 1) t = 1;  // unburnt boundary vertices always support one firing
        for (int v = 0; v < g_.n; ++v) {
            if (burnt_[static_cast<size_t>(v)]) continue;
            if (script) (*script)[static_cast<size_t>(v)] += t;
            if (burn_count_[static_cast<size_t>(v)] == 0) continue;
            for (int a = g_.xadj[static_cast<size_t>(v)]; a < g_.xadj[static_cast<size_t>(v) + 1]; ++a) {
                int w = g_.adj[static_cast<size_t>(a)];
                if (burnt_[static_cast<size_t>(w)]) {
                    d[static_cast<size_t>(v)] -= t;
                    d[static_cast<size_t>(w)] += t;
                }
            }
        }
    }
}

std::vector<long long> apply_script(const Model& m, const std::vector<long long>& dense,
                                    const std::vector<long long>& script) {
    std::vector<long long> out = dense;
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        if (m.is_loop(e)) continue;
        const Edge& ed = m.edge(e);
        long long diff = script[static_cast<size_t>(ed.u)] - script[static_cast<size_t>(ed.v)];
        out[static_cast<size_t>(ed.u)] -= diff;
        out[static_cast<size_t>(ed.v)] += diff;
    }
    return out;
}

std::set<VertexId> dhar_burnt_set(const Model& m, const Divisor& d, VertexId q) {
    std::vector<long long> dense = to_dense(m, d);
    for (VertexId v = 0; v < m.vertex_count(); ++v)
        if (v != q && dense[static_cast<size_t>(v)] < 0)
            fail(Errc::NegativeOffSink, "divisor negative at vertex " + std::to_string(v));
    Reducer r(m, q);
    r.burn(dense);
    std::set<VertexId> out;
    for (VertexId v = 0; v < m.vertex_count(); ++v)
        if (r.last_burnt()[static_cast<size_t>(v)]) out.insert(v);
    return out;
}

bool is_q_reduced(const Model& m, const Divisor& d, VertexId q) {
    std::vector<long long> dense = to_dense(m, d);
    for (VertexId v = 0; v < m.vertex_count(); ++v)
        if (v != q && dense[static_cast<size_t>(v)] < 0) return false;
    Reducer r(m, q);
    return r.burn(dense);
}

ReductionResult q_reduce(const Model& m, const Divisor& d, VertexId q) {
    std::vector<long long> dense = to_dense(m, d);
    std::vector<long long> script;
    Reducer r(m, q);
    r.reduce(dense, &script);
    ReductionResult out;
    out.reduced = from_dense(dense);
    out.script = FiringScript{q, std::move(script)};
    out.sink = q;
    return out;
}

namespace {

// Component labelling of the refined model minus a set of cut vertices.
struct SubsetComponents {
    std::vector<int> comp;  // -1 for vertices in S
    int count = 0;
};

SubsetComponents components_without(const Model& m, const std::vector<char>& in_s) {
    SubsetComponents sc;
    sc.comp.assign(static_cast<size_t>(m.vertex_count()), -1);
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        if (in_s[static_cast<size_t>(v)] || sc.comp[static_cast<size_t>(v)] != -1) continue;
        int id = sc.count++;
        std::vector<VertexId> stack{v};
        sc.comp[static_cast<size_t>(v)] = id;
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (auto [e, end] : m.incident(x)) {
                VertexId w = end == 0 ? m.edge(e).v : m.edge(e).u;
                if (in_s[static_cast<size_t>(w)] || sc.comp[static_cast<size_t>(w)] != -1) continue;
                sc.comp[static_cast<size_t>(w)] = id;
                stack.push_back(w);
            }
        }
    }
    return sc;
}

// Arcs from the cut vertex q into component `target`.
int outgoing_into(const Model& m, const SubsetComponents& sc, const std::vector<char>& in_s, VertexId q,
                  int target) {
    int out = 0;
    for (auto [e, end] : m.incident(q)) {
        VertexId w = end == 0 ? m.edge(e).v : m.edge(e).u;
        if (!in_s[static_cast<size_t>(w)] && sc.comp[static_cast<size_t>(w)] == target) ++out;
    }
    return out;
}

struct ReducedContext {
    RefineResult rr;
    std::vector<VertexId> supp_vertices;  // images of the divisor support
    std::vector<long long> coeff;         // divisor coefficient per refined vertex
};

ReducedContext refine_at_support(const Model& m, const Divisor& d, const PointRef* extra) {
    std::vector<PointRef> pts = d.support();
    if (extra) pts.push_back(*extra);
    ReducedContext ctx{refine_with_points(m, pts), {}, {}};
    ctx.coeff.assign(static_cast<size_t>(ctx.rr.model.vertex_count()), 0);
    for (const auto& [p, c] : d.entries()) {
        PointRef img = ctx.rr.map.push(p);
        ctx.supp_vertices.push_back(img.vertex);
        ctx.coeff[static_cast<size_t>(img.vertex)] = c;
    }
    return ctx;
}

}  // namespace

bool is_p_reduced(const Model& m, const Divisor& d, const PointRef& p) {
    if (!d.is_effective()) fail(Errc::NotEffective, "is_p_reduced needs an effective divisor");
    m.check_point(p);
    ReducedContext ctx = refine_at_support(m, d, &p);
    const Model& rm = ctx.rr.model;
    VertexId pv = ctx.rr.map.push(p).vertex;

    std::vector<VertexId> cand;
    for (VertexId v : ctx.supp_vertices)
        if (v != pv) cand.push_back(v);
    size_t k = cand.size();
    std::vector<char> in_s(static_cast<size_t>(rm.vertex_count()), 0);
    for (unsigned long mask = 1; mask < (1ul << k); ++mask) {
        std::fill(in_s.begin(), in_s.end(), 0);
        for (size_t i = 0; i < k; ++i)
            if (mask & (1ul << i)) in_s[static_cast<size_t>(cand[i])] = 1;
        SubsetComponents sc = components_without(rm, in_s);
        int u = sc.comp[static_cast<size_t>(pv)];
        bool has_unsaturated = false;
        for (size_t i = 0; i < k && !has_unsaturated; ++i) {
            if (!(mask & (1ul << i))) continue;
            VertexId q = cand[i];
            int out = outgoing_into(rm, sc, in_s, q, u);
            if (out >= 1 && ctx.coeff[static_cast<size_t>(q)] < out) has_unsaturated = true;
        }
        if (!has_unsaturated) return false;
    }
    return true;
}

bool is_singleton_system(const Model& m, const Divisor& d) {
    if (!d.is_effective()) fail(Errc::NotEffective, "is_singleton_system needs an effective divisor");
    if (d.is_zero()) return true;
    ReducedContext ctx = refine_at_support(m, d, nullptr);
    const Model& rm = ctx.rr.model;
    size_t k = ctx.supp_vertices.size();
    std::vector<char> in_s(static_cast<size_t>(rm.vertex_count()), 0);
    for (unsigned long mask = 1; mask < (1ul << k); ++mask) {
        std::fill(in_s.begin(), in_s.end(), 0);
        for (size_t i = 0; i < k; ++i)
            if (mask & (1ul << i)) in_s[static_cast<size_t>(ctx.supp_vertices[i])] = 1;
        SubsetComponents sc = components_without(rm, in_s);

        // vertex components as candidate containers of the base point
        for (int u = 0; u < sc.count; ++u) {
            bool has_unsaturated = false;
            for (size_t i = 0; i < k && !has_unsaturated; ++i) {
                if (!(mask & (1ul << i))) continue;
                VertexId q = ctx.supp_vertices[i];
                int out = outgoing_into(rm, sc, in_s, q, u);
                if (out >= 1 && ctx.coeff[static_cast<size_t>(q)] < out) has_unsaturated = true;
            }
            if (!has_unsaturated) return false;
        }

        // open intervals bounded by cut vertices on both sides
        for (EdgeId e = 0; e < rm.edge_count(); ++e) {
            VertexId a = rm.edge(e).u, b = rm.edge(e).v;
            if (!in_s[static_cast<size_t>(a)] || !in_s[static_cast<size_t>(b)]) continue;
            bool ok;
            if (a == b) {
                ok = ctx.coeff[static_cast<size_t>(a)] < 2;
            } else {
                ok = ctx.coeff[static_cast<size_t>(a)] < 1 || ctx.coeff[static_cast<size_t>(b)] < 1;
            }
            if (!ok) return false;
        }
    }
    return true;
}

UnitBridge bridge_to_unit(const Model& m, const std::vector<PointRef>& pts, bool loopless, long long max_subdiv) {
    RefineResult stage1 = refine_with_points(m, pts);
    Refinement map = std::move(stage1.map);
    Model staged = std::move(stage1.model);
    if (loopless && staged.has_loops()) {
        RefineResult nl = split_loops(staged);
        map = Refinement::compose(map, nl.map);
        staged = std::move(nl.model);
    }
    std::vector<Rational> lens;
    for (const Edge& e : staged.edges()) lens.push_back(e.length);
    mpz_class lcm = denominator_lcm(lens.begin(), lens.end());
    mpz_class total = 0;
    for (const Edge& e : staged.edges()) {
        Rational scaled = e.length * Rational(mpq_class(lcm));
        total += scaled.num();
    }
    if (total > static_cast<long>(max_subdiv))
        fail(Errc::SubdivisionTooLarge,
             "unit subdivision needs " + total.get_str() + " edges (cap " + std::to_string(max_subdiv) + ")");
    SubdivisionResult stage2 = unit_subdivision(staged);
    Refinement combined = Refinement::compose(map, stage2.map);
    return UnitBridge{std::move(stage2.model), std::move(combined), stage2.scale};
}

Divisor p_reduce_metric(const Model& m, const Divisor& d, const PointRef& p, long long max_subdiv) {
    m.check_point(p);
    std::vector<PointRef> pts = d.support();
    pts.push_back(p);
    UnitBridge bp = bridge_to_unit(m, pts, /*loopless=*/false, max_subdiv);
    std::vector<long long> dense(static_cast<size_t>(bp.model.vertex_count()), 0);
    for (const auto& [pt, c] : d.entries()) dense[static_cast<size_t>(bp.total.push(pt).vertex)] += c;
    VertexId q = bp.total.push(p).vertex;
    Reducer r(bp.model, q);
    r.reduce(dense);
    Divisor out;
    for (VertexId v = 0; v < bp.model.vertex_count(); ++v)
        if (dense[static_cast<size_t>(v)] != 0) out.add(bp.total.pull(PointRef::at_vertex(v)), dense[static_cast<size_t>(v)]);
    return out;
}

namespace {

// Shared helper for move_to_vertex: true when the refined vertex descends
// from a vertex of the original model that counts as a Lemma-2 target.
bool is_target_vertex(const Model& base, const Refinement& map, VertexId refined_v, bool any_model_vertex) {
    const PointRef& org = map.vertex_origin[static_cast<size_t>(refined_v)];
    if (!org.is_vertex()) return false;
    return any_model_vertex || base.valence(org.vertex) != 2;
}

}  // namespace

Divisor move_to_vertex(const Model& m, const Divisor& d, const PointRef& p) {
    if (!d.is_effective()) fail(Errc::NotEffective, "move_to_vertex needs an effective divisor");
    m.check_point(p);

    bool fallback = m.intrinsic_vertices().empty();  // circle-like: use model vertices
    for (const auto& [pt, c] : d.entries())
        if (pt.is_vertex() && (fallback || m.is_intrinsic_vertex(pt.vertex))) return d;

    if (is_p_reduced(m, d, p)) fail(Errc::AlreadyReduced, "divisor is already reduced at " + p.str());

    ReducedContext ctx = refine_at_support(m, d, &p);
    const Model& rm = ctx.rr.model;
    const Refinement& map = ctx.rr.map;
    VertexId pv = map.push(p).vertex;

    std::vector<VertexId> cand;
    for (VertexId v : ctx.supp_vertices)
        if (v != pv) cand.push_back(v);
    size_t k = cand.size();

    // locate the first failing subset: every boundary point saturated
    std::vector<char> in_s(static_cast<size_t>(rm.vertex_count()), 0);
    SubsetComponents sc;
    unsigned long found_mask = 0;
    int ucomp = -1;
    for (unsigned long mask = 1; mask < (1ul << k) && found_mask == 0; ++mask) {
        std::fill(in_s.begin(), in_s.end(), 0);
        for (size_t i = 0; i < k; ++i)
            if (mask & (1ul << i)) in_s[static_cast<size_t>(cand[i])] = 1;
        sc = components_without(rm, in_s);
        int u = sc.comp[static_cast<size_t>(pv)];
        bool has_unsaturated = false;
        for (size_t i = 0; i < k && !has_unsaturated; ++i) {
            if (!(mask & (1ul << i))) continue;
            VertexId q = cand[i];
            int out = outgoing_into(rm, sc, in_s, q, u);
            if (out >= 1 && ctx.coeff[static_cast<size_t>(q)] < out) has_unsaturated = true;
        }
        if (!has_unsaturated) {
            found_mask = mask;
            ucomp = u;
        }
    }
    if (found_mask == 0) fail(Errc::AlreadyReduced, "no saturated subset found");
    std::fill(in_s.begin(), in_s.end(), 0);
    for (size_t i = 0; i < k; ++i)
        if (found_mask & (1ul << i)) in_s[static_cast<size_t>(cand[i])] = 1;

    bool u_has_target = false;
    for (VertexId v = 0; v < rm.vertex_count(); ++v)
        if (sc.comp[static_cast<size_t>(v)] == ucomp && is_target_vertex(m, map, v, fallback)) u_has_target = true;

    PLFunction f;
    if (u_has_target) {
        // Lemma 2, second case: pull chips off every boundary point of the
        // saturated set and walk a wavefront into U until it reaches a vertex.
        const Rational INF = Rational(-1);  // sentinel: dist unset
        std::vector<Rational> dist(static_cast<size_t>(rm.vertex_count()), INF);
        std::vector<char> inU(static_cast<size_t>(rm.vertex_count()), 0);
        for (VertexId v = 0; v < rm.vertex_count(); ++v)
            if (sc.comp[static_cast<size_t>(v)] == ucomp) inU[static_cast<size_t>(v)] = 1;
        // seed distances from boundary cut vertices
        for (EdgeId e = 0; e < rm.edge_count(); ++e) {
            VertexId a = rm.edge(e).u, b = rm.edge(e).v;
            auto seed = [&](VertexId from, VertexId to) {
                if (in_s[static_cast<size_t>(from)] && inU[static_cast<size_t>(to)]) {
                    const Rational& len = rm.edge(e).length;
                    if (dist[static_cast<size_t>(to)] == INF || len < dist[static_cast<size_t>(to)])
                        dist[static_cast<size_t>(to)] = len;
                }
            };
            seed(a, b);
            seed(b, a);
        }
        // Dijkstra inside U (small models; quadratic scan is fine)
        std::vector<char> done(static_cast<size_t>(rm.vertex_count()), 0);
        for (;;) {
            VertexId best = -1;
            for (VertexId v = 0; v < rm.vertex_count(); ++v) {
                if (!inU[static_cast<size_t>(v)] || done[static_cast<size_t>(v)] || dist[static_cast<size_t>(v)] == INF) continue;
                if (best < 0 || dist[static_cast<size_t>(v)] < dist[static_cast<size_t>(best)]) best = v;
            }
            if (best < 0) break;
            done[static_cast<size_t>(best)] = 1;
            for (auto [e, end] : rm.incident(best)) {
                VertexId w = end == 0 ? rm.edge(e).v : rm.edge(e).u;
                if (!inU[static_cast<size_t>(w)] || done[static_cast<size_t>(w)]) continue;
                Rational cand_d = dist[static_cast<size_t>(best)] + rm.edge(e).length;
                if (dist[static_cast<size_t>(w)] == INF || cand_d < dist[static_cast<size_t>(w)])
                    dist[static_cast<size_t>(w)] = cand_d;
            }
        }
        Rational tstar;
        bool have_t = false;
        for (VertexId v = 0; v < rm.vertex_count(); ++v)
            if (inU[static_cast<size_t>(v)] && is_target_vertex(m, map, v, fallback) && dist[static_cast<size_t>(v)] != INF)
                if (!have_t || dist[static_cast<size_t>(v)] < tstar) {
                    tstar = dist[static_cast<size_t>(v)];
                    have_t = true;
                }
        if (!have_t) fail(Errc::InvalidSpec, "wavefront target unreachable");

        f.tracks.resize(static_cast<size_t>(rm.edge_count()));
        for (EdgeId e = 0; e < rm.edge_count(); ++e) {
            VertexId a = rm.edge(e).u, b = rm.edge(e).v;
            const Rational& len = rm.edge(e).length;
            auto& track = f.tracks[static_cast<size_t>(e)];
            bool aU = inU[static_cast<size_t>(a)], bU = inU[static_cast<size_t>(b)];
            if (!aU && !bU) {
                track.offsets = {Rational(0), len};
                track.values = {Rational(0), Rational(0)};
                continue;
            }
            Rational da = aU ? dist[static_cast<size_t>(a)] : Rational(0);
            Rational db = bU ? dist[static_cast<size_t>(b)] : Rational(0);
            auto w_of = [&](const Rational& x) {
                Rational w1 = da + x, w2 = db + (len - x);
                Rational w = w1 < w2 ? w1 : w2;
                return w < tstar ? w : tstar;
            };
            std::vector<Rational> xs{Rational(0), len};
            Rational apex = (db + len - da) / Rational(2);
            if (apex > Rational(0) && apex < len) xs.push_back(apex);
            Rational clip1 = tstar - da;
            if (clip1 > Rational(0) && clip1 < len) xs.push_back(clip1);
            Rational clip2 = len - (tstar - db);
            if (clip2 > Rational(0) && clip2 < len) xs.push_back(clip2);
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            for (const Rational& x : xs) {
                track.offsets.push_back(x);
                track.values.push_back(-w_of(x));
            }
        }
    } else {
        // Lemma 2, first case: U is an arc inside one edge of the metric
        // graph; slide its outermost chips outward until one hits an endpoint.
        struct Step {
            EdgeId e;
            int enter_end;
            VertexId far;
            Rational cum_far;
        };
        auto walk = [&](std::pair<EdgeId, int> start_arc) {
            // pieces of the chain in travel order
            std::vector<Step> steps;
            Rational cum(0);
            std::pair<EdgeId, int> arc = start_arc;
            for (;;) {
                EdgeId e = arc.first;
                int end = arc.second;
                VertexId far = end == 0 ? rm.edge(e).v : rm.edge(e).u;
                cum += rm.edge(e).length;
                steps.push_back({e, end, far, cum});
                if (is_target_vertex(m, map, far, fallback)) break;
                std::pair<EdgeId, int> next{-1, -1};
                for (auto [e2, end2] : rm.incident(far)) {
                    if (e2 == e && (end2 == (end == 0 ? 1 : 0))) continue;  // the arc we came in on
                    next = {e2, end2};
                }
                if (next.first < 0) fail(Errc::InvalidSpec, "chain walk failed");
                arc = next;
            }
            return steps;
        };
        const auto& inc = rm.incident(pv);
        if (inc.size() != 2) fail(Errc::InvalidSpec, "case-1 base point has valence != 2");
        auto walkA = walk(inc[0]);
        auto walkB = walk(inc[1]);
        Rational lenA = walkA.back().cum_far;
        Rational lenB = walkB.back().cum_far;
        Rational chain_len = lenA + lenB;
        // chain coordinate: terminator of walkA at 0, base point at lenA
        // positions of saturated-set points along the chain
        Rational q1_pos, q2_pos;
        bool have_q1 = false, have_q2 = false;
        {
            for (const auto& st : walkA) {
                if (in_s[static_cast<size_t>(st.far)]) {
                    Rational pos = lenA - st.cum_far;
                    if (!have_q1 || pos < q1_pos) {
                        q1_pos = pos;
                        have_q1 = true;
                    }
                }
            }
            for (const auto& st : walkB) {
                if (in_s[static_cast<size_t>(st.far)]) {
                    Rational pos = lenA + st.cum_far;
                    if (!have_q2 || pos > q2_pos) {
                        q2_pos = pos;
                        have_q2 = true;
                    }
                }
            }
        }
        if (!have_q1 || !have_q2) fail(Errc::InvalidSpec, "case-1 chain misses saturated points");
        Rational t1 = q1_pos;               // distance to terminator A
        Rational t2 = chain_len - q2_pos;   // distance to terminator B
        Rational t = t1 < t2 ? t1 : t2;

        // trapezoid profile on the chain, zero elsewhere
        auto profile = [&](const Rational& x) {
            Rational v1 = x - (q1_pos - t);
            Rational v2 = (q2_pos + t) - x;
            Rational v = v1 < v2 ? v1 : v2;
            if (v > t) v = t;
            if (v < Rational(0)) v = Rational(0);
            return v;
        };
        f = PLFunction::constant(rm, Rational(0));
        auto emit = [&](const std::vector<Step>& steps, bool side_a) {
            Rational cum_prev(0);
            for (const auto& st : steps) {
                const Rational& len = rm.edge(st.e).length;
                // chain positions of this piece
                Rational pos_near = side_a ? lenA - cum_prev : lenA + cum_prev;  // at pv-side end
                auto chain_x = [&](const Rational& w) {  // w = distance from the entry end
                    return side_a ? pos_near - w : pos_near + w;
                };
                // collect breakpoints in edge-local coordinates (from edge's u end)
                std::vector<Rational> candidates{Rational(0), len};
                for (const Rational& bp : {q1_pos - t, q1_pos, q2_pos, q2_pos + t}) {
                    // w from entry end such that chain_x(w) == bp
                    Rational w = side_a ? pos_near - bp : bp - pos_near;
                    if (w > Rational(0) && w < len) candidates.push_back(w);
                }
                std::sort(candidates.begin(), candidates.end());
                candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
                auto& track = f.tracks[static_cast<size_t>(st.e)];
                track.offsets.clear();
                track.values.clear();
                for (const Rational& w : candidates) {
                    // convert entry-end distance to edge-local offset
                    Rational local = st.enter_end == 0 ? w : len - w;
                    track.offsets.push_back(local);
                    track.values.push_back(profile(chain_x(w)));
                }
                if (st.enter_end == 1) {
                    std::reverse(track.offsets.begin(), track.offsets.end());
                    std::reverse(track.values.begin(), track.values.end());
                }
                cum_prev = st.cum_far;
            }
        };
        emit(walkA, true);
        emit(walkB, false);
    }

    Divisor on_refined;
    for (const auto& [pt, c] : d.entries()) on_refined.add(map.push(pt), c);
    on_refined += div_of_function(f, rm);
    if (!on_refined.is_effective()) fail(Errc::InvalidSpec, "move_to_vertex produced a non-effective divisor");
    Divisor out;
    for (const auto& [pt, c] : on_refined.entries()) out.add(map.pull(pt), c);
    return out;
}

}  // namespace tropdiv
