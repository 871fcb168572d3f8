#include "tropdiv/clifford.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>

#include "tropdiv/jacobian.hpp"

namespace tropdiv {

namespace {

// incident length multiset, the cheap vertex-compatibility invariant
std::vector<Rational> length_profile(const Model& m, VertexId v) {
    std::vector<Rational> out;
    for (auto [e, end] : m.incident(v)) out.push_back(m.edge(e).length);
    std::sort(out.begin(), out.end());
    return out;
}

void enumerate_edge_perms(const Model& m, const std::vector<VertexId>& vperm, EdgeId next,
                          std::vector<Involution::EdgeImage>& eperm, std::vector<char>& assigned,
                          std::vector<Involution>& out) {
    int ec = m.edge_count();
    while (next < ec && assigned[static_cast<size_t>(next)]) ++next;
    if (next == ec) {
        out.push_back({vperm, eperm});
        return;
    }
    const Edge& ed = m.edge(next);
    VertexId iu = vperm[static_cast<size_t>(ed.u)];
    VertexId iv = vperm[static_cast<size_t>(ed.v)];
    for (EdgeId f = 0; f < ec; ++f) {
        if (assigned[static_cast<size_t>(f)] && f != next) continue;
        const Edge& fd = m.edge(f);
        if (fd.length != ed.length) continue;
        bool fwd = (iu == fd.u && iv == fd.v);
        bool rev = (iu == fd.v && iv == fd.u);
        if (!fwd && !rev) continue;
        // the inverse pairing must also hold: iota(f) = next with the same flag
        VertexId fu = vperm[static_cast<size_t>(fd.u)];
        VertexId fv = vperm[static_cast<size_t>(fd.v)];
        bool inv_ok = rev ? (fu == ed.v && fv == ed.u) : (fu == ed.u && fv == ed.v);
        if (!inv_ok) continue;
        eperm[static_cast<size_t>(next)] = {f, rev};
        eperm[static_cast<size_t>(f)] = {next, rev};
        assigned[static_cast<size_t>(next)] = 1;
        assigned[static_cast<size_t>(f)] = 1;
        enumerate_edge_perms(m, vperm, next + 1, eperm, assigned, out);
        assigned[static_cast<size_t>(next)] = 0;
        assigned[static_cast<size_t>(f)] = 0;
    }
}

void enumerate_vertex_perms(const Model& m, const std::vector<std::vector<Rational>>& profiles, VertexId next,
                            std::vector<VertexId>& vperm, std::vector<char>& used,
                            std::vector<Involution>& out) {
    int n = m.vertex_count();
    while (next < n && used[static_cast<size_t>(next)]) ++next;
    if (next == n) {
        std::vector<Involution::EdgeImage> eperm(static_cast<size_t>(m.edge_count()));
        std::vector<char> assigned(static_cast<size_t>(m.edge_count()), 0);
        enumerate_edge_perms(m, vperm, 0, eperm, assigned, out);
        return;
    }
    for (VertexId w = next; w < n; ++w) {
        if (used[static_cast<size_t>(w)]) continue;
        if (profiles[static_cast<size_t>(next)] != profiles[static_cast<size_t>(w)]) continue;
        vperm[static_cast<size_t>(next)] = w;
        vperm[static_cast<size_t>(w)] = next;
        used[static_cast<size_t>(next)] = 1;
        used[static_cast<size_t>(w)] = 1;
        enumerate_vertex_perms(m, profiles, next + 1, vperm, used, out);
        used[static_cast<size_t>(next)] = 0;
        used[static_cast<size_t>(w)] = 0;
    }
}

void validate_involution(const Model& m, const Involution& iota) {
    if (iota.vertex_map.size() != static_cast<size_t>(m.vertex_count()) ||
        iota.edge_map.size() != static_cast<size_t>(m.edge_count()))
        fail(Errc::InvalidInvolution, "permutation sizes do not match the model");
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        VertexId w = iota.vertex_map[static_cast<size_t>(v)];
        if (w < 0 || w >= m.vertex_count() || iota.vertex_map[static_cast<size_t>(w)] != v)
            fail(Errc::InvalidInvolution, "vertex map is not an involution");
    }
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        auto [f, rev] = iota.edge_map[static_cast<size_t>(e)];
        if (f < 0 || f >= m.edge_count()) fail(Errc::InvalidInvolution, "edge image out of range");
        if (iota.edge_map[static_cast<size_t>(f)].image != e ||
            iota.edge_map[static_cast<size_t>(f)].reversed != rev)
            fail(Errc::InvalidInvolution, "edge map is not an involution");
        const Edge& ed = m.edge(e);
        const Edge& fd = m.edge(f);
        if (ed.length != fd.length) fail(Errc::InvalidInvolution, "edge lengths differ along the map");
        VertexId iu = iota.vertex_map[static_cast<size_t>(ed.u)];
        VertexId iv = iota.vertex_map[static_cast<size_t>(ed.v)];
        bool ok = rev ? (iu == fd.v && iv == fd.u) : (iu == fd.u && iv == fd.v);
        if (!ok) fail(Errc::InvalidInvolution, "edge map does not respect incidence");
    }
}

}  // namespace

InvolutionSearch find_involutions(const Model& m) {
    RefineResult base = split_loops(m);
    const Model& bm = base.model;
    std::vector<std::vector<Rational>> profiles;
    for (VertexId v = 0; v < bm.vertex_count(); ++v) profiles.push_back(length_profile(bm, v));
    std::vector<VertexId> vperm(static_cast<size_t>(bm.vertex_count()));
    std::vector<char> used(static_cast<size_t>(bm.vertex_count()), 0);
    InvolutionSearch out{bm, base.map, {}};
    enumerate_vertex_perms(bm, profiles, 0, vperm, used, out.involutions);
    return out;
}

bool quotient_is_tree(const Model& base, const Involution& iota) {
    validate_involution(base, iota);
    if (base.has_loops()) fail(Errc::InvalidInvolution, "quotient construction expects a loopless model");

    int vq = 0;
    for (VertexId v = 0; v < base.vertex_count(); ++v)
        if (iota.vertex_map[static_cast<size_t>(v)] >= v) ++vq;
    int eq = 0, fold_leaves = 0;
    for (EdgeId e = 0; e < base.edge_count(); ++e) {
        auto [f, rev] = iota.edge_map[static_cast<size_t>(e)];
        if (f < e) continue;  // counted with its partner
        ++eq;
        if (f == e && rev) ++fold_leaves;
    }
    int genus_q = eq - (vq + fold_leaves) + 1;
    return genus_q == 0;
}

namespace {

RankOptions cert_opts() {
    RankOptions opts;
    opts.method = RankMethod::Rds;
    opts.want_certificate = true;
    return opts;
}

G12Certificate make_certificate(const Model& m, const Divisor& d, std::optional<Involution> iota) {
    RankResult rr = rank_metric(m, d, cert_opts());
    if (rr.rank != 1)
        fail(Errc::RankMismatch, "candidate degree-2 divisor has rank " + std::to_string(rr.rank));
    G12Certificate cert;
    cert.divisor = d;
    cert.rank_cert = std::move(*rr.certificate);
    cert.involution = std::move(iota);
    return cert;
}

}  // namespace

G12Certificate tree_with_loops_g12(const Model& m) {
    if (m.genus() < 1) fail(Errc::NotTreeWithLoops, "genus zero input");
    SpanningTree t = spanning_tree(m);
    for (EdgeId e : t.non_tree_edges)
        if (!m.is_loop(e)) fail(Errc::NotTreeWithLoops, "chord " + std::to_string(e) + " is not a loop");
    EdgeId first_loop = t.non_tree_edges.front();
    Divisor d = Divisor::at(PointRef::at_vertex(m.edge(first_loop).u), 2);
    return make_certificate(m, d, std::nullopt);
}

std::optional<G12Certificate> find_g12(const Model& m) {
    if (m.genus() < 2) fail(Errc::GenusTooSmall, "find_g12 needs genus >= 2");

    SpanningTree t = spanning_tree(m);
    bool all_loops = true;
    for (EdgeId e : t.non_tree_edges)
        if (!m.is_loop(e)) all_loops = false;
    if (all_loops) return tree_with_loops_g12(m);

    InvolutionSearch search = find_involutions(m);
    for (const Involution& iota : search.involutions) {
        if (iota.is_identity()) continue;
        if (!quotient_is_tree(search.base, iota)) continue;
        // candidates: P + iota(P) over base vertices, then fixed-edge midpoints
        std::vector<Divisor> candidates;
        for (VertexId v = 0; v < search.base.vertex_count(); ++v) {
            VertexId w = iota.vertex_map[static_cast<size_t>(v)];
            if (w < v) continue;
            Divisor d;
            d.add(search.to_base.pull(PointRef::at_vertex(v)), 1);
            d.add(search.to_base.pull(PointRef::at_vertex(w)), 1);
            candidates.push_back(std::move(d));
        }
        for (EdgeId e = 0; e < search.base.edge_count(); ++e) {
            auto [f, rev] = iota.edge_map[static_cast<size_t>(e)];
            if (f == e && rev) {
                PointRef mid = PointRef::on_edge(e, search.base.edge(e).length / Rational(2));
                candidates.push_back(Divisor::at(search.to_base.pull(mid), 2));
            }
        }
        for (const Divisor& d : candidates) {
            RankResult rr = rank_metric(m, d, RankOptions{RankMethod::Rds, false});
            if (rr.rank == 1) return make_certificate(m, d, iota);
        }
    }
    return std::nullopt;
}

bool verify_g12_certificate(const Model& m, const G12Certificate& cert, std::string* why) {
    if (cert.divisor.degree() != 2 || !cert.divisor.is_effective()) {
        if (why) *why = "certificate divisor is not effective of degree 2";
        return false;
    }
    if (cert.rank_cert.claimed_rank != 1) {
        if (why) *why = "certificate does not claim rank 1";
        return false;
    }
    if (!verify_rank_certificate(m, cert.divisor, cert.rank_cert, why)) return false;
    if (rank_metric(m, cert.divisor, RankOptions{RankMethod::Rds, false}).rank != 1) {
        if (why) *why = "independent rank recomputation disagrees";
        return false;
    }
    return true;
}

ComposeResult compose_rg12(const Model& m, const G12Certificate& cert, int r) {
    int g = m.genus();
    if (r < 1 || r > g - 1) fail(Errc::InvalidSpec, "compose_rg12 needs 1 <= r <= g-1");
    ComposeResult out;
    out.divisor = r * cert.divisor;
    out.rank = rank_metric(m, out.divisor, RankOptions{RankMethod::Rds, false}).rank;
    if (out.rank != r)
        fail(Errc::RankMismatch,
             "r * g12 has rank " + std::to_string(out.rank) + ", expected " + std::to_string(r));
    return out;
}

namespace {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// per-sample generator keyed by (seed, r, trial): thread scheduling cannot
// change what gets sampled.  Interior points sit on the absolute 1/16 grid
// when the edge length allows it.
Divisor sample_effective_divisor(const Model& m, std::uint64_t seed, int r, long long trial) {
    SplitMix64 rng{seed ^ (0x517cc1b727220a95ull * static_cast<std::uint64_t>(r + 1)) ^
                   (0x2545f4914f6cdd1dull * static_cast<std::uint64_t>(trial + 1))};
    rng.next();
    Divisor d;
    long long degree = 2 * r;
    for (long long i = 0; i < degree; ++i) {
        if (rng.below(3) == 0) {
            d.add(PointRef::at_vertex(static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(m.vertex_count())))), 1);
        } else {
            EdgeId e = static_cast<EdgeId>(rng.below(static_cast<std::uint64_t>(m.edge_count())));
            Rational cells = m.edge(e).length * Rational(16);
            if (cells.is_integer() && cells.to_integer() >= 2) {
                long long k = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(cells.to_integer() - 1)));
                d.add(PointRef::on_edge(e, Rational(k, 16)), 1);
            } else {
                long long k = 1 + static_cast<long long>(rng.below(15));
                d.add(PointRef::on_edge(e, m.edge(e).length * Rational(k, 16)), 1);
            }
        }
    }
    return d;
}

}  // namespace

HarnessReport clifford_theorem_harness(const Model& m, long long trials, std::uint64_t seed, int threads) {
    auto t0 = std::chrono::steady_clock::now();
    int g = m.genus();
    if (g < 4) fail(Errc::GenusTooSmall, "harness needs genus >= 4 (2 <= r <= g-2 must be nonempty)");

    HarnessReport rep;
    rep.genus = g;
    rep.trials = trials;
    rep.seed = seed;

    std::optional<G12Certificate> g12 = find_g12(m);
    if (g12) {
        rep.campaign = "forward";
        rep.g12 = std::move(g12);
        rep.pass = true;
        for (int r = 2; r <= g - 1; ++r) {
            HarnessReport::ForwardCheck chk;
            chk.r = r;
            chk.expected_rank = r;
            Divisor dr = r * rep.g12->divisor;
            chk.rank = rank_metric(m, dr, RankOptions{RankMethod::Rds, false}).rank;
            chk.pass = chk.rank == r;
            rep.pass = rep.pass && chk.pass;
            rep.forward.push_back(chk);
            ++rep.samples_checked;
        }
    } else {
        rep.campaign = "contrapositive";
        if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;

        // one shared bridge for the whole campaign; per-sample work is then a
        // pure chip-firing search
        std::optional<BulkRankContext> ctx;
        try {
            ctx.emplace(make_bulk_rank_context(m));
        } catch (const Error&) {
            ctx.reset();  // fall back to the generic path per sample
        }

        std::vector<HarnessReport::Counterexample> found;
        std::mutex found_mu;
        for (int r = 2; r <= g - 2; ++r) {
            std::atomic<long long> next_trial{0};
            auto worker = [&]() {
                std::optional<BulkRankWorker> bulk;
                if (ctx) bulk.emplace(*ctx);
                RankOptions opts;
                opts.method = RankMethod::Rds;
                for (;;) {
                    long long trial = next_trial.fetch_add(1);
                    if (trial >= trials) break;
                    Divisor d = sample_effective_divisor(m, seed, r, trial);
                    bool within;
                    if (bulk && ctx->grid_aligned(d))
                        within = bulk->rank_at_most(d, r - 1);
                    else
                        within = rank_at_most(m, d, r - 1, opts);
                    if (!within) {
                        int exact = rank_metric(m, d, opts).rank;
                        std::lock_guard<std::mutex> lock(found_mu);
                        found.push_back({r, trial, d, exact});
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            rep.samples_checked += trials;
        }
        std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
            return a.r != b.r ? a.r < b.r : a.trial < b.trial;
        });
        rep.counterexamples = std::move(found);
        rep.pass = rep.counterexamples.empty();
    }
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace tropdiv
