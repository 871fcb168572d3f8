#include "tropdiv/rank.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

namespace tropdiv {

namespace {

struct VecHash {
    size_t operator()(const std::vector<long long>& v) const {
        size_t h = 1469598103934665603ull;
        for (long long x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// Rank search over a fixed witness vertex set on a loopless unit model.
// Exact ranks go through a memoized class recursion; bounded queries run a
// depth-limited search for one failing witness multiset.
class RankEngine {
public:
    RankEngine(const Model& bridge, VertexId sink, std::vector<int> witnesses)
        : red_(bridge, sink), sink_(sink), witnesses_(std::move(witnesses)) {}

    // memoized answers depend on the witness set; swapping it resets them
    void set_witnesses(std::vector<int> witnesses) {
        witnesses_ = std::move(witnesses);
        exact_memo_.clear();
        nofail_.clear();
    }

    int exact_rank(std::vector<long long> dense) {
        red_.reduce(dense);
        return rank_of_reduced(dense);
    }

    bool rank_at_most(std::vector<long long> dense, int cap) {
        red_.reduce(dense);
        if (dense[static_cast<size_t>(sink_)] < 0) return true;
        if (cap < 0) return false;
        return exists_failing(dense, cap + 1);
    }

    // every witness multiset of degree k must pass; returns entries
    // (witness multiset as vertex ids, reduced representative)
    bool lower_table(std::vector<long long> dense, int k,
                     std::vector<std::pair<std::vector<int>, std::vector<long long>>>* out) {
        red_.reduce(dense);
        std::vector<int> picks;
        return lower_rec(dense, k, 0, picks, out);
    }

    // first failing witness multiset of degree `depth` in lexicographic order
    bool find_blocker(std::vector<long long> dense, int depth, std::vector<int>* picks,
                      std::vector<long long>* reduced_out) {
        red_.reduce(dense);
        picks->clear();
        return blocker_rec(dense, depth, 0, picks, reduced_out);
    }

private:
    int rank_of_reduced(const std::vector<long long>& r) {
        if (r[static_cast<size_t>(sink_)] < 0) return -1;
        long long deg = std::accumulate(r.begin(), r.end(), 0ll);
        if (deg == 0) return 0;
        auto it = exact_memo_.find(r);
        if (it != exact_memo_.end()) return it->second;
        int best = INT_MAX;
        for (int w : witnesses_) {
            std::vector<long long> next = r;
            --next[static_cast<size_t>(w)];
            red_.reduce(next);
            int sub = rank_of_reduced(next);
            if (sub < best) best = sub;
            if (best == -1) break;
        }
        int result = best + 1;
        exact_memo_.emplace(r, result);
        return result;
    }

    bool exists_failing(const std::vector<long long>& r, int budget) {
        auto it = nofail_.find(r);
        if (it != nofail_.end() && it->second >= budget) return false;
        for (int w : witnesses_) {
            std::vector<long long> next = r;
            --next[static_cast<size_t>(w)];
            red_.reduce(next);
            if (next[static_cast<size_t>(sink_)] < 0) return true;
            if (budget > 1 && exists_failing(next, budget - 1)) return true;
        }
        auto [slot, fresh] = nofail_.emplace(r, budget);
        if (!fresh && slot->second < budget) slot->second = budget;
        return false;
    }

    bool lower_rec(const std::vector<long long>& r, int remaining, size_t start, std::vector<int>& picks,
                   std::vector<std::pair<std::vector<int>, std::vector<long long>>>* out) {
        if (remaining == 0) {
            if (r[static_cast<size_t>(sink_)] < 0) return false;
            if (out) out->push_back({picks, r});
            return true;
        }
        for (size_t i = start; i < witnesses_.size(); ++i) {
            std::vector<long long> next = r;
            --next[static_cast<size_t>(witnesses_[i])];
            red_.reduce(next);
            picks.push_back(witnesses_[i]);
            bool ok = lower_rec(next, remaining - 1, i, picks, out);
            picks.pop_back();
            if (!ok) return false;
        }
        return true;
    }

    bool blocker_rec(const std::vector<long long>& r, int remaining, size_t start, std::vector<int>* picks,
                     std::vector<long long>* reduced_out) {
        if (remaining == 0) {
            if (r[static_cast<size_t>(sink_)] < 0) {
                *reduced_out = r;
                return true;
            }
            return false;
        }
        for (size_t i = start; i < witnesses_.size(); ++i) {
            std::vector<long long> next = r;
            --next[static_cast<size_t>(witnesses_[i])];
            red_.reduce(next);
            picks->push_back(witnesses_[i]);
            if (blocker_rec(next, remaining - 1, i, picks, reduced_out)) return true;
            picks->pop_back();
        }
        return false;
    }

    Reducer red_;
    VertexId sink_;
    std::vector<int> witnesses_;
    std::unordered_map<std::vector<long long>, int, VecHash> exact_memo_;
    std::unordered_map<std::vector<long long>, int, VecHash> nofail_;
};

struct PreparedBridge {
    UnitBridge bridge;
    VertexId sink;
    std::vector<int> witnesses;
    std::vector<long long> dense;
};

PreparedBridge prepare(const Model& m, const Divisor& d, bool restrict_witnesses, long long max_subdiv) {
    std::vector<PointRef> pts = d.support();
    std::vector<PointRef> witness_pts;
    if (restrict_witnesses) {
        RdsResult rds = rank_determining_set(m);
        if (rds.tree_with_loops) fail(Errc::InvalidSpec, "rds witnesses unavailable on tree-with-loops input");
        witness_pts = rds.points;
        for (const PointRef& p : d.support()) witness_pts.push_back(p);
        for (const PointRef& p : rds.points) pts.push_back(p);
    }
    PreparedBridge pb{bridge_to_unit(m, pts, /*loopless=*/true, max_subdiv), 0, {}, {}};
    pb.sink = pb.bridge.total.vertex_map[0];
    if (restrict_witnesses) {
        std::set<int> ws;
        for (const PointRef& p : witness_pts) ws.insert(pb.bridge.total.push(p).vertex);
        pb.witnesses.assign(ws.begin(), ws.end());
    } else {
        pb.witnesses.resize(static_cast<size_t>(pb.bridge.model.vertex_count()));
        std::iota(pb.witnesses.begin(), pb.witnesses.end(), 0);
    }
    pb.dense.assign(static_cast<size_t>(pb.bridge.model.vertex_count()), 0);
    for (const auto& [p, c] : d.entries()) pb.dense[static_cast<size_t>(pb.bridge.total.push(p).vertex)] += c;
    return pb;
}

Divisor pull_dense(const PreparedBridge& pb, const std::vector<long long>& dense) {
    Divisor out;
    for (size_t v = 0; v < dense.size(); ++v)
        if (dense[v] != 0) out.add(pb.bridge.total.pull(PointRef::at_vertex(static_cast<VertexId>(v))), dense[v]);
    return out;
}

int run_engine(const Model& m, const Divisor& d, bool restrict_witnesses, const RankOptions& opts,
               RankCertificate* cert) {
    PreparedBridge pb = prepare(m, d, restrict_witnesses, opts.max_subdiv);
    RankEngine engine(pb.bridge.model, pb.sink, pb.witnesses);
    int r = engine.exact_rank(pb.dense);
    if (cert) {
        cert->claimed_rank = r;
        cert->sink = pb.bridge.total.pull(PointRef::at_vertex(pb.sink));
        if (r >= 0) {
            std::vector<std::pair<std::vector<int>, std::vector<long long>>> table;
            if (!engine.lower_table(pb.dense, r, &table)) fail(Errc::InvalidSpec, "rank certificate inconsistency");
            for (auto& [picks, reduced] : table) {
                RankCertificate::LowerEntry entry;
                for (int w : picks) entry.witness.add(pb.bridge.total.pull(PointRef::at_vertex(w)), 1);
                entry.representative = pull_dense(pb, reduced);
                cert->lower.push_back(std::move(entry));
            }
        }
        long long deg = d.degree();
        if (r < deg) {
            std::vector<int> picks;
            std::vector<long long> reduced;
            if (!engine.find_blocker(pb.dense, r + 1, &picks, &reduced))
                fail(Errc::InvalidSpec, "missing rank blocker");
            RankCertificate::UpperEntry up;
            for (int w : picks) up.blocker.add(pb.bridge.total.pull(PointRef::at_vertex(w)), 1);
            up.reduced = pull_dense(pb, reduced);
            cert->upper = std::move(up);
        }
    }
    return r;
}

}  // namespace

EffectiveRepResult has_effective_rep(const Model& m, const Divisor& d, VertexId sink) {
    ReductionResult rr = q_reduce(m, d, sink);
    EffectiveRepResult out;
    out.exists = rr.reduced.is_effective();
    out.reduced = std::move(rr.reduced);
    out.script = std::move(rr.script);
    return out;
}

RankResult rank_finite(const Model& m, const Divisor& d, const RankOptions& opts) {
    if (!d.vertex_supported()) fail(Errc::InvalidPoint, "rank_finite needs a vertex-supported divisor");
    // combinatorial rank: lengths play no role, so compute on the unit-length
    // realization (HKN: ranks on G and on its metric graph agree)
    std::vector<Edge> unit_edges = m.edges();
    for (Edge& e : unit_edges) e.length = Rational(1);
    Model unit = Model::build(m.vertex_count(), std::move(unit_edges));
    RankOptions metric_opts = opts;
    metric_opts.method = RankMethod::Subdivide;
    RankResult res = rank_metric(unit, d, metric_opts);
    res.method = "finite";
    return res;
}

RankResult rank_metric(const Model& m, const Divisor& d, const RankOptions& opts) {
    long long deg = d.degree();
    int g = m.genus();

    RankResult res;
    if (deg < 0) {
        res.rank = -1;
        res.method = "negative_degree";
        if (opts.want_certificate) {
            RankCertificate cert;
            cert.claimed_rank = -1;
            cert.method = res.method;
            cert.sink = PointRef::at_vertex(0);
            res.certificate = std::move(cert);
        }
        return res;
    }
    if (opts.use_fast_path && deg > 2 * g - 2) {
        res.rank = static_cast<int>(deg) - g;
        res.method = "riemann_roch_fastpath";
        if (opts.want_certificate) {
            RankCertificate cert;
            cert.claimed_rank = res.rank;
            cert.method = res.method;
            cert.sink = PointRef::at_vertex(0);
            Divisor kd = canonical_divisor(m) - d;
            cert.fastpath_kd_reduced = p_reduce_metric(m, kd, PointRef::at_vertex(0), opts.max_subdiv);
            res.certificate = std::move(cert);
        }
        return res;
    }

    bool rds_applicable = g >= 1 && !rank_determining_set(m).tree_with_loops;
    RankMethod method = opts.method;
    if (method != RankMethod::Subdivide && !rds_applicable) method = RankMethod::Subdivide;

    RankCertificate cert;
    RankCertificate* cert_ptr = opts.want_certificate ? &cert : nullptr;
    switch (method) {
        case RankMethod::Subdivide:
            res.rank = run_engine(m, d, false, opts, cert_ptr);
            res.method = "subdivide";
            break;
        case RankMethod::Rds:
            res.rank = run_engine(m, d, true, opts, cert_ptr);
            res.method = "rds";
            break;
        case RankMethod::Both: {
            int r_sub = run_engine(m, d, false, opts, nullptr);
            res.rank = run_engine(m, d, true, opts, cert_ptr);
            if (r_sub != res.rank)
                fail(Errc::InvalidSpec, "rank methods disagree: subdivide=" + std::to_string(r_sub) +
                                            " rds=" + std::to_string(res.rank));
            res.method = "both";
            break;
        }
    }
    if (cert_ptr) {
        cert.method = res.method == "both" ? "rds" : res.method;
        res.certificate = std::move(cert);
    }
    return res;
}

bool rank_at_most(const Model& m, const Divisor& d, int cap, const RankOptions& opts) {
    long long deg = d.degree();
    int g = m.genus();
    if (deg < 0) return true;
    if (opts.use_fast_path && deg > 2 * g - 2) return static_cast<int>(deg) - g <= cap;
    bool rds_applicable = g >= 1 && !rank_determining_set(m).tree_with_loops;
    bool restrict = opts.method != RankMethod::Subdivide && rds_applicable;
    PreparedBridge pb = prepare(m, d, restrict, opts.max_subdiv);
    RankEngine engine(pb.bridge.model, pb.sink, pb.witnesses);
    return engine.rank_at_most(pb.dense, cap);
}

RiemannRochReport riemann_roch_report(const Model& m, const Divisor& d, const RankOptions& opts) {
    RiemannRochReport rep;
    rep.degree = d.degree();
    rep.genus = m.genus();
    Divisor kd = canonical_divisor(m) - d;
    RankResult rd = rank_metric(m, d, opts);
    RankResult rkd = rank_metric(m, kd, opts);
    rep.rank_d = rd.rank;
    rep.rank_kd = rkd.rank;
    rep.identity_holds = (rep.rank_d - rep.rank_kd == static_cast<int>(rep.degree) - rep.genus + 1);
    rep.cert_d = std::move(rd.certificate);
    rep.cert_kd = std::move(rkd.certificate);
    return rep;
}

CliffordReport clifford_check(const Model& m, const Divisor& d, const RankOptions& opts) {
    CliffordReport rep;
    rep.degree = d.degree();
    Divisor kd = canonical_divisor(m) - d;
    rep.rank = rank_metric(m, d, opts).rank;
    rep.rank_kd = rank_metric(m, kd, opts).rank;
    rep.special = rep.rank_kd >= 0;
    rep.applicable = rep.special && d.is_effective();
    rep.bound_holds = !rep.applicable || rep.degree >= 2 * static_cast<long long>(rep.rank);
    return rep;
}

bool verify_rank_certificate(const Model& m, const Divisor& d, const RankCertificate& cert, std::string* why) {
    auto reject = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    long long deg = d.degree();
    int g = m.genus();
    int r = cert.claimed_rank;

    if (cert.method == "negative_degree") return deg < 0 && r == -1 ? true : reject("degree is not negative");
    if (cert.method == "riemann_roch_fastpath") {
        if (deg <= 2 * g - 2) return reject("fast path needs deg > 2g-2");
        if (r != static_cast<int>(deg) - g) return reject("fast-path rank mismatch");
        if (!cert.fastpath_kd_reduced) return reject("fast-path certificate lacks the K-D reduction");
        Divisor kd = canonical_divisor(m) - d;
        Divisor recomputed = p_reduce_metric(m, kd, cert.sink);
        if (recomputed != *cert.fastpath_kd_reduced) return reject("K-D reduction does not replay");
        if (recomputed.is_effective()) return reject("K-D is effective; fast path invalid");
        return true;
    }

    if (r == -1) {
        Divisor reduced = p_reduce_metric(m, d, cert.sink);
        if (reduced.is_effective()) return reject("divisor has an effective representative");
        return true;
    }

    // lower bound: the table must cover the full witness enumeration
    std::vector<PointRef> witness_pts;
    if (cert.method == "rds") {
        RdsResult rds = rank_determining_set(m);
        if (rds.tree_with_loops) return reject("rds certificate on tree-with-loops model");
        std::set<PointRef> ws(rds.points.begin(), rds.points.end());
        for (const PointRef& p : d.support()) ws.insert(p);
        witness_pts.assign(ws.begin(), ws.end());
    } else if (cert.method == "subdivide" || cert.method == "finite") {
        PreparedBridge pb = prepare(m, d, false, kDefaultMaxSubdiv);
        for (VertexId v = 0; v < pb.bridge.model.vertex_count(); ++v)
            witness_pts.push_back(pb.bridge.total.pull(PointRef::at_vertex(v)));
    } else {
        return reject("unknown certificate method " + cert.method);
    }

    std::vector<Divisor> expected;
    std::vector<size_t> idx(static_cast<size_t>(r), 0);
    // enumerate nondecreasing index multisets of size r
    std::function<void(size_t, size_t, Divisor)> gen = [&](size_t depth, size_t start, Divisor acc) {
        if (depth == static_cast<size_t>(r)) {
            expected.push_back(acc);
            return;
        }
        for (size_t i = start; i < witness_pts.size(); ++i) {
            Divisor next = acc;
            next.add(witness_pts[i], 1);
            gen(depth + 1, i, next);
        }
    };
    gen(0, 0, Divisor{});
    if (expected.size() != cert.lower.size())
        return reject("lower table has " + std::to_string(cert.lower.size()) + " entries, expected " +
                      std::to_string(expected.size()));
    for (size_t i = 0; i < expected.size(); ++i) {
        const auto& entry = cert.lower[i];
        if (entry.witness != expected[i]) return reject("lower table order mismatch at entry " + std::to_string(i));
        if (!entry.representative.is_effective()) return reject("non-effective representative in lower table");
        if (entry.representative.degree() != deg - r) return reject("representative degree mismatch");
        if (!are_equivalent(m, d - entry.witness, entry.representative))
            return reject("representative not equivalent to D - E");
    }

    if (r < deg) {
        if (!cert.upper) return reject("missing upper blocker");
        if (cert.upper->blocker.degree() != r + 1 || !cert.upper->blocker.is_effective())
            return reject("upper blocker malformed");
        Divisor reduced = p_reduce_metric(m, d - cert.upper->blocker, cert.sink);
        if (reduced != cert.upper->reduced) return reject("upper reduction does not replay");
        if (reduced.is_effective()) return reject("upper blocker admits an effective representative");
    }
    return true;
}

bool BulkRankContext::grid_aligned(const Divisor& d) const {
    for (const auto& [p, c] : d.entries())
        if (!total.push(p).is_vertex()) return false;
    return true;
}

BulkRankContext make_bulk_rank_context(const Model& m, long long max_subdiv) {
    RdsResult rds = rank_determining_set(m);
    if (rds.tree_with_loops) fail(Errc::InvalidSpec, "bulk rank context needs an applicable rank-determining set");
    UnitBridge ub = bridge_to_unit(m, rds.points, /*loopless=*/true, max_subdiv);
    BulkRankContext ctx{std::move(ub.model), std::move(ub.total), 0, {}};
    ctx.sink = ctx.total.vertex_map[0];
    std::set<int> ws;
    for (const PointRef& p : rds.points) ws.insert(ctx.total.push(p).vertex);
    ctx.rds_witnesses.assign(ws.begin(), ws.end());
    return ctx;
}

struct BulkRankWorker::Impl {
    explicit Impl(const BulkRankContext& ctx) : engine(ctx.bridge, ctx.sink, ctx.rds_witnesses) {}
    RankEngine engine;
};

BulkRankWorker::BulkRankWorker(const BulkRankContext& ctx) : ctx_(ctx), impl_(std::make_unique<Impl>(ctx)) {}
BulkRankWorker::~BulkRankWorker() = default;

namespace {

std::vector<long long> bulk_dense(const BulkRankContext& ctx, const Divisor& d, std::vector<int>* witnesses) {
    std::set<int> ws(ctx.rds_witnesses.begin(), ctx.rds_witnesses.end());
    std::vector<long long> dense(static_cast<size_t>(ctx.bridge.vertex_count()), 0);
    for (const auto& [p, c] : d.entries()) {
        PointRef img = ctx.total.push(p);
        if (!img.is_vertex()) fail(Errc::InvalidPoint, "divisor point off the context grid: " + p.str());
        dense[static_cast<size_t>(img.vertex)] += c;
        ws.insert(img.vertex);
    }
    witnesses->assign(ws.begin(), ws.end());
    return dense;
}

}  // namespace

bool BulkRankWorker::rank_at_most(const Divisor& d, int cap) {
    long long deg = d.degree();
    int g = ctx_.bridge.genus();
    if (deg < 0) return true;
    if (deg > 2 * g - 2) return static_cast<int>(deg) - g <= cap;
    std::vector<int> witnesses;
    std::vector<long long> dense = bulk_dense(ctx_, d, &witnesses);
    impl_->engine.set_witnesses(std::move(witnesses));
    return impl_->engine.rank_at_most(std::move(dense), cap);
}

int BulkRankWorker::exact_rank(const Divisor& d) {
    long long deg = d.degree();
    int g = ctx_.bridge.genus();
    if (deg < 0) return -1;
    if (deg > 2 * g - 2) return static_cast<int>(deg) - g;
    std::vector<int> witnesses;
    std::vector<long long> dense = bulk_dense(ctx_, d, &witnesses);
    impl_->engine.set_witnesses(std::move(witnesses));
    return impl_->engine.exact_rank(std::move(dense));
}

}  // namespace tropdiv
