#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tropdiv/jacobian.hpp"
#include "tropdiv/reduction.hpp"

namespace tropdiv {

enum class RankMethod { Subdivide, Rds, Both };

// Replayable evidence for a rank claim.  Divisors are in the coordinates of
// the model the claim was made on.
struct RankCertificate {
    int claimed_rank = -1;
    std::string method;
    PointRef sink;  // reduction base used by the upper bound

    struct LowerEntry {
        Divisor witness;         // effective E of degree claimed_rank
        Divisor representative;  // effective divisor equivalent to D - E
    };
    std::vector<LowerEntry> lower;  // one entry per witness multiset

    struct UpperEntry {
        Divisor blocker;  // effective F of degree claimed_rank+1 with |D-F| empty
        Divisor reduced;  // the sink-reduced representative of D - F (negative at sink)
    };
    std::optional<UpperEntry> upper;

    // Riemann-Roch fast path (deg > 2g-2): K - D has no effective representative.
    std::optional<Divisor> fastpath_kd_reduced;
};

struct RankResult {
    int rank = -1;
    std::string method;
    std::optional<RankCertificate> certificate;
};

struct RankOptions {
    RankMethod method = RankMethod::Both;
    bool want_certificate = false;
    bool use_fast_path = true;
    long long max_subdiv = kDefaultMaxSubdiv;
};

struct EffectiveRepResult {
    bool exists = false;
    Divisor reduced;
    FiringScript script;
};

// |D| nonempty iff the sink-reduced form is effective; vertex support required.
EffectiveRepResult has_effective_rep(const Model& m, const Divisor& d, VertexId sink = 0);

// Baker-Norine rank of a vertex-supported divisor on the finite model.
// Loops are midpoint-split internally (finite-graph divisor theory wants
// loopless multigraphs; the split changes nothing metrically).
RankResult rank_finite(const Model& m, const Divisor& d, const RankOptions& opts = {});

// Rank on the metric graph; route (a) refines + unit-subdivides and runs the
// finite rank with all vertices as witnesses, route (b) restricts witnesses
// to the g+1 rank-determining points plus the support.
RankResult rank_metric(const Model& m, const Divisor& d, const RankOptions& opts = {});

// min(rank(D), cap+1) comparison helper for the verification harness: decides
// rank(D) <= cap without computing the exact rank.
bool rank_at_most(const Model& m, const Divisor& d, int cap, const RankOptions& opts = {});

struct RiemannRochReport {
    long long degree = 0;
    int genus = 0;
    int rank_d = -1;
    int rank_kd = -1;
    bool identity_holds = false;
    std::optional<RankCertificate> cert_d, cert_kd;
};
RiemannRochReport riemann_roch_report(const Model& m, const Divisor& d, const RankOptions& opts = {});

struct CliffordReport {
    long long degree = 0;
    int rank = -1;
    int rank_kd = -1;
    bool special = false;
    bool applicable = false;   // special and effective
    bool bound_holds = false;  // deg >= 2*rank whenever applicable
};
CliffordReport clifford_check(const Model& m, const Divisor& d, const RankOptions& opts = {});

// Replay a certificate against the divisor it claims to describe.
bool verify_rank_certificate(const Model& m, const Divisor& d, const RankCertificate& cert,
                             std::string* why = nullptr);

// Precomputed unit bridge for bulk rank queries on one model (the harness
// asks about thousands of divisors).  Requires an applicable
// rank-determining set.  Divisors must land on bridge vertices; check with
// grid_aligned first and fall back to rank_metric otherwise.
struct BulkRankContext {
    Model bridge;
    Refinement total;
    VertexId sink = 0;
    std::vector<int> rds_witnesses;

    bool grid_aligned(const Divisor& d) const;
};
BulkRankContext make_bulk_rank_context(const Model& m, long long max_subdiv = kDefaultMaxSubdiv);

// Per-thread query engine over a shared context.
class BulkRankWorker {
public:
    explicit BulkRankWorker(const BulkRankContext& ctx);
    ~BulkRankWorker();
    BulkRankWorker(const BulkRankWorker&) = delete;
    BulkRankWorker& operator=(const BulkRankWorker&) = delete;

    bool rank_at_most(const Divisor& d, int cap);
    int exact_rank(const Divisor& d);

private:
    struct Impl;
    const BulkRankContext& ctx_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tropdiv
