#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tropdiv/rank.hpp"

namespace tropdiv {

// Length-preserving automorphism of order <= 2 of a loopless model: a vertex
// permutation plus an edge permutation with orientation flags (an edge mapped
// to itself reversed folds at its midpoint in the quotient).
struct Involution {
    std::vector<VertexId> vertex_map;
    struct EdgeImage {
        EdgeId image = -1;
        bool reversed = false;
    };
    std::vector<EdgeImage> edge_map;

    bool is_identity() const {
        for (size_t v = 0; v < vertex_map.size(); ++v)
            if (vertex_map[v] != static_cast<VertexId>(v)) return false;
        for (size_t e = 0; e < edge_map.size(); ++e)
            if (edge_map[e].image != static_cast<EdgeId>(e) || edge_map[e].reversed) return false;
        return true;
    }
};

// All order-<=2 automorphisms of the canonical loopless refinement of m
// (loops midpoint-split), in deterministic order.  Includes the identity.
struct InvolutionSearch {
    Model base;
    Refinement to_base;
    std::vector<Involution> involutions;
};
InvolutionSearch find_involutions(const Model& m);

// Quotient multigraph of vertex and edge orbits has genus zero.
bool quotient_is_tree(const Model& base, const Involution& iota);

struct G12Certificate {
    Divisor divisor;            // degree 2, on the original model
    RankCertificate rank_cert;  // claims rank exactly 1
    std::optional<Involution> involution;  // on the split-loops base, when found that way
};

// Degree-2 rank-1 construction when every chord of the spanning tree is a
// loop: D = twice the attachment point of the first loop.
G12Certificate tree_with_loops_g12(const Model& m);

// Certificate-producing search: tree-with-loops construction first, then
// involutions with tree quotient, candidates rank-verified before returning.
std::optional<G12Certificate> find_g12(const Model& m);

// Replays a certificate: degree 2, rank certificate valid, rank exactly 1.
bool verify_g12_certificate(const Model& m, const G12Certificate& cert, std::string* why = nullptr);

struct ComposeResult {
    Divisor divisor;
    int rank = -1;
};
// r copies of the g12 divisor must have rank exactly r (throws RankMismatch).
ComposeResult compose_rg12(const Model& m, const G12Certificate& cert, int r);

struct HarnessReport {
    std::string campaign;  // "forward" or "contrapositive"
    int genus = 0;
    long long trials = 0;
    std::uint64_t seed = 0;
    std::optional<G12Certificate> g12;

    struct ForwardCheck {
        int r = 0;
        int expected_rank = 0;
        int rank = -1;
        bool pass = false;
    };
    std::vector<ForwardCheck> forward;

    struct Counterexample {
        int r = 0;
        long long trial = 0;
        Divisor divisor;
        int rank = -1;
    };
    std::vector<Counterexample> counterexamples;  // sorted by (r, trial)

    long long samples_checked = 0;
    bool pass = false;
    double elapsed_ms = 0.0;  // excluded from determinism comparisons
};

// Forward campaign when a g12 exists (r * g12 has rank exactly r for
// 2 <= r <= g-1); contrapositive sampling campaign otherwise (every random
// effective divisor of degree 2r has rank <= r-1 for 2 <= r <= g-2).
HarnessReport clifford_theorem_harness(const Model& m, long long trials, std::uint64_t seed,
                                       int threads = 0);

}  // namespace tropdiv
