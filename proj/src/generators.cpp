#include "tropdiv/generators.hpp"

#include <algorithm>
#include <numeric>

namespace tropdiv {

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

}  // namespace

HyperellipticModel gen_hyperelliptic(const Model& tree, const std::vector<bool>& doubled, std::uint64_t seed) {
    if (tree.genus() != 0) fail(Errc::InvalidSpec, "gluing base must be a tree");
    if (doubled.size() != static_cast<size_t>(tree.edge_count()))
        fail(Errc::InvalidSpec, "gluing spec size does not match the tree");
    if (tree.edge_count() == 0) fail(Errc::InvalidSpec, "tree needs at least one edge");

    SplitMix64 rng{seed * 0x9e3779b97f4a7c15ull + 1};
    // quarter-integer lengths, one per tree edge (copies share it)
    std::vector<Rational> lens;
    for (EdgeId e = 0; e < tree.edge_count(); ++e)
        lens.push_back(Rational(3 + static_cast<long long>(rng.below(10)), 4));

    // a tree vertex is merged when it touches a fixed edge or is a leaf
    std::vector<char> merged(static_cast<size_t>(tree.vertex_count()), 0);
    for (EdgeId e = 0; e < tree.edge_count(); ++e)
        if (!doubled[static_cast<size_t>(e)]) {
            merged[static_cast<size_t>(tree.edge(e).u)] = 1;
            merged[static_cast<size_t>(tree.edge(e).v)] = 1;
        }
    for (VertexId v = 0; v < tree.vertex_count(); ++v)
        if (tree.valence(v) == 1) merged[static_cast<size_t>(v)] = 1;

    // vertex ids: merged copies first, then plus/minus sheets
    std::vector<VertexId> id_merged(static_cast<size_t>(tree.vertex_count()), -1);
    std::vector<VertexId> id_plus(static_cast<size_t>(tree.vertex_count()), -1);
    std::vector<VertexId> id_minus(static_cast<size_t>(tree.vertex_count()), -1);
    int nv = 0;
    for (VertexId v = 0; v < tree.vertex_count(); ++v)
        if (merged[static_cast<size_t>(v)]) id_merged[static_cast<size_t>(v)] = nv++;
    for (VertexId v = 0; v < tree.vertex_count(); ++v)
        if (!merged[static_cast<size_t>(v)]) {
            id_plus[static_cast<size_t>(v)] = nv++;
            id_minus[static_cast<size_t>(v)] = nv++;
        }
    auto sheet = [&](VertexId v, int s) {
        if (merged[static_cast<size_t>(v)]) return id_merged[static_cast<size_t>(v)];
        return s == 0 ? id_plus[static_cast<size_t>(v)] : id_minus[static_cast<size_t>(v)];
    };

    std::vector<Edge> edges;
    std::vector<Involution::EdgeImage> emap;
    std::vector<std::pair<EdgeId, EdgeId>> swaps;
    for (EdgeId e = 0; e < tree.edge_count(); ++e) {
        const Edge& ed = tree.edge(e);
        if (doubled[static_cast<size_t>(e)]) {
            EdgeId plus = static_cast<EdgeId>(edges.size());
            edges.push_back({sheet(ed.u, 0), sheet(ed.v, 0), lens[static_cast<size_t>(e)]});
            EdgeId minus = static_cast<EdgeId>(edges.size());
            edges.push_back({sheet(ed.u, 1), sheet(ed.v, 1), lens[static_cast<size_t>(e)]});
            swaps.push_back({plus, minus});
        } else {
            edges.push_back({id_merged[static_cast<size_t>(ed.u)], id_merged[static_cast<size_t>(ed.v)],
                             lens[static_cast<size_t>(e)]});
        }
    }

    HyperellipticModel out{Model::build(nv, edges), {}, 0};
    out.iota.vertex_map.resize(static_cast<size_t>(nv));
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
        if (merged[static_cast<size_t>(v)]) {
            out.iota.vertex_map[static_cast<size_t>(id_merged[static_cast<size_t>(v)])] =
                id_merged[static_cast<size_t>(v)];
        } else {
            out.iota.vertex_map[static_cast<size_t>(id_plus[static_cast<size_t>(v)])] =
                id_minus[static_cast<size_t>(v)];
            out.iota.vertex_map[static_cast<size_t>(id_minus[static_cast<size_t>(v)])] =
                id_plus[static_cast<size_t>(v)];
        }
    }
    out.iota.edge_map.assign(edges.size(), {});
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges.size()); ++e) out.iota.edge_map[static_cast<size_t>(e)] = {e, false};
    for (auto [a, b] : swaps) {
        out.iota.edge_map[static_cast<size_t>(a)] = {b, false};
        out.iota.edge_map[static_cast<size_t>(b)] = {a, false};
    }
    out.requested_genus = out.model.genus();
    return out;
}

HyperellipticModel gen_hyperelliptic_genus(int genus, std::uint64_t seed) {
    if (genus < 1) fail(Errc::InvalidSpec, "hyperelliptic generator needs genus >= 1");
    SplitMix64 rng{seed ^ 0xa0761d6478bd642full};
    bool star = rng.below(2) == 0;
    std::vector<Edge> tree_edges;
    std::vector<bool> doubled;
    if (star) {
        // star with genus+1 doubled legs: the center splits, legs merge at leaves
        int legs = genus + 1;
        for (int i = 0; i < legs; ++i) {
            tree_edges.push_back({0, i + 1, Rational(1)});
            doubled.push_back(true);
        }
        Model tree = Model::build(legs + 1, tree_edges);
        HyperellipticModel out = gen_hyperelliptic(tree, doubled, rng.next());
        out.requested_genus = genus;
        if (out.model.genus() != genus) fail(Errc::InvalidSpec, "star construction genus mismatch");
        return out;
    }
    // caterpillar: a fixed spine with `genus` doubled legs hanging off it
    int spine = 1 + static_cast<int>(rng.below(3));
    int nv = spine + 1;
    for (int i = 0; i < spine; ++i) {
        tree_edges.push_back({i, i + 1, Rational(1)});
        doubled.push_back(false);
    }
    for (int i = 0; i < genus; ++i) {
        int attach = static_cast<int>(rng.below(static_cast<std::uint64_t>(spine + 1)));
        tree_edges.push_back({attach, nv++, Rational(1)});
        doubled.push_back(true);
    }
    Model tree = Model::build(nv, tree_edges);
    HyperellipticModel out = gen_hyperelliptic(tree, doubled, rng.next());
    out.requested_genus = genus;
    if (out.model.genus() != genus) fail(Errc::InvalidSpec, "caterpillar construction genus mismatch");
    return out;
}

Model gen_nonhyperelliptic(int genus, std::uint64_t seed, int max_retries) {
    if (genus < 3)
        fail(Errc::RetriesExhausted,
             genus == 2 ? "every genus-2 metric graph is hyperelliptic; no sample exists"
                        : "generator needs genus >= 3");
    int n = 2 * genus - 2;   // cubic graph
    int ne = 3 * genus - 3;  // = n cycle edges + n/2 matching chords

    SplitMix64 rng{seed * 0x8bb84b93962eacc9ull + 7};
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        // Hamiltonian cycle plus a random perfect matching keeps everything
        // connected and 3-regular
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, Rational(1)});
        std::vector<int> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
        for (int i = 0; i < n; i += 2) edges.push_back({order[static_cast<size_t>(i)], order[static_cast<size_t>(i + 1)], Rational(1)});
        if (static_cast<int>(edges.size()) != ne) fail(Errc::InvalidSpec, "cubic construction miscounted");

        // distinct lengths on the eighths grid break accidental symmetries
        // while keeping the 1/16 sampling grid and midpoints exactly cuttable
        std::vector<long long> pool(static_cast<size_t>(ne));
        std::iota(pool.begin(), pool.end(), 0);
        for (size_t i = pool.size() - 1; i > 0; --i) std::swap(pool[i], pool[rng.below(i + 1)]);
        for (int e = 0; e < ne; ++e) edges[static_cast<size_t>(e)].length = Rational(5 + pool[static_cast<size_t>(e)], 8);

        Model candidate = Model::build(n, edges);
        if (candidate.genus() != genus) continue;

        InvolutionSearch search = find_involutions(candidate);
        bool has_tree_quotient = false;
        for (const Involution& iota : search.involutions)
            if (!iota.is_identity() && quotient_is_tree(search.base, iota)) has_tree_quotient = true;
        if (!has_tree_quotient) return candidate;
    }
    fail(Errc::RetriesExhausted, "no non-hyperelliptic sample found");
}

}  // namespace tropdiv
