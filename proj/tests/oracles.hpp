#pragma once

// Test-only brute-force oracles, independent of the library's reduction
// strategy: reducedness straight from the subset definition, representatives
// by exhaustive firing-script enumeration.

#include <vector>

#include "tropdiv/divisor.hpp"
#include "tropdiv/model.hpp"

namespace tropdiv::testing {

// every nonempty vertex subset avoiding q must contain a vertex with fewer
// chips than edges leaving the subset
inline bool oracle_is_q_reduced(const Model& m, const std::vector<long long>& dense, VertexId q) {
    int n = m.vertex_count();
    for (VertexId v = 0; v < n; ++v)
        if (v != q && dense[static_cast<size_t>(v)] < 0) return false;
    std::vector<VertexId> others;
    for (VertexId v = 0; v < n; ++v)
        if (v != q) others.push_back(v);
    std::vector<char> in_set(static_cast<size_t>(n), 0);
    for (unsigned long mask = 1; mask < (1ul << others.size()); ++mask) {
        std::fill(in_set.begin(), in_set.end(), 0);
        for (size_t i = 0; i < others.size(); ++i)
            if (mask & (1ul << i)) in_set[static_cast<size_t>(others[i])] = 1;
        bool has_unsaturated = false;
        for (size_t i = 0; i < others.size() && !has_unsaturated; ++i) {
            if (!(mask & (1ul << i))) continue;
            VertexId v = others[i];
            int outdeg = 0;
            for (auto [e, end] : m.incident(v)) {
                VertexId w = end == 0 ? m.edge(e).v : m.edge(e).u;
                if (!in_set[static_cast<size_t>(w)]) ++outdeg;
            }
            if (dense[static_cast<size_t>(v)] < outdeg) has_unsaturated = true;
        }
        if (!has_unsaturated) return false;
    }
    return true;
}

inline std::vector<long long> oracle_fire(const Model& m, const std::vector<long long>& dense,
                                          const std::vector<long long>& script) {
    std::vector<long long> out = dense;
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        if (m.is_loop(e)) continue;
        long long diff = script[static_cast<size_t>(m.edge(e).u)] - script[static_cast<size_t>(m.edge(e).v)];
        out[static_cast<size_t>(m.edge(e).u)] -= diff;
        out[static_cast<size_t>(m.edge(e).v)] += diff;
    }
    return out;
}

// all q-reduced representatives reachable with firing scripts in [-bound, bound]
inline std::vector<std::vector<long long>> oracle_reduced_in_box(const Model& m, const std::vector<long long>& dense,
                                                                 VertexId q, long long bound) {
    int n = m.vertex_count();
    std::vector<VertexId> others;
    for (VertexId v = 0; v < n; ++v)
        if (v != q) others.push_back(v);
    std::vector<std::vector<long long>> found;
    std::vector<long long> script(static_cast<size_t>(n), 0);
    long long width = 2 * bound + 1;
    long long total = 1;
    for (size_t i = 0; i < others.size(); ++i) total *= width;
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (size_t i = 0; i < others.size(); ++i) {
            script[static_cast<size_t>(others[i])] = (c % width) - bound;
            c /= width;
        }
        std::vector<long long> out = oracle_fire(m, dense, script);
        if (oracle_is_q_reduced(m, out, q)) {
            if (std::find(found.begin(), found.end(), out) == found.end()) found.push_back(out);
        }
    }
    return found;
}

}  // namespace tropdiv::testing
