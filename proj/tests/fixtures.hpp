#pragma once

#include <vector>

#include "tropdiv/model.hpp"

namespace tropdiv::testing {

inline Model k4() {
    std::vector<Edge> es;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) es.push_back({i, j, Rational(1)});
    return Model::build(4, es);
}

// two vertices joined by k parallel edges
inline Model banana(int k, std::vector<Rational> lens = {}) {
    std::vector<Edge> es;
    for (int i = 0; i < k; ++i)
        es.push_back({0, 1, lens.empty() ? Rational(1) : lens[static_cast<size_t>(i)]});
    return Model::build(2, es);
}

inline Model circle(Rational len = Rational(1)) { return Model::build(1, {{0, 0, len}}); }

inline Model segment(Rational len = Rational(1)) { return Model::build(2, {{0, 1, len}}); }

inline Model path(int edges) {
    std::vector<Edge> es;
    for (int i = 0; i < edges; ++i) es.push_back({i, i + 1, Rational(1)});
    return Model::build(edges + 1, es);
}

// loop at each end of a bridge
inline Model dumbbell() {
    return Model::build(2, {{0, 0, Rational(1)}, {0, 1, Rational(1)}, {1, 1, Rational(1)}});
}

}  // namespace tropdiv::testing
