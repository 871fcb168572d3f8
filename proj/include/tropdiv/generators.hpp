#pragma once

#include <cstdint>
#include <vector>

#include "tropdiv/clifford.hpp"
#include "tropdiv/model.hpp"

namespace tropdiv {

// Double cover of a tree: two copies, fixed edges merged pointwise, sheets
// also merged over every leaf.  The swap of the copies is a built-in
// involution with quotient the tree itself.
struct HyperellipticModel {
    Model model;
    Involution iota;       // on `model` (loopless by construction)
    int requested_genus = 0;
};

// `doubled[e]` selects two swapped copies of tree edge e; false keeps a
// single pointwise-fixed copy.  Lengths are drawn from the seeded generator.
HyperellipticModel gen_hyperelliptic(const Model& tree, const std::vector<bool>& doubled, std::uint64_t seed);

// Convenience wrapper that picks a caterpillar or star shape of the
// requested genus.
HyperellipticModel gen_hyperelliptic_genus(int genus, std::uint64_t seed);

// Random 3-regular multigraph of the requested genus with distinct rational
// lengths, resampled until no involution has a tree quotient.  Genus 2 always
// fails (every genus-2 graph is hyperelliptic).
Model gen_nonhyperelliptic(int genus, std::uint64_t seed, int max_retries = 64);

}  // namespace tropdiv
