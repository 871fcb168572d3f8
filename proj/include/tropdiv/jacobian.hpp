#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tropdiv/divisor.hpp"
#include "tropdiv/model.hpp"

namespace tropdiv {

using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// Fundamental cycles of the deterministic spanning tree give coordinates on
// the space of one-forms; the period lattice is then the column lattice of
// the length-weighted Gram matrix.  All arithmetic is exact rational.
struct PeriodLattice {
    int genus = 0;
    std::vector<std::vector<int>> cycles;  // per cycle, signed coefficient per edge
    RatMat gram;                           // positive definite
};

PeriodLattice period_basis(const Model& m);

struct AJVector {
    RatVec coords;       // in Q^genus
    PointRef base;
    long long degree = 0;
};

// Length-weighted pairing of the tree path from base to each divisor point
// against the cycle basis; additive in the divisor, well defined mod lattice.
AJVector abel_jacobi(const Model& m, const PeriodLattice& lattice, const Divisor& d, const PointRef& base);

// v lies in the lattice iff gram * x = v has an integer solution.
bool is_lattice_member(const PeriodLattice& lattice, const RatVec& v);

// Mikhalkin-Zharkov criterion: equal degree and AJ difference in the lattice.
// Genus 0 needs only equal degree.
bool are_equivalent(const Model& m, const Divisor& d1, const Divisor& d2);

// PL function with div(f) = d2 - d1, built from the difference of the two
// reducing firing scripts on the unit-subdivided model.
PLFunction equivalence_witness(const Model& m, const Divisor& d1, const Divisor& d2,
                               long long max_subdiv = 2'000'000);

}  // namespace tropdiv
