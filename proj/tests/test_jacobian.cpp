#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tropdiv/jacobian.hpp"
#include "tropdiv/reduction.hpp"

using namespace tropdiv;
using namespace tropdiv::testing;

TEST_CASE("period_basis") {
    SUBCASE("circle") {
        PeriodLattice L = period_basis(circle());
        REQUIRE(L.genus == 1);
        CHECK(L.gram(0, 0) == Rational(1));
    }
    SUBCASE("banana with mixed lengths") {
        PeriodLattice L = period_basis(banana(3, {Rational(1), Rational(2), Rational(3)}));
        REQUIRE(L.genus == 2);
        // fundamental cycles of the first edge's tree: e1-e0 and e2-e0
        CHECK(L.gram(0, 0) == Rational(3));   // 1+2
        CHECK(L.gram(0, 1) == Rational(1));   // shared tree edge
        CHECK(L.gram(1, 0) == Rational(1));
        CHECK(L.gram(1, 1) == Rational(4));   // 1+3
    }
    SUBCASE("K4 gram") {
        PeriodLattice L = period_basis(k4());
        REQUIRE(L.genus == 3);
        for (int i = 0; i < 3; ++i) CHECK(L.gram(i, i) == Rational(3));
        CHECK(L.gram(0, 1) == Rational(1));
        CHECK(L.gram(0, 2) == Rational(-1));
        CHECK(L.gram(1, 2) == Rational(1));
    }
    SUBCASE("tree rejected") { CHECK_THROWS_AS(period_basis(path(3)), Error); }
}

TEST_CASE("abel_jacobi") {
    SUBCASE("base point maps to zero") {
        Model m = banana(3);
        PeriodLattice L = period_basis(m);
        AJVector a = abel_jacobi(m, L, Divisor::at(PointRef::at_vertex(0), 4), PointRef::at_vertex(0));
        for (int i = 0; i < L.genus; ++i) CHECK(a.coords(i) == Rational(0));
    }
    SUBCASE("circle offset is the coordinate") {
        Model m = circle();
        PeriodLattice L = period_basis(m);
        AJVector a = abel_jacobi(m, L, Divisor::at(PointRef::on_edge(0, Rational(1, 3))), PointRef::at_vertex(0));
        CHECK(a.coords(0) == Rational(1, 3));
    }
    SUBCASE("additive in the divisor") {
        Model m = k4();
        PeriodLattice L = period_basis(m);
        Divisor d1 = Divisor::at(PointRef::on_edge(3, Rational(1, 2)), 2);
        Divisor d2;
        d2.add(PointRef::at_vertex(2), 1);
        d2.add(PointRef::on_edge(5, Rational(1, 4)), -1);
        PointRef base = PointRef::at_vertex(0);
        AJVector a1 = abel_jacobi(m, L, d1, base);
        AJVector a2 = abel_jacobi(m, L, d2, base);
        AJVector sum = abel_jacobi(m, L, d1 + d2, base);
        CHECK(sum.coords == a1.coords + a2.coords);
    }
}

TEST_CASE("is_lattice_member") {
    Model m = banana(3);
    PeriodLattice L = period_basis(m);
    RatVec zero = RatVec::Zero(2);
    CHECK(is_lattice_member(L, zero));
    // columns and integer combinations are members
    RatVec c0 = L.gram.col(0), c1 = L.gram.col(1);
    CHECK(is_lattice_member(L, c0));
    CHECK(is_lattice_member(L, c0 + c1));
    RatVec half = c0 / Rational(2);
    CHECK(!is_lattice_member(L, half));

    PeriodLattice Lc = period_basis(circle());
    RatVec v(1);
    v(0) = Rational(1, 2);
    CHECK(!is_lattice_member(Lc, v));
    v(0) = Rational(3);
    CHECK(is_lattice_member(Lc, v));
}

TEST_CASE("are_equivalent") {
    SUBCASE("reflexive") {
        Model m = k4();
        Divisor d;
        d.add(PointRef::at_vertex(1), 2);
        d.add(PointRef::on_edge(0, Rational(2, 5)), 1);
        CHECK(are_equivalent(m, d, d));
    }
    SUBCASE("distinct points on the circle differ") {
        Model m = circle();
        CHECK(!are_equivalent(m, Divisor::at(PointRef::on_edge(0, Rational(1, 4))),
                              Divisor::at(PointRef::on_edge(0, Rational(1, 2)))));
    }
    SUBCASE("figure-3 pair on the circle") {
        Model m = circle();
        Divisor d1 = Divisor::at(PointRef::at_vertex(0), 2);
        Divisor d2;
        d2.add(PointRef::on_edge(0, Rational(1, 4)), 1);
        d2.add(PointRef::on_edge(0, Rational(3, 4)), 1);
        CHECK(are_equivalent(m, d1, d2));
    }
    SUBCASE("degree mismatch is never equivalent") {
        Model m = circle();
        CHECK(!are_equivalent(m, Divisor{}, Divisor::at(PointRef::at_vertex(0))));
    }
    SUBCASE("genus zero needs only degree") {
        Model m = path(3);
        CHECK(are_equivalent(m, Divisor::at(PointRef::at_vertex(0)), Divisor::at(PointRef::on_edge(1, Rational(1, 2)))));
    }
    SUBCASE("base point independence") {
        Model m = banana(3);
        PeriodLattice L = period_basis(m);
        Divisor d1 = Divisor::at(PointRef::on_edge(0, Rational(1, 2)), 2);
        Divisor d2;
        d2.add(PointRef::at_vertex(0), 1);
        d2.add(PointRef::at_vertex(1), 1);
        for (PointRef base : {PointRef::at_vertex(0), PointRef::at_vertex(1), PointRef::on_edge(2, Rational(1, 3))}) {
            AJVector a1 = abel_jacobi(m, L, d1, base);
            AJVector a2 = abel_jacobi(m, L, d2, base);
            CHECK(is_lattice_member(L, a1.coords - a2.coords));
        }
    }
}

TEST_CASE("equivalence agrees with reduced-representative equality") {
    std::mt19937_64 rng(314);
    std::vector<Model> models{banana(3), k4(), dumbbell(), circle(Rational(2))};
    PointRef base = PointRef::at_vertex(0);
    int positives = 0;
    for (const Model& m : models) {
        for (int iter = 0; iter < 15; ++iter) {
            auto rand_divisor = [&](long long deg) {
                Divisor d;
                long long placed = 0;
                while (placed < deg) {
                    if (rng() % 2) {
                        d.add(PointRef::at_vertex(static_cast<VertexId>(rng() % m.vertex_count())), 1);
                    } else {
                        EdgeId e = static_cast<EdgeId>(rng() % m.edge_count());
                        long long num = 1 + static_cast<long long>(rng() % 7);
                        Rational off = m.edge(e).length * Rational(num, 8);
                        d.add(PointRef::on_edge(e, off), 1);
                    }
                    ++placed;
                }
                return d;
            };
            Divisor d1 = rand_divisor(3);
            Divisor d2 = (iter % 2) ? rand_divisor(3) : p_reduce_metric(m, d1, base);
            bool via_jacobian = are_equivalent(m, d1, d2);
            bool via_reduction = p_reduce_metric(m, d1, base) == p_reduce_metric(m, d2, base);
            CHECK(via_jacobian == via_reduction);
            if (via_jacobian) ++positives;
        }
    }
    CHECK(positives >= 25);
}

TEST_CASE("equivalence_witness") {
    SUBCASE("identical divisors give a constant") {
        Model m = banana(3);
        Divisor d = Divisor::at(PointRef::at_vertex(1), 2);
        PLFunction f = equivalence_witness(m, d, d);
        CHECK(div_of_function(f, m).is_zero());
    }
    SUBCASE("tree translation") {
        Model m = segment();
        Divisor d1 = Divisor::at(PointRef::at_vertex(1), 2);
        Divisor d2 = Divisor::at(PointRef::at_vertex(0), 2);
        PLFunction f = equivalence_witness(m, d1, d2);
        CHECK(div_of_function(f, m) == d2 - d1);
    }
    SUBCASE("figure-3 pair witness") {
        Model m = circle();
        Divisor d1 = Divisor::at(PointRef::at_vertex(0), 2);
        Divisor d2;
        d2.add(PointRef::on_edge(0, Rational(1, 4)), 1);
        d2.add(PointRef::on_edge(0, Rational(3, 4)), 1);
        PLFunction f = equivalence_witness(m, d1, d2);
        CHECK(div_of_function(f, m) == d2 - d1);
    }
    SUBCASE("non-equivalent pairs are rejected") {
        Model m = circle();
        CHECK_THROWS_AS(equivalence_witness(m, Divisor::at(PointRef::on_edge(0, Rational(1, 4))),
                                            Divisor::at(PointRef::on_edge(0, Rational(1, 2)))),
                        Error);
    }
    SUBCASE("random equivalent pairs satisfy the contract") {
        std::mt19937_64 rng(555);
        Model m = k4();
        PointRef base = PointRef::at_vertex(0);
        for (int iter = 0; iter < 10; ++iter) {
            Divisor d1;
            for (int j = 0; j < 3; ++j) {
                EdgeId e = static_cast<EdgeId>(rng() % m.edge_count());
                d1.add(PointRef::on_edge(e, Rational(1 + static_cast<long long>(rng() % 3), 4)), 1);
            }
            Divisor d2 = p_reduce_metric(m, d1, base);
            PLFunction f = equivalence_witness(m, d1, d2);
            CHECK(div_of_function(f, m) == d2 - d1);
        }
    }
}

namespace {

// relabels edges; a different edge order changes the deterministic spanning
// tree, which must not change any equivalence verdict
Model permute_edges(const Model& m, const std::vector<int>& perm, std::vector<int>& inv) {
    std::vector<Edge> es(static_cast<size_t>(m.edge_count()));
    inv.assign(static_cast<size_t>(m.edge_count()), 0);
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        es[static_cast<size_t>(perm[static_cast<size_t>(e)])] = m.edge(e);
        inv[static_cast<size_t>(perm[static_cast<size_t>(e)])] = e;
    }
    return Model::build(m.vertex_count(), es);
}

}  // namespace

TEST_CASE("verdicts survive a change of spanning tree") {
    std::mt19937_64 rng(777);
    Model m = k4();
    std::vector<int> perm{3, 5, 0, 1, 4, 2};
    std::vector<int> inv;
    Model m2 = permute_edges(m, perm, inv);
    for (int iter = 0; iter < 20; ++iter) {
        auto rand_div = [&](const Model& mm, bool permuted) {
            Divisor d;
            for (int j = 0; j < 2; ++j) {
                EdgeId e = static_cast<EdgeId>(rng() % 6);
                Rational off(1 + static_cast<long long>(rng() % 3), 4);
                d.add(PointRef::on_edge(permuted ? perm[static_cast<size_t>(e)] : e, off), 1);
            }
            return d;
        };
        // build the same pair of divisors in both labellings
        std::mt19937_64 save = rng;
        Divisor a1 = rand_div(m, false), b1 = rand_div(m, false);
        rng = save;
        Divisor a2 = rand_div(m2, true), b2 = rand_div(m2, true);
        CHECK(are_equivalent(m, a1, b1) == are_equivalent(m2, a2, b2));
    }
}
