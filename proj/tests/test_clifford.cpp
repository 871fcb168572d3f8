#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "tropdiv/clifford.hpp"
#include "tropdiv/generators.hpp"
#include "tropdiv/jacobian.hpp"

using namespace tropdiv;
using namespace tropdiv::testing;

TEST_CASE("find_involutions") {
    SUBCASE("banana has the sheet swap") {
        auto search = find_involutions(banana(3));
        bool has_identity = false, has_swap_with_tree_quotient = false;
        for (const Involution& iota : search.involutions) {
            if (iota.is_identity()) has_identity = true;
            if (!iota.is_identity() && quotient_is_tree(search.base, iota)) has_swap_with_tree_quotient = true;
        }
        CHECK(has_identity);
        CHECK(has_swap_with_tree_quotient);
    }
    SUBCASE("asymmetric lengths leave only the identity") {
        Model m = Model::build(3, {{0, 1, Rational(1)}, {1, 2, Rational(2)}, {0, 2, Rational(3)}});
        auto search = find_involutions(m);
        REQUIRE(search.involutions.size() == 1);
        CHECK(search.involutions[0].is_identity());
    }
    SUBCASE("identity never has a tree quotient on positive genus") {
        auto search = find_involutions(k4());
        for (const Involution& iota : search.involutions)
            if (iota.is_identity()) CHECK(!quotient_is_tree(search.base, iota));
    }
    SUBCASE("K4 double transpositions exist but fold to genus one") {
        auto search = find_involutions(k4());
        int nontrivial = 0, tree_quotients = 0;
        for (const Involution& iota : search.involutions) {
            if (iota.is_identity()) continue;
            ++nontrivial;
            if (quotient_is_tree(search.base, iota)) ++tree_quotients;
        }
        CHECK(nontrivial > 0);
        CHECK(tree_quotients == 0);
    }
}

TEST_CASE("tree_with_loops_g12") {
    SUBCASE("circle") {
        G12Certificate cert = tree_with_loops_g12(circle());
        CHECK(cert.divisor == Divisor::at(PointRef::at_vertex(0), 2));
        CHECK(cert.rank_cert.claimed_rank == 1);
    }
    SUBCASE("dumbbell") {
        G12Certificate cert = tree_with_loops_g12(dumbbell());
        CHECK(cert.divisor.degree() == 2);
        std::string why;
        CHECK_MESSAGE(verify_g12_certificate(dumbbell(), cert, &why), why);
    }
    SUBCASE("banana is rejected") { CHECK_THROWS_AS(tree_with_loops_g12(banana(3)), Error); }
}

TEST_CASE("find_g12") {
    SUBCASE("banana") {
        auto cert = find_g12(banana(3));
        REQUIRE(cert.has_value());
        CHECK(cert->divisor.degree() == 2);
        std::string why;
        CHECK_MESSAGE(verify_g12_certificate(banana(3), *cert, &why), why);
    }
    SUBCASE("dumbbell goes through the loops branch") {
        auto cert = find_g12(dumbbell());
        REQUIRE(cert.has_value());
        CHECK(!cert->involution.has_value());
    }
    SUBCASE("K4 is not hyperelliptic") {
        auto cert = find_g12(k4());
        CHECK(!cert.has_value());
    }
    SUBCASE("genus below two is rejected") { CHECK_THROWS_AS(find_g12(circle()), Error); }
    SUBCASE("the g12 class is well defined: P + iota(P) are all equivalent") {
        Model m = banana(3);
        auto search = find_involutions(m);
        const Involution* swap = nullptr;
        for (const Involution& iota : search.involutions)
            if (!iota.is_identity() && quotient_is_tree(search.base, iota)) {
                swap = &iota;
                break;
            }
        REQUIRE(swap != nullptr);
        std::vector<Divisor> reps;
        for (VertexId v = 0; v < search.base.vertex_count(); ++v) {
            Divisor d;
            d.add(search.to_base.pull(PointRef::at_vertex(v)), 1);
            d.add(search.to_base.pull(PointRef::at_vertex(swap->vertex_map[static_cast<size_t>(v)])), 1);
            reps.push_back(d);
        }
        for (size_t i = 1; i < reps.size(); ++i) CHECK(are_equivalent(m, reps[0], reps[i]));
    }
}

TEST_CASE("compose_rg12") {
    HyperellipticModel hm = gen_hyperelliptic_genus(4, 11);
    REQUIRE(hm.model.genus() == 4);
    auto cert = find_g12(hm.model);
    REQUIRE(cert.has_value());
    SUBCASE("r = 1 is the certificate divisor") {
        auto res = compose_rg12(hm.model, *cert, 1);
        CHECK(res.divisor == cert->divisor);
        CHECK(res.rank == 1);
    }
    SUBCASE("r = 2 doubles to rank 2") {
        auto res = compose_rg12(hm.model, *cert, 2);
        CHECK(res.divisor.degree() == 4);
        CHECK(res.rank == 2);
    }
    SUBCASE("r = g-1 lands in the canonical class") {
        auto res = compose_rg12(hm.model, *cert, 3);
        CHECK(res.rank == 3);
        CHECK(are_equivalent(hm.model, res.divisor, canonical_divisor(hm.model)));
    }
    SUBCASE("out-of-range r is rejected") { CHECK_THROWS_AS(compose_rg12(hm.model, *cert, 4), Error); }
}

TEST_CASE("gen_hyperelliptic") {
    SUBCASE("single doubled edge gives the two-edge banana") {
        Model tree = Model::build(2, {{0, 1, Rational(1)}});
        HyperellipticModel hm = gen_hyperelliptic(tree, {true}, 3);
        CHECK(hm.model.genus() == 1);
        CHECK(hm.model.vertex_count() == 2);
        CHECK(hm.model.edge_count() == 2);
    }
    SUBCASE("star with four doubled legs has genus 3") {
        std::vector<Edge> es;
        for (int i = 0; i < 4; ++i) es.push_back({0, i + 1, Rational(1)});
        Model tree = Model::build(5, es);
        HyperellipticModel hm = gen_hyperelliptic(tree, {true, true, true, true}, 5);
        CHECK(hm.model.genus() == 3);
    }
    SUBCASE("construction involution is valid and folds to a tree") {
        for (std::uint64_t seed : {1ull, 2ull, 9ull}) {
            HyperellipticModel hm = gen_hyperelliptic_genus(4 + static_cast<int>(seed % 3), seed);
            CHECK(!hm.model.has_loops());
            CHECK(quotient_is_tree(hm.model, hm.iota));
        }
    }
    SUBCASE("bad specs are rejected") {
        CHECK_THROWS_AS(gen_hyperelliptic(banana(2), {true, true}, 1), Error);
        Model tree = Model::build(2, {{0, 1, Rational(1)}});
        CHECK_THROWS_AS(gen_hyperelliptic(tree, {true, false}, 1), Error);
    }
}

TEST_CASE("gen_nonhyperelliptic") {
    SUBCASE("genus two is impossible") { CHECK_THROWS_AS(gen_nonhyperelliptic(2, 1), Error); }
    SUBCASE("genus three resembles a perturbed K4") {
        Model m = gen_nonhyperelliptic(3, 7);
        CHECK(m.genus() == 3);
        CHECK(m.vertex_count() == 4);
        auto search = find_involutions(m);
        for (const Involution& iota : search.involutions)
            if (!iota.is_identity()) CHECK(!quotient_is_tree(search.base, iota));
    }
    SUBCASE("requested genus is honored") {
        for (int g : {4, 5}) CHECK(gen_nonhyperelliptic(g, 13).genus() == g);
    }
    SUBCASE("no g12 is found on the output") {
        Model m = gen_nonhyperelliptic(4, 21);
        CHECK(!find_g12(m).has_value());
    }
}

TEST_CASE("clifford_theorem_harness") {
    SUBCASE("genus too small") { CHECK_THROWS_AS(clifford_theorem_harness(k4(), 5, 1), Error); }
    SUBCASE("forward campaign on a genus-4 double cover") {
        HyperellipticModel hm = gen_hyperelliptic_genus(4, 2024);
        HarnessReport rep = clifford_theorem_harness(hm.model, 10, 99);
        CHECK(rep.campaign == "forward");
        CHECK(rep.pass);
        REQUIRE(rep.forward.size() == 2);  // r = 2 .. g-1 for genus 4
        for (const auto& chk : rep.forward) CHECK(chk.rank == chk.r);
    }
    SUBCASE("contrapositive campaign finds no counterexamples") {
        Model m = gen_nonhyperelliptic(4, 31);
        HarnessReport rep = clifford_theorem_harness(m, 40, 7);
        CHECK(rep.campaign == "contrapositive");
        CHECK(rep.pass);
        CHECK(rep.counterexamples.empty());
        CHECK(rep.samples_checked == 40);  // r = 2 only for genus 4
    }
    SUBCASE("same seed reproduces the same report") {
        Model m = gen_nonhyperelliptic(4, 31);
        HarnessReport r1 = clifford_theorem_harness(m, 15, 5, 2);
        HarnessReport r2 = clifford_theorem_harness(m, 15, 5, 1);
        CHECK(r1.campaign == r2.campaign);
        CHECK(r1.counterexamples.size() == r2.counterexamples.size());
        CHECK(r1.samples_checked == r2.samples_checked);
    }
}
