#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tropdiv/divisor.hpp"

using namespace tropdiv;
using namespace tropdiv::testing;

TEST_CASE("divisor arithmetic") {
    Divisor d;
    d.add(PointRef::at_vertex(0), 2);
    d.add(PointRef::on_edge(1, Rational(1, 2)), -1);
    CHECK(d.degree() == 1);
    CHECK(!d.is_effective());
    CHECK(d.support().size() == 2);

    Divisor e = d - d;
    CHECK(e.is_zero());
    CHECK((3 * d).degree() == 3);
    CHECK(!d.vertex_supported());
}

TEST_CASE("validate_pl accepts and rejects") {
    Model m = segment();
    SUBCASE("constant ok") { CHECK_NOTHROW(validate_pl(PLFunction::constant(m, Rational(7)), m)); }
    SUBCASE("slope one ok") {
        PLFunction f;
        f.tracks.resize(1);
        f.tracks[0].offsets = {Rational(0), Rational(1)};
        f.tracks[0].values = {Rational(0), Rational(1)};
        CHECK_NOTHROW(validate_pl(f, m));
    }
    SUBCASE("non-integer slope rejected") {
        Model h = segment(Rational(1, 2));
        PLFunction f;
        f.tracks.resize(1);
        f.tracks[0].offsets = {Rational(0), Rational(1, 2)};
        f.tracks[0].values = {Rational(0), Rational(1, 3)};
        CHECK_THROWS_WITH_AS(validate_pl(f, h), doctest::Contains("NonIntegerSlope"), Error);
    }
    SUBCASE("discontinuity rejected") {
        Model p2 = path(2);
        PLFunction f;
        f.tracks.resize(2);
        f.tracks[0].offsets = {Rational(0), Rational(1)};
        f.tracks[0].values = {Rational(0), Rational(1)};
        f.tracks[1].offsets = {Rational(0), Rational(1)};
        f.tracks[1].values = {Rational(2), Rational(0)};
        CHECK_THROWS_WITH_AS(validate_pl(f, p2), doctest::Contains("DiscontinuousAtVertex"), Error);
    }
}

TEST_CASE("div_of_function basics") {
    SUBCASE("constant gives zero divisor") {
        CHECK(div_of_function(PLFunction::constant(k4(), Rational(3)), k4()).is_zero());
    }
    SUBCASE("unit segment with slope 1") {
        Model m = segment();
        PLFunction f;
        f.tracks.resize(1);
        f.tracks[0].offsets = {Rational(0), Rational(1)};
        f.tracks[0].values = {Rational(0), Rational(1)};
        Divisor d = div_of_function(f, m);
        // slopes emanating: +1 at the u end, -1 at the v end
        CHECK(d.coeff(PointRef::at_vertex(0)) == 1);
        CHECK(d.coeff(PointRef::at_vertex(1)) == -1);
        CHECK(d.degree() == 0);
    }
    SUBCASE("tent on the circle") {
        // apex is a local max: both emanating slopes are -1 there
        Model m = circle();
        PLFunction f;
        f.tracks.resize(1);
        f.tracks[0].offsets = {Rational(0), Rational(1, 2), Rational(1)};
        f.tracks[0].values = {Rational(0), Rational(1, 2), Rational(0)};
        Divisor d = div_of_function(f, m);
        CHECK(d.coeff(PointRef::on_edge(0, Rational(1, 2))) == -2);
        CHECK(d.coeff(PointRef::at_vertex(0)) == 2);
        CHECK(d.degree() == 0);
        // the valley shape realizes the figure-3 move: +2 inside, -2 at the vertex
        PLFunction g;
        g.tracks.resize(1);
        g.tracks[0].offsets = {Rational(0), Rational(1, 2), Rational(1)};
        g.tracks[0].values = {Rational(0), Rational(-1, 2), Rational(0)};
        Divisor dg = div_of_function(g, m);
        CHECK(dg.coeff(PointRef::on_edge(0, Rational(1, 2))) == 2);
        CHECK(dg.coeff(PointRef::at_vertex(0)) == -2);
    }
}

namespace {

// random vertex-affine function on a unit-length model: integer vertex values
PLFunction random_vertex_affine(const Model& m, std::mt19937_64& rng) {
    std::vector<Rational> val(static_cast<size_t>(m.vertex_count()));
    for (auto& v : val) v = Rational(static_cast<long long>(rng() % 9) - 4);
    PLFunction f;
    f.tracks.resize(static_cast<size_t>(m.edge_count()));
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        f.tracks[static_cast<size_t>(e)].offsets = {Rational(0), m.edge(e).length};
        f.tracks[static_cast<size_t>(e)].values = {val[static_cast<size_t>(m.edge(e).u)],
                                                   val[static_cast<size_t>(m.edge(e).v)]};
    }
    return f;
}

}  // namespace

TEST_CASE("properties of div over random functions") {
    std::mt19937_64 rng(20240811);
    for (int iter = 0; iter < 50; ++iter) {
        Model m = iter % 2 ? k4() : banana(4);
        PLFunction f = random_vertex_affine(m, rng);
        PLFunction g = random_vertex_affine(m, rng);
        Divisor df = div_of_function(f, m);
        CHECK(df.degree() == 0);
        CHECK(div_of_function(f + g, m) == df + div_of_function(g, m));
    }
}

TEST_CASE("div is stable under refinement") {
    std::mt19937_64 rng(7);
    Model m = k4();
    for (int iter = 0; iter < 20; ++iter) {
        PLFunction f = random_vertex_affine(m, rng);
        Divisor d = div_of_function(f, m);
        std::vector<PointRef> pts{PointRef::on_edge(static_cast<EdgeId>(rng() % 6), Rational(1, 3)),
                                  PointRef::on_edge(static_cast<EdgeId>(rng() % 6), Rational(4, 7))};
        auto [m2, map] = refine_with_points(m, pts);
        PLFunction f2 = push_pl(map, f, m2);
        Divisor d2 = div_of_function(f2, m2);
        CHECK(d2 == push_divisor(map, d));
    }
}

TEST_CASE("push and pull divisors through refinement") {
    Model m = banana(3);
    Divisor d;
    d.add(PointRef::on_edge(0, Rational(1, 2)), 2);
    d.add(PointRef::at_vertex(1), -1);
    auto [m2, map] = refine_with_points(m, d.support());
    Divisor up = push_divisor(map, d);
    CHECK(up.vertex_supported());
    CHECK(pull_divisor(map, up) == d);
}
