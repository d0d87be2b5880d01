#include <cmath>

#include "doctest.h"
#include "sepint/analysis.hpp"
#include "test_helpers.hpp"

using namespace sepint;

namespace {

Configuration hexagon7(Color center, Color ring) {
    Configuration c;
    c.add({0, 0}, center);
    for (const Site s : neighbors({0, 0})) c.add(s, ring);
    return c;
}

}  // namespace

TEST_CASE("p_min construction: checkpoints and bound") {
    CHECK(p_min_upper(1) == 0);
    CHECK(p_min_upper(2) == 2);
    CHECK(p_min_upper(3) == 3);
    CHECK(p_min_upper(7) == 6);
    for (int l = 1; l <= 50; ++l) CHECK(p_min_upper(3 * l * l + 3 * l + 1) == 6 * l);
    for (int l = 1; l <= 50; ++l)
        for (int k = 1; k <= l; ++k) CHECK(p_min_upper(3 * l * l + 3 * l + 1 + k) == 6 * l + 1);

    for (int n = 1; n <= 2000; ++n) {
        const Configuration c = min_perimeter_config(n);
        const int p = boundary_walk(c).length;
        CHECK(p == p_min_upper(n));
        CHECK(static_cast<double>(p) <= 2.0 * std::sqrt(3.0) * std::sqrt(n));
    }
}

TEST_CASE("compression report") {
    const auto own = compression_report(min_perimeter_config(64));
    CHECK(own.alpha_achieved == 1.0);

    Configuration line;
    for (int i = 0; i < 20; ++i) line.add({i, 0}, Color::C1);
    const auto rep = compression_report(line);
    CHECK(rep.p == 2 * 20 - 2);
    CHECK(rep.pmin == p_min_upper(20));
    CHECK(rep.alpha_achieved == doctest::Approx(38.0 / rep.pmin));

    const auto one = compression_report(min_perimeter_config(1));
    CHECK(one.alpha_achieved == 1.0);  // p = pmin = 0
}

TEST_CASE("contours: monochromatic, hexagon, block split") {
    SplitMix64 rng(5);
    const auto mono = testutil::random_blob(rng, 40, true, 1.1);  // all C1
    const auto cs0 = extract_contours(mono);
    CHECK(cs0.crossing.empty());
    CHECK(cs0.isolated.empty());

    const auto cs1 = extract_contours(hexagon7(Color::C2, Color::C1));
    CHECK(cs1.crossing.empty());
    REQUIRE(cs1.isolated.size() == 1);
    CHECK(cs1.isolated[0].size() == 6);
    CHECK(cs1.isolated_total == 6);

    // vertical two-block split of a 6x4 parallelogram: one crossing contour
    const auto split = testutil::block_split(6, 4, 3);
    const auto cs2 = extract_contours(split);
    CHECK(cs2.isolated.empty());
    REQUIRE(cs2.crossing.size() == 1);
    CHECK(cs2.crossing_total == edge_stats(split).h);
}

TEST_CASE("contour lengths sum to the heterogeneous edge count") {
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto c = testutil::random_blob(rng, 2 + static_cast<int>(rng.below(80)));
        const auto cs = extract_contours(c);
        CHECK(cs.crossing_total + cs.isolated_total == edge_stats(c).h);
        // boundary contour is untouched by coloring
        CHECK(cs.boundary.length() == 2 * boundary_walk(c).length + 6);
    }
}

TEST_CASE("isolated interiors: hexagon core") {
    const auto hex = hexagon7(Color::C2, Color::C1);
    const auto cs = extract_contours(hex);
    const auto ins = isolated_interiors(hex, cs);
    REQUIRE(ins.size() == 1);
    CHECK(ins[0] == std::set<Site>{{0, 0}});
}

TEST_CASE("faces: monochromatic, hexagon, stripes") {
    SplitMix64 rng(11);
    const auto mono = testutil::random_blob(rng, 30, true, 1.1);
    const auto f0 = faces(mono);
    REQUIRE(f0.size() == 1);
    CHECK(f0[0].outer);

    const auto f1 = faces(hexagon7(Color::C2, Color::C1));
    REQUIRE(f1.size() == 2);
    for (const Face& f : f1) {
        if (f.particles.size() == 1) {
            CHECK(!f.outer);
            CHECK(f.color == Color::C2);
        } else {
            CHECK(f.particles.size() == 6);
            CHECK(f.outer);
            CHECK(f.color == Color::C1);
        }
    }

    // three vertical stripes: three faces, all outer
    Configuration stripes;
    for (int q = 0; q < 6; ++q)
        for (int r = 0; r < 3; ++r)
            stripes.add({q, r}, (q / 2) % 2 == 0 ? Color::C1 : Color::C2);
    const auto f2 = faces(stripes);
    CHECK(f2.size() == 3);
    for (const Face& f : f2) CHECK(f.outer);
}

TEST_CASE("faces partition the particles and face boundaries are heterogeneous") {
    SplitMix64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const auto c = testutil::random_blob(rng, 2 + static_cast<int>(rng.below(60)));
        const auto fs = faces(c);
        std::size_t total = 0;
        for (const Face& f : fs) {
            total += f.particles.size();
            for (const Site s : f.particles) CHECK(c.color_at(s) == f.color);
            // every edge leaving the face is heterogeneous
            std::set<Site> in(f.particles.begin(), f.particles.end());
            for (const Site s : f.particles)
                for (const Site nb : neighbors(s))
                    if (c.has(nb) && !in.count(nb)) CHECK(c.color_at(nb) != f.color);
        }
        CHECK(total == static_cast<std::size_t>(c.n()));
    }
}

TEST_CASE("separation_check: vacuous and failing cases") {
    // R empty is valid when C1 is rare
    Configuration few;
    few.add({0, 0}, Color::C1);
    for (int i = 1; i < 12; ++i) few.add({i, 0}, Color::C2);
    const auto w_empty = separation_check(few, {}, 1.0, 0.1);
    CHECK(w_empty.pass);  // density outside = 1/12 <= 0.1

    // fully mixed R = everything fails the density condition
    const auto mixed = testutil::block_split(4, 4, 2);
    std::set<Site> all;
    for (const auto& [s, col] : mixed.sites()) all.insert(s);
    const auto w_all = separation_check(mixed, all, 100.0, 0.1);
    CHECK(!w_all.pass);
    CHECK(w_all.density_R == doctest::Approx(0.5));

    CHECK_THROWS_AS(separation_check(mixed, {Site{99, 99}}, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(separation_check(mixed, {}, -1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(separation_check(mixed, {}, 1.0, 0.6), std::invalid_argument);
}

TEST_CASE("separation_check: straight interface passes iff within beta sqrt n") {
    // two pure half-blobs split by a straight interface of length h (the
    // parallelogram height): R = the C1 half
    for (int h : {2, 3, 4}) {
        const int w = 6;
        const auto c = testutil::block_split(w, h, 3);
        std::set<Site> R;
        for (const auto& [s, col] : c.sites())
            if (col == Color::C1) R.insert(s);
        const int n = w * h;
        // interface edges: h vertical contacts plus h-1 diagonal contacts
        const int expect_bd = 2 * h - 1;
        const auto wit = separation_check(c, R, 0.9 * expect_bd / std::sqrt(n), 0.2);
        CHECK(wit.bd_int == expect_bd);
        CHECK(!wit.pass);
        const auto wit2 = separation_check(c, R, 1.1 * expect_bd / std::sqrt(n), 0.2);
        CHECK(wit2.pass);
    }
}

TEST_CASE("separation symmetry between color classes") {
    SplitMix64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto c = testutil::random_blob(rng, 4 + static_cast<int>(rng.below(16)));
        std::set<Site> R;
        for (const auto& [s, col] : c.sites())
            if (rng.below(2)) R.insert(s);
        Configuration swapped;
        std::set<Site> complement;
        for (const auto& [s, col] : c.sites()) {
            swapped.add(s, col == Color::C1 ? Color::C2 : Color::C1);
            if (!R.count(s)) complement.insert(s);
        }
        const double beta = 1.0 + rng.below(8);
        const double delta = 0.1 + 0.05 * rng.below(7);
        const auto a = separation_check(c, R, beta, delta);
        const auto b = separation_check(swapped, complement, beta, delta);
        CHECK(a.pass == b.pass);
        CHECK(a.bd_int == b.bd_int);
    }
}

TEST_CASE("exact search: monochromatic, alternating square, two blobs") {
    SplitMix64 rng(19);
    const auto mono = testutil::random_blob(rng, 12, true, 1.1);
    const auto w = separation_search_exact(mono, 1.0, 0.2);
    REQUIRE(w.has_value());
    CHECK(w->pass);

    // n = 4 alternating-color rhombus with tiny beta: no witness
    Configuration square;
    square.add({0, 0}, Color::C1);
    square.add({1, 0}, Color::C2);
    square.add({0, 1}, Color::C2);
    square.add({1, 1}, Color::C1);
    CHECK(!separation_search_exact(square, 0.4, 0.2).has_value());

    // two pure blobs joined by one edge: the C1 blob is the witness
    Configuration blobs;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) blobs.add({i, j}, Color::C1);
    for (int i = 3; i < 6; ++i)
        for (int j = 0; j < 2; ++j) blobs.add({i, j}, Color::C2);
    const auto w2 = separation_search_exact(blobs, 3.1 / std::sqrt(12.0), 0.1);
    REQUIRE(w2.has_value());
    CHECK(w2->bd_int == 3);
    CHECK(w2->density_R == 1.0);

    Configuration big;
    for (int i = 0; i < 23; ++i) big.add({i, 0}, Color::C1);
    CHECK_THROWS_AS(separation_search_exact(big, 1.0, 0.2), std::invalid_argument);
}

TEST_CASE("heuristic search is sound and finds the obvious witnesses") {
    SplitMix64 rng(23);
    for (int i = 0; i < 150; ++i) {
        const auto c = testutil::random_blob(rng, 2 + static_cast<int>(rng.below(40)),
                                             true, 0.3 + 0.1 * rng.below(5));
        const double beta = 1.0 + rng.below(6);
        const double delta = 0.1 + 0.05 * rng.below(7);
        const auto w = separation_search_heuristic(c, beta, delta);
        if (w) {
            std::set<Site> R(w->R.begin(), w->R.end());
            CHECK(separation_check(c, R, beta, delta).pass);
        }
    }
    const auto blobs = testutil::block_split(6, 2, 3);
    const auto w = separation_search_heuristic(blobs, 3.1 / std::sqrt(12.0), 0.1);
    REQUIRE(w.has_value());
    CHECK(w->bd_int == 3);
}

TEST_CASE("witness json") {
    SeparationWitness w;
    w.R = {{0, 0}, {1, 0}};
    w.bd_int = 3;
    w.density_R = 1.0;
    w.density_out = 0.25;
    w.pass = true;
    CHECK(witness_json(w) ==
          "{\"R\":[[0,0],[1,0]],\"bd_int\":3,\"density_R\":1.0,\"density_out\":0.25,"
          "\"pass\":true}");
}
