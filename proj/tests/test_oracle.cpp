#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "subtraj/oracle.hpp"
#include "test_util.hpp"

using namespace subtraj;

TEST_CASE("circle-segment interval") {
    auto iv = circle_segment_interval({0, 0}, 1.0, Segment({-2, 0}, {2, 0}));
    REQUIRE(iv);
    CHECK(iv->lo == doctest::Approx(0.25));
    CHECK(iv->hi == doctest::Approx(0.75));
    CHECK(!circle_segment_interval({0, 10}, 1.0, Segment({-2, 0}, {2, 0})));
}

TEST_CASE("exact free space predicate matches pointwise distances") {
    std::mt19937 rng(139);
    for (int it = 0; it < 5; ++it) {
        Trajectory p = testutil::random_curve(rng, 12);
        Trajectory q = testutil::random_curve(rng, 12);
        double d = std::uniform_real_distribution<double>(0.5, 2.5)(rng);
        ExactFreeSpace fs(p, q, d);
        std::uniform_real_distribution<double> ux(0.0, p.length()), uy(0.0, q.length());
        for (int k = 0; k < 20000; ++k) {
            double x = ux(rng), y = uy(rng);
            CHECK(fs.white(x, y) == (dist(p.point_at(x), q.point_at(y)) <= d));
        }
    }
}

TEST_CASE("frechet decision: identical and translated curves") {
    std::mt19937 rng(149);
    Trajectory p = testutil::random_curve(rng, 15);
    for (double d : {0.0, 0.1, 1.0}) CHECK(frechet_decide(p, p, d));

    for (double h : {0.25, 1.0, 3.0}) {
        Trajectory a({{0, 0}, {1, 0}});
        Trajectory b({{0, h}, {1, h}});
        CHECK(frechet_decide(a, b, h));
        CHECK(frechet_decide(a, b, h * 1.01));
        CHECK(!frechet_decide(a, b, h * 0.99));
    }
}

TEST_CASE("frechet decision flips exactly at the bisected distance") {
    std::mt19937 rng(151);
    for (int it = 0; it < 200; ++it) {
        Trajectory p = testutil::random_curve(rng, 4 + static_cast<int>(rng() % 8));
        Trajectory q = testutil::random_curve(rng, 4 + static_cast<int>(rng() % 8));
        double hi = 0.0;
        for (const Point& a : p.vertices())
            for (const Point& b : q.vertices()) hi = std::max(hi, dist(a, b));
        hi += 1.0;
        double lo = 0.0;
        REQUIRE(frechet_decide(p, q, hi));
        for (int b = 0; b < 50; ++b) {
            double mid = (lo + hi) / 2;
            if (frechet_decide(p, q, mid)) hi = mid;
            else lo = mid;
        }
        CHECK(frechet_decide(p, q, hi + 1e-7));
        CHECK(!frechet_decide(p, q, std::max(0.0, lo - 1e-7)));
    }
}

TEST_CASE("frechet decision is invariant under rigid motions") {
    std::mt19937 rng(157);
    for (int it = 0; it < 40; ++it) {
        Trajectory p = testutil::random_curve(rng, 10);
        Trajectory q = testutil::random_curve(rng, 10);
        double d = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
        bool base = frechet_decide(p, q, d);
        double th = std::uniform_real_distribution<double>(0.0, 6.283)(rng);
        Point shift{std::uniform_real_distribution<double>(-10.0, 10.0)(rng),
                    std::uniform_real_distribution<double>(-10.0, 10.0)(rng)};
        auto rot = [&](const Trajectory& t) {
            std::vector<Point> pts;
            for (const Point& v : t.vertices())
                pts.push_back({v.x * std::cos(th) - v.y * std::sin(th) + shift.x,
                               v.x * std::sin(th) + v.y * std::cos(th) + shift.y});
            return Trajectory(pts);
        };
        CHECK(frechet_decide(rot(p), rot(q), d) == base);
    }
}

TEST_CASE("exact lowest end on a straight band") {
    // straight line vs itself: white is the band |x - y| <= d
    Trajectory t({{0, 0}, {10, 0}});
    double e = exact_lowest_end(t, 1.0, 2.0, 1.5, 6.0);
    CHECK(e == doctest::Approx(5.0));
    double e2 = exact_lowest_end(t, 1.0, 2.0, 2.9, 6.0);
    CHECK(e2 == doctest::Approx(5.0));
    CHECK(std::isinf(exact_lowest_end(t, 1.0, 2.0, 8.0, 6.0)));
}

TEST_CASE("sc_bruteforce basics") {
    Trajectory line({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0},
                     {6, 0}, {7, 0}, {8, 0}, {9, 0}, {10, 0}});
    // a straight line admits no disjoint members at small d
    CHECK(!sc_bruteforce(line, ClusterQuery{3, 2.0, 0.1, 0.25, Mode::vertex}));
    CHECK(!sc_bruteforce(line, ClusterQuery{2, 2.0, 0.1, 0.25, Mode::vertex}));
    CHECK(!sc_bruteforce(line, ClusterQuery{2, 100.0, 0.1, 0.25, Mode::vertex}));
    CHECK(sc_bruteforce(line, ClusterQuery{1, 2.0, 0.1, 0.25, Mode::vertex}));
    std::vector<Point> big;
    for (int i = 0; i < 20; ++i) big.push_back({static_cast<double>(i), 0.0});
    CHECK_THROWS_AS(sc_bruteforce(Trajectory(big), ClusterQuery{2, 1.0, 0.1, 0.25, Mode::vertex}),
                    std::invalid_argument);
}

TEST_CASE("sc_bruteforce on stacked rows finds the cluster") {
    // serpentine; rows 0 and 2 run left-to-right two units apart
    std::vector<Point> pts{{0, 0}, {10, 0}, {10, 1}, {0, 1}, {0, 2}, {10, 2}};
    Trajectory t(pts);
    CHECK(sc_bruteforce(t, ClusterQuery{2, 8.0, 2.05, 0.25, Mode::vertex}));
    CHECK(!sc_bruteforce(t, ClusterQuery{2, 8.0, 0.5, 0.25, Mode::vertex}));
}

TEST_CASE("sc_bruteforce is monotone in d") {
    std::mt19937 rng(163);
    for (int it = 0; it < 25; ++it) {
        Trajectory t = testutil::random_curve(rng, 4 + static_cast<int>(rng() % 7));
        double l = std::uniform_real_distribution<double>(0.5, t.length() * 0.6)(rng);
        int m = 2 + static_cast<int>(rng() % 2);
        bool prev = false;
        for (double d : {0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 1e9}) {
            bool now = sc_bruteforce(t, ClusterQuery{m, l, d, 0.25, Mode::vertex});
            if (prev) CHECK(now);
            prev = now;
        }
        CHECK(prev);  // huge d always admits the cluster when l fits
    }
}

TEST_CASE("sc_bruteforce arbitrary-mode grid refinement never flips true to false") {
    std::mt19937 rng(167);
    for (int it = 0; it < 15; ++it) {
        Trajectory t = testutil::random_curve(rng, 4 + static_cast<int>(rng() % 5));
        double l = std::uniform_real_distribution<double>(0.4, t.length() * 0.5)(rng);
        double d = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
        ClusterQuery q{2, l, d, 0.25, Mode::arbitrary};
        bool coarse = sc_bruteforce(t, q, 1024);
        bool fine = sc_bruteforce(t, q, 2048);
        if (coarse) CHECK(fine);
    }
}
