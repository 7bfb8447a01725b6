#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "subtraj/io.hpp"
#include "subtraj/svg.hpp"
#include "test_util.hpp"

using namespace subtraj;

TEST_CASE("csv parse: header, blanks, errors") {
    Trajectory t = parse_trajectory_csv("x,y\n0,0\n\n1.5,2.5\n\n3,4\n");
    CHECK(t.size() == 3);
    CHECK(t.vertex(1).x == doctest::Approx(1.5));

    CHECK(parse_trajectory_csv("0,0\n1,1\n").size() == 2);
    CHECK_THROWS_AS(parse_trajectory_csv("0,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv("0 0\n1 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_trajectory_csv("x,y\n0,zzz\n1,1\n"), std::invalid_argument);
}

TEST_CASE("csv round trip is exact") {
    std::mt19937 rng(211);
    Trajectory t = testutil::random_curve(rng, 40);
    std::string csv = trajectory_to_csv(t);
    Trajectory back = parse_trajectory_csv(csv);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back.vertex(i).x == t.vertex(i).x);
        CHECK(back.vertex(i).y == t.vertex(i).y);
    }
    CHECK(trajectory_to_csv(back) == csv);
}

TEST_CASE("generators are deterministic") {
    for (const char* kind : {"spiral", "lawnmower", "walk"}) {
        Trajectory a = generate_trajectory(kind, 200, 7);
        Trajectory b = generate_trajectory(kind, 200, 7);
        CHECK(trajectory_to_csv(a) == trajectory_to_csv(b));
    }
    Trajectory w1 = generate_trajectory("walk", 100, 1);
    Trajectory w2 = generate_trajectory("walk", 100, 2);
    CHECK(trajectory_to_csv(w1) != trajectory_to_csv(w2));
    CHECK_THROWS_AS(generate_trajectory("banana", 10, 1), std::invalid_argument);
}

TEST_CASE("spiral packedness stays below the frozen regression bound") {
    Trajectory t = generate_trajectory("spiral", 1000, 0);
    double c = packedness_lower_bound(t, 16);
    CHECK(c > 2.0);
    CHECK(c <= 60.0);  // frozen after one calibration run
}

TEST_CASE("lawnmower packedness tracks the row count") {
    for (int k : {4, 8}) {
        double gap = 10.0 / k;
        Trajectory t = generate_trajectory("lawnmower", 2 * k + 2, 0, gap);
        double c = packedness_lower_bound(t, 24);
        CHECK(c >= 2.0 * k / 2.0);
        CHECK(c <= 2.0 * k * 2.0);
    }
}

TEST_CASE("report round trips through json") {
    ClusterQuery q{3, 8.0, 2.2, 0.25, Mode::vertex};
    Trajectory t = generate_trajectory("lawnmower", 10, 0, 1.0);
    DecideResult r = decide(t, q);
    nlohmann::json j = report_to_json(q, r, 4.2);
    std::string s = j.dump();
    nlohmann::json back = nlohmann::json::parse(s);
    CHECK(back == j);
    CHECK(back["answer"] == "YES");
    CHECK(back["query"]["m"] == 3);
    CHECK(back["witness"]["members"].size() == 2);
}

TEST_CASE("white region polygons agree with the white predicate away from edges") {
    std::mt19937 rng(223);
    Trajectory p = testutil::random_curve(rng, 12);
    Trajectory q = testutil::random_curve(rng, 12);
    FreeSpaceDiagram fsd = build_diagram(p, q, FreeSpaceConfig(1.2, 0.4));
    auto polys = white_region_polygons(fsd);
    // raster tolerance: a couple of pixels of an 800 px canvas, in diagram units
    double px = std::max(fsd.width(), fsd.height()) / 800.0;
    double guard = 4.0 * px;
    std::uniform_real_distribution<double> ux(0.0, fsd.width()), uy(0.0, fsd.height());
    int checked = 0;
    for (int k = 0; k < 40000 && checked < 1000; ++k) {
        double x = ux(rng), y = uy(rng);
        double disp = fsd.displacement(x, y);
        if (std::abs(disp - fsd.config().threshold) <= 4.0 * guard) continue;
        bool inside = false;
        for (const auto& poly : polys)
            if (point_in_polygon(poly, {x, y})) {
                inside = true;
                break;
            }
        CHECK(inside == fsd.is_white(x, y));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("svg output is well formed") {
    Trajectory p({{0, 0}, {4, 0}});
    FreeSpaceDiagram fsd = build_diagram(p, p, FreeSpaceConfig(1.0, 0.4));
    std::string svg = render_free_space_svg(fsd);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);

    Trajectory q({{0, 99}, {4, 99}});
    FreeSpaceDiagram empty = build_diagram(p, q, FreeSpaceConfig(0.5, 0.4));
    std::string svg2 = render_free_space_svg(empty);
    CHECK(svg2.find("<polygon") == std::string::npos);
    CHECK(svg2.find("<text") != std::string::npos);
}
