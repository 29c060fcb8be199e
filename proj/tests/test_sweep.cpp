#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnarate/sweep.hpp"

#include <sstream>

using namespace dnarate;

TEST_CASE("homopolymer sweep is deterministic and grid-shaped") {
    HomopolymerSweepConfig cfg;
    cfg.m_list = {1, 2};
    cfg.alpha_stop = 0.02;
    cfg.alpha_step = 0.01;
    cfg.estimator.max_steps = 20000;
    cfg.replicates = 2;

    auto a = sweep_homopolymer(cfg, 99);
    CHECK(a.size() == 6);  // 2 m-values x 3 alphas
    cfg.threads = 1;
    auto b = sweep_homopolymer(cfg, 99);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].r_c == b[i].r_c);  // bit-identical regardless of thread count
        CHECK(a[i].r_u == b[i].r_u);
        CHECK(a[i].diff == doctest::Approx(a[i].r_u - a[i].r_c));
        CHECK(a[i].uncertainty >= 0);
        CHECK(a[i].family == "homopolymer");
    }
    // alpha = 0 column: unconstrained wins for every m.
    for (const auto& p : a)
        if (p.alpha == 0.0) CHECK(p.diff > 0);
}

TEST_CASE("gc sweep structure") {
    GcSweepConfig cfg;
    cfg.n_list = {20};
    cfg.epsilon_list = {0.0, 0.1, 0.5};
    cfg.alpha_stop = 2.0;
    cfg.alpha_step = 0.5;
    auto pts = sweep_gc(cfg);
    CHECK(pts.size() == 3 * 5);
    for (const auto& p : pts) {
        CHECK(p.family == "gc");
        CHECK(p.d_u >= 1);
        CHECK(p.d_c >= 1);
        if (p.constraint == 0.5) CHECK(p.diff == 0.0);  // identical evaluator
        if (p.alpha == 0.0 && p.constraint < 0.5) CHECK(p.diff > 0);
    }
    cfg.alpha_stop = 10.0;
    CHECK_THROWS_AS(sweep_gc(cfg), invalid_context);
}

TEST_CASE("crossing detection") {
    auto mk = [](double alpha, double diff, double unc) {
        RegimePoint p;
        p.alpha = alpha;
        p.diff = diff;
        p.uncertainty = unc;
        return p;
    };
    auto cross = find_crossing({mk(0, 1, 0), mk(1, -1, 0)});
    REQUIRE(cross.size() == 1);
    CHECK(cross[0].alpha == doctest::Approx(0.5));
    CHECK(cross[0].lo <= cross[0].alpha);
    CHECK(cross[0].hi >= cross[0].alpha);

    CHECK(find_crossing({mk(0, 1, 0), mk(1, 2, 0), mk(2, 0.5, 0)}).empty());

    auto multi = find_crossing({mk(0, 1, 0), mk(1, -1, 0), mk(2, 1, 0)});
    CHECK(multi.size() == 2);

    // Uncertainty widens the bracket.
    auto wide = find_crossing({mk(0, 0.2, 0.1), mk(1, -0.2, 0.1)});
    REQUIRE(wide.size() == 1);
    CHECK(wide[0].hi - wide[0].lo > 0.0);

    CHECK_THROWS_AS(find_crossing({mk(1, 1, 0), mk(0, -1, 0)}), invalid_context);
}

TEST_CASE("map emission round-trip") {
    GcSweepConfig cfg;
    cfg.n_list = {12};
    cfg.epsilon_list = {0.0, 0.5};
    cfg.alpha_stop = 1.0;
    cfg.alpha_step = 0.5;
    auto pts = sweep_gc(cfg);

    std::ostringstream csv;
    emit_map(pts, MapFormat::Csv, csv);
    CHECK(csv.str().rfind("family,constraint,kind,alpha,p,n,R_u,R_c,diff,uncertainty,d_u,d_c",
                          0) == 0);
    std::istringstream in(csv.str());
    auto back = parse_map_csv(in);
    REQUIRE(back.size() == pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].alpha == pts[i].alpha);
        CHECK(back[i].r_u == pts[i].r_u);  // %.17g round-trips doubles exactly
        CHECK(back[i].r_c == pts[i].r_c);
        CHECK(back[i].diff == pts[i].diff);
        CHECK(back[i].d_c == pts[i].d_c);
    }

    std::ostringstream jsonOut, svg;
    emit_map(pts, MapFormat::Json, jsonOut);
    CHECK(jsonOut.str().find("\"R_u\"") != std::string::npos);
    emit_map(pts, MapFormat::SvgHeatmap, svg);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("<rect") != std::string::npos);

    CHECK_THROWS_AS(emit_map({}, MapFormat::Csv, jsonOut), invalid_context);
}
