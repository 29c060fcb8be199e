#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnarate/channels.hpp"

#include <cmath>

using namespace dnarate;

TEST_CASE("quaternary entropy endpoints and shape") {
    CHECK(quaternary_entropy(0.0) == 0.0);
    CHECK(quaternary_entropy(0.75) == 2.0);
    CHECK(quaternary_entropy(0.01) == doctest::Approx(0.0966437).epsilon(1e-5));

    // Strictly increasing and concave on a fine grid.
    double prev = quaternary_entropy(0.0);
    double prev_diff = -1;
    bool monotone = true, concave = true;
    const double step = 1e-4;
    for (double p = step; p <= 0.75 + 1e-12; p += step) {
        double h = quaternary_entropy(std::min(p, 0.75));
        if (h <= prev) monotone = false;
        double diff = h - prev;
        if (prev_diff >= 0 && diff > prev_diff + 1e-12) concave = false;
        prev_diff = diff;
        prev = h;
    }
    CHECK(monotone);
    CHECK(concave);

    CHECK_THROWS_AS(quaternary_entropy(-0.01), invalid_context);
    CHECK_THROWS_AS(quaternary_entropy(0.76), invalid_context);
}

TEST_CASE("growth models evaluate their laws and the cap") {
    GrowthModel lin = make_growth_model("linear", 0.185, 0.01);
    CHECK(lin.rate_at_run(5) == 0.75);  // 0.185*4 + 0.01 caps exactly
    CHECK(lin.rate_at_run(1) == doctest::Approx(0.01));

    GrowthModel expo = make_growth_model("exponential", 0.5, 0.01);
    CHECK(expo.rate_at_run(3) == doctest::Approx(0.01 * std::exp(1.0)));

    GrowthModel logm = make_growth_model("logarithmic", 0.1, 0.02);
    CHECK(logm.rate_at_run(1) == doctest::Approx(0.02));
    CHECK(logm.rate_at_run(4) == doctest::Approx(0.1 * std::log(4.0) + 0.02));

    GrowthModel par = make_growth_model("parabolic", 3.0, 0.01);
    CHECK(par.rate_at_gc(60, 120) == doctest::Approx(0.01));
    CHECK(par.rate_at_gc(42, 60) == doctest::Approx(0.01 + 3.0 * 0.2 * 0.2));

    // alpha = 0 gives the base rate in every context.
    for (const char* kind : {"linear", "exponential", "logarithmic"}) {
        GrowthModel m = make_growth_model(kind, 0.0, 0.03);
        for (int r = 1; r <= 20; ++r) CHECK(m.rate_at_run(r) == doctest::Approx(0.03));
    }

    // Monotone in the context variable.
    for (const char* kind : {"linear", "exponential", "logarithmic"}) {
        GrowthModel m = make_growth_model(kind, 0.07, 0.01);
        for (int r = 1; r < 30; ++r) CHECK(m.rate_at_run(r + 1) >= m.rate_at_run(r));
    }
    for (int w = 0; w < 60; ++w) {
        double a = par.rate_at_gc(w, 120), b = par.rate_at_gc(w + 1, 120);
        CHECK(b <= a + 1e-15);  // non-increasing toward the balanced center
    }

    CHECK_THROWS_AS(lin.rate_at_run(0), invalid_context);
    CHECK_THROWS_AS(lin.rate_at_gc(2, 4), invalid_context);
    CHECK_THROWS_AS(par.rate_at_run(1), invalid_context);
    CHECK_THROWS_AS(par.rate_at_gc(5, 4), invalid_context);
    CHECK_THROWS_AS(make_growth_model("cubic", 0, 0), invalid_context);
    CHECK_THROWS_AS(make_growth_model("linear", -1, 0), invalid_context);
    CHECK_THROWS_AS(make_growth_model("linear", 0, 0.8), invalid_context);
}

TEST_CASE("run-length pmf, tail, and mean") {
    CHECK(run_length_pmf(1) == doctest::Approx(0.5625));
    CHECK(run_length_pmf(2) == doctest::Approx(0.28125));
    CHECK_THROWS_AS(run_length_pmf(0), invalid_context);

    // Partial sum + analytic tail normalizes to 1.
    double sum = 0;
    for (int r = 1; r <= 40; ++r) sum += run_length_pmf(r);
    CHECK(sum + run_length_tail(40) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(run_length_tail(1) == doctest::Approx(7.0 / 16.0));
    CHECK(run_length_tail(0) == doctest::Approx(1.0));

    double mean = 0;
    for (int r = 1; r <= 80; ++r) mean += r * run_length_pmf(r);
    CHECK(mean == doctest::Approx(run_length_mean()).epsilon(1e-9));
    CHECK(run_length_mean() == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("constrained run-length pmf") {
    CHECK(run_length_pmf_constrained(1, 1) == doctest::Approx(1.0));
    CHECK(run_length_pmf_constrained(2, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(run_length_pmf_constrained(2, 2) == doctest::Approx(1.0 / 3.0));
    for (int m = 1; m <= 10; ++m) {
        double sum = 0;
        for (int r = 1; r <= m; ++r) sum += run_length_pmf_constrained(m, r);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(run_length_pmf_constrained(2, 3), invalid_context);
}

TEST_CASE("GC content pmf and windows") {
    CHECK(gc_pmf(2, 0) == doctest::Approx(0.25));
    CHECK(gc_pmf(2, 1) == doctest::Approx(0.5));
    CHECK(gc_pmf(2, 2) == doctest::Approx(0.25));
    CHECK(gc_pmf(4, 2) == doctest::Approx(0.375));
    for (int n : {1, 2, 7, 60, 120, 200}) {
        double sum = 0;
        for (int w = 0; w <= n; ++w) sum += gc_pmf(n, w);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gc_pmf(4, 5), invalid_context);

    GcWindow full = gc_window(60, 0.5);
    CHECK(full.lo == 0);
    CHECK(full.hi == 60);
    GcWindow tight = gc_window(60, 0.0);
    CHECK(tight.lo == 30);
    CHECK(tight.hi == 30);
    GcWindow w5 = gc_window(60, 0.05);  // 0.45*60 = 27 must not round away
    CHECK(w5.lo == 27);
    CHECK(w5.hi == 33);

    CHECK(gc_pmf_constrained(60, 0.0, 30) == doctest::Approx(1.0));
    CHECK(gc_pmf_constrained(4, 0.25, 2) == doctest::Approx(6.0 / 14.0));
    for (int w = 0; w <= 8; ++w)
        CHECK(gc_pmf_constrained(8, 0.5, w) == doctest::Approx(gc_pmf(8, w)));
    CHECK_THROWS_AS(gc_pmf_constrained(60, 0.0, 31), invalid_context);
}

TEST_CASE("run-count law is the un-length-biased run-length pmf") {
    CHECK(run_count_pmf(1) == doctest::Approx(0.75));
    CHECK(run_count_pmf(2) == doctest::Approx(3.0 / 16.0));
    double sum = 0, mean = 0;
    for (int r = 1; r <= 60; ++r) {
        sum += run_count_pmf(r);
        mean += r * run_count_pmf(r);
    }
    CHECK(sum + run_count_tail(60) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    // Length-biasing recovers q(r): r * P(L=r) / E[L] = q(r).
    for (int r = 1; r <= 20; ++r)
        CHECK(r * run_count_pmf(r) / (4.0 / 3.0) == doctest::Approx(run_length_pmf(r)));

    // Truncated law: m=2 gives 4/5, 1/5; length-biased gives q_2 = 2/3, 1/3.
    CHECK(run_count_pmf_constrained(2, 1) == doctest::Approx(0.8));
    CHECK(run_count_pmf_constrained(2, 2) == doctest::Approx(0.2));
    for (int m = 1; m <= 10; ++m) {
        double s = 0, em = 0;
        for (int r = 1; r <= m; ++r) {
            s += run_count_pmf_constrained(m, r);
            em += r * run_count_pmf_constrained(m, r);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        for (int r = 1; r <= m; ++r)
            CHECK(r * run_count_pmf_constrained(m, r) / em ==
                  doctest::Approx(run_length_pmf_constrained(m, r)));
    }
    CHECK_THROWS_AS(run_count_pmf(0), invalid_context);
    CHECK_THROWS_AS(run_count_pmf_constrained(3, 4), invalid_context);
}
