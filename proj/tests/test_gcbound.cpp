#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnarate/gcbound.hpp"

#include <cmath>

using namespace dnarate;

TEST_CASE("exact binomials") {
    CHECK(binomial(60, 30) == BigCount("118264581564861424"));
    CHECK(binomial(4, -1) == 0);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(-2, 0) == 0);
    for (long n = 0; n <= 40; ++n) CHECK(binomial(n, 0) == 1);

    BinomialTable table(20);
    for (int a = 0; a <= 20; ++a)
        for (int b = -2; b <= a + 2; ++b) CHECK(table(a, b) == binomial(a, b));
}

TEST_CASE("log2 of big counts") {
    CHECK(log2_big(BigCount(1)) == 0.0);
    CHECK(log2_big(BigCount(1) << 200) == 200.0);  // exact for powers of two
    CHECK(log2_big(BigCount(3)) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    BigCount big = binomial(200, 100);
    CHECK(log2_big(big * 2) == doctest::Approx(log2_big(big) + 1.0).epsilon(1e-12));
}

TEST_CASE("unconstrained Hamming balls") {
    CHECK(hamming_ball_unconstrained(4, 2) == 13);
    for (int n = 1; n <= 10; ++n) CHECK(hamming_ball_unconstrained(n, 1) == 1);
    CHECK(hamming_ball_unconstrained(8, 9) == 65536);  // whole space
    CHECK_THROWS_AS(hamming_ball_unconstrained(4, 0), invalid_context);
}

TEST_CASE("constrained Hamming balls match brute force") {
    CHECK(hamming_ball_constrained(4, 2, 0.0, 2) == 5);
    CHECK(hamming_ball_bruteforce(4, 2, 0.0, 2) == 5);
    CHECK(hamming_ball_bruteforce(1, 2, 0.5, 0) == 4);
    CHECK(hamming_ball_bruteforce(2, 3, 0.0, 1) == 8);

    // Exhaustive oracle agreement for small n (full n <= 8 set lives in the
    // acceptance gate).
    for (int n = 1; n <= 6; ++n)
        for (double eps : {0.0, 0.125, 0.25, 0.375, 0.5})
            for (int d = 1; d <= n + 1; ++d) {
                GcWindow win = gc_window(n, eps);
                for (int w = win.lo; w <= win.hi; ++w)
                    CHECK(hamming_ball_constrained(n, d, eps, w) ==
                          hamming_ball_bruteforce(n, d, eps, w));
            }
    // n = 8 spot checks.
    for (int d : {2, 4, 9})
        CHECK(hamming_ball_constrained(8, d, 0.25, 3) == hamming_ball_bruteforce(8, d, 0.25, 3));

    CHECK_THROWS_AS(hamming_ball_bruteforce(13, 2, 0.0, 6), invalid_context);
    CHECK_THROWS_AS(hamming_ball_constrained(4, 2, 0.0, 1), invalid_context);  // w off-window
}

TEST_CASE("ball-volume structure") {
    // epsilon = 0.5 collapses to the unconstrained ball.
    for (int n : {4, 10, 30, 60})
        for (int d : {1, 2, 3, n / 2}) {
            if (d < 1) continue;
            CHECK(hamming_ball_constrained(n, d, 0.5, n / 3) ==
                  hamming_ball_unconstrained(n, d));
        }
    // Non-decreasing in d and epsilon; symmetric in w <-> n-w.
    for (int d = 1; d <= 10; ++d)
        CHECK(hamming_ball_constrained(10, d + 1, 0.2, 5) >=
              hamming_ball_constrained(10, d, 0.2, 5));
    CHECK(hamming_ball_constrained(10, 3, 0.3, 5) >= hamming_ball_constrained(10, 3, 0.1, 5));
    CHECK(hamming_ball_constrained(12, 3, 0.25, 4) == hamming_ball_constrained(12, 3, 0.25, 8));
}

TEST_CASE("constrained space size") {
    CHECK(constrained_space_size(6, 0.5) == BigCount(1) << 12);  // 4^6
    CHECK(constrained_space_size(2, 0.0) == 8);
    CHECK(constrained_space_size(4, 0.25) == 224);
}

TEST_CASE("GV rates") {
    CHECK(gv_rate_unconstrained(10, 1).rate == 2.0);
    CHECK(gv_rate_unconstrained(4, 2).rate ==
          doctest::Approx(2.0 - std::log2(13.0) / 4.0).epsilon(1e-12));
    double prev = 3;
    for (int d = 1; d <= 10; ++d) {
        double r = gv_rate_unconstrained(10, d).rate;
        CHECK(r < prev);
        prev = r;
    }

    CHECK(gv_rate_constrained(4, 2, 0.0).rate ==
          doctest::Approx(std::log2(19.2) / 4.0).epsilon(1e-12));
    CHECK(gv_rate_constrained(30, 1, 0.5).rate == 2.0);
    // epsilon = 0.5 equals the unconstrained bound.
    for (int n : {10, 25, 60})
        for (int d : {1, 3, 5})
            CHECK(gv_rate_constrained(n, d, 0.5).rate ==
                  doctest::Approx(gv_rate_unconstrained(n, d).rate).epsilon(1e-12));
    // Constraining the space at equal d never helps.
    for (int d : {1, 2, 3, 5})
        for (double eps : {0.0, 0.1, 0.2})
            CHECK(gv_rate_constrained(24, d, eps).rate <=
                  gv_rate_unconstrained(24, d).rate + 1e-12);
    // All rates within [0, 2].
    for (int d = 1; d <= 24; ++d) {
        double r = gv_rate_constrained(24, d, 0.1).rate;
        CHECK(r >= 0.0);
        CHECK(r <= 2.0);
    }
}

TEST_CASE("mean substitution and d selection") {
    GrowthModel flat = make_growth_model("parabolic", 0.0, 0.02);
    for (double eps : {0.0, 0.1, 0.5}) CHECK(mean_substitution(60, eps, flat) == doctest::Approx(0.02));

    GrowthModel par = make_growth_model("parabolic", 1.0, 0.01);
    CHECK(mean_substitution(60, 0.0, par) == doctest::Approx(0.01));
    // Unconstrained: p + alpha * Var(w/n) with Var = 1/(4n).
    CHECK(mean_substitution(60, 0.5, par) == doctest::Approx(0.01 + 1.0 / 240.0).epsilon(1e-9));
    CHECK_THROWS_AS(mean_substitution(60, 0.1, make_growth_model("linear", 0.1, 0.01)),
                    invalid_context);

    GrowthModel zero = make_growth_model("parabolic", 0.0, 0.0);
    for (auto kind : {DPolicyKind::Correct, DPolicyKind::Detect, DPolicyKind::Scaled})
        CHECK(expected_error_distance(60, 0.0, zero, {kind, 1.5}).d == 1);

    GrowthModel p01 = make_growth_model("parabolic", 0.0, 0.01);
    CHECK(expected_error_distance(60, 0.0, p01, {DPolicyKind::Correct, 1.0}).d == 3);
    GrowthModel p333 = make_growth_model("parabolic", 0.0, 1.0 / 30.0);
    CHECK(expected_error_distance(60, 0.0, p333, {DPolicyKind::Correct, 1.0}).d == 5);
    CHECK(expected_error_distance(60, 0.0, p01, {DPolicyKind::Detect, 1.0}).d == 2);
}
