#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnarate/hmm.hpp"

#include <cmath>
#include <functional>

using namespace dnarate;

namespace {

GrowthModel linear(double alpha, double p) { return make_growth_model("linear", alpha, p); }

}  // namespace

TEST_CASE("input chain transition rule") {
    InputMarkovModel m1 = build_input_chain(1);
    // m=1 collapses to the nucleotide chain: zero diagonal, 1/3 off-diagonal.
    for (int x = 0; x < 4; ++x)
        for (int nx = 0; nx < 4; ++nx)
            CHECK(m1.B(x, nx) == doctest::Approx(x == nx ? 0.0 : 1.0 / 3.0));

    InputMarkovModel m2 = build_input_chain(2);
    CHECK(is_row_stochastic(m2.B));
    // History AA (run position 2): repeat forbidden, others 1/3 into k=1.
    int aa = m2.state_index(2, 0);
    CHECK(m2.B(aa, m2.state_index(1, 0)) == 0.0);
    CHECK(m2.B(aa, m2.state_index(2, 0)) == 0.0);
    for (int nx = 1; nx < 4; ++nx)
        CHECK(m2.B(aa, m2.state_index(1, nx)) == doctest::Approx(1.0 / 3.0));
    // History CA (run position 1): uniform quarter, repeat advances the run.
    int ca = m2.state_index(1, 0);
    CHECK(m2.B(ca, m2.state_index(2, 0)) == doctest::Approx(0.25));
    for (int nx = 1; nx < 4; ++nx)
        CHECK(m2.B(ca, m2.state_index(1, nx)) == doctest::Approx(0.25));

    CHECK_THROWS_AS(build_input_chain(0), invalid_context);
}

TEST_CASE("input chain stationary split and entropy rate") {
    // m=2: Pr(run position 2) = 1/5 (solves f = (1-f)/4).
    InputMarkovModel m2 = build_input_chain(2);
    Eigen::VectorXd pi = stationary_distribution(m2.B);
    double k2 = 0;
    for (int x = 0; x < 4; ++x) k2 += pi(m2.state_index(2, x));
    CHECK(k2 == doctest::Approx(0.2).epsilon(1e-9));

    CHECK(closed_form_entropy_rate(build_input_chain(1).B) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-9));
    CHECK(closed_form_entropy_rate(m2.B) ==
          doctest::Approx(0.2 * std::log2(3.0) + 0.8 * 2.0).epsilon(1e-9));
}

TEST_CASE("effective substitution probability") {
    GrowthModel m = linear(0.1, 0.01);
    CHECK(effective_substitution(1, 2, m) ==
          doctest::Approx(0.75 * m.rate_at_run(1) + 0.25 * m.rate_at_run(2)));
    CHECK(effective_substitution(2, 2, m) == doctest::Approx(m.rate_at_run(2)));
    CHECK(effective_substitution(1, 3, m) ==
          doctest::Approx(0.75 * m.rate_at_run(1) + (3.0 / 16.0) * m.rate_at_run(2) +
                          (1.0 / 16.0) * m.rate_at_run(3)));
    CHECK_THROWS_AS(effective_substitution(0, 2, m), invalid_context);
    CHECK_THROWS_AS(effective_substitution(3, 2, m), invalid_context);
    CHECK_THROWS_AS(effective_substitution(1, 1, make_growth_model("parabolic", 1, 0.01)),
                    invalid_context);
}

TEST_CASE("hidden Markov channel structure") {
    GrowthModel m = linear(0.05, 0.01);
    for (int mm = 1; mm <= 4; ++mm) {
        HiddenMarkovChannel hmm = build_hmm(mm, m);
        CHECK(hmm.num_states() == 16 * mm);  // noisy channel keeps all states
        CHECK(is_row_stochastic(hmm.B));
        // B = sum_y B^y entry-wise; columns of B^y only target output y.
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(hmm.num_states(), hmm.num_states());
        for (int y = 0; y < 4; ++y) {
            sum += hmm.B_sym[y];
            for (int a = 0; a < hmm.num_states(); ++a)
                for (int b = 0; b < hmm.num_states(); ++b)
                    if (hmm.B_sym[y](a, b) > 0) CHECK(hmm.states[b][2] == y);
        }
        CHECK((sum - hmm.B).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(check_ergodic(hmm.B).ok());
    }

    // m=1: every transition out of any state carries 1/3*(1-p_eff) to each of
    // the three allowed correct-output successors.
    HiddenMarkovChannel h1 = build_hmm(1, m);
    double expect = (1.0 / 3.0) * (1 - h1.p_eff[0]);
    for (int a = 0; a < h1.num_states(); ++a) {
        int correct = 0;
        for (int b = 0; b < h1.num_states(); ++b)
            if (h1.B(a, b) > 0 && h1.states[b][1] == h1.states[b][2]) {
                CHECK(h1.B(a, b) == doctest::Approx(expect));
                ++correct;
            }
        CHECK(correct == 3);
    }

    // m=2 reproduces the eight leaf weights of the input-chain transition tree:
    // p_in in {1/4 same, 1/4 change... } with p_out from p_eff(next k).
    HiddenMarkovChannel h2 = build_hmm(2, m);
    double pe1 = 0.75 * m.rate_at_run(1) + 0.25 * m.rate_at_run(2);
    double pe2 = m.rate_at_run(2);
    CHECK(h2.p_eff[0] == doctest::Approx(pe1));
    CHECK(h2.p_eff[1] == doctest::Approx(pe2));
    auto find_state = [&](int k, int x, int y) {
        for (int a = 0; a < h2.num_states(); ++a)
            if (h2.states[a][0] == k && h2.states[a][1] == x && h2.states[a][2] == y) return a;
        return -1;
    };
    int from = find_state(1, 0, 0);
    CHECK(h2.B(from, find_state(2, 0, 0)) == doctest::Approx(0.25 * (1 - pe2)));
    CHECK(h2.B(from, find_state(2, 0, 1)) == doctest::Approx(0.25 * pe2 / 3.0));
    CHECK(h2.B(from, find_state(1, 1, 1)) == doctest::Approx(0.25 * (1 - pe1)));
    CHECK(h2.B(from, find_state(1, 1, 2)) == doctest::Approx(0.25 * pe1 / 3.0));

    // Noiseless: surviving states all have matching input/output.
    HiddenMarkovChannel h0 = build_hmm(2, linear(0.0, 0.0));
    for (const auto& s : h0.states) CHECK(s[1] == s[2]);

    CHECK_THROWS_AS(build_hmm(1, make_growth_model("parabolic", 1, 0.01)), invalid_context);
}

TEST_CASE("entropy estimator matches closed forms") {
    EstimatorConfig cfg{1e-9, 1000, 1000000};

    EntropyEstimate e1 = estimate_output_entropy(build_hmm(1, linear(0, 0)), cfg, 42);
    CHECK(e1.value == doctest::Approx(std::log2(3.0)).epsilon(1e-3));

    EntropyEstimate e2 = estimate_output_entropy(build_hmm(2, linear(0, 0)), cfg, 43);
    CHECK(e2.value == doctest::Approx(1.916993).epsilon(1e-3));

    // Determinism: same seed, same bits.
    EntropyEstimate r1 = estimate_output_entropy(build_hmm(2, linear(0.05, 0.01)),
                                                 EstimatorConfig{1e-9, 1000, 20000}, 7);
    EntropyEstimate r2 = estimate_output_entropy(build_hmm(2, linear(0.05, 0.01)),
                                                 EstimatorConfig{1e-9, 1000, 20000}, 7);
    CHECK(r1.value == r2.value);
    CHECK(r1.steps == r2.steps);
    CHECK(r1.stderr_ == r2.stderr_);
    CHECK(0.0 <= r1.value);
    CHECK(r1.value <= 2.0);

    CHECK_THROWS_AS(
        estimate_output_entropy(build_hmm(1, linear(0, 0.01)), EstimatorConfig{0, 1, 1}, 1),
        invalid_context);
}

namespace {

// Exact block entropy H(Y_1..Y_L) by summing over all 4^L output strings
// with the forward recursion. Feasible for the 16-state m=1 channel.
double exact_block_entropy(const HiddenMarkovChannel& h, const Eigen::VectorXd& start, int L) {
    double acc = 0;
    std::function<void(const Eigen::VectorXd&, double, int)> dfs =
        [&](const Eigen::VectorXd& fwd, double mass, int depth) {
            if (depth == L) {
                if (mass > 0) acc -= mass * std::log2(mass);
                return;
            }
            for (int y = 0; y < 4; ++y) {
                Eigen::VectorXd nf = h.B_sym[y].transpose() * fwd;
                double nm = nf.sum();
                if (nm > 1e-300) dfs(nf, nm, depth + 1);
            }
        };
    dfs(start, 1.0, 0);
    return acc;
}

}  // namespace

TEST_CASE("estimator matches the exact entropy rate of the noisy m=1 channel") {
    // The noiseless closed forms only exercise the degenerate channel; this
    // pins the noisy case against an exact sandwich: the conditional block
    // entropy H(Y_L | Y^{L-1}) upper-bounds the rate, and conditioning
    // additionally on the initial hidden state lower-bounds it. At L = 8
    // both agree to ~1e-9 for p = 0.01.
    auto h = build_hmm(1, linear(0, 0.01));
    Eigen::VectorXd pi = stationary_distribution(h.B);
    const int L = 8;
    double upper = exact_block_entropy(h, pi, L) - exact_block_entropy(h, pi, L - 1);
    double lower = 0;
    for (int len : {L - 1, L}) {
        double tot = 0;
        for (int s = 0; s < h.num_states(); ++s) {
            if (pi[s] <= 0) continue;
            Eigen::VectorXd e0 = Eigen::VectorXd::Zero(h.num_states());
            e0[s] = 1.0;
            tot += pi[s] * exact_block_entropy(h, e0, len);
        }
        lower = (len == L - 1) ? -tot : lower + tot;
    }
    CHECK(upper == doctest::Approx(1.62772572).epsilon(1e-7));
    CHECK(upper - lower == doctest::Approx(0.0).scale(1).epsilon(1e-6));

    EntropyEstimate est =
        estimate_output_entropy(h, EstimatorConfig{1e-9, 1000, 1000000}, 4242);
    CHECK(std::abs(est.value - upper) <= std::max(1e-3, 3 * est.stderr_));
}

TEST_CASE("achievable rates") {
    CHECK(achievable_rate_unconstrained(linear(0, 0)).rate == doctest::Approx(2.0));
    CHECK(achievable_rate_unconstrained(linear(0, 0.01)).rate ==
          doctest::Approx(1.903356).epsilon(1e-5));
    CHECK(achievable_rate_unconstrained(linear(0, 0.75)).rate == doctest::Approx(0.0));
    CHECK(achievable_rate_unconstrained(linear(0, 0.01)).truncation_bound <= 2e-12);

    EstimatorConfig cfg{1e-9, 1000, 1000000};
    EntropyEstimate e1 = estimate_output_entropy(build_hmm(1, linear(0, 0)), cfg, 11);
    ConstrainedRate c1 = achievable_rate_constrained(1, linear(0, 0), e1);
    CHECK(c1.rate == doctest::Approx(std::log2(3.0)).epsilon(1e-3));

    EntropyEstimate e2 = estimate_output_entropy(build_hmm(2, linear(0, 0)), cfg, 12);
    CHECK(achievable_rate_constrained(2, linear(0, 0), e2).rate ==
          doctest::Approx(1.916993).epsilon(1e-3));

    // Saturated channel: H(P^Y) = 2, subtrahend 2, so R_c ~ 0.
    EntropyEstimate es = estimate_output_entropy(build_hmm(1, linear(0, 0.75)),
                                                 EstimatorConfig{1e-9, 1000, 200000}, 13);
    CHECK(std::abs(achievable_rate_constrained(1, linear(0, 0.75), es).rate) < 5e-3);

    // Mismatched provenance rejected.
    CHECK_THROWS_AS(achievable_rate_constrained(2, linear(0, 0), e1), invalid_context);
    CHECK_THROWS_AS(achievable_rate_constrained(1, linear(0.1, 0.01), e1), invalid_context);

    // alpha = 0: the constraint is pure cost for every m.
    for (int m = 1; m <= 6; ++m) {
        EntropyEstimate em = estimate_output_entropy(build_hmm(m, linear(0, 0.01)),
                                                     EstimatorConfig{1e-9, 1000, 200000}, 100 + m);
        double rc = achievable_rate_constrained(m, linear(0, 0.01), em).rate;
        CHECK(rc < achievable_rate_unconstrained(linear(0, 0.01)).rate);
    }
}
