#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dnarate {

// Substitution rates saturate here: at 0.75 the output symbol is independent
// of the input.
inline constexpr double kRateCap = 0.75;

enum class GrowthKind {
    LinearRun,       // min(cap, alpha*(r-1) + p)
    ExponentialRun,  // min(cap, p * exp(alpha*(r-1)))
    LogarithmicRun,  // min(cap, alpha*ln(r) + p)
    ParabolicGc,     // min(cap, alpha*(w/n - 0.5)^2 + p)
};

struct GrowthModel {
    GrowthKind kind = GrowthKind::LinearRun;
    double alpha = 0.0;   // growth factor, >= 0
    double base_p = 0.0;  // base substitution probability, in [0, cap]

    bool is_run_model() const { return kind != GrowthKind::ParabolicGc; }
    std::string kind_name() const;

    // Substitution rate at run-length r (run models). r >= 1.
    double rate_at_run(int r) const;
    // Substitution rate at GC content w of n (parabolic model). 0 <= w <= n.
    double rate_at_gc(int w, int n) const;
};

GrowthModel make_growth_model(const std::string& kind, double alpha, double base_p);

// Entropy in bits of a quaternary variable that keeps its value with
// probability 1-p and moves to each of the other three values with
// probability p/3. Domain [0, 0.75]; H(0) = 0, H(0.75) = 2.
double quaternary_entropy(double p);

// Asymptotic probability that a uniformly random position lies in a run of
// length exactly r: q(r) = r * (1/4)^(r-1) * (9/16).
double run_length_pmf(int r);

// q(r) renormalized over r = 1..m.
double run_length_pmf_constrained(int m, int r);

// Exact tail mass sum_{r > cutoff} q(r).
double run_length_tail(int cutoff);

// Probability that a run (counted once, not per position) has length r.
// Unbounded: geometric (3/4) * (1/4)^(r-1); the position law q(r) is its
// length-biased version.
double run_count_pmf(int r);

// Run-count law truncated at m and renormalized; its length-biased version
// is q_m(r).
double run_count_pmf_constrained(int m, int r);

// Tail mass sum_{r > cutoff} of the unbounded run-count law: (1/4)^cutoff.
double run_count_tail(int cutoff);

// Mean of the unbounded run-length pmf; closed form 5/3.
double run_length_mean();

// Proportion of length-n sequences with GC content w: C(n,w) / 2^n.
double gc_pmf(int n, int w);

// Admissible GC window for the epsilon constraint:
// ceil((0.5-eps)*n) <= w <= floor((0.5+eps)*n).
struct GcWindow {
    int lo;
    int hi;
    bool contains(int w) const { return w >= lo && w <= hi; }
};
GcWindow gc_window(int n, double epsilon);

// q(w) renormalized over the epsilon window.
double gc_pmf_constrained(int n, double epsilon, int w);

struct invalid_context : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace dnarate
