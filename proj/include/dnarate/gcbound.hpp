#pragma once

#include "dnarate/channels.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace dnarate {

// Exact nonnegative integer for space sizes and ball volumes (values up to
// ~2^240 appear for n = 60..120). No rounding anywhere in counting.
using BigCount = boost::multiprecision::cpp_int;

// log2 with relative error well below 1e-12; exact for powers of two.
double log2_big(const BigCount& x);

// Exact C(n,k); 0 for k < 0, k > n, or n < 0.
BigCount binomial(long n, long k);

// Pascal-triangle table for the ball-volume sums; rows 0..n.
class BinomialTable {
public:
    explicit BinomialTable(int n);
    const BigCount& operator()(int a, int b) const;

private:
    int n_;
    std::vector<std::vector<BigCount>> rows_;
    BigCount zero_;
};

// sum_{i=0}^{d-1} C(n,i) 3^i, the radius d-1 Hamming ball in {A,C,G,T}^n.
BigCount hamming_ball_unconstrained(int n, int d);

// Number of sequences in the epsilon-constrained space within Hamming
// distance d-1 of a center with GC content w. Triple sum over distance r,
// net GC change Delta, and GC-increasing substitution count i+; out-of-range
// binomials evaluate to zero.
BigCount hamming_ball_constrained(int n, int d, double epsilon, int w);
BigCount hamming_ball_constrained(int n, int d, double epsilon, int w, const BinomialTable& table);

// Exhaustive oracle: enumerates all 4^n sequences around the canonical
// center G^w A^(n-w). Rejects n > 12.
BigCount hamming_ball_bruteforce(int n, int d, double epsilon, int w);

// sum_{w in window} C(n,w) 2^n.
BigCount constrained_space_size(int n, double epsilon);

enum class DPolicyKind { Correct, Detect, Scaled };

struct DPolicy {
    DPolicyKind kind = DPolicyKind::Correct;
    double scale = 1.0;  // only for Scaled: d = ceil(scale * mean_p * n) + 1

    std::string describe() const;
};

struct DSelection {
    int d = 1;
    double mean_p = 0;
    std::string policy;
};

struct GVResult {
    int n = 0;
    int d = 1;
    double epsilon = 0.5;
    BigCount numerator;
    BigCount denominator;
    double rate = 0;  // (1/n) log2(numerator/denominator)
    double mean_p = 0;
    std::string dpolicy;
};

// R_u^l = 2 - (1/n) log2(ball).
GVResult gv_rate_unconstrained(int n, int d);

// R_c^l from the ratio of the constrained space size to the average ball
// volume, kept as an exact integer rational (the GC weights are cleared by
// their common denominator sum_s C(n,s)) until the final log2.
GVResult gv_rate_constrained(int n, int d, double epsilon);

// Average substitution probability sum_{w in window} q_eps(w) p_w for the
// parabolic model; epsilon = 0.5 gives the unconstrained mean.
double mean_substitution(int n, double epsilon, const GrowthModel& model);

// Minimum-distance selection from the expected error count mean_p * n:
// correct: d = 2*ceil(pn)+1, detect: d = ceil(pn)+1, scaled: d = ceil(c*pn)+1.
DSelection expected_error_distance(int n, double epsilon, const GrowthModel& model,
                                   const DPolicy& policy);

}  // namespace dnarate
