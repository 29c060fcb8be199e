#include "dnarate/gcbound.hpp"

#include <cmath>

namespace dnarate {

double log2_big(const BigCount& x) {
    if (x <= 0) throw invalid_context("log2 of a nonpositive count");
    unsigned bits = boost::multiprecision::msb(x) + 1;
    if (bits <= 64) return std::log2(double(x.convert_to<uint64_t>())) + 0.0;
    unsigned shift = bits - 64;
    uint64_t top = BigCount(x >> shift).convert_to<uint64_t>();
    return double(shift) + double(std::log2((long double)top));
}

BigCount binomial(long n, long k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    BigCount r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BinomialTable::BinomialTable(int n) : n_(n), zero_(0) {
    rows_.resize(n + 1);
    for (int a = 0; a <= n; ++a) {
        rows_[a].resize(a + 1);
        rows_[a][0] = 1;
        rows_[a][a] = 1;
        for (int b = 1; b < a; ++b) rows_[a][b] = rows_[a - 1][b - 1] + rows_[a - 1][b];
    }
}

const BigCount& BinomialTable::operator()(int a, int b) const {
    if (a < 0 || a > n_ || b < 0 || b > a) return zero_;
    return rows_[a][b];
}

BigCount hamming_ball_unconstrained(int n, int d) {
    if (n < 1) throw invalid_context("length must be >= 1");
    if (d < 1 || d > n + 1) throw invalid_context("distance d outside [1, n+1]");
    BinomialTable table(n);
    BigCount sum = 0, pow3 = 1;
    for (int i = 0; i <= d - 1; ++i) {
        sum += table(n, i) * pow3;
        pow3 *= 3;
    }
    return sum;
}

BigCount hamming_ball_constrained(int n, int d, double epsilon, int w, const BinomialTable& table) {
    if (d < 1 || d > n + 1) throw invalid_context("distance d outside [1, n+1]");
    GcWindow win = gc_window(n, epsilon);
    if (!win.contains(w)) throw invalid_context("center GC content outside the epsilon window");

    BigCount total = 0;
    for (int r = 0; r <= d - 1; ++r) {
        int dlo = std::max(win.lo - w, -r);
        int dhi = std::min(win.hi - w, r);
        for (int delta = dlo; delta <= dhi; ++delta) {
            int ilo = std::max(0, delta);
            int ihi = std::min(delta + w, r);
            for (int ip = ilo; ip <= ihi; ++ip) {
                // ip GC-increasing, ip-delta GC-decreasing, rest preserving.
                const BigCount& dec = table(w, ip - delta);
                if (dec == 0) continue;
                const BigCount& inc = table(n - w, ip);
                if (inc == 0) continue;
                const BigCount& pres = table(n - 2 * ip + delta, r - 2 * ip + delta);
                if (pres == 0) continue;
                total += dec * inc * pres * (BigCount(1) << (2 * ip - delta));
            }
        }
    }
    return total;
}

BigCount hamming_ball_constrained(int n, int d, double epsilon, int w) {
    BinomialTable table(n);
    return hamming_ball_constrained(n, d, epsilon, w, table);
}

BigCount hamming_ball_bruteforce(int n, int d, double epsilon, int w) {
    if (n > 12) throw invalid_context("brute-force ball limited to n <= 12");
    if (n < 1) throw invalid_context("length must be >= 1");
    if (d < 1 || d > n + 1) throw invalid_context("distance d outside [1, n+1]");
    GcWindow win = gc_window(n, epsilon);
    if (!win.contains(w)) throw invalid_context("center GC content outside the epsilon window");

    // 2-bit encoding A=0, C=1, G=2, T=3; GC symbols are codes 1 and 2.
    std::vector<int> center(n);
    for (int i = 0; i < n; ++i) center[i] = (i < w) ? 2 : 0;

    BigCount count = 0;
    uint64_t total = uint64_t(1) << (2 * n);
    for (uint64_t code = 0; code < total; ++code) {
        int dist = 0, gc = 0;
        uint64_t c = code;
        for (int i = 0; i < n; ++i) {
            int sym = int(c & 3);
            c >>= 2;
            if (sym != center[i]) ++dist;
            if (sym == 1 || sym == 2) ++gc;
        }
        if (dist <= d - 1 && win.contains(gc)) ++count;
    }
    return count;
}

BigCount constrained_space_size(int n, double epsilon) {
    if (n < 1) throw invalid_context("length must be >= 1");
    GcWindow win = gc_window(n, epsilon);
    BigCount sum = 0;
    for (int w = win.lo; w <= win.hi; ++w) sum += binomial(n, w);
    return sum << n;
}

std::string DPolicy::describe() const {
    switch (kind) {
        case DPolicyKind::Correct: return "correct";
        case DPolicyKind::Detect: return "detect";
        case DPolicyKind::Scaled: return "scaled:" + std::to_string(scale);
    }
    return "?";
}

GVResult gv_rate_unconstrained(int n, int d) {
    if (d < 1 || d > n) throw invalid_context("distance d outside [1, n]");
    GVResult res;
    res.n = n;
    res.d = d;
    res.epsilon = 0.5;
    res.numerator = BigCount(1) << (2 * n);
    res.denominator = hamming_ball_unconstrained(n, d);
    res.rate = 2.0 - log2_big(res.denominator) / n;
    return res;
}

GVResult gv_rate_constrained(int n, int d, double epsilon) {
    if (d < 1 || d > n) throw invalid_context("distance d outside [1, n]");
    GcWindow win = gc_window(n, epsilon);
    if (win.lo > win.hi) throw invalid_context("empty GC window");

    BinomialTable table(n);
    // M >= [sum_w C(n,w) 2^n] * [sum_s C(n,s)] / [sum_w C(n,w) |V_eps(w)|]:
    // the average ball volume's weights q_eps(w) = C(n,w) / sum_s C(n,s) are
    // cleared of their denominator so both sides stay exact integers.
    BigCount space = 0, weight_sum = 0, weighted_ball = 0;
    for (int w = win.lo; w <= win.hi; ++w) {
        const BigCount& c = table(n, w);
        space += c;
        weight_sum += c;
        weighted_ball += c * hamming_ball_constrained(n, d, epsilon, w, table);
    }
    GVResult res;
    res.n = n;
    res.d = d;
    res.epsilon = epsilon;
    res.numerator = (space << n) * weight_sum;
    res.denominator = weighted_ball;
    res.rate = (log2_big(res.numerator) - log2_big(res.denominator)) / n;
    return res;
}

double mean_substitution(int n, double epsilon, const GrowthModel& model) {
    if (model.kind != GrowthKind::ParabolicGc)
        throw invalid_context("mean substitution requires the parabolic GC model");
    GcWindow win = gc_window(n, epsilon);
    double mean = 0;
    for (int w = win.lo; w <= win.hi; ++w)
        mean += gc_pmf_constrained(n, epsilon, w) * model.rate_at_gc(w, n);
    return mean;
}

DSelection expected_error_distance(int n, double epsilon, const GrowthModel& model,
                                   const DPolicy& policy) {
    DSelection sel;
    sel.mean_p = mean_substitution(n, epsilon, model);
    sel.policy = policy.describe();
    double pn = sel.mean_p * n;
    switch (policy.kind) {
        case DPolicyKind::Correct: sel.d = 2 * int(std::ceil(pn - 1e-12)) + 1; break;
        case DPolicyKind::Detect: sel.d = int(std::ceil(pn - 1e-12)) + 1; break;
        case DPolicyKind::Scaled: sel.d = int(std::ceil(policy.scale * pn - 1e-12)) + 1; break;
    }
    if (sel.d < 1) sel.d = 1;
    return sel;
}

}  // namespace dnarate
