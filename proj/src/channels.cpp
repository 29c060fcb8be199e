#include "dnarate/channels.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

namespace dnarate {

namespace {

using boost::multiprecision::cpp_int;

cpp_int binom_exact(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    cpp_int r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

}  // namespace

std::string GrowthModel::kind_name() const {
    switch (kind) {
        case GrowthKind::LinearRun: return "linear-run";
        case GrowthKind::ExponentialRun: return "exponential-run";
        case GrowthKind::LogarithmicRun: return "logarithmic-run";
        case GrowthKind::ParabolicGc: return "parabolic-gc";
    }
    return "?";
}

GrowthModel make_growth_model(const std::string& kind, double alpha, double base_p) {
    GrowthModel m;
    if (kind == "linear" || kind == "linear-run") m.kind = GrowthKind::LinearRun;
    else if (kind == "exponential" || kind == "exponential-run") m.kind = GrowthKind::ExponentialRun;
    else if (kind == "logarithmic" || kind == "logarithmic-run") m.kind = GrowthKind::LogarithmicRun;
    else if (kind == "parabolic" || kind == "parabolic-gc") m.kind = GrowthKind::ParabolicGc;
    else throw invalid_context("unknown growth kind: " + kind);
    if (alpha < 0) throw invalid_context("growth factor must be nonnegative");
    if (base_p < 0 || base_p > kRateCap) throw invalid_context("base_p must lie in [0, 0.75]");
    m.alpha = alpha;
    m.base_p = base_p;
    return m;
}

double GrowthModel::rate_at_run(int r) const {
    if (!is_run_model()) throw invalid_context("run-length context on a GC model");
    if (r < 1) throw invalid_context("run-length must be >= 1");
    double v;
    switch (kind) {
        case GrowthKind::LinearRun: v = alpha * (r - 1) + base_p; break;
        case GrowthKind::ExponentialRun: v = base_p * std::exp(alpha * (r - 1)); break;
        case GrowthKind::LogarithmicRun: v = alpha * std::log(double(r)) + base_p; break;
        default: v = base_p; break;
    }
    return std::min(kRateCap, v);
}

double GrowthModel::rate_at_gc(int w, int n) const {
    if (kind != GrowthKind::ParabolicGc) throw invalid_context("GC context on a run model");
    if (n < 1 || w < 0 || w > n) throw invalid_context("GC content outside [0, n]");
    double x = double(w) / n - 0.5;
    return std::min(kRateCap, alpha * x * x + base_p);
}

double quaternary_entropy(double p) {
    if (p < 0 || p > kRateCap) throw invalid_context("probability outside [0, 0.75]");
    if (p == 0) return 0.0;
    return -((1 - p) * std::log2(1 - p) + p * std::log2(p / 3.0));
}

double run_length_pmf(int r) {
    if (r < 1) throw invalid_context("run-length must be >= 1");
    return r * std::pow(0.25, r - 1) * (9.0 / 16.0);
}

double run_length_pmf_constrained(int m, int r) {
    if (m < 1) throw invalid_context("constraint m must be >= 1");
    if (r < 1 || r > m) throw invalid_context("run-length outside [1, m]");
    double norm = 0;
    for (int s = 1; s <= m; ++s) norm += run_length_pmf(s);
    return run_length_pmf(r) / norm;
}

double run_length_tail(int cutoff) {
    if (cutoff < 0) throw invalid_context("cutoff must be >= 0");
    // sum_{r>R} r x^{r-1} (1-x)^2 = x^R (R+1-Rx) with x = 1/4
    return std::pow(0.25, cutoff) * (1.0 + 0.75 * cutoff);
}

double run_length_mean() { return 5.0 / 3.0; }

double run_count_pmf(int r) {
    if (r < 1) throw invalid_context("run-length must be >= 1");
    return 0.75 * std::pow(0.25, r - 1);
}

double run_count_pmf_constrained(int m, int r) {
    if (m < 1) throw invalid_context("constraint m must be >= 1");
    if (r < 1 || r > m) throw invalid_context("run-length outside [1, m]");
    return run_count_pmf(r) / (1.0 - std::pow(0.25, m));
}

double run_count_tail(int cutoff) {
    if (cutoff < 0) throw invalid_context("cutoff must be >= 0");
    return std::pow(0.25, cutoff);
}

double gc_pmf(int n, int w) {
    if (n < 1) throw invalid_context("length must be >= 1");
    if (w < 0 || w > n) throw invalid_context("GC content outside [0, n]");
    cpp_int num = binom_exact(n, w);
    return num.convert_to<double>() * std::pow(2.0, -n);
}

GcWindow gc_window(int n, double epsilon) {
    if (epsilon < 0 || epsilon > 0.5) throw invalid_context("epsilon outside [0, 0.5]");
    // Nudge before rounding so exact-rational boundaries like 0.45*60 = 27
    // are not pushed across by floating-point noise.
    int lo = int(std::ceil((0.5 - epsilon) * n - 1e-9));
    int hi = int(std::floor((0.5 + epsilon) * n + 1e-9));
    return {lo, hi};
}

double gc_pmf_constrained(int n, double epsilon, int w) {
    GcWindow win = gc_window(n, epsilon);
    if (!win.contains(w)) throw invalid_context("GC content outside the epsilon window");
    cpp_int num = binom_exact(n, w);
    cpp_int den = 0;
    for (int s = win.lo; s <= win.hi; ++s) den += binom_exact(n, s);
    return num.convert_to<double>() / den.convert_to<double>();
}

}  // namespace dnarate
