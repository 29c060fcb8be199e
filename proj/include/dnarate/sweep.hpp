#pragma once

#include "dnarate/gcbound.hpp"
#include "dnarate/hmm.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dnarate {

// One cell of a regime-map sweep.
struct RegimePoint {
    std::string family;    // "homopolymer" or "gc"
    double constraint = 0;  // m (homopolymer) or epsilon (gc)
    std::string kind;
    double alpha = 0;
    double base_p = 0;
    int n = 0;  // gc only
    double r_u = 0;
    double r_c = 0;
    double diff = 0;  // r_u - r_c
    double uncertainty = 0;
    int d_u = 0;  // gc only
    int d_c = 0;  // gc only
    bool achieved = true;  // homopolymer: estimator stopping rule status
};

struct HomopolymerSweepConfig {
    std::vector<int> m_list{1, 2, 3, 4};
    GrowthKind kind = GrowthKind::LinearRun;
    double alpha_start = 0.0;
    double alpha_stop = 0.3;  // inclusive
    double alpha_step = 0.005;
    double base_p = 0.01;
    EstimatorConfig estimator{1e-9, 1000, 1000000};
    int replicates = 3;  // seeds averaged per point
    int threads = 0;     // 0 = hardware concurrency
};

// One point per (m, alpha). Per-point seeds derive from (master_seed, grid
// index), so results are independent of thread count and completion order.
std::vector<RegimePoint> sweep_homopolymer(const HomopolymerSweepConfig& config,
                                           uint64_t master_seed);

struct GcSweepConfig {
    std::vector<int> n_list{60, 120};
    std::vector<double> epsilon_list{0.0, 0.05, 0.1};
    double alpha_start = 0.0;
    double alpha_stop = 9.9;  // inclusive; the model is studied on [0, 10)
    double alpha_step = 0.1;
    double base_p = 0.01;
    DPolicy dpolicy;
};

// Exact (no Monte Carlo). The unconstrained reference is evaluated as the
// epsilon = 0.5 instance of the same bound, so the epsilon = 0.5 row has
// diff identically 0.
std::vector<RegimePoint> sweep_gc(const GcSweepConfig& config);

struct Crossing {
    double alpha = 0;  // interpolated sign change
    double lo = 0;     // interval widened by per-point uncertainty
    double hi = 0;
};

// Sign changes of diff along an alpha-sorted series. Multiple crossings are
// all reported; an all-one-sign series yields an empty list.
std::vector<Crossing> find_crossing(const std::vector<RegimePoint>& series);

enum class MapFormat { Csv, Json, SvgHeatmap };

void emit_map(const std::vector<RegimePoint>& points, MapFormat format, std::ostream& out);
void emit_map_file(const std::vector<RegimePoint>& points, MapFormat format,
                   const std::string& path);

// Inverse of the CSV emitter; round-trips points exactly.
std::vector<RegimePoint> parse_map_csv(std::istream& in);

}  // namespace dnarate
