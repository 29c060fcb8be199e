#pragma once

#include "dnarate/channels.hpp"
#include "dnarate/seqio.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dnarate {

struct Constraint {
    enum class Type { None, MaxRun, GcWindow } type = Type::None;
    int m = 0;          // MaxRun
    double epsilon = 0;  // GcWindow

    static Constraint none() { return {}; }
    static Constraint max_run(int m) { return {Type::MaxRun, m, 0}; }
    static Constraint gc(double epsilon) { return {Type::GcWindow, 0, epsilon}; }
    std::string describe() const;
};

struct Codebook {
    int n = 0;
    Constraint constraint;
    std::vector<std::string> sequences;
    std::string law;  // generation law tag
    uint64_t seed = 0;
};

// m-constrained sequences come from the run-limited Markov chain started at
// its stationary law; unconstrained sequences are uniform over 4^n;
// epsilon-constrained sequences are uniform over the constrained space
// (rejection sampling for wide windows, a constant-composition sampler for
// narrow ones).
Codebook generate_codewords(const Constraint& constraint, int n, long count, uint64_t seed);

int max_run_length(const std::string& seq);
int gc_count(const std::string& seq);
bool satisfies(const std::string& seq, const Constraint& constraint);

// True channel: each symbol's substitution probability is p_r of the final
// run length of its position in the input (not the HMM marginalization).
std::string apply_runlength_channel(const std::string& codeword, const GrowthModel& model,
                                    uint64_t seed);

// Compound channel: every symbol of a sequence with GC content w flips with
// the same p_w.
std::string apply_gc_channel(const std::string& codeword, const GrowthModel& model,
                             uint64_t seed);

// Final run length at every position.
std::vector<int> run_lengths(const std::string& seq);

struct RunLengthStats {
    std::map<int, long> position_counts;  // positions inside runs of length r
    long total_positions = 0;
    std::map<int, long> run_counts;  // number of runs of length r
    // A fixed number (0.4n) of complete runs per sequence, skipping the run
    // on the left boundary: these samples are exactly i.i.d. (fixed count =
    // stopping time; positions within one run are correlated and
    // variable-count selections are boundary-biased), so chi-square tests
    // belong here.
    std::map<int, long> interior_run_counts;
    long total_interior_runs = 0;
    double pmf(int r) const;
};

// Distribution of the run length containing a uniformly random position.
// Positions within `interior_margin` of either end are excluded from
// position_counts (the asymptotic law is checked on interior positions);
// run_counts counts every run at its actual length.
RunLengthStats measure_runlength_stats(const Codebook& codebook, int interior_margin = 12);

struct GcStats {
    std::map<int, long> counts;  // sequences per GC content
    long total = 0;
};
GcStats measure_gc_stats(const Codebook& codebook);

// Pearson chi-square against expected proportions; bins with expected count
// below min_expected merge into their neighbor.
struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double critical = 0;  // at the given significance
    bool pass = false;
};
ChiSquareResult chi_square_test(const std::vector<long>& observed,
                                const std::vector<double>& expected_probs, long total,
                                double significance, double min_expected = 5.0);

struct SynthEvent {
    std::string kind;  // "sub", "ins", "del"
    int ref_pos;       // insertions record the reference position they follow
    char from = 0;
    char to = 0;
};

struct SynthRead {
    std::string read_id;
    std::string ref_id;
    int ref_index = 0;
    std::string seq;
    std::vector<SynthEvent> events;
};

struct SynthConfig {
    GrowthModel sub_model;        // run- or GC-kind law for substitutions
    double insertion_rate = 0;    // per position, uniform symbol after it
    double deletion_rate = 0;     // per position
    double mean_depth = 10;       // expected reads per reference
    double gc_bias = 0;           // depth multiplier 1 - gc_bias*(w/n-0.5)^2
};

struct SynthDataset {
    std::vector<SeqRecord> references;
    std::vector<SynthRead> reads;
};

SynthDataset synth_dataset(const Codebook& references, const SynthConfig& config,
                           uint64_t seed);

// reference FASTA + reads FASTA + JSONL ground-truth ledger
// ({read_id, ref_id, events:[{kind, ref_pos, from, to}]}).
void write_synth_dataset(const SynthDataset& ds, const std::string& ref_path,
                         const std::string& reads_path, const std::string& ledger_path);

}  // namespace dnarate
