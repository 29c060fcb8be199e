#pragma once

#include "dnarate/align.hpp"
#include "dnarate/seqio.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace dnarate {

struct PrimerTrim {
    int prefix = 0;
    int suffix = 0;
};

struct Reference {
    std::string id;
    std::string sequence;  // as loaded
    std::string payload;   // sequence minus primer prefix/suffix
    int gc = 0;            // payload GC count
    std::vector<int> run;  // payload run length per position
};

struct ReferenceSet {
    std::vector<Reference> refs;
    int k = 12;  // index k-mer size
    std::unordered_map<uint64_t, std::vector<int>> index;
    long skipped = 0;
    std::vector<std::string> warnings;
};

ReferenceSet build_reference_set(const std::vector<SeqRecord>& records, PrimerTrim trim,
                                 int k = 12);
ReferenceSet load_references(const std::string& path, SeqFormat format, PrimerTrim trim,
                             int k = 12);

struct ReadSet {
    std::vector<SeqRecord> reads;
    long skipped = 0;
    std::vector<std::string> warnings;
};
ReadSet load_reads(const std::string& path, SeqFormat format = SeqFormat::Auto);

struct AssignConfig {
    int max_candidates = 8;
    double max_edit_fraction = 0.3;
};

struct Assignment {
    int ref_index = -1;  // -1 = unassigned
    int distance = -1;
    bool assigned() const { return ref_index >= 0; }
};

// Candidates ranked by shared k-mer count; winner by minimum banded edit
// distance, tie-break (distance, reference id); unassigned beyond
// max_edit_fraction * payload length.
Assignment assign_read(const std::string& read, const ReferenceSet& refset,
                       const AssignConfig& config);

// One stratum of an error-profile report.
struct StratumStats {
    std::string label;
    long denominator = 0;  // aligned reference bases in the stratum
    double sub_rate = 0, ins_rate = 0, del_rate = 0;
    double sub_std = 0, ins_std = 0, del_std = 0;
    bool reliable = false;
};

struct ErrorProfileReport {
    std::string axis;  // "runlength" or "gc"
    bool read_weighted = true;
    long min_denominator = 1000;
    std::vector<StratumStats> strata;
};

struct CoverageBin {
    std::string label;
    long refs = 0;
    double mean_rel_abundance = 0;  // reads-per-reference / global mean
    double stddev = 0;
};

struct CompositionReport {
    std::map<int, long> run_length_hist;  // runs per length, over references
    std::map<int, long> gc_hist_refs;     // references per GC count
    std::map<int, long> gc_hist_reads;    // assigned reads per reference GC count
    std::vector<CoverageBin> coverage_vs_gc;
};

struct ProfileConfig {
    AssignConfig assign;
    int max_run = 6;
    double gc_lo = 0.35;
    double gc_hi = 0.65;
    double gc_bin_width = 0.05;
    bool read_weighted = true;
    long min_denominator = 1000;
    int threads = 0;  // 0 = hardware default
};

struct ProfileResult {
    long reads_total = 0;
    long reads_assigned = 0;
    ErrorProfileReport by_runlength;
    ErrorProfileReport by_gc;
    CompositionReport composition;
    std::vector<Assignment> assignments;  // parallel to the input reads
};

// Full pipeline: assign, align, classify, report. Deterministic regardless of
// thread count.
ProfileResult profile_reads(const ReferenceSet& refset, const std::vector<SeqRecord>& reads,
                            const ProfileConfig& config);

CompositionReport composition_reports(const ReferenceSet& refset,
                                      const std::vector<SeqRecord>& reads,
                                      const std::vector<Assignment>& assignments,
                                      const ProfileConfig& config);

// CSV: stratum,kind,rate_percent,stddev_percent,denominator,reliable
std::string profile_csv(const ErrorProfileReport& report);
std::string profile_json(const ProfileResult& result);
std::string composition_csv(const CompositionReport& report);

}  // namespace dnarate
