#include "dnarate/empirical.hpp"

#include "dnarate/channels.hpp"
#include "dnarate/simulate.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dnarate {

namespace {

int sym2(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
    }
    return -1;
}

void for_each_kmer(const std::string& seq, int k, const std::function<void(uint64_t)>& fn) {
    if (int(seq.size()) < k) return;
    const uint64_t mask = (k == 32) ? ~0ULL : ((1ULL << (2 * k)) - 1);
    uint64_t code = 0;
    int have = 0;
    for (char c : seq) {
        int s = sym2(c);
        if (s < 0) {
            have = 0;
            continue;
        }
        code = ((code << 2) | uint64_t(s)) & mask;
        if (++have >= k) fn(code);
    }
}

// Per-reference, per-stratum event counters, merged associatively.
struct StratumCounts {
    long denom = 0, sub = 0, ins = 0, del = 0;
};

struct RefCounts {
    std::vector<StratumCounts> by_run;  // index r-1, r = 1..max_run
    long reads = 0;
    long matches = 0;  // whole-reference totals for the GC report
    StratumCounts total;
};

struct Accumulator {
    std::vector<RefCounts> per_ref;
    explicit Accumulator(size_t nrefs, int max_run) : per_ref(nrefs) {
        for (auto& rc : per_ref) rc.by_run.resize(max_run);
    }
    void merge(const Accumulator& other) {
        for (size_t i = 0; i < per_ref.size(); ++i) {
            auto& a = per_ref[i];
            const auto& b = other.per_ref[i];
            a.reads += b.reads;
            a.matches += b.matches;
            a.total.denom += b.total.denom;
            a.total.sub += b.total.sub;
            a.total.ins += b.total.ins;
            a.total.del += b.total.del;
            for (size_t r = 0; r < a.by_run.size(); ++r) {
                a.by_run[r].denom += b.by_run[r].denom;
                a.by_run[r].sub += b.by_run[r].sub;
                a.by_run[r].ins += b.by_run[r].ins;
                a.by_run[r].del += b.by_run[r].del;
            }
        }
    }
};

// Rate and read-weighted across-reference stddev for one stratum.
void finalize_stratum(const std::vector<std::pair<double, StratumCounts>>& per_ref_weighted,
                      StratumStats& out, long min_denominator) {
    long denom = 0;
    long sub = 0, ins = 0, del = 0;
    for (const auto& [w, c] : per_ref_weighted) {
        (void)w;
        denom += c.denom;
        sub += c.sub;
        ins += c.ins;
        del += c.del;
    }
    out.denominator = denom;
    out.reliable = denom >= min_denominator;
    if (denom == 0) return;
    out.sub_rate = double(sub) / denom;
    out.ins_rate = double(ins) / denom;
    out.del_rate = double(del) / denom;

    // Weighted across-reference spread; weight = stratum denominator of the
    // reference (proportional to its read share).
    double wsum = 0, vs = 0, vi = 0, vd = 0;
    for (const auto& [w, c] : per_ref_weighted) {
        (void)w;
        if (c.denom == 0) continue;
        double weight = double(c.denom);
        wsum += weight;
        double rs = double(c.sub) / c.denom - out.sub_rate;
        double ri = double(c.ins) / c.denom - out.ins_rate;
        double rd = double(c.del) / c.denom - out.del_rate;
        vs += weight * rs * rs;
        vi += weight * ri * ri;
        vd += weight * rd * rd;
    }
    if (wsum > 0) {
        out.sub_std = std::sqrt(vs / wsum);
        out.ins_std = std::sqrt(vi / wsum);
        out.del_std = std::sqrt(vd / wsum);
    }
}

std::string gc_bin_label(double lo, double hi) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "[" << lo << "," << hi << ")";
    return os.str();
}

}  // namespace

ReferenceSet build_reference_set(const std::vector<SeqRecord>& records, PrimerTrim trim,
                                 int k) {
    if (trim.prefix < 0 || trim.suffix < 0) throw invalid_context("negative primer trim");
    if (k < 4 || k > 32) throw invalid_context("index k must lie in [4, 32]");
    ReferenceSet set;
    set.k = k;
    for (const auto& rec : records) {
        if (int(rec.seq.size()) <= trim.prefix + trim.suffix) {
            ++set.skipped;
            set.warnings.push_back("reference '" + rec.id + "' shorter than its primers");
            continue;
        }
        Reference ref;
        ref.id = rec.id;
        ref.sequence = rec.seq;
        ref.payload = rec.seq.substr(trim.prefix, rec.seq.size() - trim.prefix - trim.suffix);
        ref.gc = gc_count(ref.payload);
        ref.run = run_lengths(ref.payload);
        set.refs.push_back(std::move(ref));
    }
    for (size_t i = 0; i < set.refs.size(); ++i)
        for_each_kmer(set.refs[i].payload, k,
                      [&](uint64_t code) { set.index[code].push_back(int(i)); });
    for (auto& [code, hits] : set.index) {
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    }
    return set;
}

ReferenceSet load_references(const std::string& path, SeqFormat format, PrimerTrim trim,
                             int k) {
    LoadResult loaded = load_sequences(path, format, true);
    ReferenceSet set = build_reference_set(loaded.records, trim, k);
    set.skipped += loaded.skipped;
    set.warnings.insert(set.warnings.begin(), loaded.warnings.begin(), loaded.warnings.end());
    return set;
}

ReadSet load_reads(const std::string& path, SeqFormat format) {
    LoadResult loaded = load_sequences(path, format, true);
    ReadSet reads;
    reads.reads = std::move(loaded.records);
    reads.skipped = loaded.skipped;
    reads.warnings = std::move(loaded.warnings);
    return reads;
}

Assignment assign_read(const std::string& read, const ReferenceSet& refset,
                       const AssignConfig& config) {
    std::unordered_map<int, int> shared;
    for_each_kmer(read, refset.k, [&](uint64_t code) {
        auto it = refset.index.find(code);
        if (it == refset.index.end()) return;
        for (int ri : it->second) ++shared[ri];
    });
    std::vector<std::pair<int, int>> ranked(shared.begin(), shared.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (int(ranked.size()) > config.max_candidates) ranked.resize(config.max_candidates);

    Assignment best;
    for (const auto& [ri, count] : ranked) {
        (void)count;
        const std::string& payload = refset.refs[ri].payload;
        int limit = int(config.max_edit_fraction * payload.size());
        auto dist = banded_edit_distance(read, payload, limit);
        if (!dist) continue;
        if (!best.assigned() || *dist < best.distance ||
            (*dist == best.distance &&
             refset.refs[ri].id < refset.refs[best.ref_index].id)) {
            best.ref_index = ri;
            best.distance = *dist;
        }
    }
    return best;
}

ProfileResult profile_reads(const ReferenceSet& refset, const std::vector<SeqRecord>& reads,
                            const ProfileConfig& config) {
    if (refset.refs.empty()) throw invalid_context("empty reference set");
    ProfileResult result;
    result.reads_total = long(reads.size());
    result.assignments.resize(reads.size());

    int nthreads = config.threads > 0 ? config.threads
                                      : int(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = std::max(1, std::min<int>(nthreads, 64));

    std::vector<Accumulator> accs(nthreads, Accumulator(refset.refs.size(), config.max_run));
    std::atomic<size_t> cursor{0};

    auto worker = [&](int tid) {
        Accumulator& acc = accs[tid];
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= reads.size()) break;
            Assignment a = assign_read(reads[i].seq, refset, config.assign);
            result.assignments[i] = a;
            if (!a.assigned()) continue;
            const Reference& ref = refset.refs[a.ref_index];
            AlignmentRecord rec = align_global(reads[i].seq, ref.payload);
            RefCounts& rc = acc.per_ref[a.ref_index];
            ++rc.reads;
            for (const auto& op : rec.ops) {
                int pos = op.ref_pos;
                if (op.kind == EditKind::Insertion) {
                    // An inserted base equal to the next reference base is
                    // indistinguishable from extending that run (leftmost
                    // normalization parks it just before the run), so
                    // attribute it to the run it extends; otherwise to the
                    // base it follows. This keeps a uniform injected
                    // insertion rate uniform across run-length strata.
                    if (pos + 1 < int(ref.payload.size()) && op.to == ref.payload[pos + 1])
                        pos = pos + 1;
                    else
                        pos = std::max(0, pos);
                }
                int r = ref.run[pos];
                StratumCounts* s = r <= config.max_run ? &rc.by_run[r - 1] : nullptr;
                switch (op.kind) {
                    case EditKind::Match:
                        if (s) ++s->denom;
                        ++rc.total.denom;
                        ++rc.matches;
                        break;
                    case EditKind::Substitution:
                        if (s) {
                            ++s->denom;
                            ++s->sub;
                        }
                        ++rc.total.denom;
                        ++rc.total.sub;
                        break;
                    case EditKind::Deletion:
                        if (s) {
                            ++s->denom;
                            ++s->del;
                        }
                        ++rc.total.denom;
                        ++rc.total.del;
                        break;
                    case EditKind::Insertion:
                        if (s) ++s->ins;
                        ++rc.total.ins;
                        break;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker, t);
    worker(0);
    for (auto& t : pool) t.join();
    for (int t = 1; t < nthreads; ++t) accs[0].merge(accs[t]);
    const Accumulator& acc = accs[0];

    for (const auto& a : result.assignments)
        if (a.assigned()) ++result.reads_assigned;

    // Run-length report: strata r = 1..max_run, across-reference spread.
    result.by_runlength.axis = "runlength";
    result.by_runlength.read_weighted = config.read_weighted;
    result.by_runlength.min_denominator = config.min_denominator;
    for (int r = 1; r <= config.max_run; ++r) {
        StratumStats stats;
        stats.label = "r=" + std::to_string(r);
        std::vector<std::pair<double, StratumCounts>> per_ref;
        for (size_t ri = 0; ri < refset.refs.size(); ++ri) {
            const auto& c = acc.per_ref[ri].by_run[r - 1];
            if (c.denom || c.ins) per_ref.push_back({double(acc.per_ref[ri].reads), c});
        }
        finalize_stratum(per_ref, stats, config.min_denominator);
        result.by_runlength.strata.push_back(std::move(stats));
    }

    // GC report: each reference lands wholly in one bin of its payload's GC
    // fraction; spread across the references within the bin.
    result.by_gc.axis = "gc";
    result.by_gc.read_weighted = config.read_weighted;
    result.by_gc.min_denominator = config.min_denominator;
    int nbins = int(std::round((config.gc_hi - config.gc_lo) / config.gc_bin_width));
    for (int b = 0; b < nbins; ++b) {
        double lo = config.gc_lo + b * config.gc_bin_width;
        double hi = lo + config.gc_bin_width;
        StratumStats stats;
        stats.label = gc_bin_label(lo, hi);
        std::vector<std::pair<double, StratumCounts>> per_ref;
        for (size_t ri = 0; ri < refset.refs.size(); ++ri) {
            double frac = double(refset.refs[ri].gc) / refset.refs[ri].payload.size();
            bool last = b == nbins - 1;
            if (frac < lo - 1e-12 || (last ? frac > hi + 1e-12 : frac >= hi - 1e-12)) continue;
            const auto& t = acc.per_ref[ri].total;
            if (t.denom || t.ins) per_ref.push_back({double(acc.per_ref[ri].reads), t});
        }
        finalize_stratum(per_ref, stats, config.min_denominator);
        result.by_gc.strata.push_back(std::move(stats));
    }

    result.composition = composition_reports(refset, reads, result.assignments, config);
    return result;
}

CompositionReport composition_reports(const ReferenceSet& refset,
                                      const std::vector<SeqRecord>& reads,
                                      const std::vector<Assignment>& assignments,
                                      const ProfileConfig& config) {
    CompositionReport rep;
    std::vector<long> reads_per_ref(refset.refs.size(), 0);
    for (const auto& a : assignments)
        if (a.assigned()) ++reads_per_ref[a.ref_index];
    (void)reads;

    for (const auto& ref : refset.refs) {
        ++rep.gc_hist_refs[ref.gc];
        size_t i = 0;
        while (i < ref.payload.size()) {
            size_t j = i;
            while (j < ref.payload.size() && ref.payload[j] == ref.payload[i]) ++j;
            ++rep.run_length_hist[int(j - i)];
            i = j;
        }
    }
    for (size_t ri = 0; ri < refset.refs.size(); ++ri)
        if (reads_per_ref[ri]) rep.gc_hist_reads[refset.refs[ri].gc] += reads_per_ref[ri];

    double mean_depth = 0;
    for (long c : reads_per_ref) mean_depth += double(c);
    mean_depth /= std::max<size_t>(1, reads_per_ref.size());
    if (mean_depth > 0) {
        int nbins = int(std::round((config.gc_hi - config.gc_lo) / config.gc_bin_width));
        for (int b = 0; b < nbins; ++b) {
            double lo = config.gc_lo + b * config.gc_bin_width;
            double hi = lo + config.gc_bin_width;
            CoverageBin bin;
            bin.label = gc_bin_label(lo, hi);
            double sum = 0, sumsq = 0;
            for (size_t ri = 0; ri < refset.refs.size(); ++ri) {
                double frac = double(refset.refs[ri].gc) / refset.refs[ri].payload.size();
                bool last = b == nbins - 1;
                if (frac < lo - 1e-12 || (last ? frac > hi + 1e-12 : frac >= hi - 1e-12))
                    continue;
                double rel = double(reads_per_ref[ri]) / mean_depth;
                ++bin.refs;
                sum += rel;
                sumsq += rel * rel;
            }
            if (bin.refs > 0) {
                bin.mean_rel_abundance = sum / bin.refs;
                double var = sumsq / bin.refs - bin.mean_rel_abundance * bin.mean_rel_abundance;
                bin.stddev = std::sqrt(std::max(0.0, var));
            }
            rep.coverage_vs_gc.push_back(std::move(bin));
        }
    }
    return rep;
}

std::string profile_csv(const ErrorProfileReport& report) {
    std::ostringstream os;
    os << "stratum,kind,rate_percent,stddev_percent,denominator,reliable\n";
    os.setf(std::ios::fixed);
    os.precision(6);
    for (const auto& s : report.strata) {
        const char* kinds[3] = {"sub", "ins", "del"};
        double rates[3] = {s.sub_rate, s.ins_rate, s.del_rate};
        double stds[3] = {s.sub_std, s.ins_std, s.del_std};
        for (int k = 0; k < 3; ++k)
            os << s.label << ',' << kinds[k] << ',' << rates[k] * 100 << ',' << stds[k] * 100
               << ',' << s.denominator << ',' << (s.reliable ? "yes" : "no") << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json report_json(const ErrorProfileReport& report) {
    nlohmann::json j;
    j["axis"] = report.axis;
    j["read_weighted"] = report.read_weighted;
    j["min_denominator"] = report.min_denominator;
    auto& strata = j["strata"] = nlohmann::json::array();
    for (const auto& s : report.strata)
        strata.push_back({{"stratum", s.label},
                          {"denominator", s.denominator},
                          {"reliable", s.reliable},
                          {"sub_rate", s.sub_rate},
                          {"ins_rate", s.ins_rate},
                          {"del_rate", s.del_rate},
                          {"sub_std", s.sub_std},
                          {"ins_std", s.ins_std},
                          {"del_std", s.del_std}});
    return j;
}

}  // namespace

std::string profile_json(const ProfileResult& result) {
    nlohmann::json j;
    j["reads_total"] = result.reads_total;
    j["reads_assigned"] = result.reads_assigned;
    j["by_runlength"] = report_json(result.by_runlength);
    j["by_gc"] = report_json(result.by_gc);
    auto& comp = j["composition"];
    for (const auto& [r, c] : result.composition.run_length_hist)
        comp["run_length_hist"][std::to_string(r)] = c;
    for (const auto& [w, c] : result.composition.gc_hist_refs)
        comp["gc_hist_refs"][std::to_string(w)] = c;
    for (const auto& [w, c] : result.composition.gc_hist_reads)
        comp["gc_hist_reads"][std::to_string(w)] = c;
    auto& cov = comp["coverage_vs_gc"] = nlohmann::json::array();
    for (const auto& b : result.composition.coverage_vs_gc)
        cov.push_back({{"bin", b.label},
                       {"refs", b.refs},
                       {"mean_rel_abundance", b.mean_rel_abundance},
                       {"stddev", b.stddev}});
    return j.dump(2) + "\n";
}

std::string composition_csv(const CompositionReport& report) {
    std::ostringstream os;
    os << "table,key,value,extra\n";
    for (const auto& [r, c] : report.run_length_hist)
        os << "run_length_hist," << r << ',' << c << ",\n";
    for (const auto& [w, c] : report.gc_hist_refs)
        os << "gc_hist_refs," << w << ',' << c << ",\n";
    for (const auto& [w, c] : report.gc_hist_reads)
        os << "gc_hist_reads," << w << ',' << c << ",\n";
    os.setf(std::ios::fixed);
    os.precision(6);
    for (const auto& b : report.coverage_vs_gc)
        os << "coverage_vs_gc," << b.label << ',' << b.mean_rel_abundance << ',' << b.stddev
           << '\n';
    return os.str();
}

}  // namespace dnarate
