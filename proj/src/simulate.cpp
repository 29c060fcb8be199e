#include "dnarate/simulate.hpp"

#include "dnarate/gcbound.hpp"
#include "dnarate/rng.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dnarate {

namespace {

constexpr const char* kAlphabet = "ACGT";

int sym_index(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
    }
    throw invalid_context("non-ACGT symbol");
}

char substitute(char c, Rng& rng) {
    int s = sym_index(c);
    int o = int(rng.next_below(3));
    return kAlphabet[o >= s ? o + 1 : o];
}

long sample_poisson(double lambda, Rng& rng) {
    if (lambda <= 0) return 0;
    // Knuth's method; depths used here are small.
    double limit = std::exp(-lambda);
    long k = 0;
    double prod = 1.0;
    for (;;) {
        prod *= rng.next_double();
        if (prod <= limit) return k;
        ++k;
    }
}

std::string sample_m_constrained(int m, int n, Rng& rng) {
    // Renewal process of runs with i.i.d. lengths drawn from the geometric
    // law (3/4)(1/4)^(r-1) truncated at m and renormalized; its
    // length-biased version is exactly the position law q_m(r).
    const double trunc_norm = 1.0 - std::pow(0.25, m);
    std::string seq;
    seq.reserve(n);
    char sym = 0;
    while (int(seq.size()) < n) {
        sym = seq.empty() ? kAlphabet[rng.next_below(4)] : substitute(sym, rng);
        double u = rng.next_double() * trunc_norm;
        int len = 1;
        for (double acc = 0;; ++len) {
            acc += 0.75 * std::pow(0.25, len - 1);
            if (u < acc || len == m) break;
        }
        for (int i = 0; i < len && int(seq.size()) < n; ++i) seq += sym;
    }
    return seq;
}

std::string sample_gc_constrained(int n, double epsilon, Rng& rng) {
    GcWindow win = gc_window(n, epsilon);
    if (win.lo > win.hi) throw invalid_context("empty GC window");

    // Acceptance probability of plain rejection is the window's q-mass.
    double accept = 0;
    for (int w = win.lo; w <= win.hi; ++w) accept += gc_pmf(n, w);
    if (accept >= 0.05) {
        for (;;) {
            std::string seq(n, 'A');
            int gc = 0;
            for (int i = 0; i < n; ++i) {
                seq[i] = kAlphabet[rng.next_below(4)];
                if (seq[i] == 'C' || seq[i] == 'G') ++gc;
            }
            if (win.contains(gc)) return seq;
        }
    }

    // Constant-composition sampler: draw w from q_eps, place w GC positions
    // uniformly, then fair coin within each symbol group.
    double u = rng.next_double();
    int w = win.hi;
    double acc = 0;
    for (int cand = win.lo; cand <= win.hi; ++cand) {
        acc += gc_pmf_constrained(n, epsilon, cand);
        if (u < acc) {
            w = cand;
            break;
        }
    }
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = i;
    for (int i = 0; i < w; ++i) std::swap(pos[i], pos[i + rng.next_below(n - i)]);
    std::string seq(n, 0);
    std::vector<bool> is_gc(n, false);
    for (int i = 0; i < w; ++i) is_gc[pos[i]] = true;
    for (int i = 0; i < n; ++i)
        seq[i] = is_gc[i] ? (rng.next_double() < 0.5 ? 'G' : 'C')
                          : (rng.next_double() < 0.5 ? 'A' : 'T');
    return seq;
}

}  // namespace

std::string Constraint::describe() const {
    switch (type) {
        case Type::None: return "unconstrained";
        case Type::MaxRun: return "m=" + std::to_string(m);
        case Type::GcWindow: return "epsilon=" + std::to_string(epsilon);
    }
    return "?";
}

Codebook generate_codewords(const Constraint& constraint, int n, long count, uint64_t seed) {
    if (n < 1 || count < 1) throw invalid_context("codebook dimensions must be positive");
    if (constraint.type == Constraint::Type::MaxRun && constraint.m < 1)
        throw invalid_context("max-run constraint must be >= 1");
    Codebook book;
    book.n = n;
    book.constraint = constraint;
    book.seed = seed;
    book.sequences.reserve(count);
    for (long i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, uint64_t(i)));
        switch (constraint.type) {
            case Constraint::Type::None: {
                std::string seq(n, 'A');
                for (int j = 0; j < n; ++j) seq[j] = kAlphabet[rng.next_below(4)];
                book.sequences.push_back(std::move(seq));
                book.law = "uniform";
                break;
            }
            case Constraint::Type::MaxRun:
                book.sequences.push_back(sample_m_constrained(constraint.m, n, rng));
                book.law = "run-limited-markov";
                break;
            case Constraint::Type::GcWindow:
                book.sequences.push_back(sample_gc_constrained(n, constraint.epsilon, rng));
                book.law = "uniform-gc-window";
                break;
        }
    }
    return book;
}

int max_run_length(const std::string& seq) {
    int best = 0, cur = 0;
    char prev = 0;
    for (char c : seq) {
        cur = (c == prev) ? cur + 1 : 1;
        prev = c;
        best = std::max(best, cur);
    }
    return best;
}

int gc_count(const std::string& seq) {
    int w = 0;
    for (char c : seq)
        if (c == 'G' || c == 'C') ++w;
    return w;
}

bool satisfies(const std::string& seq, const Constraint& constraint) {
    switch (constraint.type) {
        case Constraint::Type::None: return true;
        case Constraint::Type::MaxRun: return max_run_length(seq) <= constraint.m;
        case Constraint::Type::GcWindow:
            return gc_window(int(seq.size()), constraint.epsilon).contains(gc_count(seq));
    }
    return false;
}

std::vector<int> run_lengths(const std::string& seq) {
    std::vector<int> out(seq.size());
    size_t i = 0;
    while (i < seq.size()) {
        size_t j = i;
        while (j < seq.size() && seq[j] == seq[i]) ++j;
        for (size_t k = i; k < j; ++k) out[k] = int(j - i);
        i = j;
    }
    return out;
}

std::string apply_runlength_channel(const std::string& codeword, const GrowthModel& model,
                                    uint64_t seed) {
    if (!model.is_run_model()) throw invalid_context("run channel requires a run model");
    Rng rng(seed);
    std::vector<int> runs = run_lengths(codeword);
    std::string out = codeword;
    for (size_t i = 0; i < out.size(); ++i)
        if (rng.next_double() < model.rate_at_run(runs[i])) out[i] = substitute(codeword[i], rng);
    return out;
}

std::string apply_gc_channel(const std::string& codeword, const GrowthModel& model,
                             uint64_t seed) {
    Rng rng(seed);
    double p = model.rate_at_gc(gc_count(codeword), int(codeword.size()));
    std::string out = codeword;
    for (size_t i = 0; i < out.size(); ++i)
        if (rng.next_double() < p) out[i] = substitute(codeword[i], rng);
    return out;
}

double RunLengthStats::pmf(int r) const {
    auto it = position_counts.find(r);
    if (it == position_counts.end() || total_positions == 0) return 0;
    return double(it->second) / double(total_positions);
}

RunLengthStats measure_runlength_stats(const Codebook& codebook, int interior_margin) {
    if (codebook.sequences.empty()) throw invalid_context("empty codebook");
    RunLengthStats stats;
    for (const auto& seq : codebook.sequences) {
        const int n = int(seq.size());
        std::vector<int> runs = run_lengths(seq);
        for (int i = 0; i < n; ++i) {
            if (i <= interior_margin || i >= n - 1 - interior_margin) continue;
            ++stats.position_counts[runs[i]];
            ++stats.total_positions;
        }
        // For the interior sample, take a FIXED number of complete runs per
        // sequence (skipping the first, which starts on the boundary). A
        // fixed count is a stopping time, so the selected run lengths are
        // exactly i.i.d.; selecting "all complete runs" instead would bias
        // against long runs (long runs are more likely to straddle the end,
        // shrinking the complete-run count). k = 0.4n leaves the probability
        // of running out of complete runs below ~1e-14 for n >= 60.
        const long k_interior = std::max<long>(1, long(0.4 * n));
        long taken = 0;
        size_t i = 0;
        while (i < seq.size()) {
            size_t j = i;
            while (j < seq.size() && seq[j] == seq[i]) ++j;
            ++stats.run_counts[int(j - i)];
            if (i > 0 && j < seq.size() && taken < k_interior) {
                ++stats.interior_run_counts[int(j - i)];
                ++stats.total_interior_runs;
                ++taken;
            }
            i = j;
        }
    }
    return stats;
}

GcStats measure_gc_stats(const Codebook& codebook) {
    GcStats stats;
    for (const auto& seq : codebook.sequences) {
        ++stats.counts[gc_count(seq)];
        ++stats.total;
    }
    return stats;
}

ChiSquareResult chi_square_test(const std::vector<long>& observed,
                                const std::vector<double>& expected_probs, long total,
                                double significance, double min_expected) {
    if (observed.size() != expected_probs.size())
        throw invalid_context("observed/expected size mismatch");
    // Merge small-expectation bins left to right.
    std::vector<double> exp_merged;
    std::vector<long> obs_merged;
    double e_acc = 0;
    long o_acc = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        e_acc += expected_probs[i] * total;
        o_acc += observed[i];
        if (e_acc >= min_expected) {
            exp_merged.push_back(e_acc);
            obs_merged.push_back(o_acc);
            e_acc = 0;
            o_acc = 0;
        }
    }
    if (e_acc > 0 || o_acc > 0) {
        if (exp_merged.empty()) {
            exp_merged.push_back(e_acc);
            obs_merged.push_back(o_acc);
        } else {
            exp_merged.back() += e_acc;
            obs_merged.back() += o_acc;
        }
    }

    ChiSquareResult res;
    for (size_t i = 0; i < exp_merged.size(); ++i) {
        double diff = obs_merged[i] - exp_merged[i];
        if (exp_merged[i] > 0) res.statistic += diff * diff / exp_merged[i];
    }
    res.dof = int(exp_merged.size()) - 1;
    if (res.dof < 1) res.dof = 1;
    boost::math::chi_squared dist(res.dof);
    res.critical = boost::math::quantile(dist, 1.0 - significance);
    res.pass = res.statistic <= res.critical;
    return res;
}

SynthDataset synth_dataset(const Codebook& references, const SynthConfig& config,
                           uint64_t seed) {
    if (config.insertion_rate < 0 || config.insertion_rate > 0.2 || config.deletion_rate < 0 ||
        config.deletion_rate > 0.2)
        throw invalid_context("insertion/deletion rates must lie in [0, 0.2]");

    SynthDataset ds;
    const int n = references.n;
    for (size_t i = 0; i < references.sequences.size(); ++i)
        ds.references.push_back({"ref" + std::to_string(i), references.sequences[i]});

    long read_counter = 0;
    for (size_t ri = 0; ri < ds.references.size(); ++ri) {
        const std::string& ref = ds.references[ri].seq;
        Rng depth_rng(derive_seed(seed, 2 * ri));
        double balance = double(gc_count(ref)) / n - 0.5;
        double lambda = config.mean_depth * std::max(0.05, 1.0 - config.gc_bias * balance * balance);
        long depth = sample_poisson(lambda, depth_rng);

        std::vector<int> runs = run_lengths(ref);
        bool gc_law = config.sub_model.kind == GrowthKind::ParabolicGc;
        double p_gc = gc_law ? config.sub_model.rate_at_gc(gc_count(ref), n) : 0;

        for (long rd = 0; rd < depth; ++rd) {
            Rng rng(derive_seed(seed, 0x10000000ULL + (uint64_t(ri) << 16) + uint64_t(rd)));
            SynthRead read;
            read.read_id = "read" + std::to_string(read_counter++);
            read.ref_id = ds.references[ri].id;
            read.ref_index = int(ri);
            for (int pos = 0; pos < n; ++pos) {
                if (rng.next_double() < config.deletion_rate) {
                    read.events.push_back({"del", pos, ref[pos], 0});
                } else {
                    char out = ref[pos];
                    double p_sub = gc_law ? p_gc : config.sub_model.rate_at_run(runs[pos]);
                    if (rng.next_double() < p_sub) {
                        out = substitute(ref[pos], rng);
                        read.events.push_back({"sub", pos, ref[pos], out});
                    }
                    read.seq += out;
                }
                if (rng.next_double() < config.insertion_rate) {
                    char ins = kAlphabet[rng.next_below(4)];
                    read.events.push_back({"ins", pos, 0, ins});
                    read.seq += ins;
                }
            }
            if (read.seq.empty()) read.seq = "A";  // degenerate all-deleted read
            ds.reads.push_back(std::move(read));
        }
    }
    return ds;
}

void write_synth_dataset(const SynthDataset& ds, const std::string& ref_path,
                         const std::string& reads_path, const std::string& ledger_path) {
    write_fasta(ref_path, ds.references);
    std::vector<SeqRecord> reads;
    reads.reserve(ds.reads.size());
    for (const auto& r : ds.reads) reads.push_back({r.read_id, r.seq});
    write_fasta(reads_path, reads);

    std::ofstream out(ledger_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + ledger_path);
    for (const auto& r : ds.reads) {
        nlohmann::json j;
        j["read_id"] = r.read_id;
        j["ref_id"] = r.ref_id;
        auto& events = j["events"] = nlohmann::json::array();
        for (const auto& e : r.events) {
            nlohmann::json ev{{"kind", e.kind}, {"ref_pos", e.ref_pos}};
            if (e.from) ev["from"] = std::string(1, e.from);
            if (e.to) ev["to"] = std::string(1, e.to);
            events.push_back(ev);
        }
        out << j.dump() << '\n';
    }
}

}  // namespace dnarate
