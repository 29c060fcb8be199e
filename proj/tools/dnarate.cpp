// dnarate: calculator, simulator, and profiler for constrained DNA coding.

#include "dnarate/channels.hpp"
#include "dnarate/empirical.hpp"
#include "dnarate/gcbound.hpp"
#include "dnarate/hmm.hpp"
#include "dnarate/rng.hpp"
#include "dnarate/simulate.hpp"
#include "dnarate/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dnarate;

namespace {

uint64_t fnv1a(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

// Shared run context: output dir, seed, resolved-config hash, sidecar log.
struct RunContext {
    fs::path out;
    uint64_t seed = 0;
    std::string config_hash;

    void finish(const CLI::App& app) const {
        fs::create_directories(out);
        write_text(out / "config.resolved.txt", app.config_to_str(true, true));
        std::ofstream log(out / "run.log", std::ios::app | std::ios::binary);
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        log << stamp << " config_hash=" << config_hash << " seed=" << seed << '\n';
    }

    void write_json(const std::string& name, json j) const {
        fs::create_directories(out);
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        write_text(out / name, j.dump(2) + "\n");
    }

    void write_csv(const std::string& name, const std::string& csv) const {
        fs::create_directories(out);
        write_text(out / name, "# config_hash=" + config_hash + "\n" + csv);
    }
};

struct ModelFlags {
    std::string growth = "linear";
    double alpha = 0;
    double p = 0.01;

    void attach(CLI::App* cmd, const std::string& default_growth) {
        growth = default_growth;
        cmd->add_option("--growth", growth, "growth law: linear, exponential, logarithmic, parabolic")
            ->check(CLI::IsMember({"linear", "exponential", "logarithmic", "parabolic"}))
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "growth factor")->capture_default_str();
        cmd->add_option("--p", p, "base substitution probability")->capture_default_str();
    }
    GrowthModel make() const { return make_growth_model(growth, alpha, p); }
};

struct EstimatorFlags {
    EstimatorConfig cfg;
    void attach(CLI::App* cmd) {
        cmd->add_option("--conv-thresh", cfg.conv_thresh, "convergence threshold")
            ->capture_default_str();
        cmd->add_option("--stab-req", cfg.stab_req, "consecutive converged steps required")
            ->capture_default_str();
        cmd->add_option("--max-steps", cfg.max_steps, "maximum Monte Carlo steps")
            ->capture_default_str();
    }
};

struct DPolicyFlags {
    std::string policy = "correct";
    double scale = 1.0;
    void attach(CLI::App* cmd) {
        cmd->add_option("--dpolicy", policy, "minimum-distance policy: correct, detect, scaled")
            ->check(CLI::IsMember({"correct", "detect", "scaled"}))
            ->capture_default_str();
        cmd->add_option("--dscale", scale, "scale for the scaled policy")->capture_default_str();
    }
    DPolicy make() const {
        DPolicy p;
        p.kind = policy == "correct" ? DPolicyKind::Correct
               : policy == "detect"  ? DPolicyKind::Detect
                                     : DPolicyKind::Scaled;
        p.scale = scale;
        return p;
    }
};

json entropy_json(const EntropyEstimate& est) {
    return json::parse(est.to_json());
}

Constraint make_constraint(const std::string& kind, int m, double epsilon) {
    if (kind == "none") return Constraint::none();
    if (kind == "run") return Constraint::max_run(m);
    if (kind == "gc") return Constraint::gc(epsilon);
    throw invalid_context("unknown constraint: " + kind);
}

std::vector<MapFormat> parse_emit(const std::vector<std::string>& names) {
    std::vector<MapFormat> out;
    for (const auto& n : names) {
        if (n == "csv") out.push_back(MapFormat::Csv);
        else if (n == "json") out.push_back(MapFormat::Json);
        else if (n == "svg") out.push_back(MapFormat::SvgHeatmap);
        else throw invalid_context("unknown emit format: " + n);
    }
    if (out.empty()) out.push_back(MapFormat::Csv);
    return out;
}

const char* map_ext(MapFormat f) {
    switch (f) {
        case MapFormat::Csv: return "csv";
        case MapFormat::Json: return "json";
        case MapFormat::SvgHeatmap: return "svg";
    }
    return "dat";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Achievable-rate calculator, channel simulator, and read-error profiler "
                 "for homopolymer- and GC-constrained DNA storage codes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "declarative key=value parameter file (flags override it)");

    RunContext ctx;
    std::string out_dir = std::getenv("DNARATE_OUT") ? std::getenv("DNARATE_OUT") : "out";
    uint64_t seed = 1;
    int threads = 0;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--threads", threads, "worker cap (0 = hardware)")->capture_default_str();

    // ---- rates ----
    auto* rates = app.add_subcommand("rates", "achievable rates for constrained vs unconstrained coding");
    rates->require_subcommand(1);

    auto* rates_homo = rates->add_subcommand("homopolymer", "R_u and R_c for a run-length channel");
    int rh_m = 3;
    ModelFlags rh_model;
    EstimatorFlags rh_est;
    rates_homo->add_option("--m", rh_m, "maximum run length")->capture_default_str();
    rh_model.attach(rates_homo, "linear");
    rh_est.attach(rates_homo);

    auto* rates_gc = rates->add_subcommand("gc", "GV-bound rates for a GC-content channel");
    int rg_n = 60;
    double rg_eps = 0.0;
    ModelFlags rg_model;
    DPolicyFlags rg_policy;
    rates_gc->add_option("--n", rg_n, "sequence length")->capture_default_str();
    rates_gc->add_option("--epsilon", rg_eps, "GC window half-width")->capture_default_str();
    rg_model.attach(rates_gc, "parabolic");
    rg_policy.attach(rates_gc);

    // ---- entropy ----
    auto* entropy = app.add_subcommand("entropy", "Monte Carlo output entropy of the hidden Markov channel");
    int en_m = 1;
    ModelFlags en_model;
    EstimatorFlags en_est;
    entropy->add_option("--m", en_m, "maximum run length")->capture_default_str();
    en_model.attach(entropy, "linear");
    en_est.attach(entropy);

    // ---- regime-map ----
    auto* regime = app.add_subcommand("regime-map", "parameter sweeps of R_u - R_c");
    regime->require_subcommand(1);
    std::vector<std::string> emit_names;

    auto* regime_homo = regime->add_subcommand("homopolymer", "sweep over (m, alpha)");
    HomopolymerSweepConfig hs;
    std::string hs_growth = "linear";
    regime_homo->add_option("--m-list", hs.m_list, "m values")->capture_default_str();
    regime_homo->add_option("--growth", hs_growth, "run growth law")
        ->check(CLI::IsMember({"linear", "exponential", "logarithmic"}))
        ->capture_default_str();
    regime_homo->add_option("--alpha-start", hs.alpha_start)->capture_default_str();
    regime_homo->add_option("--alpha-stop", hs.alpha_stop)->capture_default_str();
    regime_homo->add_option("--alpha-step", hs.alpha_step)->capture_default_str();
    regime_homo->add_option("--p", hs.base_p, "base substitution probability")->capture_default_str();
    regime_homo->add_option("--replicates", hs.replicates)->capture_default_str();
    regime_homo->add_option("--max-steps", hs.estimator.max_steps)->capture_default_str();
    regime_homo->add_option("--emit", emit_names, "output formats: csv, json, svg")
        ->capture_default_str();

    auto* regime_gc = regime->add_subcommand("gc", "sweep over (n, epsilon, alpha)");
    GcSweepConfig gs;
    DPolicyFlags gs_policy;
    std::string gc_alpha_spec;
    regime_gc->add_option("--n-list", gs.n_list, "sequence lengths")->capture_default_str();
    regime_gc->add_option("--epsilon-list", gs.epsilon_list, "GC half-widths")
        ->capture_default_str();
    regime_gc->add_option("--alpha", gc_alpha_spec, "grid start:stop:step (stop < 10)");
    regime_gc->add_option("--alpha-start", gs.alpha_start)->capture_default_str();
    regime_gc->add_option("--alpha-stop", gs.alpha_stop)->capture_default_str();
    regime_gc->add_option("--alpha-step", gs.alpha_step)->capture_default_str();
    regime_gc->add_option("--p", gs.base_p, "base substitution probability")->capture_default_str();
    gs_policy.attach(regime_gc);
    regime_gc->add_option("--emit", emit_names, "output formats: csv, json, svg")
        ->capture_default_str();

    // ---- ball-volume ----
    auto* ball = app.add_subcommand("ball-volume", "exact Hamming ball volumes");
    int bv_n = 4, bv_d = 2, bv_w = -1;
    double bv_eps = 0.5;
    bool bv_oracle = false;
    ball->add_option("--n", bv_n, "sequence length")->capture_default_str();
    ball->add_option("--d", bv_d, "minimum distance")->capture_default_str();
    ball->add_option("--epsilon", bv_eps, "GC half-width (0.5 = unconstrained)")
        ->capture_default_str();
    ball->add_option("--w", bv_w, "center GC content (constrained balls)")->capture_default_str();
    ball->add_flag("--oracle", bv_oracle, "verify against brute-force enumeration (n <= 12)");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "codebook generation + true-channel transmission");
    std::string sim_constraint = "run";
    int sim_m = 3, sim_n = 60;
    long sim_count = 10000;
    double sim_eps = 0.05;
    ModelFlags sim_model;
    sim->add_option("--constraint", sim_constraint, "none, run, gc")
        ->check(CLI::IsMember({"none", "run", "gc"}))
        ->capture_default_str();
    sim->add_option("--m", sim_m)->capture_default_str();
    sim->add_option("--epsilon", sim_eps)->capture_default_str();
    sim->add_option("--n", sim_n)->capture_default_str();
    sim->add_option("--count", sim_count, "number of codewords")->capture_default_str();
    sim_model.attach(sim, "linear");

    // ---- synth-dataset ----
    auto* synth = app.add_subcommand("synth-dataset", "ground-truthed synthetic read dataset");
    std::string sy_constraint = "none";
    int sy_m = 3, sy_n = 110;
    long sy_count = 1000;
    double sy_eps = 0.1, sy_ins = 0.0, sy_del = 0.0, sy_depth = 10, sy_gcbias = 0.0;
    ModelFlags sy_model;
    synth->add_option("--constraint", sy_constraint, "none, run, gc")
        ->check(CLI::IsMember({"none", "run", "gc"}))
        ->capture_default_str();
    synth->add_option("--m", sy_m)->capture_default_str();
    synth->add_option("--epsilon", sy_eps)->capture_default_str();
    synth->add_option("--n", sy_n)->capture_default_str();
    synth->add_option("--count", sy_count, "number of references")->capture_default_str();
    sy_model.attach(synth, "linear");
    synth->add_option("--ins", sy_ins, "per-position insertion rate")->capture_default_str();
    synth->add_option("--del", sy_del, "per-position deletion rate")->capture_default_str();
    synth->add_option("--depth", sy_depth, "mean reads per reference")->capture_default_str();
    synth->add_option("--gc-bias", sy_gcbias, "coverage penalty factor")->capture_default_str();

    // ---- profile ----
    auto* prof = app.add_subcommand("profile", "empirical error profile from references + reads");
    std::string pr_refs, pr_reads;
    int pr_prefix = 0, pr_suffix = 0, pr_k = 12;
    ProfileConfig pc;
    prof->add_option("--refs", pr_refs, "reference FASTA/line file")->required();
    prof->add_option("--reads", pr_reads, "read FASTA/FASTQ/line file")->required();
    prof->add_option("--trim-prefix", pr_prefix, "primer bases to trim at 5'")
        ->capture_default_str();
    prof->add_option("--trim-suffix", pr_suffix, "primer bases to trim at 3'")
        ->capture_default_str();
    prof->add_option("--k", pr_k, "index k-mer size")->capture_default_str();
    prof->add_option("--max-candidates", pc.assign.max_candidates)->capture_default_str();
    prof->add_option("--max-edit-fraction", pc.assign.max_edit_fraction)->capture_default_str();
    prof->add_option("--max-run", pc.max_run)->capture_default_str();
    prof->add_option("--gc-lo", pc.gc_lo)->capture_default_str();
    prof->add_option("--gc-hi", pc.gc_hi)->capture_default_str();
    prof->add_option("--gc-bin", pc.gc_bin_width)->capture_default_str();
    prof->add_option("--min-denominator", pc.min_denominator)->capture_default_str();
    bool pr_unweighted = false;
    prof->add_flag("--unweighted", pr_unweighted, "per-reference mode instead of read-weighted");

    // ---- compose-report ----
    auto* comp = app.add_subcommand("compose-report", "run-length/GC histograms and coverage");
    std::string cr_refs, cr_reads;
    int cr_prefix = 0, cr_suffix = 0;
    comp->add_option("--refs", cr_refs, "reference FASTA/line file")->required();
    comp->add_option("--reads", cr_reads, "read file (optional)");
    comp->add_option("--trim-prefix", cr_prefix)->capture_default_str();
    comp->add_option("--trim-suffix", cr_suffix)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        ctx.out = out_dir;
        ctx.seed = seed;
        ctx.config_hash = hex64(fnv1a(app.config_to_str(true, true)));
        ctx.finish(app);

        if (rates_homo->parsed()) {
            GrowthModel model = rh_model.make();
            HiddenMarkovChannel hmm = build_hmm(rh_m, model);
            EntropyEstimate est = estimate_output_entropy(hmm, rh_est.cfg, seed);
            ConstrainedRate rc = achievable_rate_constrained(rh_m, model, est);
            RateResult ru = achievable_rate_unconstrained(model);
            json j{{"m", rh_m},
                   {"growth", rh_model.growth},
                   {"alpha", rh_model.alpha},
                   {"p", rh_model.p},
                   {"R_u", ru.rate},
                   {"R_u_truncation_bound", ru.truncation_bound},
                   {"R_c", rc.rate},
                   {"R_c_uncertainty", rc.uncertainty},
                   {"entropy", entropy_json(est)}};
            ctx.write_json("rates_homopolymer.json", j);
            std::cout << "R_u = " << ru.rate << "  R_c = " << rc.rate << '\n';
        } else if (rates_gc->parsed()) {
            GrowthModel model = rg_model.make();
            DSelection sel_c = expected_error_distance(rg_n, rg_eps, model, rg_policy.make());
            DSelection sel_u = expected_error_distance(rg_n, 0.5, model, rg_policy.make());
            GVResult rc = gv_rate_constrained(rg_n, sel_c.d, rg_eps);
            GVResult ru = gv_rate_constrained(rg_n, sel_u.d, 0.5);
            json j{{"n", rg_n},
                   {"epsilon", rg_eps},
                   {"alpha", rg_model.alpha},
                   {"p", rg_model.p},
                   {"dpolicy", sel_c.policy},
                   {"d_u", sel_u.d},
                   {"d_c", sel_c.d},
                   {"mean_p_u", sel_u.mean_p},
                   {"mean_p_c", sel_c.mean_p},
                   {"R_u", ru.rate},
                   {"R_c", rc.rate}};
            ctx.write_json("rates_gc.json", j);
            std::cout << "R_u = " << ru.rate << "  R_c = " << rc.rate << '\n';
        } else if (entropy->parsed()) {
            HiddenMarkovChannel hmm = build_hmm(en_m, en_model.make());
            EntropyEstimate est = estimate_output_entropy(hmm, en_est.cfg, seed);
            ctx.write_json("entropy.json", entropy_json(est));
            std::cout << "H = " << est.value << " +/- " << est.stderr_ << '\n';
        } else if (regime_homo->parsed()) {
            hs.kind = make_growth_model(hs_growth, 0, 0.01).kind;
            hs.threads = threads;
            auto points = sweep_homopolymer(hs, seed);
            for (MapFormat f : parse_emit(emit_names)) {
                std::ostringstream os;
                emit_map(points, f, os);
                if (f == MapFormat::Csv)
                    ctx.write_csv(std::string("regime_homopolymer.") + map_ext(f), os.str());
                else
                    write_text(ctx.out / (std::string("regime_homopolymer.") + map_ext(f)),
                               os.str());
            }
            std::cout << "regime map: " << points.size() << " points\n";
        } else if (regime_gc->parsed()) {
            if (!gc_alpha_spec.empty()) {
                double a0, a1, st;
                char c1, c2;
                std::istringstream is(gc_alpha_spec);
                if (!(is >> a0 >> c1 >> a1 >> c2 >> st) || c1 != ':' || c2 != ':')
                    throw invalid_context("--alpha expects start:stop:step");
                gs.alpha_start = a0;
                gs.alpha_step = st;
                // The model lives on [0, 10); a stop at 10 means the half-open grid.
                gs.alpha_stop = a1 >= 10.0 ? a1 - st : a1;
            }
            gs.dpolicy = gs_policy.make();
            auto points = sweep_gc(gs);
            for (MapFormat f : parse_emit(emit_names)) {
                std::ostringstream os;
                emit_map(points, f, os);
                if (f == MapFormat::Csv)
                    ctx.write_csv(std::string("regime_gc.") + map_ext(f), os.str());
                else
                    write_text(ctx.out / (std::string("regime_gc.") + map_ext(f)), os.str());
            }
            std::cout << "regime map: " << points.size() << " points\n";
        } else if (ball->parsed()) {
            json j{{"n", bv_n}, {"d", bv_d}, {"epsilon", bv_eps}};
            BigCount vol;
            if (bv_eps >= 0.5 && bv_w < 0) {
                vol = hamming_ball_unconstrained(bv_n, bv_d);
            } else {
                if (bv_w < 0) throw invalid_context("--w is required for constrained balls");
                vol = hamming_ball_constrained(bv_n, bv_d, bv_eps, bv_w);
                j["w"] = bv_w;
            }
            j["volume"] = vol.str();
            if (bv_oracle) {
                BigCount oracle = hamming_ball_bruteforce(bv_n, bv_d, bv_eps, bv_w < 0 ? 0 : bv_w);
                j["oracle"] = oracle.str();
                j["oracle_match"] = (oracle == vol);
                if (oracle != vol) throw std::logic_error("ball volume disagrees with oracle");
            }
            ctx.write_json("ball_volume.json", j);
            std::cout << vol.str() << '\n';
        } else if (sim->parsed()) {
            Constraint constraint = make_constraint(sim_constraint, sim_m, sim_eps);
            Codebook book = generate_codewords(constraint, sim_n, sim_count, seed);
            json j{{"constraint", constraint.describe()},
                   {"n", sim_n},
                   {"count", sim_count},
                   {"law", book.law}};
            if (constraint.type != Constraint::Type::GcWindow) {
                RunLengthStats stats = measure_runlength_stats(book);
                std::vector<long> obs;
                std::vector<double> expected;
                // Chi-square belongs on the independent interior runs, not on
                // per-position counts (positions in one run are correlated).
                int rmax = constraint.type == Constraint::Type::MaxRun ? sim_m : 12;
                for (int r = 1; r <= rmax; ++r) {
                    auto it = stats.interior_run_counts.find(r);
                    obs.push_back(it == stats.interior_run_counts.end() ? 0 : it->second);
                    expected.push_back(constraint.type == Constraint::Type::MaxRun
                                           ? run_count_pmf_constrained(sim_m, r)
                                           : run_count_pmf(r));
                }
                if (constraint.type == Constraint::Type::None) {
                    // Fold everything past rmax into the last bin.
                    expected.back() += run_count_tail(rmax);
                    for (const auto& [r, c] : stats.interior_run_counts)
                        if (r > rmax) obs.back() += c;
                }
                ChiSquareResult chi =
                    chi_square_test(obs, expected, stats.total_interior_runs, 1e-3);
                j["runlength_chi2"] = {{"statistic", chi.statistic},
                                       {"dof", chi.dof},
                                       {"critical", chi.critical},
                                       {"pass", chi.pass}};
            } else {
                GcStats stats = measure_gc_stats(book);
                GcWindow win = gc_window(sim_n, sim_eps);
                std::vector<long> obs;
                std::vector<double> expected;
                for (int w = win.lo; w <= win.hi; ++w) {
                    auto it = stats.counts.find(w);
                    obs.push_back(it == stats.counts.end() ? 0 : it->second);
                    expected.push_back(gc_pmf_constrained(sim_n, sim_eps, w));
                }
                ChiSquareResult chi = chi_square_test(obs, expected, stats.total, 1e-3);
                j["gc_chi2"] = {{"statistic", chi.statistic},
                                {"dof", chi.dof},
                                {"critical", chi.critical},
                                {"pass", chi.pass}};
            }
            GrowthModel model = sim_model.make();
            if (model.alpha > 0 || model.base_p > 0) {
                // Transmit and measure per-stratum substitution rates.
                std::map<int, std::pair<long, long>> by_r;  // r -> (errors, bases)
                for (size_t i = 0; i < book.sequences.size(); ++i) {
                    const std::string& cw = book.sequences[i];
                    uint64_t ch_seed = derive_seed(seed, 0x20000000ULL + i);
                    std::string rx = model.is_run_model()
                                         ? apply_runlength_channel(cw, model, ch_seed)
                                         : apply_gc_channel(cw, model, ch_seed);
                    std::vector<int> runs = run_lengths(cw);
                    for (int pos = 0; pos < sim_n; ++pos) {
                        auto& cell = by_r[runs[pos]];
                        ++cell.second;
                        if (rx[pos] != cw[pos]) ++cell.first;
                    }
                }
                auto& rates_j = j["channel_substitution_by_runlength"] = json::array();
                for (const auto& [r, cell] : by_r)
                    rates_j.push_back({{"r", r},
                                       {"errors", cell.first},
                                       {"bases", cell.second},
                                       {"rate", double(cell.first) / cell.second}});
            }
            ctx.write_json("simulate.json", j);
            std::cout << "simulate: " << sim_count << " codewords (" << book.law << ")\n";
        } else if (synth->parsed()) {
            Constraint constraint = make_constraint(sy_constraint, sy_m, sy_eps);
            Codebook refs = generate_codewords(constraint, sy_n, sy_count, derive_seed(seed, 1));
            SynthConfig cfg;
            cfg.sub_model = sy_model.make();
            cfg.insertion_rate = sy_ins;
            cfg.deletion_rate = sy_del;
            cfg.mean_depth = sy_depth;
            cfg.gc_bias = sy_gcbias;
            SynthDataset ds = synth_dataset(refs, cfg, derive_seed(seed, 2));
            fs::create_directories(ctx.out);
            write_synth_dataset(ds, (ctx.out / "refs.fasta").string(),
                                (ctx.out / "reads.fasta").string(),
                                (ctx.out / "ledger.jsonl").string());
            ctx.write_json("synth.json", json{{"references", ds.references.size()},
                                              {"reads", ds.reads.size()},
                                              {"constraint", constraint.describe()}});
            std::cout << "synth-dataset: " << ds.references.size() << " refs, "
                      << ds.reads.size() << " reads\n";
        } else if (prof->parsed()) {
            pc.threads = threads;
            pc.read_weighted = !pr_unweighted;
            ReferenceSet refset = load_references(pr_refs, SeqFormat::Auto,
                                                  {pr_prefix, pr_suffix}, pr_k);
            for (const auto& w : refset.warnings) std::cerr << "warning: " << w << '\n';
            ReadSet reads = load_reads(pr_reads);
            for (const auto& w : reads.warnings) std::cerr << "warning: " << w << '\n';
            ProfileResult res = profile_reads(refset, reads.reads, pc);
            ctx.write_csv("by_runlength.csv", profile_csv(res.by_runlength));
            ctx.write_csv("by_gc.csv", profile_csv(res.by_gc));
            ctx.write_csv("composition.csv", composition_csv(res.composition));
            write_text(ctx.out / "profile.json", profile_json(res));
            std::cout << "profile: " << res.reads_assigned << "/" << res.reads_total
                      << " reads assigned\n";
        } else if (comp->parsed()) {
            ReferenceSet refset =
                load_references(cr_refs, SeqFormat::Auto, {cr_prefix, cr_suffix});
            std::vector<SeqRecord> reads;
            std::vector<Assignment> assignments;
            ProfileConfig cc;
            if (!cr_reads.empty()) {
                ReadSet rs = load_reads(cr_reads);
                reads = std::move(rs.reads);
                assignments.resize(reads.size());
                for (size_t i = 0; i < reads.size(); ++i)
                    assignments[i] = assign_read(reads[i].seq, refset, cc.assign);
            }
            CompositionReport rep = composition_reports(refset, reads, assignments, cc);
            ctx.write_csv("composition.csv", composition_csv(rep));
            std::cout << "compose-report: " << refset.refs.size() << " references\n";
        }
        return 0;
    } catch (const invalid_context& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
