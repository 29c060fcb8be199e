#include "dnarate/hmm.hpp"

#include "dnarate/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace dnarate {

InputMarkovModel build_input_chain(int m) {
    if (m < 1) throw invalid_context("constraint m must be >= 1");
    InputMarkovModel chain;
    chain.m = m;
    const int n = 4 * m;
    chain.B = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k <= m; ++k)
        for (int x = 0; x < 4; ++x) {
            int from = chain.state_index(k, x);
            for (int nx = 0; nx < 4; ++nx) {
                if (k == m) {
                    if (nx == x) continue;  // run saturated, repeat forbidden
                    chain.B(from, chain.state_index(1, nx)) = 1.0 / 3.0;
                } else {
                    int nk = (nx == x) ? k + 1 : 1;
                    chain.B(from, chain.state_index(nk, nx)) = 0.25;
                }
            }
        }
    return chain;
}

double effective_substitution(int k, int m, const GrowthModel& model) {
    if (!model.is_run_model()) throw invalid_context("GC model has no run-length law");
    if (k < 1 || k > m) throw invalid_context("run position outside [1, m]");
    if (k == m) return model.rate_at_run(m);
    double p = 0;
    for (int j = k; j < m; ++j) p += std::pow(0.25, j - k) * 0.75 * model.rate_at_run(j);
    p += std::pow(0.25, m - k) * model.rate_at_run(m);
    return p;
}

HiddenMarkovChannel build_hmm(int m, const GrowthModel& model) {
    if (m < 1) throw invalid_context("constraint m must be >= 1");
    if (!model.is_run_model()) throw invalid_context("HMM channel requires a run model");

    HiddenMarkovChannel hmm;
    hmm.m = m;
    hmm.model = model;
    hmm.p_eff.resize(m);
    for (int k = 1; k <= m; ++k) hmm.p_eff[k - 1] = effective_substitution(k, m, model);

    // Full state space (k, x, y), index = (k-1)*16 + x*4 + y.
    const int n_full = 16 * m;
    auto idx = [](int k, int x, int y) { return (k - 1) * 16 + x * 4 + y; };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_full, n_full);
    for (int k = 1; k <= m; ++k)
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) {
                int from = idx(k, x, y);
                for (int nx = 0; nx < 4; ++nx) {
                    double p_in;
                    int nk;
                    if (k == m) {
                        if (nx == x) continue;
                        p_in = 1.0 / 3.0;
                        nk = 1;
                    } else {
                        p_in = 0.25;
                        nk = (nx == x) ? k + 1 : 1;
                    }
                    double pe = hmm.p_eff[nk - 1];
                    for (int ny = 0; ny < 4; ++ny) {
                        double p_out = (ny == nx) ? 1 - pe : pe / 3.0;
                        if (p_out > 0) B(from, idx(nk, nx, ny)) += p_in * p_out;
                    }
                }
            }

    // Keep only the closed communicating class. With p > 0 this is the whole
    // space; for a noiseless channel the mismatch-output states are transient
    // and would break the strict ergodicity check.
    auto sccs = strongly_connected_components(B);
    std::vector<int> closed;
    for (const auto& comp : sccs) {
        std::set<int> members(comp.begin(), comp.end());
        bool is_closed = true;
        for (int i : comp)
            for (int j = 0; j < n_full && is_closed; ++j)
                if (B(i, j) > 0 && !members.count(j)) is_closed = false;
        if (is_closed) {
            if (!closed.empty()) throw markov_error("multiple closed communicating classes");
            closed = comp;
        }
    }
    if (closed.empty()) throw markov_error("no closed communicating class");
    std::sort(closed.begin(), closed.end());

    const int n = int(closed.size());
    hmm.B = Eigen::MatrixXd::Zero(n, n);
    for (int y = 0; y < 4; ++y) hmm.B_sym[y] = Eigen::MatrixXd::Zero(n, n);
    hmm.states.resize(n);
    for (int a = 0; a < n; ++a) {
        int s = closed[a];
        hmm.states[a] = {s / 16 + 1, (s % 16) / 4, s % 4};
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double v = B(closed[a], closed[b]);
            if (v > 0) {
                hmm.B(a, b) = v;
                hmm.B_sym[hmm.states[b][2]](a, b) = v;
            }
        }
    return hmm;
}

std::string EntropyEstimate::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["stderr"] = stderr_;
    j["steps"] = steps;
    j["achieved"] = achieved;
    j["underflows"] = underflows;
    j["seed"] = seed;
    j["convThresh"] = config.conv_thresh;
    j["stabReq"] = config.stab_req;
    j["max_steps"] = config.max_steps;
    j["m"] = m;
    j["model"] = {{"kind", model.kind_name()}, {"alpha", model.alpha}, {"base_p", model.base_p}};
    return j.dump();
}

namespace {

// Sparse view of one B^y: triplets plus the row-sum vector B^y 1.
struct SymbolMatrix {
    std::vector<int> row, col;
    std::vector<double> val;
    std::vector<double> row_sum;  // (B^y 1)_i
};

}  // namespace

EntropyEstimate estimate_output_entropy(const HiddenMarkovChannel& hmm,
                                        const EstimatorConfig& config, uint64_t seed) {
    if (config.conv_thresh <= 0 || config.stab_req <= 0 || config.max_steps <= 0)
        throw invalid_context("estimator config values must be positive");
    ErgodicFlags flags = check_ergodic(hmm.B);
    if (!flags.ok()) throw markov_error("HMM transition matrix is not ergodic");

    const int n = hmm.num_states();
    std::array<SymbolMatrix, 4> sym;
    for (int y = 0; y < 4; ++y) {
        sym[y].row_sum.assign(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = hmm.B_sym[y](i, j);
                if (v > 0) {
                    sym[y].row.push_back(i);
                    sym[y].col.push_back(j);
                    sym[y].val.push_back(v);
                    sym[y].row_sum[i] += v;
                }
            }
    }

    Eigen::VectorXd pi = stationary_distribution(hmm.B);
    std::vector<double> eta(pi.data(), pi.data() + n), next(n);

    EntropyEstimate est;
    est.seed = seed;
    est.config = config;
    est.m = hmm.m;
    est.model = hmm.model;

    Rng rng(seed);
    double mean = 0;
    long stab_count = 0;
    // Per-step entropies are folded into fixed-size chunks; chunks are later
    // regrouped into ~100 batches for the batch-means standard error.
    const long chunk_size = 1000;
    std::vector<double> chunk_sums;
    double chunk_acc = 0;
    long chunk_fill = 0;

    long step = 0;
    for (; step < config.max_steps; ++step) {
        double pr[4];
        double h = 0;
        for (int y = 0; y < 4; ++y) {
            double p = 0;
            for (int i = 0; i < n; ++i) p += eta[i] * sym[y].row_sum[i];
            pr[y] = p;
            if (p > 0) h -= p * std::log2(p);
        }

        // Sample the next output symbol.
        double u = rng.next_double() * (pr[0] + pr[1] + pr[2] + pr[3]);
        int y = 0;
        double acc = pr[0];
        while (y < 3 && u >= acc) acc += pr[++y];

        // Belief update with renormalization.
        std::fill(next.begin(), next.end(), 0.0);
        const SymbolMatrix& s = sym[y];
        for (size_t t = 0; t < s.val.size(); ++t) next[s.col[t]] += eta[s.row[t]] * s.val[t];
        double norm = 0;
        for (double v : next) norm += v;
        if (norm < 1e-300) {
            ++est.underflows;
            if (norm <= 0) {
                // Sampled a symbol the belief assigns no mass; restart from
                // the stationary distribution.
                std::copy(pi.data(), pi.data() + n, eta.begin());
            } else {
                for (int i = 0; i < n; ++i) eta[i] = next[i] / norm;
            }
        } else {
            for (int i = 0; i < n; ++i) eta[i] = next[i] / norm;
        }

        double prev_mean = mean;
        mean += (h - mean) / double(step + 1);
        chunk_acc += h;
        if (++chunk_fill == chunk_size) {
            chunk_sums.push_back(chunk_acc / chunk_size);
            chunk_acc = 0;
            chunk_fill = 0;
        }

        if (step > 0 && std::abs(mean - prev_mean) < config.conv_thresh) {
            if (++stab_count >= config.stab_req) {
                ++step;
                est.achieved = true;
                break;
            }
        } else {
            stab_count = 0;
        }
    }
    if (chunk_fill > 0) chunk_sums.push_back(chunk_acc / chunk_fill);

    est.value = mean;
    est.steps = step;

    // Batch means over ~100 batches of equal chunk count.
    size_t n_chunks = chunk_sums.size();
    size_t per_batch = std::max<size_t>(1, n_chunks / 100);
    std::vector<double> batch_means;
    for (size_t b = 0; b + per_batch <= n_chunks; b += per_batch) {
        double s = 0;
        for (size_t c = b; c < b + per_batch; ++c) s += chunk_sums[c];
        batch_means.push_back(s / per_batch);
    }
    if (batch_means.size() >= 2) {
        double bm = 0;
        for (double v : batch_means) bm += v;
        bm /= batch_means.size();
        double var = 0;
        for (double v : batch_means) var += (v - bm) * (v - bm);
        var /= (batch_means.size() - 1);
        est.stderr_ = std::sqrt(var / batch_means.size());
    }
    return est;
}

RateResult achievable_rate_unconstrained(const GrowthModel& model) {
    if (!model.is_run_model()) throw invalid_context("unconstrained rate requires a run model");
    RateResult out;
    double sum = 0;
    const double tail_tol = 1e-12;
    for (int r = 1;; ++r) {
        double pr = model.rate_at_run(r);
        if (pr >= kRateCap) {
            // Saturated: every further term is q(r) * 2, so the whole tail
            // (including r itself) is exact.
            sum += run_length_tail(r - 1) * 2.0;
            break;
        }
        sum += run_length_pmf(r) * quaternary_entropy(pr);
        double tail = run_length_tail(r);
        if (tail < tail_tol) {
            out.truncation_bound = tail * 2.0;
            break;
        }
    }
    out.rate = 2.0 - sum;
    return out;
}

ConstrainedRate achievable_rate_constrained(int m, const GrowthModel& model,
                                            const EntropyEstimate& entropy) {
    if (entropy.m != m || entropy.model.kind != model.kind ||
        entropy.model.alpha != model.alpha || entropy.model.base_p != model.base_p)
        throw invalid_context("entropy estimate was produced for a different (m, model)");
    double sub = 0;
    for (int r = 1; r <= m; ++r)
        sub += run_length_pmf_constrained(m, r) * quaternary_entropy(model.rate_at_run(r));
    return {entropy.value - sub, entropy.stderr_};
}

}  // namespace dnarate
