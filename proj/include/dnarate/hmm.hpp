#pragma once

#include "dnarate/channels.hpp"
#include "dnarate/markov.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dnarate {

// Input-side Markov chain over states (run-length k in 1..m, nucleotide).
// From a saturated run (k = m) the same nucleotide has probability 0 and the
// other three 1/3 each; otherwise every nucleotide has probability 1/4.
struct InputMarkovModel {
    int m = 1;
    Eigen::MatrixXd B;  // 4m x 4m, state index = (k-1)*4 + nucleotide

    int state_index(int k, int nucleotide) const { return (k - 1) * 4 + nucleotide; }
};

InputMarkovModel build_input_chain(int m);

// Substitution probability for a nucleotide that just entered run position k,
// marginalized over how far the run will continue (final run length j >= k):
//   p_eff(k) = sum_{j=k}^{m-1} (1/4)^{j-k} (3/4) p_j + (1/4)^{m-k} p_m,
// with p_eff(m) = p_m.
double effective_substitution(int k, int m, const GrowthModel& model);

// Hidden Markov channel over states (run-length k, input nucleotide, output
// nucleotide). The output symbol is emitted on the transition into the new
// state with substitution probability p_eff of the new run-length. States
// outside the closed communicating class (unreachable from the stationary
// process, e.g. mismatch states of a noiseless channel) are pruned.
struct HiddenMarkovChannel {
    int m = 1;
    GrowthModel model;
    std::vector<double> p_eff;              // index k-1, k = 1..m
    std::vector<std::array<int, 3>> states;  // (k, input, output) per kept state
    Eigen::MatrixXd B;                       // full transition matrix
    std::array<Eigen::MatrixXd, 4> B_sym;    // per-output-symbol matrices B^y

    int num_states() const { return int(states.size()); }
};

HiddenMarkovChannel build_hmm(int m, const GrowthModel& model);

struct EstimatorConfig {
    double conv_thresh = 1e-9;
    long stab_req = 1000;
    long max_steps = 100000000;
};

struct EntropyEstimate {
    double value = 0;       // bits per nucleotide
    double stderr_ = 0;     // batch-means standard error
    long steps = 0;
    bool achieved = false;  // stopping rule fired before max_steps
    long underflows = 0;    // belief renormalization rescues
    uint64_t seed = 0;
    EstimatorConfig config;
    int m = 0;
    GrowthModel model;

    std::string to_json() const;
};

// Algorithm: initialize the belief vector at the stationary distribution;
// each step accumulates -sum_y Pr(y|eta) log2 Pr(y|eta), samples the next
// output symbol from Pr(.|eta), and applies the normalized belief update
// eta <- eta B^y / (eta B^y 1). The running mean is the estimate.
EntropyEstimate estimate_output_entropy(const HiddenMarkovChannel& hmm,
                                        const EstimatorConfig& config, uint64_t seed);

struct RateResult {
    double rate = 0;
    double truncation_bound = 0;  // unreported tail contribution, <= 2*tailmass
};

// R_u = 2 - sum_r q(r) H(p_r). Once p_r saturates at 0.75 the remaining tail
// contributes exactly tailmass * 2 bits; otherwise the sum truncates when the
// analytic tail drops below 1e-12 and the residual bound is reported.
RateResult achievable_rate_unconstrained(const GrowthModel& model);

struct ConstrainedRate {
    double rate = 0;
    double uncertainty = 0;  // propagated entropy standard error
};

// R_c = H_hat(P^Y) - sum_{r=1..m} q_m(r) H(p_r). The estimate must have been
// produced for the same (m, model).
ConstrainedRate achievable_rate_constrained(int m, const GrowthModel& model,
                                            const EntropyEstimate& entropy);

}  // namespace dnarate
