#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace dnarate {

struct ErgodicFlags {
    bool nonnegative = false;
    bool irreducible = false;
    bool aperiodic = false;
    bool ok() const { return nonnegative && irreducible && aperiodic; }
};

struct markov_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rows must sum to 1 within tol.
bool is_row_stochastic(const Eigen::MatrixXd& B, double tol = 1e-9);

// Irreducibility via strong connectivity of the positive-entry digraph,
// aperiodicity via gcd of cycle lengths.
ErgodicFlags check_ergodic(const Eigen::MatrixXd& B);

// Strongly connected components (Tarjan) of the positive-entry digraph.
std::vector<std::vector<int>> strongly_connected_components(const Eigen::MatrixXd& B);

// pi B = pi, sum(pi) = 1, via power iteration to infinity-norm residual
// <= `residual`. Throws markov_error on a non-ergodic chain or if the
// iteration cap is reached.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& B,
                                        double residual = 1e-12,
                                        long max_iter = 1000000);

// H = -sum_ij pi_i B_ij log2 B_ij, exact for processes whose next state is
// determined by the current state and the observed symbol.
double closed_form_entropy_rate(const Eigen::MatrixXd& B);

}  // namespace dnarate
