#include "dnarate/markov.hpp"

#include <cmath>
#include <numeric>

namespace dnarate {

namespace {

std::vector<std::vector<int>> positive_adjacency(const Eigen::MatrixXd& B) {
    const int n = int(B.rows());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (B(i, j) > 0) adj[i].push_back(j);
    return adj;
}

void tarjan(int v, const std::vector<std::vector<int>>& adj, std::vector<int>& index,
            std::vector<int>& low, std::vector<bool>& on_stack, std::vector<int>& stack,
            int& counter, std::vector<std::vector<int>>& sccs) {
    // Iterative Tarjan; recursion depth could reach the state count.
    struct Frame { int v; size_t edge; };
    std::vector<Frame> frames{{v, 0}};
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.edge < adj[f.v].size()) {
            int w = adj[f.v][f.edge++];
            if (index[w] < 0) {
                index[w] = low[w] = counter++;
                stack.push_back(w);
                on_stack[w] = true;
                frames.push_back({w, 0});
            } else if (on_stack[w]) {
                low[f.v] = std::min(low[f.v], index[w]);
            }
        } else {
            int u = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[u]);
            if (low[u] == index[u]) {
                std::vector<int> comp;
                for (;;) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                    if (w == u) break;
                }
                sccs.push_back(std::move(comp));
            }
        }
    }
}

}  // namespace

bool is_row_stochastic(const Eigen::MatrixXd& B, double tol) {
    if (B.rows() != B.cols()) return false;
    for (int i = 0; i < B.rows(); ++i) {
        if ((B.row(i).array() < 0).any()) return false;
        if (std::abs(B.row(i).sum() - 1.0) > tol) return false;
    }
    return true;
}

std::vector<std::vector<int>> strongly_connected_components(const Eigen::MatrixXd& B) {
    const int n = int(B.rows());
    auto adj = positive_adjacency(B);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> sccs;
    int counter = 0;
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) tarjan(v, adj, index, low, on_stack, stack, counter, sccs);
    return sccs;
}

ErgodicFlags check_ergodic(const Eigen::MatrixXd& B) {
    ErgodicFlags flags;
    if (!is_row_stochastic(B)) throw markov_error("matrix is not row-stochastic");
    flags.nonnegative = true;
    flags.irreducible = strongly_connected_components(B).size() == 1;
    if (!flags.irreducible) return flags;

    // Period = gcd over positive edges (u,v) of level(u) + 1 - level(v),
    // where levels come from a BFS of the (irreducible) digraph.
    const int n = int(B.rows());
    auto adj = positive_adjacency(B);
    std::vector<int> level(n, -1);
    std::vector<int> queue{0};
    level[0] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int v : adj[u])
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
    }
    int g = 0;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    flags.aperiodic = (g == 1);
    return flags;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& B, double residual, long max_iter) {
    ErgodicFlags flags = check_ergodic(B);
    if (!flags.ok()) throw markov_error("chain is not ergodic");
    const int n = int(B.rows());
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (long it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = (pi.transpose() * B).transpose();
        next /= next.sum();
        double err = (next - pi).cwiseAbs().maxCoeff();
        pi = next;
        if (err <= residual) {
            // Residual measured against the fixed point, not the step size.
            double fp = ((pi.transpose() * B).transpose() - pi).cwiseAbs().maxCoeff();
            if (fp <= residual) return pi;
        }
    }
    throw markov_error("power iteration did not reach the requested residual");
}

double closed_form_entropy_rate(const Eigen::MatrixXd& B) {
    Eigen::VectorXd pi = stationary_distribution(B);
    double h = 0;
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j) {
            double b = B(i, j);
            if (b > 0) h -= pi(i) * b * std::log2(b);
        }
    return h;
}

}  // namespace dnarate
