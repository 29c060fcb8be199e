#include "dnarate/align.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dnarate {

AlignmentRecord align_global(const std::string& read, const std::string& reference) {
    if (read.empty() || reference.empty())
        throw std::invalid_argument("alignment requires non-empty sequences");
    const int R = int(reference.size());
    const int Q = int(read.size());

    std::vector<int> dp((R + 1) * (Q + 1));
    auto at = [&](int i, int j) -> int& { return dp[i * (Q + 1) + j]; };
    for (int i = 0; i <= R; ++i) at(i, 0) = i;
    for (int j = 0; j <= Q; ++j) at(0, j) = j;
    for (int i = 1; i <= R; ++i)
        for (int j = 1; j <= Q; ++j) {
            int diag = at(i - 1, j - 1) + (reference[i - 1] != read[j - 1] ? 1 : 0);
            int del = at(i - 1, j) + 1;
            int ins = at(i, j - 1) + 1;
            at(i, j) = std::min({diag, del, ins});
        }

    // Traceback, preferring substitution/match over deletion over insertion.
    std::string top, bottom;  // reference row / read row, '-' marks gaps
    int i = R, j = Q;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            at(i, j) == at(i - 1, j - 1) + (reference[i - 1] != read[j - 1] ? 1 : 0)) {
            top += reference[--i];
            bottom += read[--j];
        } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            top += reference[--i];
            bottom += '-';
        } else {
            top += '-';
            bottom += read[--j];
        }
    }
    std::reverse(top.begin(), top.end());
    std::reverse(bottom.begin(), bottom.end());

    // Shift gaps leftmost within runs; replay-equivalent swaps only.
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t c = 1; c < top.size(); ++c) {
            if (bottom[c] == '-' && bottom[c - 1] != '-' && top[c - 1] == top[c]) {
                std::swap(bottom[c - 1], bottom[c]);
                changed = true;
            } else if (top[c] == '-' && top[c - 1] != '-' && bottom[c - 1] == bottom[c]) {
                std::swap(top[c - 1], top[c]);
                changed = true;
            }
        }
    }

    AlignmentRecord rec;
    rec.cost = at(R, Q);
    int ref_pos = 0;
    for (size_t c = 0; c < top.size(); ++c) {
        if (top[c] == '-') {
            rec.ops.push_back({EditKind::Insertion, ref_pos - 1, 0, bottom[c]});
        } else if (bottom[c] == '-') {
            rec.ops.push_back({EditKind::Deletion, ref_pos, top[c], 0});
            ++ref_pos;
        } else if (top[c] == bottom[c]) {
            rec.ops.push_back({EditKind::Match, ref_pos, top[c], bottom[c]});
            ++ref_pos;
        } else {
            rec.ops.push_back({EditKind::Substitution, ref_pos, top[c], bottom[c]});
            ++ref_pos;
        }
    }
    return rec;
}

std::string replay(const std::string& reference, const std::vector<EditOp>& ops) {
    std::string out;
    int expect = 0;
    for (const auto& op : ops) {
        switch (op.kind) {
            case EditKind::Match:
                if (op.ref_pos != expect || reference.at(op.ref_pos) != op.from)
                    throw std::runtime_error("edit script out of order");
                out += op.to;
                ++expect;
                break;
            case EditKind::Substitution:
                if (op.ref_pos != expect) throw std::runtime_error("edit script out of order");
                out += op.to;
                ++expect;
                break;
            case EditKind::Deletion:
                if (op.ref_pos != expect) throw std::runtime_error("edit script out of order");
                ++expect;
                break;
            case EditKind::Insertion:
                out += op.to;
                break;
        }
    }
    if (expect != int(reference.size()))
        throw std::runtime_error("edit script does not cover the reference");
    return out;
}

std::optional<int> banded_edit_distance(const std::string& a, const std::string& b,
                                        int max_dist) {
    const int n = int(a.size());
    const int m = int(b.size());
    if (std::abs(n - m) > max_dist) return std::nullopt;
    const int band = max_dist;
    const int inf = std::numeric_limits<int>::max() / 2;

    std::vector<int> prev(2 * band + 1, inf), cur(2 * band + 1, inf);
    // Column j maps to offset j - i + band within each row.
    for (int off = 0; off <= band; ++off) prev[band + off] = off;  // row 0: dp[0][j] = j
    for (int i = 1; i <= n; ++i) {
        std::fill(cur.begin(), cur.end(), inf);
        int jlo = std::max(0, i - band), jhi = std::min(m, i + band);
        for (int j = jlo; j <= jhi; ++j) {
            int off = j - i + band;
            int best = inf;
            if (j == 0) {
                best = i;
            } else {
                // (i-1, j-1) sits at the same offset in the previous row.
                if (prev[off] < inf)
                    best = std::min(best, prev[off] + (a[i - 1] != b[j - 1] ? 1 : 0));
                if (off + 1 <= 2 * band && prev[off + 1] < inf)
                    best = std::min(best, prev[off + 1] + 1);  // (i-1, j)
                if (off - 1 >= 0 && cur[off - 1] < inf)
                    best = std::min(best, cur[off - 1] + 1);  // (i, j-1)
            }
            cur[off] = best;
        }
        std::swap(prev, cur);
    }
    int result = prev[m - n + band];
    if (result > max_dist) return std::nullopt;
    return result;
}

}  // namespace dnarate
