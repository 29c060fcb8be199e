#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dnarate {

enum class EditKind { Match, Substitution, Deletion, Insertion };

struct EditOp {
    EditKind kind;
    int ref_pos;  // reference index; insertions record the position they follow
                  // (-1 for an insertion before the first base)
    char from = 0;  // reference symbol (match/substitution/deletion)
    char to = 0;    // read symbol (match/substitution/insertion)
};

struct AlignmentRecord {
    std::string read_id;
    std::string ref_id;
    std::vector<EditOp> ops;
    int cost = 0;
};

// Global alignment with unit costs (match 0, everything else 1). Among
// cost-minimal scripts the tie-break is deterministic: substitution over
// deletion over insertion at each traceback cell, then indels shifted
// leftmost within runs.
AlignmentRecord align_global(const std::string& read, const std::string& reference);

// Applies the edit script to the reference; must reproduce the read.
std::string replay(const std::string& reference, const std::vector<EditOp>& ops);

// Banded unit-cost edit distance; nullopt if the distance exceeds max_dist.
std::optional<int> banded_edit_distance(const std::string& a, const std::string& b,
                                        int max_dist);

}  // namespace dnarate
