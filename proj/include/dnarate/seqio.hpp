#pragma once

#include <string>
#include <vector>

namespace dnarate {

struct SeqRecord {
    std::string id;
    std::string seq;
};

enum class SeqFormat { Auto, Fasta, Fastq, Line };

struct LoadResult {
    std::vector<SeqRecord> records;
    long skipped = 0;  // records dropped by validation (e.g. non-ACGT symbols)
    std::vector<std::string> warnings;
};

// Reads FASTA, FASTQ, or one-sequence-per-line text, transparently inflating
// gzip. Quality strings are ignored. With validate_acgt, records containing
// symbols outside ACGT are skipped and counted. Malformed records raise
// std::runtime_error with a line number.
LoadResult load_sequences(const std::string& path, SeqFormat format = SeqFormat::Auto,
                          bool validate_acgt = true);

// Format detection on an in-memory buffer (used for stdin-less testing too).
LoadResult parse_sequences(const std::string& data, SeqFormat format, bool validate_acgt,
                           const std::string& origin = "<memory>");

void write_fasta(const std::string& path, const std::vector<SeqRecord>& records);
void write_lines(const std::string& path, const std::vector<SeqRecord>& records);

bool is_acgt(const std::string& seq);

}  // namespace dnarate
