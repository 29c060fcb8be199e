#include "dnarate/seqio.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dnarate {

namespace {

std::string read_file_maybe_gzip(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.size() < 2 || (unsigned char)raw[0] != 0x1f || (unsigned char)raw[1] != 0x8b)
        return raw;

    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw std::runtime_error("zlib init failed");
    std::string out;
    out.resize(raw.size() * 4 + 1024);
    zs.next_in = reinterpret_cast<Bytef*>(raw.data());
    zs.avail_in = uInt(raw.size());
    size_t written = 0;
    int rc;
    do {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = reinterpret_cast<Bytef*>(out.data() + written);
        zs.avail_out = uInt(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        written = out.size() - zs.avail_out;
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("corrupt gzip stream: " + path);
        }
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

SeqFormat sniff(const std::string& data) {
    for (char c : data) {
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        if (c == '>') return SeqFormat::Fasta;
        if (c == '@') return SeqFormat::Fastq;
        return SeqFormat::Line;
    }
    return SeqFormat::Line;
}

std::string upcase(std::string s) {
    for (char& c : s) c = char(std::toupper((unsigned char)c));
    return s;
}

}  // namespace

bool is_acgt(const std::string& seq) {
    if (seq.empty()) return false;
    for (char c : seq)
        if (c != 'A' && c != 'C' && c != 'G' && c != 'T') return false;
    return true;
}

LoadResult parse_sequences(const std::string& data, SeqFormat format, bool validate_acgt,
                           const std::string& origin) {
    if (format == SeqFormat::Auto) format = sniff(data);
    LoadResult res;
    std::istringstream in(data);
    std::string line;
    long lineno = 0;

    auto accept = [&](SeqRecord rec) {
        rec.seq = upcase(rec.seq);
        if (validate_acgt && !is_acgt(rec.seq)) {
            ++res.skipped;
            res.warnings.push_back(origin + ": skipped record '" + rec.id +
                                   "' (non-ACGT or empty sequence)");
            return;
        }
        res.records.push_back(std::move(rec));
    };

    switch (format) {
        case SeqFormat::Fasta: {
            SeqRecord cur;
            bool open = false;
            while (std::getline(in, line)) {
                ++lineno;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                if (line[0] == '>') {
                    if (open) accept(std::move(cur));
                    cur = {};
                    cur.id = line.substr(1, line.find_first_of(" \t") - 1);
                    open = true;
                } else {
                    if (!open)
                        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                                 ": sequence before first FASTA header");
                    cur.seq += line;
                }
            }
            if (open) accept(std::move(cur));
            break;
        }
        case SeqFormat::Fastq: {
            while (std::getline(in, line)) {
                ++lineno;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                if (line[0] != '@')
                    throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                             ": expected FASTQ header line");
                SeqRecord rec;
                rec.id = line.substr(1, line.find_first_of(" \t") - 1);
                std::string plus, qual;
                if (!std::getline(in, rec.seq) || !std::getline(in, plus) ||
                    !std::getline(in, qual))
                    throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                             ": truncated FASTQ record");
                lineno += 3;
                if (plus.empty() || plus[0] != '+')
                    throw std::runtime_error(origin + ":" + std::to_string(lineno - 1) +
                                             ": missing FASTQ separator line");
                if (!rec.seq.empty() && rec.seq.back() == '\r') rec.seq.pop_back();
                accept(std::move(rec));
            }
            break;
        }
        case SeqFormat::Line: {
            long count = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                SeqRecord rec;
                rec.id = "seq" + std::to_string(count++);
                rec.seq = line;
                accept(std::move(rec));
            }
            break;
        }
        case SeqFormat::Auto: break;  // unreachable
    }
    if (res.records.empty() && res.skipped == 0)
        res.warnings.push_back(origin + ": no sequences found");
    return res;
}

LoadResult load_sequences(const std::string& path, SeqFormat format, bool validate_acgt) {
    return parse_sequences(read_file_maybe_gzip(path), format, validate_acgt, path);
}

void write_fasta(const std::string& path, const std::vector<SeqRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : records) out << '>' << r.id << '\n' << r.seq << '\n';
}

void write_lines(const std::string& path, const std::vector<SeqRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : records) out << r.seq << '\n';
}

}  // namespace dnarate
