#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "matro/matroid.hpp"

namespace matro {

// Matroid text format:
//   line 1: "n r"
//   one line per basis: strictly increasing zero-based indices, single spaces
//   basis lines sorted lexicographically as index sequences
//   '#' starts a comment line, blank line ends a block, final newline required
// A rank-0 matroid has the implicit empty basis and lists no basis lines (a
// literal empty line would collide with the blank-line block separator).

// Sequence-lexicographic order on subsets written as increasing index lists.
inline bool seq_lex_less(Mask a, Mask b) {
    if (a == b) return false;
    int e = lowest_bit(static_cast<Mask>(a ^ b));
    if (has_bit(a, e)) return (b >> (e + 1)) != 0;
    return (a >> (e + 1)) == 0;
}

inline std::string basis_line(Mask b) {
    std::string s;
    for (int e = 0; e < kMaxGroundSet; ++e) {
        if (!has_bit(b, e)) continue;
        if (!s.empty()) s += ' ';
        s += std::to_string(e);
    }
    return s;
}

inline void write_matroid(std::ostream& os, const Matroid& m) {
    os << m.size() << ' ' << m.rank() << '\n';
    std::vector<Mask> ordered = m.bases();
    std::sort(ordered.begin(), ordered.end(), seq_lex_less);
    if (m.rank() > 0)
        for (Mask b : ordered) os << basis_line(b) << '\n';
}

inline std::string matroid_to_string(const Matroid& m) {
    std::ostringstream os;
    write_matroid(os, m);
    return os.str();
}

struct MatroidBlock {
    int n = 0, r = 0;
    std::vector<Mask> bases;
};

namespace detail {

// Splits text into lines, requiring the final newline.
inline std::vector<std::string> split_lines(const std::string& text) {
    if (!text.empty() && text.back() != '\n')
        throw ParseError(static_cast<int>(1 + std::count(text.begin(), text.end(), '\n')),
                         "final newline required");
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

inline bool is_comment(const std::string& line) {
    return !line.empty() && line[0] == '#';
}

inline bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

inline std::vector<long> parse_ints(const std::string& line, int lineno) {
    std::istringstream is(line);
    std::vector<long> out;
    long v;
    while (is >> v) out.push_back(v);
    std::string rest;
    if (is.clear(), is >> rest)
        throw ParseError(lineno, "unexpected token '" + rest + "'");
    return out;
}

// Reads one matroid block starting at lines[pos]; advances pos past it.
inline MatroidBlock read_block(const std::vector<std::string>& lines, std::size_t& pos) {
    MatroidBlock blk;
    while (pos < lines.size() && (is_comment(lines[pos]) || is_blank(lines[pos]))) ++pos;
    if (pos >= lines.size()) throw ParseError(static_cast<int>(pos + 1), "expected 'n r' header");
    int lineno = static_cast<int>(pos + 1);
    auto header = parse_ints(lines[pos], lineno);
    if (header.size() != 2) throw ParseError(lineno, "expected 'n r' header");
    blk.n = static_cast<int>(header[0]);
    blk.r = static_cast<int>(header[1]);
    if (blk.n < 0 || blk.n > kMaxGroundSet || blk.r < 0 || blk.r > blk.n)
        throw ParseError(lineno, "need 0 <= r <= n <= 16");
    ++pos;
    Mask prev = 0;
    bool first = true;
    while (pos < lines.size() && !is_blank(lines[pos])) {
        lineno = static_cast<int>(pos + 1);
        if (is_comment(lines[pos])) {
            ++pos;
            continue;
        }
        if (blk.r == 0) throw ParseError(lineno, "rank-0 matroid lists no basis lines");
        auto idx = parse_ints(lines[pos], lineno);
        if (static_cast<int>(idx.size()) != blk.r)
            throw ParseError(lineno, "basis must list exactly r indices");
        Mask b = 0;
        long last = -1;
        for (long e : idx) {
            if (e < 0 || e >= blk.n) throw ParseError(lineno, "index out of range");
            if (e <= last) throw ParseError(lineno, "indices must be strictly increasing");
            last = e;
            b |= bit(static_cast<int>(e));
        }
        if (!first && !seq_lex_less(prev, b))
            throw ParseError(lineno, "basis lines must be sorted and duplicate-free");
        prev = b;
        first = false;
        blk.bases.push_back(b);
        ++pos;
    }
    if (blk.r == 0) blk.bases.push_back(0);
    if (blk.bases.empty()) throw ParseError(static_cast<int>(pos + 1), "block lists no bases");
    return blk;
}

} // namespace detail

// Parses and validates a single matroid; trailing comments/blanks are allowed.
inline Matroid read_matroid(const std::string& text) {
    auto lines = detail::split_lines(text);
    std::size_t pos = 0;
    MatroidBlock blk = detail::read_block(lines, pos);
    while (pos < lines.size()) {
        if (!detail::is_comment(lines[pos]) && !detail::is_blank(lines[pos]))
            throw ParseError(static_cast<int>(pos + 1), "unexpected content after matroid block");
        ++pos;
    }
    return Matroid::validate(blk.n, blk.r, blk.bases);
}

inline Matroid read_matroid(std::istream& is) {
    std::ostringstream buf;
    buf << is.rdbuf();
    return read_matroid(buf.str());
}

} // namespace matro
