#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "matro/matroid.hpp"

namespace matro {

// Canonical form: the lexicographically least bases list (masks sorted
// ascending, lists compared elementwise) over all relabelings of the ground
// set. Exhaustive permutation search; usable up to n = 9.
//
// Two matroids are isomorphic iff their canonical forms coincide.

constexpr int kCanonicalMaxN = 9;

struct CanonicalForm {
    int n = 0, r = 0;
    std::vector<Mask> bases;       // the minimal relabeled family
    std::vector<int> relabeling;   // relabeling[old] = new, achieving the minimum

    friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
        return a.n == b.n && a.r == b.r && a.bases == b.bases;
    }
    friend bool operator<(const CanonicalForm& a, const CanonicalForm& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.r != b.r) return a.r < b.r;
        return a.bases < b.bases;
    }
};

struct CanonicalFormHash {
    std::size_t operator()(const CanonicalForm& c) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::size_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::size_t>(c.n));
        mix(static_cast<std::size_t>(c.r));
        for (Mask b : c.bases) mix(static_cast<std::size_t>(b));
        return h;
    }
};

namespace detail {

inline void remap_sorted(const std::vector<Mask>& bases, const int* perm,
                         std::vector<Mask>& out) {
    out.clear();
    for (Mask b : bases) {
        Mask img = 0;
        for (Mask rest = b; rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            img |= bit(perm[e]);
        }
        out.push_back(img);
    }
    std::sort(out.begin(), out.end());
}

} // namespace detail

inline CanonicalForm canonical_form(const Matroid& m) {
    if (m.size() > kCanonicalMaxN)
        throw BoundsViolatedError("canonical form search supports n <= 9");
    const int n = m.size();
    std::vector<int> perm(n), best_perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    best_perm = perm;
    std::vector<Mask> best = m.bases(), scratch;
    scratch.reserve(best.size());
    while (std::next_permutation(perm.begin(), perm.end())) {
        detail::remap_sorted(m.bases(), perm.data(), scratch);
        if (scratch < best) {
            best = scratch;
            best_perm = perm;
        }
    }
    return CanonicalForm{n, m.rank(), std::move(best), std::move(best_perm)};
}

// Permutation-invariant fingerprint used to reject non-isomorphic pairs
// before any permutation search: rank, basis count, and the sorted profile of
// per-element basis degrees.
struct Fingerprint {
    int n = 0, r = 0;
    std::uint32_t basis_count = 0;
    std::array<std::uint16_t, kMaxGroundSet> degree_profile{};
    std::uint32_t circuit_count = 0;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

inline Fingerprint fingerprint(const Matroid& m) {
    Fingerprint fp;
    fp.n = m.size();
    fp.r = m.rank();
    fp.basis_count = static_cast<std::uint32_t>(m.bases().size());
    for (Mask b : m.bases())
        for (Mask rest = b; rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            ++fp.degree_profile[e];
        }
    std::sort(fp.degree_profile.begin(), fp.degree_profile.begin() + fp.n);
    fp.circuit_count = static_cast<std::uint32_t>(m.circuits().size());
    return fp;
}

namespace detail {

// Backtracking isomorphism search used by catalog deduplication where full
// lexicographic minimization would be wasteful (n = 8). Assigns images in
// order, pruning with per-element basis degrees and partial independence.
inline bool iso_search(const Matroid& a, const Matroid& b) {
    const int n = a.size();
    std::array<int, kMaxGroundSet> deg_a{}, deg_b{};
    for (Mask m : a.bases())
        for (Mask rest = m; rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            ++deg_a[e];
        }
    for (Mask m : b.bases())
        for (Mask rest = m; rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            ++deg_b[e];
        }
    std::array<int, kMaxGroundSet> img{};
    img.fill(-1);
    Mask used = 0;

    // Checks every basis of a fully contained in the assigned prefix.
    auto consistent = [&](int assigned) {
        Mask prefix = full_mask(assigned);
        for (Mask bs : a.bases()) {
            if (bs & ~prefix) continue;
            Mask mapped = 0;
            for (Mask rest = bs; rest;) {
                int e = lowest_bit(rest);
                rest &= rest - 1;
                mapped |= bit(img[e]);
            }
            if (!b.is_basis(mapped)) return false;
        }
        return true;
    };

    // Count of a's bases inside each prefix must match b's inside the image.
    auto rec = [&](auto&& self, int pos) -> bool {
        if (pos == n) {
            std::vector<Mask> mapped;
            detail::remap_sorted(a.bases(), img.data(), mapped);
            return mapped == b.bases();
        }
        for (int t = 0; t < n; ++t) {
            if (has_bit(used, t)) continue;
            if (deg_a[pos] != deg_b[t]) continue;
            img[pos] = t;
            used |= bit(t);
            if (consistent(pos + 1) && self(self, pos + 1)) return true;
            used &= static_cast<Mask>(~bit(t));
            img[pos] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

} // namespace detail

inline bool is_isomorphic(const Matroid& a, const Matroid& b) {
    if (a.size() != b.size() || a.rank() != b.rank() ||
        a.bases().size() != b.bases().size())
        return false;
    if (a.bases() == b.bases()) return true;
    if (fingerprint(a) != fingerprint(b)) return false;
    if (a.size() <= kCanonicalMaxN && a.size() <= 7)
        return canonical_form(a) == canonical_form(b);
    return detail::iso_search(a, b);
}

inline std::uint64_t automorphism_count(const Matroid& m) {
    if (m.size() > kCanonicalMaxN)
        throw BoundsViolatedError("automorphism search supports n <= 9");
    const int n = m.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    std::vector<Mask> scratch;
    do {
        detail::remap_sorted(m.bases(), perm.data(), scratch);
        if (scratch == m.bases()) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

} // namespace matro
