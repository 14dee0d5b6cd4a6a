#pragma once

#include <map>
#include <string>
#include <vector>

#include "matro/matroid.hpp"

namespace matro {

inline Matroid uniform(int r, int n) {
    if (n < 0 || n > kMaxGroundSet || r < 0 || r > n)
        throw BoundsViolatedError("uniform matroid needs 0 <= r <= n <= 16");
    std::vector<Mask> bases;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (popcount(static_cast<Mask>(m)) == r) bases.push_back(static_cast<Mask>(m));
    return Matroid::from_bases_unchecked(n, std::move(bases));
}

inline Matroid direct_sum(const Matroid& a, const Matroid& b) {
    if (a.size() + b.size() > kMaxGroundSet)
        throw BoundsViolatedError("direct sum exceeds 16 elements");
    std::vector<Mask> bases;
    bases.reserve(a.bases().size() * b.bases().size());
    for (Mask ba : a.bases())
        for (Mask bb : b.bases())
            bases.push_back(static_cast<Mask>(ba | (bb << a.size())));
    return Matroid::from_bases_unchecked(a.size() + b.size(), std::move(bases));
}

// Minors re-index the surviving elements densely; the maps record how.
struct Minor {
    Matroid m;
    std::vector<int> old_to_new; // -1 for removed elements
    std::vector<int> new_to_old;
};

namespace detail {

struct IndexMaps {
    std::vector<int> old_to_new, new_to_old;
};

inline IndexMaps dense_maps(int n, Mask removed) {
    IndexMaps maps;
    maps.old_to_new.assign(n, -1);
    for (int e = 0; e < n; ++e) {
        if (has_bit(removed, e)) continue;
        maps.old_to_new[e] = static_cast<int>(maps.new_to_old.size());
        maps.new_to_old.push_back(e);
    }
    return maps;
}

inline Mask remap_down(Mask m, const std::vector<int>& old_to_new) {
    Mask out = 0;
    for (Mask rest = m; rest;) {
        int e = lowest_bit(rest);
        rest &= rest - 1;
        out |= bit(old_to_new[e]);
    }
    return out;
}

// All size-k submasks of `universe` for which pred holds.
template <class Pred>
std::vector<Mask> k_submasks(Mask universe, int k, Pred&& pred) {
    std::vector<Mask> out;
    Mask sub = universe;
    for (;;) {
        if (popcount(sub) == k && pred(sub)) out.push_back(sub);
        if (sub == 0) break;
        sub = static_cast<Mask>((sub - 1) & universe);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

inline Minor delete_elements(const Matroid& m, Mask x) {
    x &= full_mask(m.size());
    const Mask keep = static_cast<Mask>(~x & full_mask(m.size()));
    const int new_rank = m.rank_of(keep);
    auto maps = detail::dense_maps(m.size(), x);
    std::vector<Mask> bases;
    for (Mask s : detail::k_submasks(keep, new_rank, [&](Mask s) { return m.is_independent(s); }))
        bases.push_back(detail::remap_down(s, maps.old_to_new));
    std::sort(bases.begin(), bases.end());
    return Minor{Matroid::from_bases_unchecked(popcount(keep), std::move(bases)),
                 std::move(maps.old_to_new), std::move(maps.new_to_old)};
}

inline Minor contract_elements(const Matroid& m, Mask x) {
    x &= full_mask(m.size());
    const Mask keep = static_cast<Mask>(~x & full_mask(m.size()));
    const int rx = m.rank_of(x);
    const int new_rank = m.rank() - rx;
    auto maps = detail::dense_maps(m.size(), x);
    std::vector<Mask> bases;
    for (Mask s : detail::k_submasks(keep, new_rank,
                                     [&](Mask s) { return m.rank_of(s | x) == rx + popcount(s); }))
        bases.push_back(detail::remap_down(s, maps.old_to_new));
    std::sort(bases.begin(), bases.end());
    return Minor{Matroid::from_bases_unchecked(popcount(keep), std::move(bases)),
                 std::move(maps.old_to_new), std::move(maps.new_to_old)};
}

inline Minor restrict_to(const Matroid& m, Mask x) {
    return delete_elements(m, static_cast<Mask>(~x & full_mask(m.size())));
}

inline Minor delete_elements(const Matroid& m, const ElementSet& x) { return delete_elements(m, x.bits()); }
inline Minor contract_elements(const Matroid& m, const ElementSet& x) { return contract_elements(m, x.bits()); }
inline Minor restrict_to(const Matroid& m, const ElementSet& x) { return restrict_to(m, x.bits()); }

inline Matroid dual(const Matroid& m) {
    const Mask all = full_mask(m.size());
    std::vector<Mask> bases;
    bases.reserve(m.bases().size());
    for (Mask b : m.bases()) bases.push_back(static_cast<Mask>(~b & all));
    std::sort(bases.begin(), bases.end());
    if (bases.empty()) bases.push_back(0); // n = 0
    return Matroid::from_bases_unchecked(m.size(), std::move(bases));
}

// Independent sets of τ(M) are the independent sets of M with at most r-1
// elements; equals free-extension-then-contract (tested, not assumed).
inline Matroid truncation(const Matroid& m) {
    if (m.rank() == 0) throw RankZeroError();
    const int k = m.rank() - 1;
    std::vector<Mask> bases =
        detail::k_submasks(full_mask(m.size()), k, [&](Mask s) { return m.is_independent(s); });
    return Matroid::from_bases_unchecked(m.size(), std::move(bases));
}

inline Matroid free_extension(const Matroid& m) {
    if (m.size() >= kMaxGroundSet)
        throw BoundsViolatedError("free extension exceeds 16 elements");
    const Mask e_new = bit(m.size());
    std::vector<Mask> bases = m.bases();
    if (m.rank() >= 1)
        for (Mask s : detail::k_submasks(full_mask(m.size()), m.rank() - 1,
                                         [&](Mask s) { return m.is_independent(s); }))
            bases.push_back(static_cast<Mask>(s | e_new));
    return Matroid::from_bases_unchecked(m.size() + 1, std::move(bases));
}

inline Matroid relax(const Matroid& m, Mask x) {
    const bool is_circuit =
        std::binary_search(m.circuits().begin(), m.circuits().end(), x);
    auto hp = m.hyperplanes();
    const bool is_hyperplane = std::binary_search(hp.begin(), hp.end(), x);
    if (!is_circuit || !is_hyperplane)
        throw NotCircuitHyperplaneError(ElementSet::mask_to_string(x));
    std::vector<Mask> bases = m.bases();
    bases.push_back(x);
    return Matroid::validate(m.size(), m.rank(), bases);
}

inline Matroid relax(const Matroid& m, const ElementSet& x) { return relax(m, x.bits()); }

namespace detail {

// Bases from a complete circuit family: independent = contains no circuit.
inline Matroid matroid_from_circuits(int n, const std::vector<Mask>& circuits,
                                     int expected_rank) {
    const std::size_t sz = std::size_t(1) << n;
    std::vector<std::uint8_t> dep(sz, 0);
    for (Mask c : circuits) dep[c] = 1;
    for (std::size_t m = 0; m < sz; ++m) {
        if (!dep[m]) continue;
        for (Mask rest = static_cast<Mask>(~m & full_mask(n)); rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            dep[m | bit(e)] = 1;
        }
    }
    int rank = 0;
    for (std::size_t m = 0; m < sz; ++m)
        if (!dep[m]) rank = std::max(rank, popcount(static_cast<Mask>(m)));
    if (rank != expected_rank)
        throw PreconditionViolatedError("circuit family yields rank " + std::to_string(rank) +
                                        ", expected " + std::to_string(expected_rank));
    std::vector<Mask> bases;
    for (std::size_t m = 0; m < sz; ++m)
        if (!dep[m] && popcount(static_cast<Mask>(m)) == rank)
            bases.push_back(static_cast<Mask>(m));
    return Matroid::validate(n, rank, bases);
}

} // namespace detail

// Glues b onto a at a basepoint. Layout: a's elements keep their indices
// (with pb identified with pa); b's other elements follow in ascending order
// starting at a.size().
inline Matroid parallel_connection(const Matroid& a, const Matroid& b, int pa, int pb) {
    a.check_element(pa);
    b.check_element(pb);
    if (a.is_loop(pa) || a.is_coloop(pa)) throw BasepointDegenerateError(pa);
    if (b.is_loop(pb) || b.is_coloop(pb)) throw BasepointDegenerateError(pb);
    const int n = a.size() + b.size() - 1;
    if (n > kMaxGroundSet) throw BoundsViolatedError("parallel connection exceeds 16 elements");

    std::vector<int> bmap(b.size());
    int next = a.size();
    for (int e = 0; e < b.size(); ++e) bmap[e] = (e == pb) ? pa : next++;
    auto remap_b = [&](Mask m) {
        Mask out = 0;
        for (Mask rest = m; rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            out |= bit(bmap[e]);
        }
        return out;
    };

    std::vector<Mask> circuits;
    for (Mask c : a.circuits()) circuits.push_back(c);
    for (Mask c : b.circuits()) circuits.push_back(remap_b(c));
    for (Mask ca : a.circuits()) {
        if (!has_bit(ca, pa)) continue;
        for (Mask cb : b.circuits()) {
            if (!has_bit(cb, pb)) continue;
            circuits.push_back(static_cast<Mask>((ca ^ bit(pa)) | (remap_b(cb) ^ bit(pa))));
        }
    }
    Matroid glued = detail::matroid_from_circuits(n, circuits, a.rank() + b.rank() - 1);
    return glued;
}

inline Matroid two_sum(const Matroid& a, const Matroid& b, int pa, int pb) {
    Matroid glued = parallel_connection(a, b, pa, pb);
    Minor result = delete_elements(glued, bit(pa));
    if (result.m.rank() != a.rank() + b.rank() - 1)
        throw PreconditionViolatedError("2-sum rank is not r1 + r2 - 1");
    return result.m;
}

struct NamedExample {
    std::string name;
    Matroid m;
    std::map<int, std::string> labels;
};

// Rank-3 matroid on seven points: x1,x2,x3,x3' collinear, x3,x3',x4,x5
// collinear, x3 parallel to x3', x6 in general position.
inline NamedExample figure2_example() {
    const int n = 7, r = 3;
    // indices: x1=0 x2=1 x3=2 x3'=3 x4=4 x5=5 x6=6
    std::vector<Mask> declared = {
        static_cast<Mask>(bit(2) | bit(3)),
        static_cast<Mask>(bit(0) | bit(1) | bit(2)),
        static_cast<Mask>(bit(0) | bit(1) | bit(3)),
        static_cast<Mask>(bit(2) | bit(4) | bit(5)),
        static_cast<Mask>(bit(3) | bit(4) | bit(5)),
    };
    // every 4-set is dependent in rank 3
    std::vector<Mask> circuits = declared;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (popcount(static_cast<Mask>(m)) == r + 1) circuits.push_back(static_cast<Mask>(m));
    Matroid m3 = detail::matroid_from_circuits(n, circuits, r);

    // encoding gate: the two flat counts the construction must reproduce
    auto count_rank2_through = [&](int e) {
        int c = 0;
        for (Mask f : m3.flats_of_rank(2))
            if (has_bit(f, e)) ++c;
        return c;
    };
    if (count_rank2_through(0) != 4 || count_rank2_through(2) != 3)
        throw PreconditionViolatedError("figure-2 encoding failed its flat-count gate");

    NamedExample ex{"figure2", m3, {}};
    ex.labels = {{0, "x1"}, {1, "x2"}, {2, "x3"}, {3, "x3'"}, {4, "x4"}, {5, "x5"}, {6, "x6"}};
    return ex;
}

// Rank-5 matroid on 11 elements: generalized parallel connection of two
// 4-point lines and a 6-element rank-3 matroid across a common basepoint p,
// with p then deleted. Every property the construction is meant to deliver is
// asserted here so a wrong gluing interpretation fails at once.
inline NamedExample counterexample_sec4() {
    // M1 on {g,a,b,f,p,c} = indices 0..5: every 3-subset is a basis except {g,a,b}.
    std::vector<Mask> m1_bases;
    const Mask gab = static_cast<Mask>(bit(0) | bit(1) | bit(2));
    for (Mask m = 0; m < (1u << 6); ++m)
        if (popcount(m) == 3 && m != gab) m1_bases.push_back(m);
    Matroid m1 = Matroid::validate(6, 3, m1_bases);
    Matroid line = uniform(2, 4);

    Matroid p23 = parallel_connection(line, line, 0, 0); // p at index 0
    Matroid glued = parallel_connection(m1, p23, 4, 0);  // p at index 4 of M1
    Minor cut = delete_elements(glued, bit(4));
    const Matroid& m = cut.m;

    auto fail = [](const std::string& what) {
        throw PreconditionViolatedError("section-4 counterexample gluing: " + what);
    };
    if (m.size() != 11 || m.rank() != 5) fail("expected 11 elements of rank 5");

    const int f = cut.old_to_new[3], g = cut.old_to_new[0];
    auto spanning_circuits_through = [&](int e) {
        int c = 0;
        for (Mask cir : m.circuits())
            if (has_bit(cir, e) && m.rank_of(cir) == m.rank()) ++c;
        return c;
    };
    if (spanning_circuits_through(f) != 0 || spanning_circuits_through(g) != 0)
        fail("expected no spanning circuits through f or g");

    for (Mask cf : m.cyclic_flats())
        if (has_bit(cf, f) && !has_bit(cf, g)) fail("f is not freer than g");

    std::vector<Mask> swapped;
    for (Mask b : m.bases()) {
        Mask s = b & static_cast<Mask>(~(bit(f) | bit(g)));
        if (has_bit(b, f)) s |= bit(g);
        if (has_bit(b, g)) s |= bit(f);
        swapped.push_back(s);
    }
    std::sort(swapped.begin(), swapped.end());
    if (swapped == m.bases()) fail("f and g must not be clones");

    if (m.coloops() != 0) fail("matroid must have no coloops");
    for (Mask c : dual(m).circuits())
        if (popcount(c) == 2) fail("matroid must have no 2-cocircuits");

    NamedExample ex{"counterexample_sec4", m, {}};
    ex.labels = {{0, "g"},    {1, "a"},    {2, "b"},    {3, "f"},    {4, "c"},    {5, "m2_1"},
                 {6, "m2_2"}, {7, "m2_3"}, {8, "m3_1"}, {9, "m3_2"}, {10, "m3_3"}};
    return ex;
}

} // namespace matro
