#pragma once

#include <bitset>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>
#include <vector>

#include "matro/canonical.hpp"
#include "matro/constructions.hpp"
#include "matro/io.hpp"
#include "matro/matroid.hpp"

namespace matro {

constexpr int kBruteForceMaxN = 6;
constexpr int kRepresentativesMaxN = 7;

// The r-subsets of [n], ascending by mask; a labeled bases family on (n, r)
// is a bitmask over this list.
inline const std::vector<Mask>& subset_universe(int n, int r) {
    static std::map<std::pair<int, int>, std::vector<Mask>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Mask> u;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (popcount(static_cast<Mask>(m)) == r) u.push_back(static_cast<Mask>(m));
    return cache.emplace(key, std::move(u)).first->second;
}

using FamilyBits = std::uint32_t;

inline std::vector<Mask> family_masks(const std::vector<Mask>& universe, FamilyBits fam) {
    std::vector<Mask> out;
    for (std::uint32_t rest = fam; rest;) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        out.push_back(universe[i]);
    }
    return out;
}

namespace detail {

// Exhaustive enumeration of exchange-valid bases families as a DFS over the
// r-subset universe in ascending mask order. When including a set creates an
// exchange requirement all of whose witnesses are already decided absent, the
// branch is dead and is pruned; every surviving leaf is fully re-validated.
class BruteForceEnumerator {
public:
    BruteForceEnumerator(int n, int r) : n_(n), r_(r), universe_(subset_universe(n, r)) {
        index_of_.assign(std::size_t(1) << n, -1);
        for (std::size_t i = 0; i < universe_.size(); ++i) index_of_[universe_[i]] = static_cast<int>(i);
    }

    std::vector<FamilyBits> run() {
        std::vector<FamilyBits> out;
        dfs(0, 0, out);
        return out;
    }

private:
    // Exchange requirements of the ordered pair (b1, b2) against `fam`;
    // returns false when some requirement is permanently unsatisfiable given
    // that only sets with index > decided_up_to can still be added.
    bool pair_feasible(Mask b1, Mask b2, FamilyBits fam, int decided_up_to) const {
        Mask out = b1 & static_cast<Mask>(~b2);
        Mask in = b2 & static_cast<Mask>(~b1);
        for (Mask rest = out; rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            Mask base = b1 ^ bit(e);
            bool satisfied = false, still_open = false;
            for (Mask cand = in; cand;) {
                int f = lowest_bit(cand);
                cand &= cand - 1;
                int idx = index_of_[base | bit(f)];
                if (fam >> idx & 1u) {
                    satisfied = true;
                    break;
                }
                if (idx > decided_up_to) still_open = true;
            }
            if (!satisfied && !still_open) return false;
        }
        return true;
    }

    bool include_feasible(FamilyBits fam, int new_idx) const {
        Mask b_new = universe_[new_idx];
        for (std::uint32_t rest = fam; rest;) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            if (i == new_idx) continue;
            Mask b = universe_[i];
            if (!pair_feasible(b, b_new, fam, new_idx) || !pair_feasible(b_new, b, fam, new_idx))
                return false;
        }
        return true;
    }

    bool full_valid(FamilyBits fam) const {
        const int last = static_cast<int>(universe_.size()) - 1;
        for (std::uint32_t rest = fam; rest;) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            for (std::uint32_t rest2 = fam; rest2;) {
                int j = std::countr_zero(rest2);
                rest2 &= rest2 - 1;
                if (i == j) continue;
                if (!pair_feasible(universe_[i], universe_[j], fam, last)) return false;
            }
        }
        return true;
    }

    void dfs(std::size_t idx, FamilyBits fam, std::vector<FamilyBits>& out) const {
        if (idx == universe_.size()) {
            if (fam != 0 && full_valid(fam)) out.push_back(fam);
            return;
        }
        dfs(idx + 1, fam, out);
        FamilyBits with = fam | (FamilyBits(1) << idx);
        if (include_feasible(with, static_cast<int>(idx))) dfs(idx + 1, with, out);
    }

    int n_, r_;
    const std::vector<Mask>& universe_;
    std::vector<int> index_of_;
};

} // namespace detail

// Every exchange-valid bases family of r-subsets of [n], as family bitmasks
// over subset_universe(n, r), sorted ascending. Ground-truth oracle; n <= 6.
inline std::vector<FamilyBits> brute_force_labeled_bits(int n, int r) {
    if (n < 0 || n > kBruteForceMaxN || r < 0 || r > n)
        throw BoundsViolatedError("brute-force enumeration supports 0 <= r <= n <= 6");
    auto fams = detail::BruteForceEnumerator(n, r).run();
    std::sort(fams.begin(), fams.end());
    return fams;
}

inline std::vector<Matroid> brute_force_labeled(int n, int r) {
    const auto& universe = subset_universe(n, r);
    std::vector<Matroid> out;
    for (FamilyBits fam : brute_force_labeled_bits(n, r))
        out.push_back(Matroid::from_bases_unchecked(n, family_masks(universe, fam)));
    return out;
}

struct Catalog {
    enum class Mode { Labeled, Representatives };
    int n = 0;
    Mode mode = Mode::Labeled;
    std::vector<Matroid> entries;
};

inline Catalog generate_labeled(int n) {
    Catalog cat{n, Catalog::Mode::Labeled, {}};
    for (int r = 0; r <= n; ++r) {
        auto ms = brute_force_labeled(n, r);
        cat.entries.insert(cat.entries.end(), ms.begin(), ms.end());
    }
    return cat;
}

namespace detail {

// True when the bases list is lexicographically least over all relabelings;
// such families are their own canonical forms.
inline bool is_lex_min_labeling(const Matroid& m) {
    const int n = m.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Mask> scratch;
    while (std::next_permutation(perm.begin(), perm.end())) {
        remap_sorted(m.bases(), perm.data(), scratch);
        if (scratch < m.bases()) return false;
    }
    return true;
}

// All single-element extensions of M by a new top-index element: the coloop
// extension plus one rank-preserving extension per linear subclass (a set of
// hyperplanes closed under: two members meeting in corank 2 force every
// hyperplane over that intersection into the set).
inline std::vector<Matroid> single_element_extensions(const Matroid& m) {
    const int n = m.size(), r = m.rank();
    if (n >= kMaxGroundSet) throw BoundsViolatedError("extension exceeds 16 elements");
    std::vector<Matroid> out;

    { // coloop extension
        std::vector<Mask> bases;
        for (Mask b : m.bases()) bases.push_back(static_cast<Mask>(b | bit(n)));
        out.push_back(Matroid::from_bases_unchecked(n + 1, std::move(bases)));
    }
    if (r == 0) { // only the loop extension remains
        out.push_back(Matroid::from_bases_unchecked(n + 1, m.bases()));
        return out;
    }

    auto hps = m.hyperplanes();
    const int hn = static_cast<int>(hps.size());
    if (hn > 128) throw BoundsViolatedError("too many hyperplanes for extension search");
    using HSet = std::bitset<128>;

    // forced_by[i][j]: hyperplanes containing hps[i] ∩ hps[j] when that
    // intersection has rank r-2 (a modular pair)
    std::vector<std::vector<HSet>> forced(hn, std::vector<HSet>(hn));
    std::vector<std::vector<bool>> modular(hn, std::vector<bool>(hn, false));
    for (int i = 0; i < hn; ++i)
        for (int j = i + 1; j < hn; ++j) {
            Mask inter = hps[i] & hps[j];
            if (m.rank_of(inter) != r - 2) continue;
            HSet force;
            for (int k = 0; k < hn; ++k)
                if ((hps[k] & inter) == inter) force.set(k);
            modular[i][j] = modular[j][i] = true;
            forced[i][j] = forced[j][i] = force;
        }

    // independent (r-1)-sets grouped by their closure hyperplane
    std::vector<std::vector<Mask>> sets_by_hp(hn);
    std::unordered_map<Mask, int> hp_index;
    for (int i = 0; i < hn; ++i) hp_index[hps[i]] = i;
    for (Mask s : detail::k_submasks(full_mask(n), r - 1,
                                     [&](Mask s) { return m.is_independent(s); }))
        sets_by_hp[hp_index.at(m.closure_bits(s))].push_back(s);

    auto emit = [&](const HSet& in_set) {
        std::vector<Mask> bases = m.bases();
        for (int h = 0; h < hn; ++h) {
            if (in_set.test(h)) continue;
            for (Mask s : sets_by_hp[h]) bases.push_back(static_cast<Mask>(s | bit(n)));
        }
        out.push_back(Matroid::validate(n + 1, r, bases));
    };

    // include/exclude DFS over hyperplane indices with forced-closure propagation
    auto propagate = [&](HSet& in_set, HSet& decided, int h) -> bool {
        std::vector<int> queue = {h};
        while (!queue.empty()) {
            int cur = queue.back();
            queue.pop_back();
            for (int j = 0; j < hn; ++j) {
                if (j == cur || !in_set.test(j) || !modular[cur][j]) continue;
                HSet need = forced[cur][j];
                if ((need & ~in_set & decided).any()) return false;
                HSet fresh = need & ~in_set;
                for (int k = 0; k < hn; ++k)
                    if (fresh.test(k)) {
                        in_set.set(k);
                        decided.set(k);
                        queue.push_back(k);
                    }
            }
        }
        return true;
    };

    auto rec = [&](auto&& self, HSet in_set, HSet decided) -> void {
        int next = -1;
        for (int h = 0; h < hn; ++h)
            if (!decided.test(h)) {
                next = h;
                break;
            }
        if (next < 0) {
            emit(in_set);
            return;
        }
        HSet d_out = decided;
        d_out.set(next);
        self(self, in_set, d_out);
        HSet in2 = in_set, d2 = decided;
        in2.set(next);
        d2.set(next);
        if (propagate(in2, d2, next)) self(self, in2, d2);
    };
    rec(rec, HSet{}, HSet{});
    return out;
}

inline void sort_entries(std::vector<Matroid>& entries) {
    std::sort(entries.begin(), entries.end(), [](const Matroid& a, const Matroid& b) {
        if (a.rank() != b.rank()) return a.rank() < b.rank();
        return a.bases() < b.bases();
    });
}

inline std::vector<Matroid> representatives_brute(int n) {
    std::vector<Matroid> out;
    for (int r = 0; r <= n; ++r)
        for (const Matroid& m : brute_force_labeled(n, r))
            if (is_lex_min_labeling(m)) out.push_back(m);
    sort_entries(out);
    return out;
}

inline std::vector<Matroid> representatives_extension(int n);

inline const std::vector<Matroid>& representatives_cached(int n) {
    static std::map<int, std::vector<Matroid>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    // computed outside the lock: the extension path recurses into n-1
    std::vector<Matroid> reps =
        n <= kBruteForceMaxN ? representatives_brute(n) : representatives_extension(n);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, std::move(reps)).first->second;
}

inline std::vector<Matroid> representatives_extension(int n) {
    if (n == 0) return {uniform(0, 0)};
    const auto& seeds = representatives_cached(n - 1);
    std::vector<Matroid> out;
    std::set<CanonicalForm> seen;
    for (const Matroid& seed : seeds)
        for (const Matroid& ext : single_element_extensions(seed)) {
            CanonicalForm c = canonical_form(ext);
            if (!seen.insert(c).second) continue;
            out.push_back(Matroid::from_bases_unchecked(c.n, c.bases));
        }
    sort_entries(out);
    return out;
}

} // namespace detail

// Isomorph-free representatives for all ranks: canonical-form deduplication
// of the labeled enumeration up to n = 6, single-element extension with
// canonical-form rejection for n = 7. Beyond 7 the labeled extension stream
// explodes (millions of linear subclasses for the symmetric seeds) and an
// isomorph-free search would need orbit pruning; the bound is explicit.
inline Catalog generate_representatives(int n) {
    if (n < 0 || n > kRepresentativesMaxN)
        throw BoundsViolatedError("representative generation supports n <= 7");
    return Catalog{n, Catalog::Mode::Representatives, detail::representatives_cached(n)};
}

// All ordered pairs (M, N) of labeled catalog entries with equal rank and
// bases(N) a proper subset of bases(M): exactly the pairs joined by a
// non-identity-image rank-preserving identity weak map.
inline void for_each_weak_pair(const Catalog& cat,
                               const std::function<void(const Matroid&, const Matroid&)>& fn) {
    std::map<int, std::vector<const Matroid*>> by_rank;
    for (const Matroid& m : cat.entries) by_rank[m.rank()].push_back(&m);
    for (auto& [r, list] : by_rank)
        for (const Matroid* m : list)
            for (const Matroid* n : list) {
                if (m == n || n->bases().size() >= m->bases().size()) continue;
                if (std::includes(m->bases().begin(), m->bases().end(), n->bases().begin(),
                                  n->bases().end()))
                    fn(*m, *n);
            }
}

inline void save(const Catalog& cat, std::ostream& os) {
    os << "catalog n=" << cat.n
       << " mode=" << (cat.mode == Catalog::Mode::Labeled ? "labeled" : "repr")
       << " count=" << cat.entries.size() << '\n';
    bool first = true;
    for (const Matroid& m : cat.entries) {
        if (!first) os << '\n';
        first = false;
        write_matroid(os, m);
    }
}

inline Catalog load(std::istream& is) {
    std::ostringstream buf;
    buf << is.rdbuf();
    auto lines = detail::split_lines(buf.str());
    if (lines.empty()) throw ParseError(1, "missing catalog header");
    Catalog cat;
    std::size_t count = 0;
    {
        std::istringstream h(lines[0]);
        std::string word, ntok, mtok, ctok;
        h >> word >> ntok >> mtok >> ctok;
        if (word != "catalog" || ntok.rfind("n=", 0) != 0 || mtok.rfind("mode=", 0) != 0 ||
            ctok.rfind("count=", 0) != 0)
            throw ParseError(1, "bad catalog header");
        try {
            cat.n = std::stoi(ntok.substr(2));
            count = static_cast<std::size_t>(std::stoul(ctok.substr(6)));
        } catch (const std::exception&) {
            throw ParseError(1, "bad catalog header");
        }
        std::string mode = mtok.substr(5);
        if (mode == "labeled")
            cat.mode = Catalog::Mode::Labeled;
        else if (mode == "repr")
            cat.mode = Catalog::Mode::Representatives;
        else
            throw ParseError(1, "unknown catalog mode '" + mode + "'");
    }
    std::size_t pos = 1;
    for (;;) {
        while (pos < lines.size() && (detail::is_blank(lines[pos]) || detail::is_comment(lines[pos])))
            ++pos;
        if (pos >= lines.size()) break;
        int header_line = static_cast<int>(pos + 1);
        MatroidBlock blk = detail::read_block(lines, pos);
        try {
            cat.entries.push_back(Matroid::validate(blk.n, blk.r, blk.bases));
        } catch (const Error& e) {
            throw ParseError(header_line, e.what());
        }
        if (cat.entries.back().size() != cat.n)
            throw ParseError(header_line, "block ground-set size differs from catalog header");
    }
    if (cat.entries.size() != count) throw CountMismatchError(count, cat.entries.size());
    return cat;
}

} // namespace matro
