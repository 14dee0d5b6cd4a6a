#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "matro/element_set.hpp"
#include "matro/errors.hpp"

namespace matro {

// A matroid is stored by its bases family. Everything else (rank function,
// closure, circuits, flats, cyclic flats) is derived once at construction and
// shared immutably, so values are safe to use from concurrent workers.
//
// Derived tables, for ground set size n:
//   rank[A]  = max |B ∩ A| over bases B, realized as a DP over all 2^n subsets
//   A independent  iff  rank[A] == |A|
//   closure(A)     = A ∪ { e : rank[A ∪ e] == rank[A] }
//   circuit        = minimal dependent set
//   flat           = closure-closed set; hyperplane = flat of rank r-1
//   cyclic flat    = flat F whose restriction has no coloop, i.e. F is a
//                    union of the circuits it contains (∅ qualifies when it
//                    is a flat)
class Matroid {
public:
    // The empty matroid U_{0,0}.
    Matroid() : Matroid(0, 0, {0}) {}

    // Checks the basis-exchange axiom over every ordered pair of bases. The
    // input family may be unsorted and may contain duplicates.
    static Matroid validate(int n, int r, std::span<const Mask> bases) {
        check_bounds(n, r);
        std::vector<Mask> fam(bases.begin(), bases.end());
        std::sort(fam.begin(), fam.end());
        fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
        if (fam.empty()) throw EmptyFamilyError();
        for (Mask b : fam) {
            if (b & ~full_mask(n))
                throw BoundsViolatedError("basis " + ElementSet::mask_to_string(b) +
                                          " exceeds ground set of size " + std::to_string(n));
            if (popcount(b) != r) throw WrongCardinalityError(ElementSet::mask_to_string(b));
        }
        if (auto v = find_exchange_violation(fam))
            throw ExchangeViolatedError(ElementSet::mask_to_string(v->b1),
                                        ElementSet::mask_to_string(v->b2), v->e);
        return Matroid(n, r, std::move(fam));
    }

    // Construction bypass for families already known to satisfy exchange
    // (minors and duals of valid matroids, uniform families) and for harness
    // sensitivity tests that deliberately inject invalid families.
    static Matroid from_bases_unchecked(int n, std::vector<Mask> bases) {
        if (bases.empty()) throw EmptyFamilyError();
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
        int r = popcount(bases.front());
        check_bounds(n, r);
        return Matroid(n, r, std::move(bases));
    }

    struct ExchangeViolation {
        Mask b1, b2;
        int e;
    };

    static std::optional<ExchangeViolation> find_exchange_violation(std::span<const Mask> fam) {
        for (Mask b1 : fam) {
            for (Mask b2 : fam) {
                if (b1 == b2) continue;
                Mask out = b1 & ~b2;
                Mask in = b2 & ~b1;
                for (Mask rest = out; rest;) {
                    int e = lowest_bit(rest);
                    rest &= rest - 1;
                    Mask base = b1 ^ bit(e);
                    bool ok = false;
                    for (Mask cand = in; cand;) {
                        int f = lowest_bit(cand);
                        cand &= cand - 1;
                        if (std::binary_search(fam.begin(), fam.end(), Mask(base | bit(f)))) {
                            ok = true;
                            break;
                        }
                    }
                    if (!ok) return ExchangeViolation{b1, b2, e};
                }
            }
        }
        return std::nullopt;
    }

    int size() const { return n_; }
    int rank() const { return r_; }
    int nullity() const { return n_ - r_; }
    const std::vector<Mask>& bases() const { return bases_; }

    int rank_of(Mask a) const { return d_->rank[a & full_mask(n_)]; }
    int rank_of(const ElementSet& a) const { return rank_of(checked(a)); }

    bool is_independent(Mask a) const { return rank_of(a) == popcount(a); }
    bool is_basis(Mask a) const { return std::binary_search(bases_.begin(), bases_.end(), a); }
    bool is_spanning(Mask a) const { return rank_of(a) == r_; }

    Mask closure_bits(Mask a) const {
        a &= full_mask(n_);
        int ra = d_->rank[a];
        Mask cl = a;
        for (Mask rest = Mask(~a & full_mask(n_)); rest;) {
            int e = lowest_bit(rest);
            rest &= rest - 1;
            if (d_->rank[a | bit(e)] == ra) cl |= bit(e);
        }
        return cl;
    }
    ElementSet closure(const ElementSet& a) const { return ElementSet(closure_bits(checked(a)), n_); }

    // All circuits (minimal dependent sets), ascending by mask; empty iff the
    // matroid is free.
    const std::vector<Mask>& circuits() const { return d_->circuits; }

    // All flats, ascending by mask within each rank bucket.
    std::span<const Mask> flats_of_rank(int k) const {
        if (k < 0 || k > r_) throw BoundsViolatedError("flat rank out of range");
        return {d_->flats.data() + d_->flat_offset[k],
                d_->flats.data() + d_->flat_offset[k + 1]};
    }
    const std::vector<Mask>& flats() const { return d_->flats; }
    std::span<const Mask> hyperplanes() const {
        if (r_ == 0) return {};
        return flats_of_rank(r_ - 1);
    }

    const std::vector<Mask>& cyclic_flats() const { return d_->cyclic_flats; }

    Mask loops() const { return d_->loops; }
    Mask coloops() const { return d_->coloops; }
    bool is_loop(int e) const { return has_bit(d_->loops, e); }
    bool is_coloop(int e) const { return has_bit(d_->coloops, e); }

    // e is free when every circuit through it is spanning.
    bool is_free_element(int e) const {
        check_element(e);
        for (Mask c : d_->circuits)
            if (has_bit(c, e) && rank_of(c) < r_) return false;
        return true;
    }

    friend bool operator==(const Matroid& a, const Matroid& b) {
        return a.n_ == b.n_ && a.r_ == b.r_ && a.bases_ == b.bases_;
    }

    void check_element(int e) const {
        if (e < 0 || e >= n_) throw BoundsViolatedError("element " + std::to_string(e) +
                                                        " not in ground set of size " + std::to_string(n_));
    }

private:
    struct Derived {
        std::vector<std::uint8_t> rank; // indexed by subset mask
        std::vector<Mask> circuits;
        std::vector<Mask> flats;              // grouped by rank
        std::vector<std::uint32_t> flat_offset; // size r+2
        std::vector<Mask> cyclic_flats;
        Mask loops = 0, coloops = 0;
    };

    Matroid(int n, int r, std::vector<Mask> bases)
        : n_(n), r_(r), bases_(std::move(bases)), d_(derive(n, r, bases_)) {}

    static void check_bounds(int n, int r) {
        if (n < 0 || n > kMaxGroundSet) throw BoundsViolatedError("ground set size must be 0..16");
        if (r < 0 || r > n) throw BoundsViolatedError("rank must satisfy 0 <= r <= n");
    }

    Mask checked(const ElementSet& a) const {
        if (a.universe_size() != n_)
            throw BoundsViolatedError("element set universe does not match ground set");
        return a.bits();
    }

    static std::shared_ptr<const Derived> derive(int n, int r, const std::vector<Mask>& bases) {
        auto d = std::make_shared<Derived>();
        const std::size_t sz = std::size_t(1) << n;
        const Mask all = full_mask(n);

        // independence = membership in the down-closure of the bases
        std::vector<std::uint8_t> indep(sz, 0);
        for (Mask b : bases) indep[b] = 1;
        for (std::size_t m = sz; m-- > 0;) {
            if (!indep[m]) continue;
            for (Mask rest = static_cast<Mask>(m); rest;) {
                int e = lowest_bit(rest);
                rest &= rest - 1;
                indep[m ^ bit(e)] = 1;
            }
        }

        d->rank.assign(sz, 0);
        for (std::size_t m = 1; m < sz; ++m) {
            if (indep[m]) {
                d->rank[m] = static_cast<std::uint8_t>(popcount(static_cast<Mask>(m)));
            } else {
                std::uint8_t best = 0;
                for (Mask rest = static_cast<Mask>(m); rest;) {
                    int e = lowest_bit(rest);
                    rest &= rest - 1;
                    best = std::max(best, d->rank[m ^ bit(e)]);
                }
                d->rank[m] = best;
            }
        }

        Mask coloops = all, loops = all;
        for (Mask b : bases) {
            coloops &= b;
            loops &= static_cast<Mask>(~b);
        }
        loops &= all;
        d->loops = loops;
        d->coloops = coloops;

        for (std::size_t m = 1; m < sz; ++m) {
            if (indep[m]) continue;
            bool minimal = true;
            for (Mask rest = static_cast<Mask>(m); rest && minimal;) {
                int e = lowest_bit(rest);
                rest &= rest - 1;
                if (!indep[m ^ bit(e)]) minimal = false;
            }
            if (minimal) d->circuits.push_back(static_cast<Mask>(m));
        }

        std::vector<std::vector<Mask>> by_rank(r + 1);
        for (std::size_t m = 0; m < sz; ++m) {
            const Mask a = static_cast<Mask>(m);
            const int ra = d->rank[m];
            bool flat = true;
            for (Mask rest = static_cast<Mask>(~a & all); rest && flat;) {
                int e = lowest_bit(rest);
                rest &= rest - 1;
                if (d->rank[m | bit(e)] == ra) flat = false;
            }
            if (!flat) continue;
            by_rank[ra].push_back(a);
            bool cyclic = true;
            for (Mask rest = a; rest && cyclic;) {
                int e = lowest_bit(rest);
                rest &= rest - 1;
                if (d->rank[m ^ bit(e)] != ra) cyclic = false; // e is a coloop of M|A
            }
            if (cyclic) d->cyclic_flats.push_back(a);
        }
        d->flat_offset.assign(r + 2, 0);
        for (int k = 0; k <= r; ++k) {
            d->flat_offset[k + 1] = d->flat_offset[k] + static_cast<std::uint32_t>(by_rank[k].size());
            d->flats.insert(d->flats.end(), by_rank[k].begin(), by_rank[k].end());
        }
        return d;
    }

    int n_ = 0, r_ = 0;
    std::vector<Mask> bases_;
    std::shared_ptr<const Derived> d_;
};

// The spec-level validation entry point.
inline Matroid validate(int n, int r, std::span<const Mask> bases) {
    return Matroid::validate(n, r, bases);
}

} // namespace matro
