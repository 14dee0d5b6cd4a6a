#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "matro/errors.hpp"

namespace matro {

// Subsets of a ground set of at most 16 elements, packed into one word.
// Bit i set means element i is in the set.
using Mask = std::uint16_t;

constexpr int kMaxGroundSet = 16;

inline int popcount(Mask m) { return std::popcount(static_cast<unsigned>(m)); }

inline Mask full_mask(int n) { return static_cast<Mask>((1u << n) - 1u); }

inline Mask bit(int e) { return static_cast<Mask>(1u << e); }

inline bool has_bit(Mask m, int e) { return (m >> e) & 1u; }

// Index of the lowest set bit; m must be nonzero.
inline int lowest_bit(Mask m) { return std::countr_zero(static_cast<unsigned>(m)); }

// Value type for API surfaces; hot loops work on raw masks.
class ElementSet {
public:
    ElementSet() = default;
    ElementSet(Mask bits, int universe) : bits_(bits), n_(static_cast<std::uint8_t>(universe)) {
        if (universe < 0 || universe > kMaxGroundSet)
            throw BoundsViolatedError("universe size out of range 0..16");
        if (universe < kMaxGroundSet && (bits >> universe) != 0)
            throw BoundsViolatedError("element set has bits beyond its universe");
    }

    static ElementSet empty(int universe) { return ElementSet(0, universe); }
    static ElementSet full(int universe) { return ElementSet(full_mask(universe), universe); }
    static ElementSet single(int e, int universe) { return ElementSet(bit(e), universe); }

    Mask bits() const { return bits_; }
    int universe_size() const { return n_; }
    int size() const { return popcount(bits_); }
    bool empty_set() const { return bits_ == 0; }
    bool contains(int e) const { return has_bit(bits_, e); }

    ElementSet complement() const { return ElementSet(static_cast<Mask>(~bits_ & full_mask(n_)), n_); }

    friend bool operator==(const ElementSet& a, const ElementSet& b) {
        return a.bits_ == b.bits_ && a.n_ == b.n_;
    }

    std::string to_string() const { return mask_to_string(bits_); }

    static std::string mask_to_string(Mask m) {
        std::string s = "{";
        bool first = true;
        for (int e = 0; e < kMaxGroundSet; ++e) {
            if (!has_bit(m, e)) continue;
            if (!first) s += ",";
            s += std::to_string(e);
            first = false;
        }
        s += "}";
        return s;
    }

private:
    Mask bits_ = 0;
    std::uint8_t n_ = 0;
};

} // namespace matro
