#pragma once

#include <compare>
#include <cstdint>

namespace ssr {

// Fixed 128-bit bitstring with big-endian bit addressing: bit 0 is the most
// significant bit of hi, bit 127 the least significant bit of lo.
struct Bits128 {
    uint64_t hi = 0;
    uint64_t lo = 0;

    friend constexpr bool operator==(const Bits128&, const Bits128&) = default;

    // big-endian numeric order
    friend constexpr std::strong_ordering operator<=>(const Bits128& a, const Bits128& b) {
        if (auto c = a.hi <=> b.hi; c != 0) return c;
        return a.lo <=> b.lo;
    }

    constexpr bool bit(unsigned i) const {
        return i < 64 ? (hi >> (63 - i)) & 1u : (lo >> (127 - i)) & 1u;
    }

    constexpr void set_bit(unsigned i) {
        if (i < 64)
            hi |= uint64_t{1} << (63 - i);
        else
            lo |= uint64_t{1} << (127 - i);
    }

    // first n bits of *this and o agree
    constexpr bool prefix_equal(const Bits128& o, unsigned n) const {
        if (n == 0) return true;
        if (n <= 64) return ((hi ^ o.hi) >> (64 - n)) == 0;
        if (hi != o.hi) return false;
        if (n >= 128) return lo == o.lo;
        return ((lo ^ o.lo) >> (128 - n)) == 0;
    }

    // bits at positions >= n cleared
    constexpr Bits128 truncated(unsigned n) const {
        if (n == 0) return {};
        if (n < 64) return {hi & ~((uint64_t{1} << (64 - n)) - 1), 0};
        if (n == 64) return {hi, 0};
        if (n >= 128) return *this;
        return {hi, lo & ~((uint64_t{1} << (128 - n)) - 1)};
    }

    constexpr bool zero_from(unsigned n) const { return *this == truncated(n); }

    // low `width` bits of value, left-aligned; for enumerating small universes
    static constexpr Bits128 from_index(uint64_t value, unsigned width) {
        Bits128 b;
        if (width == 0) return b;
        if (width < 64) value &= (uint64_t{1} << width) - 1;
        if (width <= 64) {
            b.hi = value << (64 - width);
        } else {
            b.hi = value >> (width - 64);
            b.lo = value << (128 - width);
        }
        return b;
    }

    // top `width` bits as an integer; width <= 64
    constexpr uint64_t index(unsigned width) const {
        return width == 0 ? 0 : hi >> (64 - width);
    }
};

} // namespace ssr
