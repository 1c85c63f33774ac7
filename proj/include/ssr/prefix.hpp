#pragma once

#include <string>
#include <string_view>

#include "ssr/bits.hpp"
#include "ssr/errors.hpp"

namespace ssr {

// A concrete address in a universe of `width` bits (1..=128).
// Width 32 and 128 use IPv4/IPv6 text, every other width a plain bit string.
class Address {
public:
    Address(unsigned width, Bits128 bits);
    static Address from_index(unsigned width, uint64_t index); // width <= 64
    static Address parse(std::string_view text, unsigned width);

    unsigned width() const { return width_; }
    const Bits128& bits() const { return bits_; }
    uint64_t index() const { return bits_.index(width_); } // width <= 64
    std::string to_string() const;

    friend bool operator==(const Address&, const Address&) = default;

private:
    unsigned width_;
    Bits128 bits_;
};

// Canonical prefix: bits at positions >= plen are always zero, so equality is
// structural. Constructors normalize; parsing rejects non-canonical text.
class Prefix {
public:
    Prefix(unsigned width, unsigned plen, Bits128 bits);
    static Prefix zero(unsigned width); // the full universe, plen 0
    static Prefix host(const Address& a); // plen == width
    static Prefix parse(std::string_view text, unsigned width);

    unsigned width() const { return width_; }
    unsigned plen() const { return plen_; }
    const Bits128& bits() const { return bits_; }
    bool contains(const Address& a) const;
    std::string to_string() const;

    friend bool operator==(const Prefix&, const Prefix&) = default;

private:
    unsigned width_;
    unsigned plen_;
    Bits128 bits_;
};

enum class PrefixOrder { Less, Equal, Greater, Disjoint };

// p is at least as specific as q (p's address set inside q's)
bool prefix_le(const Prefix& p, const Prefix& q);
bool prefix_lt(const Prefix& p, const Prefix& q);
bool prefix_disjoint(const Prefix& p, const Prefix& q);
PrefixOrder prefix_cmp(const Prefix& p, const Prefix& q);

// total (bits, plen) order used for containers and dumps
bool prefix_canon_less(const Prefix& p, const Prefix& q);

// Destination/source prefix pair identifying a route.
struct RouteKey {
    Prefix dest;
    Prefix src;

    bool matches(const Address& ad, const Address& as) const;
    std::string to_string() const; // "<dest> from <src>"
    static RouteKey parse(std::string_view text, unsigned width_dest, unsigned width_src);

    friend bool operator==(const RouteKey&, const RouteKey&) = default;
};

bool key_canon_less(const RouteKey& a, const RouteKey& b);

struct KeyLess {
    bool operator()(const RouteKey& a, const RouteKey& b) const { return key_canon_less(a, b); }
};

// Outcome of comparing two keys under a pair ordering. Incomparable is a
// normal outcome (disjoint or conflicting keys), never an error by itself.
enum class PairOrder { Less, Equal, Greater, Incomparable };

enum class Ordering { DestFirst, SourceFirst };

const char* to_string(Ordering o);

// pair specificity: both components at least as specific
bool pair_le(const RouteKey& r, const RouteKey& q);
bool pair_lt(const RouteKey& r, const RouteKey& q);

// neither ordered nor disjoint: one strictly wins on dest, the other on src
bool pair_conflicts(const RouteKey& r, const RouteKey& q);

// intersection of two conflicting keys: most specific dest, most specific src
RouteKey conflict_zone(const RouteKey& r, const RouteKey& q);

// dest < dest', or equal dests and src <= src'
PairOrder dest_first_cmp(const RouteKey& r, const RouteKey& q);
// mirror image: src first, dest breaks ties
PairOrder source_first_cmp(const RouteKey& r, const RouteKey& q);
PairOrder pair_cmp(Ordering o, const RouteKey& r, const RouteKey& q);

} // namespace ssr
