#include "ssr/prefix.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>

namespace ssr {

namespace {

void check_width(unsigned width) {
    if (width < 1 || width > 128)
        throw ContractViolation("width must be in 1..128, got " + std::to_string(width));
}

Bits128 bits_from_bytes(const unsigned char* b, unsigned nbytes) {
    Bits128 r;
    for (unsigned i = 0; i < nbytes && i < 8; i++)
        r.hi |= uint64_t{b[i]} << (56 - 8 * i);
    for (unsigned i = 8; i < nbytes; i++)
        r.lo |= uint64_t{b[i]} << (56 - 8 * (i - 8));
    return r;
}

void bytes_from_bits(const Bits128& bits, unsigned char* b, unsigned nbytes) {
    for (unsigned i = 0; i < nbytes && i < 8; i++)
        b[i] = static_cast<unsigned char>(bits.hi >> (56 - 8 * i));
    for (unsigned i = 8; i < nbytes; i++)
        b[i] = static_cast<unsigned char>(bits.lo >> (56 - 8 * (i - 8)));
}

Bits128 parse_inet(std::string_view text, unsigned width) {
    std::string t(text);
    if (width == 32) {
        in_addr a{};
        if (inet_pton(AF_INET, t.c_str(), &a) != 1)
            throw ParseError("bad IPv4 address '" + t + "'");
        unsigned char b[4];
        std::memcpy(b, &a, 4);
        return bits_from_bytes(b, 4);
    }
    in6_addr a{};
    if (inet_pton(AF_INET6, t.c_str(), &a) != 1)
        throw ParseError("bad IPv6 address '" + t + "'");
    unsigned char b[16];
    std::memcpy(b, &a, 16);
    return bits_from_bytes(b, 16);
}

std::string format_inet(const Bits128& bits, unsigned width) {
    if (width == 32) {
        unsigned char b[4];
        bytes_from_bits(bits, b, 4);
        in_addr a{};
        std::memcpy(&a, b, 4);
        char buf[INET_ADDRSTRLEN];
        inet_ntop(AF_INET, &a, buf, sizeof buf);
        return buf;
    }
    unsigned char b[16];
    bytes_from_bits(bits, b, 16);
    in6_addr a{};
    std::memcpy(&a, b, 16);
    char buf[INET6_ADDRSTRLEN];
    inet_ntop(AF_INET6, &a, buf, sizeof buf);
    return buf;
}

Bits128 parse_bitstring(std::string_view text, unsigned width, unsigned max_len,
                        const char* what) {
    if (text.size() > max_len)
        throw ParseError(std::string(what) + " '" + std::string(text) + "' longer than " +
                         std::to_string(max_len) + " bits");
    Bits128 b;
    for (unsigned i = 0; i < text.size(); i++) {
        if (text[i] == '1')
            b.set_bit(i);
        else if (text[i] != '0')
            throw ParseError(std::string(what) + " '" + std::string(text) +
                             "' has a character other than 0/1");
    }
    (void)width;
    return b;
}

} // namespace

Address::Address(unsigned width, Bits128 bits) : width_(width), bits_(bits.truncated(width)) {
    check_width(width);
}

Address Address::from_index(unsigned width, uint64_t index) {
    return Address(width, Bits128::from_index(index, width));
}

Address Address::parse(std::string_view text, unsigned width) {
    check_width(width);
    if (width == 32 || width == 128) return Address(width, parse_inet(text, width));
    if (text.size() != width)
        throw ParseError("address '" + std::string(text) + "' must be exactly " +
                         std::to_string(width) + " bits");
    return Address(width, parse_bitstring(text, width, width, "address"));
}

std::string Address::to_string() const {
    if (width_ == 32 || width_ == 128) return format_inet(bits_, width_);
    std::string s(width_, '0');
    for (unsigned i = 0; i < width_; i++)
        if (bits_.bit(i)) s[i] = '1';
    return s;
}

Prefix::Prefix(unsigned width, unsigned plen, Bits128 bits)
    : width_(width), plen_(plen), bits_(bits.truncated(plen)) {
    check_width(width);
    if (plen > width)
        throw ContractViolation("prefix length " + std::to_string(plen) + " exceeds width " +
                                std::to_string(width));
}

Prefix Prefix::zero(unsigned width) { return Prefix(width, 0, {}); }

Prefix Prefix::host(const Address& a) { return Prefix(a.width(), a.width(), a.bits()); }

Prefix Prefix::parse(std::string_view text, unsigned width) {
    check_width(width);
    auto slash = text.rfind('/');
    if (slash == std::string_view::npos)
        throw ParseError("prefix '" + std::string(text) + "' is missing /len");
    std::string_view body = text.substr(0, slash);
    std::string_view len = text.substr(slash + 1);
    unsigned plen = 0;
    auto [p, ec] = std::from_chars(len.data(), len.data() + len.size(), plen);
    if (ec != std::errc{} || p != len.data() + len.size())
        throw ParseError("bad prefix length in '" + std::string(text) + "'");
    if (plen > width)
        throw ParseError("prefix length " + std::to_string(plen) + " exceeds width " +
                         std::to_string(width) + " in '" + std::string(text) + "'");
    Bits128 bits;
    if (width == 32 || width == 128)
        bits = parse_inet(body, width);
    else
        bits = parse_bitstring(body, width, width, "prefix");
    if (!bits.zero_from(plen))
        throw ParseError("prefix '" + std::string(text) + "' has bits set past /" +
                         std::to_string(plen));
    return Prefix(width, plen, bits);
}

bool Prefix::contains(const Address& a) const {
    if (a.width() != width_)
        throw ContractViolation("address width " + std::to_string(a.width()) +
                                " does not match prefix width " + std::to_string(width_));
    return bits_.prefix_equal(a.bits(), plen_);
}

std::string Prefix::to_string() const {
    if (width_ == 32 || width_ == 128)
        return format_inet(bits_, width_) + "/" + std::to_string(plen_);
    std::string s(plen_, '0');
    for (unsigned i = 0; i < plen_; i++)
        if (bits_.bit(i)) s[i] = '1';
    return s + "/" + std::to_string(plen_);
}

namespace {

void same_universe(const Prefix& p, const Prefix& q) {
    if (p.width() != q.width())
        throw ContractViolation("prefix width mismatch: " + std::to_string(p.width()) + " vs " +
                                std::to_string(q.width()));
}

void same_universe(const RouteKey& r, const RouteKey& q) {
    same_universe(r.dest, q.dest);
    same_universe(r.src, q.src);
}

} // namespace

bool prefix_le(const Prefix& p, const Prefix& q) {
    same_universe(p, q);
    return p.plen() >= q.plen() && p.bits().prefix_equal(q.bits(), q.plen());
}

bool prefix_lt(const Prefix& p, const Prefix& q) { return prefix_le(p, q) && !(p == q); }

bool prefix_disjoint(const Prefix& p, const Prefix& q) {
    return !prefix_le(p, q) && !prefix_le(q, p);
}

PrefixOrder prefix_cmp(const Prefix& p, const Prefix& q) {
    if (p == q) return PrefixOrder::Equal;
    if (prefix_le(p, q)) return PrefixOrder::Less;
    if (prefix_le(q, p)) return PrefixOrder::Greater;
    return PrefixOrder::Disjoint;
}

bool prefix_canon_less(const Prefix& p, const Prefix& q) {
    if (p.bits() != q.bits()) return p.bits() < q.bits();
    return p.plen() < q.plen();
}

bool RouteKey::matches(const Address& ad, const Address& as) const {
    return dest.contains(ad) && src.contains(as);
}

std::string RouteKey::to_string() const { return dest.to_string() + " from " + src.to_string(); }

RouteKey RouteKey::parse(std::string_view text, unsigned width_dest, unsigned width_src) {
    auto sep = text.find(" from ");
    if (sep == std::string_view::npos)
        throw ParseError("route key '" + std::string(text) + "' is missing ' from '");
    return RouteKey{Prefix::parse(text.substr(0, sep), width_dest),
                    Prefix::parse(text.substr(sep + 6), width_src)};
}

bool key_canon_less(const RouteKey& a, const RouteKey& b) {
    if (!(a.dest == b.dest)) return prefix_canon_less(a.dest, b.dest);
    return prefix_canon_less(a.src, b.src);
}

const char* to_string(Ordering o) {
    return o == Ordering::DestFirst ? "dest-first" : "source-first";
}

bool pair_le(const RouteKey& r, const RouteKey& q) {
    return prefix_le(r.dest, q.dest) && prefix_le(r.src, q.src);
}

bool pair_lt(const RouteKey& r, const RouteKey& q) { return pair_le(r, q) && !(r == q); }

bool pair_conflicts(const RouteKey& r, const RouteKey& q) {
    same_universe(r, q);
    return (prefix_lt(r.dest, q.dest) && prefix_lt(q.src, r.src)) ||
           (prefix_lt(q.dest, r.dest) && prefix_lt(r.src, q.src));
}

RouteKey conflict_zone(const RouteKey& r, const RouteKey& q) {
    if (!pair_conflicts(r, q))
        throw ContractViolation("conflict_zone called on non-conflicting keys " + r.to_string() +
                                " and " + q.to_string());
    return RouteKey{prefix_lt(r.dest, q.dest) ? r.dest : q.dest,
                    prefix_lt(r.src, q.src) ? r.src : q.src};
}

namespace {

PairOrder from_prefix_order(PrefixOrder c) {
    switch (c) {
    case PrefixOrder::Less: return PairOrder::Less;
    case PrefixOrder::Greater: return PairOrder::Greater;
    case PrefixOrder::Equal: return PairOrder::Equal;
    default: return PairOrder::Incomparable;
    }
}

} // namespace

PairOrder dest_first_cmp(const RouteKey& r, const RouteKey& q) {
    same_universe(r, q);
    switch (prefix_cmp(r.dest, q.dest)) {
    case PrefixOrder::Less: return PairOrder::Less;
    case PrefixOrder::Greater: return PairOrder::Greater;
    case PrefixOrder::Disjoint: return PairOrder::Incomparable;
    case PrefixOrder::Equal: return from_prefix_order(prefix_cmp(r.src, q.src));
    }
    return PairOrder::Incomparable;
}

PairOrder source_first_cmp(const RouteKey& r, const RouteKey& q) {
    same_universe(r, q);
    switch (prefix_cmp(r.src, q.src)) {
    case PrefixOrder::Less: return PairOrder::Less;
    case PrefixOrder::Greater: return PairOrder::Greater;
    case PrefixOrder::Disjoint: return PairOrder::Incomparable;
    case PrefixOrder::Equal: return from_prefix_order(prefix_cmp(r.dest, q.dest));
    }
    return PairOrder::Incomparable;
}

PairOrder pair_cmp(Ordering o, const RouteKey& r, const RouteKey& q) {
    return o == Ordering::DestFirst ? dest_first_cmp(r, q) : source_first_cmp(r, q);
}

} // namespace ssr
