#include <doctest.h>

#include <random>
#include <vector>

#include "ssr/prefix.hpp"

using namespace ssr;

namespace {

Prefix P(const std::string& t, unsigned w) { return Prefix::parse(t, w); }

RouteKey K(const std::string& d, const std::string& s, unsigned wd, unsigned ws) {
    return RouteKey{Prefix::parse(d, wd), Prefix::parse(s, ws)};
}

// enumeration oracle: the concrete address set of a prefix
std::vector<Address> address_set(const Prefix& p) {
    std::vector<Address> out;
    for (uint64_t i = 0; i < (uint64_t{1} << p.width()); i++) {
        Address a = Address::from_index(p.width(), i);
        if (p.contains(a)) out.push_back(a);
    }
    return out;
}

bool subset_of(const Prefix& p, const Prefix& q) {
    for (const Address& a : address_set(p))
        if (!q.contains(a)) return false;
    return true;
}

bool sets_intersect(const Prefix& p, const Prefix& q) {
    for (const Address& a : address_set(p))
        if (q.contains(a)) return true;
    return false;
}

std::vector<Prefix> all_prefixes(unsigned w) {
    std::vector<Prefix> out;
    for (unsigned plen = 0; plen <= w; plen++)
        for (uint64_t v = 0; v < (uint64_t{1} << plen); v++)
            out.push_back(Prefix(w, plen, Bits128::from_index(v, plen)));
    return out;
}

} // namespace

TEST_SUITE_BEGIN("prefix");

TEST_CASE("bits128 basics") {
    Bits128 b;
    b.set_bit(0);
    b.set_bit(63);
    b.set_bit(64);
    b.set_bit(127);
    CHECK(b.bit(0));
    CHECK(b.bit(63));
    CHECK(b.bit(64));
    CHECK(b.bit(127));
    CHECK(!b.bit(1));
    CHECK(!b.bit(126));

    CHECK(b.truncated(64) == Bits128{b.hi, 0});
    CHECK(b.truncated(0) == Bits128{});
    CHECK(b.truncated(128) == b);
    CHECK(b.truncated(65).bit(64));
    CHECK(!b.truncated(65).bit(127));

    Bits128 c = b;
    c.set_bit(70);
    CHECK(b.prefix_equal(c, 70));
    CHECK(!b.prefix_equal(c, 71));
    CHECK(b.prefix_equal(c, 64));
    CHECK(b.prefix_equal(c, 0));

    for (uint64_t v : {uint64_t{0}, uint64_t{1}, uint64_t{42}, uint64_t{63}})
        CHECK(Bits128::from_index(v, 6).index(6) == v);
}

TEST_CASE("prefix parse and print round-trip") {
    for (auto [text, w] : std::vector<std::pair<std::string, unsigned>>{
             {"/0", 4},
             {"1/1", 4},
             {"00/2", 4},
             {"011/3", 4},
             {"110101/6", 6},
             {"0.0.0.0/0", 32},
             {"192.168.4.0/24", 32},
             {"192.168.4.20/32", 32},
             {"::/0", 128},
             {"2001:db8:1::/48", 128},
         }) {
        Prefix p = P(text, w);
        CHECK(p.to_string() == text);
        CHECK(P(p.to_string(), w) == p);
    }
    // short spellings normalize to the canonical form
    CHECK(P("0/2", 4) == P("00/2", 4));
    CHECK(P("1/2", 4) == P("10/2", 4));
    CHECK(P("0110/3", 4) == P("011/3", 4));
    CHECK(P("0/0", 4) == P("/0", 4));
}

TEST_CASE("prefix parse rejects bad text") {
    CHECK_THROWS_AS(P("0111/3", 4), ParseError);  // bit set past plen
    CHECK_THROWS_AS(P("1/0", 4), ParseError);
    CHECK_THROWS_AS(P("01/5", 4), ParseError);    // plen past width
    CHECK_THROWS_AS(P("01021/4", 5), ParseError); // stray character
    CHECK_THROWS_AS(P("11111/4", 4), ParseError); // more bits than width
    CHECK_THROWS_AS(P("01", 4), ParseError);      // missing /len
    CHECK_THROWS_AS(P("192.168.4.1/24", 32), ParseError);
    CHECK_THROWS_AS(P("10.0.0.0", 32), ParseError);
    CHECK_THROWS_AS(P("2001:db8::1/48", 128), ParseError);
    CHECK_THROWS_AS(P("1.2.3/8", 32), ParseError);
    CHECK_THROWS_AS(Prefix(4, 5, {}), ContractViolation);
    CHECK_THROWS_AS(Prefix(0, 0, {}), ContractViolation);
    CHECK_THROWS_AS(Prefix(129, 0, {}), ContractViolation);
}

TEST_CASE("address parse and print") {
    CHECK(Address::parse("0101", 4).to_string() == "0101");
    CHECK(Address::parse("10.0.0.1", 32).to_string() == "10.0.0.1");
    CHECK(Address::parse("2001:db8:1::1", 128).to_string() == "2001:db8:1::1");
    CHECK_THROWS_AS(Address::parse("010", 4), ParseError);
    CHECK_THROWS_AS(Address::parse("01012", 4), ParseError);
    CHECK_THROWS_AS(Address::parse("300.0.0.1", 32), ParseError);
    for (uint64_t i = 0; i < 16; i++)
        CHECK(Address::parse(Address::from_index(4, i).to_string(), 4).index() == i);
}

TEST_CASE("contains") {
    CHECK(P("/0", 4).contains(Address::parse("1111", 4)));
    CHECK(P("00/2", 4).contains(Address::parse("0011", 4)));
    CHECK(!P("00/2", 4).contains(Address::parse("0100", 4)));
    CHECK(P("2001:db8:1::/48", 128).contains(Address::parse("2001:db8:1::1", 128)));
    CHECK(!P("2001:db8:1::/48", 128).contains(Address::parse("2001:db8:2::1", 128)));
    CHECK_THROWS_AS(P("00/2", 4).contains(Address::parse("00000", 5)), ContractViolation);
}

TEST_CASE("prefix order examples") {
    CHECK(prefix_le(P("2001:db8:1::/48", 128), P("::/0", 128)));
    CHECK(!prefix_le(P("::/0", 128), P("2001:db8:1::/48", 128)));
    CHECK(prefix_le(P("01/2", 4), P("01/2", 4)));
    CHECK(!prefix_le(P("01/2", 4), P("10/2", 4)));
    CHECK(!prefix_le(P("10/2", 4), P("01/2", 4)));
    CHECK(prefix_disjoint(P("01/2", 4), P("10/2", 4)));
    CHECK(!prefix_disjoint(P("011/3", 4), P("01/2", 4)));
    CHECK(prefix_cmp(P("011/3", 4), P("01/2", 4)) == PrefixOrder::Less);
    CHECK(prefix_cmp(P("01/2", 4), P("011/3", 4)) == PrefixOrder::Greater);
    CHECK(prefix_cmp(P("01/2", 4), P("01/2", 4)) == PrefixOrder::Equal);
    CHECK(prefix_cmp(P("01/2", 4), P("10/2", 4)) == PrefixOrder::Disjoint);
    CHECK_THROWS_AS(prefix_le(P("01/2", 4), P("01/2", 5)), ContractViolation);
}

TEST_CASE("prefix order matches set semantics") {
    auto ps = all_prefixes(4);
    for (const Prefix& p : ps) {
        for (const Prefix& q : ps) {
            CHECK(prefix_le(p, q) == subset_of(p, q));
            CHECK(prefix_disjoint(p, q) == !sets_intersect(p, q));
            int hits = (p == q) + (prefix_lt(p, q)) + (prefix_lt(q, p)) + prefix_disjoint(p, q);
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("pair specificity") {
    RouteKey r1 = K("2001:db8:1::/48", "::/0", 128, 128);
    RouteKey r2 = K("::/0", "2001:db8:2::/48", 128, 128);
    CHECK(!pair_le(r1, r2));
    CHECK(!pair_le(r2, r1));
    CHECK(pair_le(K("0/2", "10/2", 4, 4), K("0/1", "10/1", 4, 4)));
    CHECK(pair_le(r1, r1));
    CHECK(!pair_lt(r1, r1));
}

TEST_CASE("pair conflicts") {
    RouteKey r1 = K("2001:db8:1::/48", "::/0", 128, 128);
    RouteKey r2 = K("::/0", "2001:db8:2::/48", 128, 128);
    CHECK(pair_conflicts(r1, r2));
    CHECK(pair_conflicts(r2, r1));
    CHECK(!pair_conflicts(r1, r1));
    CHECK(!pair_conflicts(K("0/2", "10/1", 4, 4), K("0/3", "10/2", 4, 4)));
    RouteKey zone = conflict_zone(r1, r2);
    CHECK(zone == K("2001:db8:1::/48", "2001:db8:2::/48", 128, 128));
    CHECK(conflict_zone(r2, r1) == zone);
    CHECK_THROWS_AS(conflict_zone(r1, r1), ContractViolation);
}

TEST_CASE("conflict zone matches set intersection") {
    CHECK(conflict_zone(K("0/2", "1/1", 4, 4), K("0/1", "11/2", 4, 4)) ==
          K("00/2", "11/2", 4, 4));
    // full sweep at width 3/3: conflict predicate and zone against enumeration
    auto ps = all_prefixes(3);
    std::vector<RouteKey> keys;
    for (const Prefix& d : ps)
        for (const Prefix& s : ps) keys.push_back(RouteKey{d, s});
    for (const RouteKey& a : keys) {
        for (const RouteKey& b : keys) {
            bool overlap = sets_intersect(a.dest, b.dest) && sets_intersect(a.src, b.src);
            bool expect = overlap && !pair_le(a, b) && !pair_le(b, a);
            CHECK(pair_conflicts(a, b) == expect);
            if (expect) {
                RouteKey z = conflict_zone(a, b);
                // exactly the address pairs matched by both
                for (uint64_t di = 0; di < 8; di++) {
                    for (uint64_t si = 0; si < 8; si++) {
                        Address ad = Address::from_index(3, di);
                        Address as = Address::from_index(3, si);
                        CHECK(z.matches(ad, as) == (a.matches(ad, as) && b.matches(ad, as)));
                    }
                }
            }
        }
    }
}

TEST_CASE("pair ordering examples") {
    // stub network shape: the destination route precedes the source route
    // dest-first and the reverse holds source-first
    RouteKey rn = K("01/2", "/0", 4, 4);
    RouteKey rsp = K("/0", "11/2", 4, 4);
    CHECK(dest_first_cmp(rn, rsp) == PairOrder::Less);
    CHECK(dest_first_cmp(rsp, rn) == PairOrder::Greater);
    CHECK(source_first_cmp(rn, rsp) == PairOrder::Greater);
    CHECK(source_first_cmp(rsp, rn) == PairOrder::Less);

    RouteKey rn6 = K("2001:db8:1::/48", "::/0", 128, 128);
    RouteKey rsp6 = K("::/0", "2001:db8:2::/48", 128, 128);
    CHECK(dest_first_cmp(rn6, rsp6) == PairOrder::Less);
    CHECK(source_first_cmp(rn6, rsp6) == PairOrder::Greater);

    CHECK(dest_first_cmp(rn, rn) == PairOrder::Equal);
    CHECK(dest_first_cmp(K("0/1", "1/2", 4, 4), K("0/1", "1/1", 4, 4)) == PairOrder::Less);
    CHECK(dest_first_cmp(K("0/1", "1/2", 4, 4), K("1/1", "1/2", 4, 4)) ==
          PairOrder::Incomparable);
    CHECK(source_first_cmp(K("1/2", "0/1", 4, 4), K("1/1", "0/1", 4, 4)) == PairOrder::Less);
    CHECK(source_first_cmp(K("1/2", "0/1", 4, 4), K("1/2", "1/1", 4, 4)) ==
          PairOrder::Incomparable);
}

TEST_CASE("orderings refine specificity and are total on matching sets") {
    auto ps = all_prefixes(3);
    std::vector<RouteKey> keys;
    for (const Prefix& d : ps)
        for (const Prefix& s : ps) keys.push_back(RouteKey{d, s});
    for (const RouteKey& a : keys) {
        for (const RouteKey& b : keys) {
            if (pair_lt(a, b)) {
                CHECK(dest_first_cmp(a, b) == PairOrder::Less);
                CHECK(source_first_cmp(a, b) == PairOrder::Less);
            }
            // keys matching one common address pair are never incomparable
            bool share = sets_intersect(a.dest, b.dest) && sets_intersect(a.src, b.src);
            bool can_share_pair = !prefix_disjoint(a.dest, b.dest) &&
                                  !prefix_disjoint(a.src, b.src);
            CHECK(share == can_share_pair);
            if (share) {
                CHECK(dest_first_cmp(a, b) != PairOrder::Incomparable);
                CHECK(source_first_cmp(a, b) != PairOrder::Incomparable);
            }
        }
    }
}

TEST_CASE("route key text") {
    RouteKey k = RouteKey::parse("00/2 from 1/1", 4, 4);
    CHECK(k == K("00/2", "1/1", 4, 4));
    CHECK(k.to_string() == "00/2 from 1/1");
    RouteKey k6 = RouteKey::parse("::/0 from 2001:db8:2::/48", 128, 128);
    CHECK(k6.to_string() == "::/0 from 2001:db8:2::/48");
    CHECK_THROWS_AS(RouteKey::parse("00/2", 4, 4), ParseError);
    CHECK(k.matches(Address::parse("0001", 4), Address::parse("1100", 4)));
    CHECK(!k.matches(Address::parse("0001", 4), Address::parse("0100", 4)));
}

TEST_CASE("canonical key order") {
    std::vector<std::string> sorted = {"/0", "0/1", "00/2", "000/3", "001/3", "01/2", "1/1"};
    for (size_t i = 0; i < sorted.size(); i++)
        for (size_t j = 0; j < sorted.size(); j++)
            CHECK(prefix_canon_less(P(sorted[i], 4), P(sorted[j], 4)) == (i < j));
    CHECK(key_canon_less(K("0/1", "1/1", 4, 4), K("0/1", "11/2", 4, 4)));
    CHECK(key_canon_less(K("0/1", "11/2", 4, 4), K("00/2", "/0", 4, 4)));
}

TEST_CASE("random round-trips") {
    std::mt19937_64 rng(12345);
    for (unsigned w : {1u, 4u, 6u, 13u, 32u, 64u, 128u}) {
        for (int i = 0; i < 50; i++) {
            unsigned plen = rng() % (w + 1);
            Bits128 b{rng(), rng()};
            Prefix p(w, plen, b);
            CHECK(Prefix::parse(p.to_string(), w) == p);
        }
    }
}

TEST_SUITE_END();
