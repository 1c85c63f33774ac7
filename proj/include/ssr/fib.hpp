#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssr/prefix.hpp"

namespace ssr {

struct NextHop {
    std::string via;   // gateway name or address
    std::string iface; // optional device

    std::string to_string() const { return iface.empty() ? via : via + " dev " + iface; }

    friend bool operator==(const NextHop&, const NextHop&) = default;
};

enum class Origin { Real, Disambiguation };

struct FibEntry {
    RouteKey key;
    NextHop nh;
    Origin origin;
};

// Minimum under the given ordering among entries matching (ad, as).
// Entries matching a common address pair are always pairwise comparable, so
// the minimum exists whenever any entry matches; a duplicate key at the
// minimum raises AmbiguityError, an Incomparable outcome ContractViolation.
std::optional<NextHop> lookup_with(Ordering o, std::span<const FibEntry> entries,
                                   const Address& ad, const Address& as);
std::optional<NextHop> lookup_dest_first(std::span<const FibEntry> entries, const Address& ad,
                                         const Address& as);
std::optional<NextHop> lookup_source_first(std::span<const FibEntry> entries, const Address& ad,
                                           const Address& as);

// Forwarding table with strict install/uninstall/switch primitives. One entry
// per key; contract violations throw instead of being papered over.
class Fib {
public:
    struct Slot {
        NextHop nh;
        Origin origin;
        friend bool operator==(const Slot&, const Slot&) = default;
    };
    using Map = std::map<RouteKey, Slot, KeyLess>;
    using OpLog = std::function<void(const std::string&)>;

    Fib(unsigned width_dest, unsigned width_src, Ordering backend = Ordering::DestFirst);

    unsigned width_dest() const { return wd_; }
    unsigned width_src() const { return ws_; }
    Ordering backend() const { return backend_; }

    // every primitive reports itself as one text line when a log is attached
    void set_op_log(OpLog log) { log_ = std::move(log); }

    void install(const RouteKey& key, const NextHop& nh, Origin origin);
    void uninstall(const RouteKey& key, const NextHop& nh);
    // expected_old must match the installed nexthop; origin changes only when
    // new_origin is given (a real route taking over a disambiguation entry and
    // the reverse flip on delete)
    void switch_nh(const RouteKey& key, const NextHop& expected_old, const NextHop& next,
                   std::optional<Origin> new_origin = std::nullopt);

    const Map& entries() const { return map_; }
    std::size_t size() const { return map_.size(); }
    std::vector<FibEntry> snapshot() const;
    std::vector<RouteKey> keys() const;
    std::optional<NextHop> lookup(const Address& ad, const Address& as) const;

    // one entry per line, sorted by (dest bits, dest plen, src bits, src plen)
    std::string dump() const;

    bool same_entries(const Fib& other) const { return map_ == other.map_; }

private:
    void check_key(const RouteKey& key) const;
    void emit(const std::string& line) const;

    unsigned wd_;
    unsigned ws_;
    Ordering backend_;
    Map map_;
    OpLog log_;
};

// Brute-force table predicates. These are oracles: deliberately simple,
// enumeration-based, and only usable at small widths.

// every conflicting pair's zone is itself a key
bool is_complete(std::span<const RouteKey> keys);

// every address pair of every conflict zone is covered by a key at least as
// specific as the zone (enumerates the zone)
bool is_weakly_complete(std::span<const RouteKey> keys, unsigned width_dest, unsigned width_src);

// some address pair has matching keys with no unique most-specific one
// (enumerates the whole universe)
bool is_ambiguous(std::span<const RouteKey> keys, unsigned width_dest, unsigned width_src);

// sorted, deduplicated zones of all conflicting key pairs
std::vector<RouteKey> conflict_zones(std::span<const RouteKey> keys);

} // namespace ssr
