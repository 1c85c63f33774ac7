#pragma once

#include "ssr/fib.hpp"

namespace ssr {

struct Route {
    RouteKey key;
    NextHop nh;

    friend bool operator==(const Route&, const Route&) = default;
};

using RouteMap = std::map<RouteKey, NextHop, KeyLess>;

// Most preferred table route conflicting with `of` whose conflict zone with
// `of` is exactly `zone`; none when no such route exists.
std::optional<Route> min_conflict(const RouteKey& zone, const RouteKey& of, const RouteMap& table,
                                  Ordering preference);

// Most preferred route of any conflicting table pair whose zone is exactly
// `zone` and that precedes its partner; none when no pair produces the zone.
std::optional<Route> conflict_solution(const RouteKey& zone, const RouteMap& table,
                                       Ordering preference);

// Real routes plus one forwarding entry per conflict zone, kept strongly
// complete across every mutation. `preference` is the refinement ordering
// that picks zone winners; the fib backend only affects lookups.
class RibState {
public:
    RibState(unsigned width_dest, unsigned width_src, Ordering preference = Ordering::DestFirst,
             Ordering fib_backend = Ordering::DestFirst);

    unsigned width_dest() const { return wd_; }
    unsigned width_src() const { return ws_; }
    Ordering preference() const { return pref_; }

    void add_route(const Route& r);           // key must be new
    void delete_route(const RouteKey& key);   // key must be present
    void change_route(const RouteKey& key, const NextHop& nh_new);

    const RouteMap& routes() const { return table_; }
    Fib& fib() { return fib_; }
    const Fib& fib() const { return fib_; }

private:
    // one (zone, most preferred partner) per distinct zone of routes
    // conflicting with `key`, zones already present as real keys skipped
    std::vector<std::pair<RouteKey, Route>> relevant_conflicts(const RouteKey& key,
                                                               bool most_specific_first) const;
    const Route& preferred(const Route& a, const Route& b) const;
    bool precedes(const RouteKey& a, const RouteKey& b) const;

    unsigned wd_;
    unsigned ws_;
    Ordering pref_;
    RouteMap table_;
    Fib fib_;
};

// Batch construction of the same table from scratch: all real routes, then
// one entry per zone carrying the most preferred participant's nexthop.
// Reference for checking the incremental engine.
Fib rebuild_from_scratch(unsigned width_dest, unsigned width_src, const RouteMap& table,
                         Ordering preference = Ordering::DestFirst,
                         Ordering fib_backend = Ordering::DestFirst);

} // namespace ssr
