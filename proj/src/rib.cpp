#include "ssr/rib.hpp"

#include <algorithm>
#include <set>

namespace ssr {

namespace {

bool strictly_precedes(Ordering pref, const RouteKey& a, const RouteKey& b) {
    return pair_cmp(pref, a, b) == PairOrder::Less;
}

} // namespace

std::optional<Route> min_conflict(const RouteKey& zone, const RouteKey& of, const RouteMap& table,
                                  Ordering preference) {
    std::optional<Route> best;
    for (const auto& [k, nh] : table) {
        if (!pair_conflicts(of, k) || !(conflict_zone(of, k) == zone)) continue;
        if (!best || strictly_precedes(preference, k, best->key)) best = Route{k, nh};
    }
    return best;
}

std::optional<Route> conflict_solution(const RouteKey& zone, const RouteMap& table,
                                       Ordering preference) {
    std::optional<Route> best;
    for (const auto& [k1, nh1] : table) {
        for (const auto& [k2, nh2] : table) {
            if (!pair_conflicts(k1, k2) || !(conflict_zone(k1, k2) == zone)) continue;
            if (!strictly_precedes(preference, k1, k2)) continue;
            if (!best || strictly_precedes(preference, k1, best->key)) best = Route{k1, nh1};
        }
    }
    return best;
}

RibState::RibState(unsigned width_dest, unsigned width_src, Ordering preference,
                   Ordering fib_backend)
    : wd_(width_dest), ws_(width_src), pref_(preference), fib_(width_dest, width_src, fib_backend) {}

bool RibState::precedes(const RouteKey& a, const RouteKey& b) const {
    return strictly_precedes(pref_, a, b);
}

const Route& RibState::preferred(const Route& a, const Route& b) const {
    switch (pair_cmp(pref_, a.key, b.key)) {
    case PairOrder::Less: return a;
    case PairOrder::Greater: return b;
    default:
        throw ContractViolation("conflicting routes " + a.key.to_string() + " and " +
                                b.key.to_string() + " must be strictly ordered");
    }
}

std::vector<std::pair<RouteKey, Route>> RibState::relevant_conflicts(
    const RouteKey& key, bool most_specific_first) const {
    std::vector<std::pair<RouteKey, Route>> out;
    for (const auto& [k, nh] : table_) {
        if (!pair_conflicts(key, k)) continue;
        RouteKey zone = conflict_zone(key, k);
        if (table_.count(zone)) continue;
        auto rep = min_conflict(zone, key, table_, pref_);
        if (rep && rep->key == k) out.emplace_back(zone, *rep);
    }
    // zones are partially ordered; total plen grows strictly with specificity,
    // so sorting on it honors the order, remaining ties broken canonically
    auto total_plen = [](const RouteKey& z) { return z.dest.plen() + z.src.plen(); };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        unsigned pa = total_plen(a.first), pb = total_plen(b.first);
        if (pa != pb) return most_specific_first ? pa > pb : pa < pb;
        return key_canon_less(a.first, b.first);
    });
    return out;
}

void RibState::add_route(const Route& r) {
    if (table_.count(r.key))
        throw ContractViolation("add_route: key already present: " + r.key.to_string());
    // zone entries first, most specific first, so the fib never loses strong
    // completeness mid-update
    for (const auto& [zone, r1] : relevant_conflicts(r.key, true)) {
        auto r2 = min_conflict(zone, r1.key, table_, pref_);
        if (!r2)
            fib_.install(zone, preferred(r, r1).nh, Origin::Disambiguation);
        else if (precedes(r.key, r2->key) && precedes(r.key, r1.key))
            fib_.switch_nh(zone, r2->nh, r.nh);
    }
    if (auto sol = conflict_solution(r.key, table_, pref_))
        fib_.switch_nh(r.key, sol->nh, r.nh, Origin::Real);
    else
        fib_.install(r.key, r.nh, Origin::Real);
    table_.emplace(r.key, r.nh);
}

void RibState::delete_route(const RouteKey& key) {
    auto it = table_.find(key);
    if (it == table_.end())
        throw ContractViolation("delete_route: no route for " + key.to_string());
    Route r{key, it->second};
    table_.erase(it);
    // the route's own entry goes first (least specific), then its zones
    if (auto sol = conflict_solution(key, table_, pref_))
        fib_.switch_nh(key, r.nh, sol->nh, Origin::Disambiguation);
    else
        fib_.uninstall(key, r.nh);
    for (const auto& [zone, r1] : relevant_conflicts(key, false)) {
        auto r2 = min_conflict(zone, r1.key, table_, pref_);
        if (!r2)
            fib_.uninstall(zone, preferred(r, r1).nh);
        else if (precedes(key, r2->key) && precedes(key, r1.key))
            fib_.switch_nh(zone, r.nh, r2->nh);
    }
}

void RibState::change_route(const RouteKey& key, const NextHop& nh_new) {
    auto it = table_.find(key);
    if (it == table_.end())
        throw ContractViolation("change_route: no route for " + key.to_string());
    NextHop old = it->second;
    it->second = nh_new;
    fib_.switch_nh(key, old, nh_new);
    // zone entries carry this route's nexthop exactly where it is the zone's
    // most preferred participant
    for (const auto& [zone, r1] : relevant_conflicts(key, true)) {
        if (!precedes(key, r1.key)) continue;
        auto r2 = min_conflict(zone, r1.key, table_, pref_);
        if (r2 && r2->key == key) fib_.switch_nh(zone, old, nh_new);
    }
}

Fib rebuild_from_scratch(unsigned width_dest, unsigned width_src, const RouteMap& table,
                         Ordering preference, Ordering fib_backend) {
    Fib fib(width_dest, width_src, fib_backend);
    for (const auto& [k, nh] : table) fib.install(k, nh, Origin::Real);
    std::set<RouteKey, KeyLess> zones;
    for (auto i = table.begin(); i != table.end(); ++i) {
        for (auto j = std::next(i); j != table.end(); ++j) {
            if (!pair_conflicts(i->first, j->first)) continue;
            RouteKey zone = conflict_zone(i->first, j->first);
            if (!table.count(zone)) zones.insert(zone);
        }
    }
    for (const RouteKey& zone : zones) {
        auto sol = conflict_solution(zone, table, preference);
        if (!sol)
            throw ContractViolation("rebuild: zone " + zone.to_string() + " has no solution");
        fib.install(zone, sol->nh, Origin::Disambiguation);
    }
    return fib;
}

} // namespace ssr
