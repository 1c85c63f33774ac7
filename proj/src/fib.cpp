#include "ssr/fib.hpp"

#include <algorithm>
#include <set>

namespace ssr {

namespace {

template <class Range, class KeyOf, class NhOf>
std::optional<NextHop> lookup_min(Ordering o, const Range& range, KeyOf key_of, NhOf nh_of,
                                  const Address& ad, const Address& as) {
    const RouteKey* best = nullptr;
    const NextHop* best_nh = nullptr;
    bool tied = false;
    for (const auto& e : range) {
        const RouteKey& k = key_of(e);
        if (!k.matches(ad, as)) continue;
        if (!best) {
            best = &k;
            best_nh = &nh_of(e);
            continue;
        }
        switch (pair_cmp(o, k, *best)) {
        case PairOrder::Less:
            best = &k;
            best_nh = &nh_of(e);
            tied = false;
            break;
        case PairOrder::Greater: break;
        case PairOrder::Equal: tied = true; break;
        case PairOrder::Incomparable:
            throw ContractViolation("lookup: matching entries " + k.to_string() + " and " +
                                    best->to_string() + " are incomparable");
        }
    }
    if (!best) return std::nullopt;
    if (tied)
        throw AmbiguityError("lookup: no unique minimum at " + ad.to_string() + " from " +
                             as.to_string());
    return *best_nh;
}

} // namespace

std::optional<NextHop> lookup_with(Ordering o, std::span<const FibEntry> entries,
                                   const Address& ad, const Address& as) {
    return lookup_min(
        o, entries, [](const FibEntry& e) -> const RouteKey& { return e.key; },
        [](const FibEntry& e) -> const NextHop& { return e.nh; }, ad, as);
}

std::optional<NextHop> lookup_dest_first(std::span<const FibEntry> entries, const Address& ad,
                                         const Address& as) {
    return lookup_with(Ordering::DestFirst, entries, ad, as);
}

std::optional<NextHop> lookup_source_first(std::span<const FibEntry> entries, const Address& ad,
                                           const Address& as) {
    return lookup_with(Ordering::SourceFirst, entries, ad, as);
}

Fib::Fib(unsigned width_dest, unsigned width_src, Ordering backend)
    : wd_(width_dest), ws_(width_src), backend_(backend) {}

void Fib::check_key(const RouteKey& key) const {
    if (key.dest.width() != wd_ || key.src.width() != ws_)
        throw ContractViolation("key " + key.to_string() + " does not match table widths " +
                                std::to_string(wd_) + "/" + std::to_string(ws_));
}

void Fib::emit(const std::string& line) const {
    if (log_) log_(line);
}

void Fib::install(const RouteKey& key, const NextHop& nh, Origin origin) {
    check_key(key);
    auto [it, inserted] = map_.emplace(key, Slot{nh, origin});
    if (!inserted)
        throw ContractViolation("install: entry already present for " + key.to_string());
    emit("install " + key.to_string() + " via " + nh.to_string());
}

void Fib::uninstall(const RouteKey& key, const NextHop& nh) {
    check_key(key);
    auto it = map_.find(key);
    if (it == map_.end())
        throw ContractViolation("uninstall: no entry for " + key.to_string());
    if (!(it->second.nh == nh))
        throw ContractViolation("uninstall: nexthop mismatch for " + key.to_string() +
                                ": installed " + it->second.nh.to_string() + ", expected " +
                                nh.to_string());
    map_.erase(it);
    emit("uninstall " + key.to_string() + " via " + nh.to_string());
}

void Fib::switch_nh(const RouteKey& key, const NextHop& expected_old, const NextHop& next,
                    std::optional<Origin> new_origin) {
    check_key(key);
    auto it = map_.find(key);
    if (it == map_.end())
        throw ContractViolation("switch: no entry for " + key.to_string());
    if (!(it->second.nh == expected_old))
        throw ContractViolation("switch: nexthop mismatch for " + key.to_string() +
                                ": installed " + it->second.nh.to_string() + ", expected " +
                                expected_old.to_string());
    it->second.nh = next;
    if (new_origin) it->second.origin = *new_origin;
    emit("switch " + key.to_string() + " " + expected_old.to_string() + " -> " +
         next.to_string());
}

std::vector<FibEntry> Fib::snapshot() const {
    std::vector<FibEntry> v;
    v.reserve(map_.size());
    for (const auto& [k, s] : map_) v.push_back({k, s.nh, s.origin});
    return v;
}

std::vector<RouteKey> Fib::keys() const {
    std::vector<RouteKey> v;
    v.reserve(map_.size());
    for (const auto& [k, s] : map_) v.push_back(k);
    return v;
}

std::optional<NextHop> Fib::lookup(const Address& ad, const Address& as) const {
    return lookup_min(
        backend_, map_, [](const auto& p) -> const RouteKey& { return p.first; },
        [](const auto& p) -> const NextHop& { return p.second.nh; }, ad, as);
}

std::string Fib::dump() const {
    std::string out;
    for (const auto& [k, s] : map_) {
        out += k.to_string() + " via " + s.nh.to_string();
        if (s.origin == Origin::Disambiguation) out += " disambiguation";
        out += '\n';
    }
    return out;
}

namespace {

// largest universe the enumeration oracles will sweep
constexpr unsigned kMaxEnumBits = 24;

void check_enum_widths(unsigned wd, unsigned ws) {
    if (wd + ws > kMaxEnumBits)
        throw ContractViolation("enumeration over " + std::to_string(wd) + "+" +
                                std::to_string(ws) + " bits exceeds the oracle cap");
}

} // namespace

bool is_complete(std::span<const RouteKey> keys) {
    std::set<RouteKey, KeyLess> present(keys.begin(), keys.end());
    for (size_t i = 0; i < keys.size(); i++)
        for (size_t j = i + 1; j < keys.size(); j++)
            if (pair_conflicts(keys[i], keys[j]) &&
                !present.count(conflict_zone(keys[i], keys[j])))
                return false;
    return true;
}

bool is_weakly_complete(std::span<const RouteKey> keys, unsigned width_dest, unsigned width_src) {
    check_enum_widths(width_dest, width_src);
    for (size_t i = 0; i < keys.size(); i++) {
        for (size_t j = i + 1; j < keys.size(); j++) {
            if (!pair_conflicts(keys[i], keys[j])) continue;
            RouteKey zone = conflict_zone(keys[i], keys[j]);
            uint64_t base_d = zone.dest.bits().index(width_dest);
            uint64_t base_s = zone.src.bits().index(width_src);
            uint64_t nd = uint64_t{1} << (width_dest - zone.dest.plen());
            uint64_t ns = uint64_t{1} << (width_src - zone.src.plen());
            for (uint64_t di = 0; di < nd; di++) {
                Address ad = Address::from_index(width_dest, base_d | di);
                for (uint64_t si = 0; si < ns; si++) {
                    Address as = Address::from_index(width_src, base_s | si);
                    bool covered = false;
                    for (const RouteKey& k : keys) {
                        if (pair_le(k, zone) && k.matches(ad, as)) {
                            covered = true;
                            break;
                        }
                    }
                    if (!covered) return false;
                }
            }
        }
    }
    return true;
}

bool is_ambiguous(std::span<const RouteKey> keys, unsigned width_dest, unsigned width_src) {
    check_enum_widths(width_dest, width_src);
    uint64_t nd = uint64_t{1} << width_dest;
    uint64_t ns = uint64_t{1} << width_src;
    std::vector<const RouteKey*> matching;
    for (uint64_t di = 0; di < nd; di++) {
        Address ad = Address::from_index(width_dest, di);
        for (uint64_t si = 0; si < ns; si++) {
            Address as = Address::from_index(width_src, si);
            matching.clear();
            for (const RouteKey& k : keys)
                if (k.matches(ad, as)) matching.push_back(&k);
            if (matching.empty()) continue;
            const RouteKey* min = matching[0];
            for (const RouteKey* k : matching)
                if (pair_le(*k, *min)) min = k;
            for (const RouteKey* k : matching)
                if (!pair_le(*min, *k)) return true;
        }
    }
    return false;
}

std::vector<RouteKey> conflict_zones(std::span<const RouteKey> keys) {
    std::set<RouteKey, KeyLess> zones;
    for (size_t i = 0; i < keys.size(); i++)
        for (size_t j = i + 1; j < keys.size(); j++)
            if (pair_conflicts(keys[i], keys[j]))
                zones.insert(conflict_zone(keys[i], keys[j]));
    return {zones.begin(), zones.end()};
}

} // namespace ssr
