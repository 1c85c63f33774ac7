#include "ssr/net.hpp"

#include <algorithm>

namespace ssr {

namespace {

Metric sat_add(Metric a, Metric b) {
    uint64_t sum = uint64_t{a} + b;
    return sum >= kInfinity ? kInfinity : Metric(sum);
}

} // namespace

std::string to_string(Capability c) {
    switch (c) {
    case Capability::SpecificCapable: return "specific";
    case Capability::LegacyIgnore: return "legacy-ignore";
    case Capability::LegacyStrip: return "legacy-strip";
    }
    throw ContractViolation("bad capability");
}

Network::Network(unsigned width_dest, unsigned width_src) : wd_(width_dest), ws_(width_src) {
    // constructing a throwaway prefix validates both widths
    (void)Prefix::zero(wd_);
    (void)Prefix::zero(ws_);
}

NodeId Network::add_node(const std::string& name, Capability cap, Ordering policy) {
    if (name.empty() || ids_.count(name))
        throw ContractViolation("bad node name: " + name);
    NodeId id = nodes_.size();
    nodes_.push_back(Node{name, cap, policy, RibState(wd_, ws_, policy, policy),
                          {}, {}, {}, {}, {}});
    ids_.emplace(name, id);
    return id;
}

NodeId Network::node_id(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) throw ContractViolation("unknown node: " + name);
    return it->second;
}

void Network::add_link(const std::string& a, const std::string& b, Metric cost) {
    NodeId ia = node_id(a), ib = node_id(b);
    if (ia == ib) throw ContractViolation("self link: " + a);
    if (cost == 0 || cost >= kInfinity) throw ContractViolation("bad link cost");
    for (std::size_t li : nodes_[ia].links) {
        const Link& l = links_[li];
        if (l.a == ib || l.b == ib) throw ContractViolation("duplicate link " + a + " " + b);
    }
    links_.push_back(Link{ia, ib, cost, {}, {}});
    nodes_[ia].links.push_back(links_.size() - 1);
    nodes_[ib].links.push_back(links_.size() - 1);
    // a late link re-announces everything both endpoints currently carry
    for (NodeId n : {ia, ib})
        for (const auto& [key, sel] : nodes_[n].selected) nodes_[n].dirty.insert(key);
}

void Network::originate(const std::string& node, const RouteKey& key, Metric metric) {
    NodeId n = node_id(node);
    Node& nd = nodes_[n];
    if (key.dest.width() != wd_ || key.src.width() != ws_)
        throw ContractViolation("route width mismatch");
    if (nd.cap != Capability::SpecificCapable && key.src.plen() > 0)
        throw ContractViolation("legacy node cannot originate a source-carrying route");
    if (metric >= kInfinity) throw ContractViolation("bad origin metric");
    if (!nd.originated.emplace(key, metric).second)
        throw ContractViolation("already originated: " + key.to_string());
    recompute(n, key);
}

Metric Network::link_cost(NodeId n, NodeId neighbor) const {
    for (std::size_t li : nodes_[n].links) {
        const Link& l = links_[li];
        if ((l.a == n && l.b == neighbor) || (l.b == n && l.a == neighbor)) return l.cost;
    }
    throw ContractViolation("not a neighbor");
}

NextHop Network::hop_name(NodeId n, const Selection& sel) const {
    return NextHop{sel.via ? nodes_[*sel.via].name : nodes_[n].name, ""};
}

void Network::recompute(NodeId n, const RouteKey& key) {
    Node& nd = nodes_[n];
    std::optional<Selection> best;
    if (auto it = nd.originated.find(key); it != nd.originated.end())
        best = Selection{it->second, std::nullopt};
    if (auto lt = nd.learned.find(key); lt != nd.learned.end()) {
        // iteration order fixes the tie-break: local origin, then the
        // smallest neighbor id, then the canonically first announced key
        for (const auto& [nb, slots] : lt->second) {
            for (const auto& [wire, m] : slots) {
                Metric total = sat_add(m, link_cost(n, nb));
                if (total >= kInfinity) continue;
                if (!best || total < best->metric) best = Selection{total, nb};
            }
        }
    }

    auto old_it = nd.selected.find(key);
    if (!best) {
        if (old_it != nd.selected.end()) {
            nd.rib.delete_route(key);
            nd.selected.erase(old_it);
        }
        return;
    }
    NextHop nh = hop_name(n, *best);
    if (old_it == nd.selected.end()) {
        nd.rib.add_route({key, nh});
        nd.selected.emplace(key, *best);
        nd.dirty.insert(key);
        return;
    }
    Selection& old = old_it->second;
    if (!(hop_name(n, old) == nh)) nd.rib.change_route(key, nh);
    // a pure metric move re-announces without touching the forwarding state
    if (old.metric != best->metric) nd.dirty.insert(key);
    old = *best;
}

void Network::process(NodeId n, NodeId from, const Update& u) {
    Node& nd = nodes_[n];
    RouteKey wire{u.dest, u.src ? *u.src : Prefix::zero(ws_)};
    std::optional<RouteKey> key;
    switch (nd.cap) {
    case Capability::SpecificCapable:
        key = wire;
        break;
    case Capability::LegacyIgnore:
        if (!u.src) key = wire;
        break;
    case Capability::LegacyStrip:
        key = RouteKey{u.dest, Prefix::zero(ws_)};
        break;
    }
    if (!key) return;
    nd.learned[*key][from][wire] = u.metric;
    recompute(n, *key);
}

bool Network::advertise(NodeId n) {
    Node& nd = nodes_[n];
    bool sent = false;
    for (const RouteKey& key : nd.dirty) {
        auto sit = nd.selected.find(key);
        if (sit == nd.selected.end()) continue; // no retraction messages
        Update u{key.dest, std::nullopt, sit->second.metric};
        if (key.src.plen() > 0) {
            if (nd.cap != Capability::SpecificCapable)
                throw ContractViolation("legacy node queued a source-carrying announcement");
            u.src = key.src;
        }
        for (std::size_t li : nd.links) {
            Link& l = links_[li];
            (l.a == n ? l.to_b : l.to_a).push_back(u);
            sent = true;
        }
    }
    nd.dirty.clear();
    return sent;
}

bool Network::step() {
    bool activity = false;
    for (NodeId n = 0; n < nodes_.size(); n++) {
        std::vector<std::size_t> order = nodes_[n].links;
        if (shuffle_) std::shuffle(order.begin(), order.end(), *shuffle_);
        for (std::size_t li : order) {
            Link& l = links_[li];
            std::deque<Update>& q = (l.a == n) ? l.to_a : l.to_b;
            NodeId from = (l.a == n) ? l.b : l.a;
            while (!q.empty()) {
                Update u = q.front();
                q.pop_front();
                process(n, from, u);
                activity = true;
            }
        }
    }
    for (NodeId n = 0; n < nodes_.size(); n++)
        if (advertise(n)) activity = true;
    return activity;
}

std::optional<unsigned> Network::run_to_convergence(unsigned max_rounds) {
    unsigned rounds = 0;
    while (step()) {
        if (++rounds > max_rounds) return std::nullopt;
    }
    return rounds;
}

void Network::set_shuffle_seed(uint64_t seed) { shuffle_.emplace(seed); }

Trace Network::trace(const std::string& start, const Address& dst, const Address& src) const {
    NodeId cur = node_id(start);
    Trace t{Trace::Outcome::Dropped, {cur}, {}};
    std::map<NodeId, std::size_t> first_seen{{cur, 0}};
    while (true) {
        const Node& nd = nodes_[cur];
        bool owned = false;
        for (const auto& [key, metric] : nd.originated)
            if (key.matches(dst, src)) owned = true;
        if (owned) {
            t.outcome = Trace::Outcome::Delivered;
            return t;
        }
        std::optional<NextHop> nh = nd.rib.fib().lookup(dst, src);
        if (!nh) {
            t.outcome = Trace::Outcome::Dropped;
            return t;
        }
        NodeId next = node_id(nh->via);
        if (auto it = first_seen.find(next); it != first_seen.end()) {
            t.outcome = Trace::Outcome::Loop;
            t.cycle.assign(t.hops.begin() + it->second, t.hops.end());
            t.hops.push_back(next);
            return t;
        }
        first_seen.emplace(next, t.hops.size());
        t.hops.push_back(next);
        cur = next;
    }
}

bool Network::backbone_condition() const {
    bool any_legacy = false;
    for (const Node& nd : nodes_)
        if (nd.cap != Capability::SpecificCapable) any_legacy = true;
    if (!any_legacy) return true;

    std::vector<NodeId> capable;
    for (NodeId n = 0; n < nodes_.size(); n++)
        if (nodes_[n].cap == Capability::SpecificCapable) capable.push_back(n);
    if (capable.empty()) return false;

    // connectivity of the capable-only subgraph
    std::set<NodeId> reached{capable.front()};
    std::vector<NodeId> frontier{capable.front()};
    while (!frontier.empty()) {
        NodeId n = frontier.back();
        frontier.pop_back();
        for (std::size_t li : nodes_[n].links) {
            const Link& l = links_[li];
            NodeId other = (l.a == n) ? l.b : l.a;
            if (nodes_[other].cap != Capability::SpecificCapable) continue;
            if (reached.insert(other).second) frontier.push_back(other);
        }
    }
    for (NodeId n : capable)
        if (!reached.count(n)) return false;

    for (const Node& nd : nodes_)
        if (nd.cap != Capability::SpecificCapable)
            for (const auto& [key, metric] : nd.originated)
                if (key.src.plen() > 0) return false;

    RouteKey all{Prefix::zero(wd_), Prefix::zero(ws_)};
    for (NodeId n : capable)
        if (nodes_[n].originated.count(all)) return true;
    return false;
}

std::optional<Metric> Network::selected_metric(NodeId id, const RouteKey& key) const {
    const Node& nd = nodes_.at(id);
    auto it = nd.selected.find(key);
    if (it == nd.selected.end()) return std::nullopt;
    return it->second.metric;
}

} // namespace ssr
