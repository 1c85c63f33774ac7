#pragma once

#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ssr/rib.hpp"

namespace ssr {

using Metric = uint32_t;
inline constexpr Metric kInfinity = 65535;

// what a router's software understands of the two-component address pairs:
// capable nodes speak both announcement forms, legacy ones either drop the
// source-carrying form or strip the source and keep a plain route
enum class Capability { SpecificCapable, LegacyIgnore, LegacyStrip };

std::string to_string(Capability c);

using NodeId = std::size_t;

// wire announcement; src absent is the plain form legacy software understands
struct Update {
    Prefix dest;
    std::optional<Prefix> src;
    Metric metric;
};

struct Trace {
    enum class Outcome { Delivered, Dropped, Loop };
    Outcome outcome;
    // nodes visited in order; on a loop the revisited node appears twice
    std::vector<NodeId> hops;
    // loop only: one period of the repeating cycle
    std::vector<NodeId> cycle;
};

// Synchronous distance-vector simulator. Each round delivers everything
// queued on the links, then every node whose advertised metrics changed
// announces to all neighbors. Per-link delivery is FIFO; the optional
// shuffle permutes only the order links are drained in, which must never
// change the outcome.
class Network {
public:
    Network(unsigned width_dest, unsigned width_src);

    NodeId add_node(const std::string& name, Capability cap = Capability::SpecificCapable,
                    Ordering policy = Ordering::DestFirst);
    void add_link(const std::string& a, const std::string& b, Metric cost);
    void originate(const std::string& node, const RouteKey& key, Metric metric);

    // one round; false when nothing was delivered or sent
    bool step();
    // rounds until quiet, none when max_rounds rounds were not enough
    std::optional<unsigned> run_to_convergence(unsigned max_rounds = 100);

    void set_shuffle_seed(uint64_t seed);

    Trace trace(const std::string& start, const Address& dst, const Address& src) const;

    // with legacy nodes present, safe interop needs the capable nodes to form
    // a connected subgraph that sources every source-carrying route and
    // originates the all-covering default
    bool backbone_condition() const;

    unsigned width_dest() const { return wd_; }
    unsigned width_src() const { return ws_; }
    std::size_t node_count() const { return nodes_.size(); }
    NodeId node_id(const std::string& name) const;
    const std::string& node_name(NodeId id) const { return nodes_.at(id).name; }
    Capability node_capability(NodeId id) const { return nodes_.at(id).cap; }
    Ordering node_policy(NodeId id) const { return nodes_.at(id).policy; }
    const Fib& node_fib(NodeId id) const { return nodes_.at(id).rib.fib(); }
    std::optional<Metric> selected_metric(NodeId id, const RouteKey& key) const;

private:
    struct Selection {
        Metric metric;
        std::optional<NodeId> via; // none: locally originated
    };

    struct Node {
        std::string name;
        Capability cap;
        Ordering policy;
        RibState rib;
        std::map<RouteKey, Metric, KeyLess> originated;
        // latest metric heard per neighbor and announced key, grouped under
        // the key this node files the announcement as; a stripping node files
        // distinct announcements under one key and must keep both
        std::map<RouteKey, std::map<NodeId, std::map<RouteKey, Metric, KeyLess>>, KeyLess>
            learned;
        std::map<RouteKey, Selection, KeyLess> selected;
        std::set<RouteKey, KeyLess> dirty;
        std::vector<std::size_t> links;
    };

    struct Link {
        NodeId a, b;
        Metric cost;
        std::deque<Update> to_a, to_b;
    };

    void process(NodeId n, NodeId from, const Update& u);
    void recompute(NodeId n, const RouteKey& key);
    bool advertise(NodeId n);
    NextHop hop_name(NodeId n, const Selection& sel) const;
    Metric link_cost(NodeId n, NodeId neighbor) const;

    unsigned wd_;
    unsigned ws_;
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::map<std::string, NodeId> ids_;
    std::optional<std::mt19937_64> shuffle_;
};

} // namespace ssr
