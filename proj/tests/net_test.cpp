#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ssr/net.hpp"

using namespace ssr;

namespace {

RouteKey K(const std::string& d, const std::string& s) {
    return RouteKey{Prefix::parse(d, 4), Prefix::parse(s, 4)};
}

Address A4(const std::string& t) { return Address::parse(t, 4); }

std::vector<std::string> names(const Network& net, const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    for (NodeId id : ids) out.push_back(net.node_name(id));
    return out;
}

// the two-provider stub network: a plain route to the edge past X and a
// source-constrained route to the edge past Y overlap between A and B
Network make_two_provider(Ordering a_policy, Ordering b_policy) {
    Network net(4, 4);
    net.add_node("X");
    net.add_node("A", Capability::SpecificCapable, a_policy);
    net.add_node("B", Capability::SpecificCapable, b_policy);
    net.add_node("Y");
    net.add_link("X", "A", 1);
    net.add_link("A", "B", 1);
    net.add_link("B", "Y", 1);
    net.originate("X", K("01/2", "/0"), 0);
    net.originate("Y", K("0/1", "10/2"), 0);
    REQUIRE(net.run_to_convergence().has_value());
    return net;
}

Network make_edge_pair(Capability b_cap, bool a_default) {
    Network net(4, 4);
    net.add_node("A");
    net.add_node("B", b_cap);
    net.add_link("A", "B", 1);
    net.originate("A", K("01/2", "11/2"), 0);
    if (a_default) net.originate("A", K("/0", "/0"), 0);
    REQUIRE(net.run_to_convergence().has_value());
    return net;
}

} // namespace

TEST_SUITE_BEGIN("net");

TEST_CASE("a lone originator converges instantly") {
    Network net(4, 4);
    net.add_node("A");
    net.originate("A", K("01/2", "/0"), 0);
    CHECK(net.run_to_convergence() == 0u);
    CHECK(net.node_fib(0).dump() == "01/2 from /0 via A\n");
    CHECK(net.selected_metric(0, K("01/2", "/0")) == 0u);
}

TEST_CASE("metrics accumulate link costs along a line") {
    Network net(4, 4);
    net.add_node("A");
    net.add_node("B");
    net.add_node("C");
    net.add_link("A", "B", 2);
    net.add_link("B", "C", 3);
    net.originate("A", K("01/2", "/0"), 0);
    // announce, learn and re-announce, learn at the far end and echo back,
    // absorb the echo: four rounds with queued traffic
    CHECK(net.run_to_convergence() == 4u);
    CHECK(net.selected_metric(net.node_id("B"), K("01/2", "/0")) == 2u);
    CHECK(net.selected_metric(net.node_id("C"), K("01/2", "/0")) == 5u);
    CHECK(net.node_fib(net.node_id("C")).dump() == "01/2 from /0 via B\n");
}

TEST_CASE("ties keep the local origin, then the smallest neighbor") {
    Network net(4, 4);
    net.add_node("H");
    net.add_node("B");
    net.add_node("C");
    net.add_node("D");
    net.add_link("H", "B", 1);
    net.add_link("H", "C", 1);
    net.add_link("B", "D", 1);
    net.add_link("C", "D", 1);
    net.originate("H", K("1/1", "/0"), 0);
    net.originate("D", K("1/1", "/0"), 2);
    REQUIRE(net.run_to_convergence().has_value());
    // D: local origin at 2 ties the learned 2-cost paths
    CHECK(net.node_fib(net.node_id("D")).dump() == "1/1 from /0 via D\n");
    // B and C: one hop from H
    CHECK(net.node_fib(net.node_id("B")).dump() == "1/1 from /0 via H\n");
    // H itself: local 0
    CHECK(net.selected_metric(net.node_id("H"), K("1/1", "/0")) == 0u);

    Network tie(4, 4);
    tie.add_node("B");
    tie.add_node("C");
    tie.add_node("D");
    tie.add_link("D", "C", 1);
    tie.add_link("D", "B", 1);
    tie.originate("B", K("1/1", "/0"), 0);
    tie.originate("C", K("1/1", "/0"), 0);
    REQUIRE(tie.run_to_convergence().has_value());
    // equal metrics via both neighbors: the smaller node id wins
    CHECK(tie.node_fib(tie.node_id("D")).dump() == "1/1 from /0 via B\n");
}

TEST_CASE("an overlap between providers forwards through its zone entry") {
    Network net(4, 4);
    net.add_node("I");
    net.add_node("A");
    net.add_node("M");
    net.add_link("I", "A", 1);
    net.add_link("A", "M", 1);
    net.originate("I", K("/0", "11/2"), 0);
    net.originate("M", K("01/2", "/0"), 0);
    REQUIRE(net.run_to_convergence().has_value());

    NodeId a = net.node_id("A");
    CHECK(net.node_fib(a).dump() == "/0 from 11/2 via I\n"
                                    "01/2 from /0 via M\n"
                                    "01/2 from 11/2 via M disambiguation\n");

    Trace zone = net.trace("A", A4("0101"), A4("1100"));
    CHECK(zone.outcome == Trace::Outcome::Delivered);
    CHECK(names(net, zone.hops) == std::vector<std::string>{"A", "M"});

    Trace out = net.trace("A", A4("1000"), A4("1100"));
    CHECK(out.outcome == Trace::Outcome::Delivered);
    CHECK(names(net, out.hops) == std::vector<std::string>{"A", "I"});

    Trace in = net.trace("I", A4("0101"), A4("0000"));
    CHECK(in.outcome == Trace::Outcome::Delivered);
    CHECK(names(net, in.hops) == std::vector<std::string>{"I", "A", "M"});

    CHECK(net.trace("A", A4("1000"), A4("0000")).outcome == Trace::Outcome::Dropped);
    CHECK(net.backbone_condition());
}

TEST_CASE("mixed zone policies forward zone traffic into a loop") {
    Network net = make_two_provider(Ordering::SourceFirst, Ordering::DestFirst);
    Trace t = net.trace("A", A4("0101"), A4("1000"));
    REQUIRE(t.outcome == Trace::Outcome::Loop);
    CHECK(names(net, t.cycle) == std::vector<std::string>{"A", "B"});
    CHECK(names(net, t.hops) == std::vector<std::string>{"A", "B", "A"});

    Trace tb = net.trace("B", A4("0101"), A4("1000"));
    REQUIRE(tb.outcome == Trace::Outcome::Loop);
    CHECK(names(net, tb.cycle) == std::vector<std::string>{"B", "A"});

    // outside the overlap everything still delivers
    CHECK(net.trace("A", A4("0101"), A4("0000")).outcome == Trace::Outcome::Delivered);
    CHECK(net.trace("B", A4("0010"), A4("1000")).outcome == Trace::Outcome::Delivered);
}

TEST_CASE("a uniform zone policy keeps every pair loop-free") {
    Network net = make_two_provider(Ordering::DestFirst, Ordering::DestFirst);
    for (uint64_t d = 0; d < 16; d++) {
        for (uint64_t s = 0; s < 16; s++) {
            for (const char* start : {"A", "B"}) {
                Trace t = net.trace(start, Address::from_index(4, d),
                                    Address::from_index(4, s));
                CHECK(t.outcome != Trace::Outcome::Loop);
            }
        }
    }
}

TEST_CASE("a stripping neighbor loops traffic the source-carrying route excludes") {
    Network net = make_edge_pair(Capability::LegacyStrip, false);
    CHECK(net.node_fib(net.node_id("B")).dump() == "01/2 from /0 via A\n");

    CHECK(net.trace("A", A4("0101"), A4("1100")).outcome == Trace::Outcome::Delivered);
    Trace t = net.trace("A", A4("0101"), A4("0000"));
    REQUIRE(t.outcome == Trace::Outcome::Loop);
    CHECK(names(net, t.cycle) == std::vector<std::string>{"A", "B"});
    CHECK(!net.backbone_condition());
}

TEST_CASE("an ignoring neighbor drops instead") {
    Network net = make_edge_pair(Capability::LegacyIgnore, false);
    CHECK(net.node_fib(net.node_id("B")).size() == 0);
    CHECK(net.trace("A", A4("0101"), A4("0000")).outcome == Trace::Outcome::Dropped);
    CHECK(net.trace("B", A4("0101"), A4("1100")).outcome == Trace::Outcome::Dropped);
    CHECK(net.trace("A", A4("0101"), A4("1100")).outcome == Trace::Outcome::Delivered);
    CHECK(!net.backbone_condition());
}

TEST_CASE("a default from the capable side absorbs stripped traffic") {
    Network net = make_edge_pair(Capability::LegacyStrip, true);
    CHECK(net.backbone_condition());
    for (uint64_t d = 0; d < 16; d++)
        for (uint64_t s = 0; s < 16; s++)
            for (const char* start : {"A", "B"})
                CHECK(net.trace(start, Address::from_index(4, d), Address::from_index(4, s))
                          .outcome == Trace::Outcome::Delivered);
}

TEST_CASE("selected metrics match shortest paths to the best originator") {
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 20; iter++) {
        size_t n = 3 + rng() % 6;
        Network net(4, 4);
        for (size_t i = 0; i < n; i++) net.add_node("n" + std::to_string(i));
        std::vector<std::vector<Metric>> dist(n, std::vector<Metric>(n, kInfinity));
        for (size_t i = 0; i < n; i++) dist[i][i] = 0;
        auto link = [&](size_t a, size_t b, Metric c) {
            net.add_link("n" + std::to_string(a), "n" + std::to_string(b), c);
            dist[a][b] = std::min(dist[a][b], c);
            dist[b][a] = std::min(dist[b][a], c);
        };
        for (size_t i = 1; i < n; i++) link(rng() % i, i, 1 + rng() % 4);
        for (size_t e = rng() % n; e > 0; e--) {
            size_t a = rng() % n, b = rng() % n;
            if (a != b && dist[a][b] == kInfinity) link(a, b, 1 + rng() % 4);
        }
        for (size_t k = 0; k < n; k++)
            for (size_t i = 0; i < n; i++)
                for (size_t j = 0; j < n; j++)
                    if (dist[i][k] != kInfinity && dist[k][j] != kInfinity)
                        dist[i][j] = std::min(dist[i][j], Metric(dist[i][k] + dist[k][j]));

        std::vector<RouteKey> keys = {K("01/2", "/0"), K("0/1", "10/2"), K("/0", "/0")};
        std::vector<std::vector<std::pair<size_t, Metric>>> origins(keys.size());
        for (size_t ki = 0; ki < keys.size(); ki++) {
            size_t count = 1 + rng() % 2;
            for (size_t c = 0; c < count; c++) {
                size_t node = rng() % n;
                bool seen = false;
                for (auto& [o, m] : origins[ki]) seen |= o == node;
                if (seen) continue;
                Metric m = rng() % 5;
                net.originate("n" + std::to_string(node), keys[ki], m);
                origins[ki].push_back({node, m});
            }
        }
        REQUIRE(net.run_to_convergence(200).has_value());
        for (size_t ki = 0; ki < keys.size(); ki++) {
            for (size_t i = 0; i < n; i++) {
                Metric want = kInfinity;
                for (auto& [o, m] : origins[ki])
                    want = std::min(want, Metric(m + dist[i][o]));
                auto got = net.selected_metric(i, keys[ki]);
                REQUIRE(got.has_value());
                CHECK(*got == want);
            }
        }
    }
}

TEST_CASE("link drain order never changes the result") {
    auto build = [](std::optional<uint64_t> seed) {
        Network net(4, 4);
        net.add_node("X");
        net.add_node("A", Capability::SpecificCapable, Ordering::SourceFirst);
        net.add_node("B");
        net.add_node("Y");
        net.add_node("Z", Capability::LegacyStrip);
        net.add_link("X", "A", 1);
        net.add_link("A", "B", 1);
        net.add_link("B", "Y", 2);
        net.add_link("X", "B", 3);
        net.add_link("Y", "Z", 1);
        net.add_link("Z", "X", 2);
        if (seed) net.set_shuffle_seed(*seed);
        net.originate("X", K("01/2", "/0"), 0);
        net.originate("Y", K("0/1", "10/2"), 0);
        net.originate("A", K("/0", "/0"), 1);
        return net;
    };
    Network base = build(std::nullopt);
    auto base_rounds = base.run_to_convergence();
    REQUIRE(base_rounds.has_value());
    for (uint64_t seed : {1, 2, 3}) {
        Network other = build(seed);
        CHECK(other.run_to_convergence() == base_rounds);
        for (NodeId n = 0; n < base.node_count(); n++)
            CHECK(other.node_fib(n).dump() == base.node_fib(n).dump());
    }
}

TEST_CASE("construction contracts") {
    Network net(4, 4);
    net.add_node("A");
    net.add_node("B", Capability::LegacyStrip);
    net.add_link("A", "B", 1);
    CHECK_THROWS_AS(net.add_node("A"), ContractViolation);
    CHECK_THROWS_AS(net.add_link("A", "A", 1), ContractViolation);
    CHECK_THROWS_AS(net.add_link("A", "B", 2), ContractViolation);
    CHECK_THROWS_AS(net.add_link("A", "C", 1), ContractViolation);
    CHECK_THROWS_AS(net.add_link("A", "B", 0), ContractViolation);
    CHECK_THROWS_AS(net.originate("B", K("01/2", "11/2"), 0), ContractViolation);
    CHECK_THROWS_AS(net.originate("A", K("01/2", "/0"), kInfinity), ContractViolation);
    net.originate("A", K("01/2", "/0"), 0);
    CHECK_THROWS_AS(net.originate("A", K("01/2", "/0"), 1), ContractViolation);
    CHECK_THROWS_AS(net.node_id("C"), ContractViolation);
}

TEST_SUITE_END();
