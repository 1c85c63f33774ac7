#include "ssr/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace ssr {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream in(body);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

unsigned parse_number(const std::string& t, int line, unsigned max) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || v > max)
        fail(line, "bad number: " + t);
    return v;
}

// consume "<dest> from <src>" starting at toks[at]
RouteKey parse_key_at(const std::vector<std::string>& toks, std::size_t at, int line,
                      unsigned wd, unsigned ws) {
    if (toks.size() < at + 3 || toks[at + 1] != "from") fail(line, "expected <dest> from <src>");
    try {
        return RouteKey{Prefix::parse(toks[at], wd), Prefix::parse(toks[at + 2], ws)};
    } catch (const ParseError& e) {
        fail(line, e.what());
    }
}

// consume "via <gw> [dev <iface>]" starting at toks[at], which must end the line
NextHop parse_nh_at(const std::vector<std::string>& toks, std::size_t at, int line) {
    if (toks.size() < at + 2 || toks[at] != "via") fail(line, "expected via <gw>");
    NextHop nh{toks[at + 1], ""};
    if (toks.size() == at + 2) return nh;
    if (toks.size() != at + 4 || toks[at + 2] != "dev") fail(line, "expected dev <iface>");
    nh.iface = toks[at + 3];
    return nh;
}

Address parse_addr(const std::string& t, int line, unsigned width) {
    try {
        return Address::parse(t, width);
    } catch (const ParseError& e) {
        fail(line, e.what());
    }
}

std::string render_dest(const Prefix& p) {
    if (p.plen() == 0) return "default";
    if (p.plen() == p.width()) return Address(p.width(), p.bits()).to_string();
    return p.to_string();
}

// most specific first, canonical within one length
bool render_less(const Prefix& a, const Prefix& b) {
    if (a.plen() != b.plen()) return a.plen() > b.plen();
    return prefix_canon_less(a, b);
}

} // namespace

FibScenario parse_fib_scenario(const std::string& text, unsigned width_dest,
                               unsigned width_src) {
    FibScenario sc{width_dest, width_src, {}};
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool saw_command = false;
    while (std::getline(in, raw)) {
        line++;
        std::vector<std::string> toks = tokenize(raw);
        if (toks.empty()) continue;
        const std::string& cmd = toks[0];
        if (cmd == "universe") {
            if (saw_command) fail(line, "universe must precede every command");
            if (toks.size() != 3) fail(line, "universe takes two widths");
            sc.width_dest = parse_number(toks[1], line, 128);
            sc.width_src = parse_number(toks[2], line, 128);
            if (sc.width_dest == 0 || sc.width_src == 0) fail(line, "zero width");
            continue;
        }
        saw_command = true;
        FibCommand fc{};
        fc.line = line;
        if (cmd == "add" || cmd == "change") {
            fc.kind = cmd == "add" ? FibCommand::Kind::Add : FibCommand::Kind::Change;
            fc.key = parse_key_at(toks, 1, line, sc.width_dest, sc.width_src);
            fc.nh = parse_nh_at(toks, 4, line);
        } else if (cmd == "del") {
            fc.kind = FibCommand::Kind::Del;
            fc.key = parse_key_at(toks, 1, line, sc.width_dest, sc.width_src);
            if (toks.size() > 4) fc.nh = parse_nh_at(toks, 4, line);
        } else if (cmd == "dump" || cmd == "render") {
            fc.kind = cmd == "dump" ? FibCommand::Kind::Dump : FibCommand::Kind::Render;
            if (toks.size() != 1) fail(line, cmd + " takes no arguments");
        } else if (cmd == "lookup") {
            fc.kind = FibCommand::Kind::Lookup;
            if (toks.size() != 3) fail(line, "lookup takes <dst> <src>");
            fc.dst = parse_addr(toks[1], line, sc.width_dest);
            fc.src = parse_addr(toks[2], line, sc.width_src);
        } else if (cmd == "expect") {
            fc.kind = FibCommand::Kind::Expect;
            if (toks.size() < 5 || toks[3] != "->") fail(line, "expect takes <dst> <src> -> <nh>");
            fc.dst = parse_addr(toks[1], line, sc.width_dest);
            fc.src = parse_addr(toks[2], line, sc.width_src);
            std::string want;
            for (std::size_t i = 4; i < toks.size(); i++) {
                if (i > 4) want += ' ';
                want += toks[i];
            }
            fc.expect = want;
        } else {
            fail(line, "unknown command: " + cmd);
        }
        sc.cmds.push_back(std::move(fc));
    }
    return sc;
}

RunResult run_fib_scenario(const FibScenario& sc, Ordering backend, bool log_ops) {
    RunResult res{0, "", ""};
    RibState rib(sc.width_dest, sc.width_src, Ordering::DestFirst, backend);
    if (log_ops)
        rib.fib().set_op_log([&](const std::string& l) { res.output += l + '\n'; });
    for (const FibCommand& fc : sc.cmds) {
        try {
            switch (fc.kind) {
            case FibCommand::Kind::Add:
                rib.add_route({*fc.key, *fc.nh});
                break;
            case FibCommand::Kind::Del:
                if (fc.nh) {
                    auto it = rib.routes().find(*fc.key);
                    if (it == rib.routes().end() || !(it->second == *fc.nh))
                        throw ContractViolation("nexthop check failed for " +
                                                fc.key->to_string());
                }
                rib.delete_route(*fc.key);
                break;
            case FibCommand::Kind::Change:
                rib.change_route(*fc.key, *fc.nh);
                break;
            case FibCommand::Kind::Dump:
                res.output += rib.fib().dump();
                break;
            case FibCommand::Kind::Lookup: {
                auto nh = rib.fib().lookup(*fc.dst, *fc.src);
                res.output += "lookup " + fc.dst->to_string() + ' ' + fc.src->to_string() +
                              " -> " + (nh ? nh->to_string() : "none") + '\n';
                break;
            }
            case FibCommand::Kind::Expect: {
                auto nh = rib.fib().lookup(*fc.dst, *fc.src);
                std::string got = nh ? nh->to_string() : "none";
                if (got != fc.expect) {
                    res.error = "line " + std::to_string(fc.line) + ": expected '" +
                                fc.expect + "' got '" + got + "'";
                    res.exit_code = 1;
                    return res;
                }
                break;
            }
            case FibCommand::Kind::Render:
                res.output += render_tables(rib.fib());
                break;
            }
        } catch (const ContractViolation& e) {
            res.error = "line " + std::to_string(fc.line) + ": " + e.what();
            res.exit_code = 1;
            return res;
        }
    }
    return res;
}

RunResult run_sim_scenario(const std::string& text, unsigned width_dest, unsigned width_src,
                           unsigned max_rounds) {
    RunResult res{0, "", ""};
    struct TraceReq {
        std::string node;
        Address dst, src;
    };
    std::optional<Network> net;
    std::vector<TraceReq> traces;
    unsigned wd = width_dest, ws = width_src;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    try {
        while (std::getline(in, raw)) {
            line++;
            std::vector<std::string> toks = tokenize(raw);
            if (toks.empty()) continue;
            const std::string& cmd = toks[0];
            if (cmd == "universe") {
                if (net) fail(line, "universe must precede every command");
                if (toks.size() != 3) fail(line, "universe takes two widths");
                wd = parse_number(toks[1], line, 128);
                ws = parse_number(toks[2], line, 128);
                if (wd == 0 || ws == 0) fail(line, "zero width");
                continue;
            }
            if (!net) net.emplace(wd, ws);
            if (cmd == "node") {
                if (toks.size() < 2 || toks.size() > 4) fail(line, "node <name> [cap] [policy]");
                Capability cap = Capability::SpecificCapable;
                Ordering policy = Ordering::DestFirst;
                for (std::size_t i = 2; i < toks.size(); i++) {
                    if (toks[i] == "specific") cap = Capability::SpecificCapable;
                    else if (toks[i] == "legacy-ignore") cap = Capability::LegacyIgnore;
                    else if (toks[i] == "legacy-strip") cap = Capability::LegacyStrip;
                    else if (toks[i] == "dest-first") policy = Ordering::DestFirst;
                    else if (toks[i] == "source-first") policy = Ordering::SourceFirst;
                    else fail(line, "unknown node attribute: " + toks[i]);
                }
                net->add_node(toks[1], cap, policy);
            } else if (cmd == "link") {
                if (toks.size() != 4) fail(line, "link <a> <b> <cost>");
                net->add_link(toks[1], toks[2], parse_number(toks[3], line, kInfinity - 1));
            } else if (cmd == "originate") {
                // originate <node> <dest> [from <src>] metric <m>
                if (toks.size() != 5 && toks.size() != 7) fail(line, "bad originate");
                auto parse_prefix = [&](const std::string& t, unsigned w) {
                    try {
                        return Prefix::parse(t, w);
                    } catch (const ParseError& e) {
                        fail(line, e.what());
                    }
                };
                Prefix dest = parse_prefix(toks[2], wd);
                Prefix src = Prefix::zero(ws);
                std::size_t at = 3;
                if (toks.size() == 7) {
                    if (toks[3] != "from") fail(line, "expected from <src>");
                    src = parse_prefix(toks[4], ws);
                    at = 5;
                }
                if (toks[at] != "metric") fail(line, "expected metric <m>");
                net->originate(toks[1], RouteKey{dest, src},
                               parse_number(toks[at + 1], line, kInfinity - 1));
            } else if (cmd == "trace") {
                if (toks.size() != 4) fail(line, "trace <node> <dst> <src>");
                net->node_id(toks[1]);
                traces.push_back(TraceReq{toks[1], parse_addr(toks[2], line, wd),
                                          parse_addr(toks[3], line, ws)});
            } else {
                fail(line, "unknown command: " + cmd);
            }
        }
    } catch (const ParseError& e) {
        return {2, "", e.what()};
    } catch (const ContractViolation& e) {
        return {2, "", "line " + std::to_string(line) + ": " + e.what()};
    }
    if (!net) return {2, "", "empty scenario"};

    std::optional<unsigned> rounds = net->run_to_convergence(max_rounds);
    if (!rounds) {
        res.output = "did not converge within " + std::to_string(max_rounds) + " rounds\n";
        res.exit_code = 1;
        return res;
    }
    res.output += "converged in " + std::to_string(*rounds) + " rounds\n";
    res.output += std::string("backbone condition: ") +
                  (net->backbone_condition() ? "yes" : "no") + '\n';
    for (NodeId id = 0; id < net->node_count(); id++) {
        res.output += "node " + net->node_name(id) + " (" +
                      to_string(net->node_capability(id)) + ", " +
                      to_string(net->node_policy(id)) + ")\n";
        for (const auto& [key, slot] : net->node_fib(id).entries()) {
            std::string entry = key.to_string() + " via " + slot.nh.to_string();
            if (slot.origin == Origin::Disambiguation)
                entry += " disambiguation";
            else
                entry += " metric " + std::to_string(*net->selected_metric(id, key));
            res.output += "  " + entry + '\n';
        }
    }
    for (const TraceReq& tr : traces) {
        res.output += "trace " + tr.node + ' ' + tr.dst.to_string() + ' ' +
                      tr.src.to_string() + '\n';
        Trace t = net->trace(tr.node, tr.dst, tr.src);
        for (std::size_t i = 0; i + 1 < t.hops.size(); i++)
            res.output += "  " + net->node_name(t.hops[i]) + " -> " +
                          net->node_name(t.hops[i + 1]) + '\n';
        switch (t.outcome) {
        case Trace::Outcome::Delivered:
            res.output += "  DELIVERED " + net->node_name(t.hops.back()) + '\n';
            break;
        case Trace::Outcome::Dropped:
            res.output += "  DROPPED " + net->node_name(t.hops.back()) + '\n';
            break;
        case Trace::Outcome::Loop: {
            std::string cyc;
            for (NodeId n : t.cycle) cyc += ' ' + net->node_name(n);
            res.output += "  LOOP" + cyc + '\n';
            break;
        }
        }
    }
    return res;
}

std::string render_tables(const Fib& fib) {
    std::vector<Prefix> sources;
    for (const auto& [key, slot] : fib.entries()) {
        if (key.src.plen() == 0) continue;
        bool seen = false;
        for (const Prefix& s : sources) seen = seen || s == key.src;
        if (!seen) sources.push_back(key.src);
    }
    std::sort(sources.begin(), sources.end(), render_less);

    std::string out = "# rules\n";
    for (std::size_t i = 0; i < sources.size(); i++)
        out += "from " + sources[i].to_string() + " lookup " + std::to_string(11 + i) + '\n';
    out += "from all lookup main\n";

    auto table = [&](const std::optional<Prefix>& src) {
        std::vector<std::pair<Prefix, const Fib::Slot*>> rows;
        for (const auto& [key, slot] : fib.entries()) {
            if (src ? key.src == *src : key.src.plen() == 0)
                rows.push_back({key.dest, &slot});
        }
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return render_less(a.first, b.first); });
        for (const auto& [dest, slot] : rows)
            out += render_dest(dest) + " via " + slot->nh.to_string() + " proto ssrt\n";
    };
    out += "# table main\n";
    table(std::nullopt);
    for (std::size_t i = 0; i < sources.size(); i++) {
        out += "# table " + std::to_string(11 + i) + " from " + sources[i].to_string() + '\n';
        table(sources[i]);
    }
    return out;
}

} // namespace ssr
