#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssr/net.hpp"

namespace ssr {

// one parsed line of a forwarding-table scenario
struct FibCommand {
    enum class Kind { Add, Del, Change, Dump, Lookup, Expect, Render };
    Kind kind;
    int line;
    std::optional<RouteKey> key;    // Add, Del, Change
    std::optional<NextHop> nh;      // Add, Change; Del when it carries a check
    std::optional<Address> dst, src; // Lookup, Expect
    std::string expect;             // Expect: nexthop text or "none"
};

struct FibScenario {
    unsigned width_dest;
    unsigned width_src;
    std::vector<FibCommand> cmds;
};

// Text format, one command per line, '#' comments and blank lines skipped.
// An optional leading "universe <wd> <ws>" overrides the default widths:
//   add <dest> from <src> via <gw> [dev <iface>]
//   del <dest> from <src> [via <gw> [dev <iface>]]
//   change <dest> from <src> via <gw> [dev <iface>]
//   dump
//   lookup <dst-addr> <src-addr>
//   expect <dst-addr> <src-addr> -> <gw>[ dev <iface>] | none
//   render
// Throws ParseError mentioning the line number.
FibScenario parse_fib_scenario(const std::string& text, unsigned width_dest,
                               unsigned width_src);

struct RunResult {
    int exit_code; // 0 ok, 1 failed expectation or engine contract
    std::string output;
    std::string error;
};

RunResult run_fib_scenario(const FibScenario& sc, Ordering backend, bool log_ops);

// Simulator scenario:
//   universe <wd> <ws>
//   node <name> [specific|legacy-ignore|legacy-strip] [dest-first|source-first]
//   link <a> <b> <cost>
//   originate <node> <dest> [from <src>] metric <m>
//   trace <node> <dst-addr> <src-addr>
// Runs to convergence, then prints the per-node tables and the traces.
RunResult run_sim_scenario(const std::string& text, unsigned width_dest, unsigned width_src,
                           unsigned max_rounds);

// Policy-database view of a table: one lookup chain per source prefix plus
// the plain main table, the way a host would program rules and tables.
std::string render_tables(const Fib& fib);

} // namespace ssr
