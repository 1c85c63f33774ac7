#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssr/scenario.hpp"

namespace ssr {

// Randomized self-check of the table engine against the brute-force oracles.
// Ops mode drives random mutations and verifies, after every op, that the
// table stays complete, matches a from-scratch rebuild entry for entry, keeps
// the zone set of the real routes, and answers every address pair the same
// way as a direct scan of the real routes under both lookup orderings.
// Keysets mode samples raw key sets and checks that ambiguity is exactly a
// failed weak-completeness test.
struct SweepConfig {
    unsigned width_dest = 6;
    unsigned width_src = 6;
    unsigned routes = 12; // table size the op generator hovers around
    unsigned ops = 40;    // mutations per iteration (ops mode)
    unsigned iterations = 100;
    uint64_t seed = 1;
    unsigned jobs = 1;
    bool inject_fault = false; // corrupt one nexthop to prove checks can fail
    enum class Mode { Ops, Keysets } mode = Mode::Ops;
};

struct SweepFailure {
    unsigned iteration;
    std::string property;
    unsigned op_index;
    std::string scenario; // shrunk reproduction, runnable as a table scenario
};

struct SweepResult {
    unsigned iterations = 0;
    unsigned failures = 0;
    std::map<std::string, unsigned> failures_by_property;
    std::vector<SweepFailure> details;
    // deterministic for a given config; byte-identical for any jobs value
    std::string report;
};

SweepResult run_sweep(const SweepConfig& cfg);
// single-thread reference driver; must produce run_sweep's report verbatim
SweepResult run_sweep_serial(const SweepConfig& cfg);

// re-run a reproduction scenario with the per-op checks of ops mode
RunResult replay_scenario(const std::string& text, unsigned width_dest, unsigned width_src,
                          bool inject_fault);

} // namespace ssr
