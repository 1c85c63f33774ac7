#include "ssr/sweep.hpp"

#include <algorithm>
#include <optional>
#include <random>

#include "ssr/rib.hpp"

namespace ssr {

namespace {

struct OpRecord {
    enum class Kind { Add, Del, Change };
    Kind kind;
    RouteKey key;
    NextHop nh; // unused for Del
};

struct OpFailure {
    unsigned op_index;
    std::string property;
};

void check_widths(const SweepConfig& cfg) {
    if (cfg.width_dest == 0 || cfg.width_src == 0 || cfg.width_dest > 12 ||
        cfg.width_src > 12 || cfg.width_dest + cfg.width_src > 20)
        throw ContractViolation("sweep widths must stay enumerable");
    if (cfg.routes == 0 || cfg.iterations == 0 || (cfg.mode == SweepConfig::Mode::Ops && cfg.ops == 0))
        throw ContractViolation("sweep needs routes, ops and iterations");
}

std::mt19937_64 rng_for(uint64_t seed, unsigned iteration) {
    std::seed_seq seq{seed, uint64_t{iteration}};
    return std::mt19937_64(seq);
}

Prefix random_prefix(std::mt19937_64& rng, unsigned width) {
    unsigned plen = rng() % (width + 1);
    uint64_t value = plen == 0 ? 0 : rng() & ((uint64_t{1} << plen) - 1);
    return Prefix(width, plen, Bits128::from_index(value, plen));
}

NextHop random_nh(std::mt19937_64& rng) {
    return NextHop{std::string(1, char('a' + rng() % 26)), ""};
}

std::vector<OpRecord> generate_ops(const SweepConfig& cfg, unsigned iteration) {
    std::mt19937_64 rng = rng_for(cfg.seed, iteration);
    RouteMap table;
    std::vector<OpRecord> ops;
    for (unsigned i = 0; i < cfg.ops; i++) {
        OpRecord::Kind kind;
        if (table.empty())
            kind = OpRecord::Kind::Add;
        else if (table.size() >= cfg.routes)
            kind = rng() % 2 ? OpRecord::Kind::Del : OpRecord::Kind::Change;
        else {
            unsigned roll = rng() % 4;
            kind = roll < 2 ? OpRecord::Kind::Add
                            : (roll == 2 ? OpRecord::Kind::Del : OpRecord::Kind::Change);
        }
        if (kind == OpRecord::Kind::Add) {
            RouteKey key{random_prefix(rng, cfg.width_dest), random_prefix(rng, cfg.width_src)};
            while (table.count(key))
                key = RouteKey{random_prefix(rng, cfg.width_dest),
                               random_prefix(rng, cfg.width_src)};
            NextHop nh = random_nh(rng);
            table.emplace(key, nh);
            ops.push_back({kind, key, nh});
        } else {
            auto it = table.begin();
            std::advance(it, rng() % table.size());
            if (kind == OpRecord::Kind::Del) {
                ops.push_back({kind, it->first, {}});
                table.erase(it);
            } else {
                NextHop nh = random_nh(rng);
                it->second = nh;
                ops.push_back({kind, it->first, nh});
            }
        }
    }
    return ops;
}

std::optional<NextHop> ideal_lookup(const RouteMap& table, const Address& ad,
                                    const Address& as) {
    const std::pair<const RouteKey, NextHop>* best = nullptr;
    for (const auto& e : table) {
        if (!e.first.matches(ad, as)) continue;
        if (!best || dest_first_cmp(e.first, best->first) == PairOrder::Less) best = &e;
    }
    if (!best) return std::nullopt;
    return best->second;
}

std::optional<std::string> check_state(const RibState& rib, const SweepConfig& cfg) {
    if (!is_complete(rib.fib().keys())) return "complete";

    Fib rebuilt = rebuild_from_scratch(cfg.width_dest, cfg.width_src, rib.routes());
    if (!rib.fib().same_entries(rebuilt)) return "rebuild";

    std::vector<RouteKey> real_keys;
    for (const auto& [key, nh] : rib.routes()) real_keys.push_back(key);
    if (conflict_zones(rib.fib().keys()) != conflict_zones(real_keys)) return "zones";

    std::vector<FibEntry> snap = rib.fib().snapshot();
    for (uint64_t d = 0; d < (uint64_t{1} << cfg.width_dest); d++) {
        Address ad = Address::from_index(cfg.width_dest, d);
        for (uint64_t s = 0; s < (uint64_t{1} << cfg.width_src); s++) {
            Address as = Address::from_index(cfg.width_src, s);
            std::optional<NextHop> want = ideal_lookup(rib.routes(), ad, as);
            if (lookup_dest_first(snap, ad, as) != want ||
                lookup_source_first(snap, ad, as) != want)
                return "lookup";
        }
    }
    return std::nullopt;
}

// Applies ops in order, skipping ones the current table makes invalid, and
// runs the full check battery after each applied op. The optional fault
// corrupts one installed nexthop after the first applied op; every check run
// after that must notice.
std::optional<OpFailure> apply_and_check(const std::vector<OpRecord>& ops,
                                         const SweepConfig& cfg) {
    RibState rib(cfg.width_dest, cfg.width_src);
    unsigned applied = 0;
    for (unsigned i = 0; i < ops.size(); i++) {
        const OpRecord& op = ops[i];
        bool present = rib.routes().count(op.key) > 0;
        bool valid = op.kind == OpRecord::Kind::Add ? !present : present;
        if (!valid) continue;
        try {
            switch (op.kind) {
            case OpRecord::Kind::Add: rib.add_route({op.key, op.nh}); break;
            case OpRecord::Kind::Del: rib.delete_route(op.key); break;
            case OpRecord::Kind::Change: rib.change_route(op.key, op.nh); break;
            }
        } catch (const ContractViolation&) {
            return OpFailure{i, "engine-contract"};
        }
        applied++;
        if (cfg.inject_fault && applied == 1) {
            const auto& entry = *rib.fib().entries().begin();
            rib.fib().switch_nh(entry.first, entry.second.nh, {"corrupt", ""});
        }
        if (auto property = check_state(rib, cfg)) return OpFailure{i, *property};
    }
    return std::nullopt;
}

std::string format_op(const OpRecord& op) {
    switch (op.kind) {
    case OpRecord::Kind::Add: return "add " + op.key.to_string() + " via " + op.nh.to_string();
    case OpRecord::Kind::Del: return "del " + op.key.to_string();
    case OpRecord::Kind::Change:
        return "change " + op.key.to_string() + " via " + op.nh.to_string();
    }
    throw ContractViolation("bad op kind");
}

std::string format_scenario(const SweepConfig& cfg, unsigned iteration,
                            const std::vector<OpRecord>& ops, const OpFailure& f) {
    std::string out = "# reproduction: property " + f.property + " failed after op " +
                      std::to_string(f.op_index) + "\n# seed " + std::to_string(cfg.seed) +
                      " iteration " + std::to_string(iteration) + "\nuniverse " +
                      std::to_string(cfg.width_dest) + ' ' + std::to_string(cfg.width_src) +
                      '\n';
    for (unsigned i = 0; i <= f.op_index && i < ops.size(); i++)
        out += format_op(ops[i]) + '\n';
    return out;
}

std::optional<SweepFailure> run_ops_iteration(const SweepConfig& cfg, unsigned iteration) {
    std::vector<OpRecord> ops = generate_ops(cfg, iteration);
    std::optional<OpFailure> failure = apply_and_check(ops, cfg);
    if (!failure) return std::nullopt;

    // greedy shrink: drop any single op whose removal keeps some check failing
    std::vector<OpRecord> cur(ops.begin(), ops.begin() + failure->op_index + 1);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < cur.size(); i++) {
            std::vector<OpRecord> candidate = cur;
            candidate.erase(candidate.begin() + i);
            if (auto f = apply_and_check(candidate, cfg)) {
                cur = std::move(candidate);
                failure = f;
                progress = true;
                break;
            }
        }
    }
    cur.erase(cur.begin() + failure->op_index + 1, cur.end());
    return SweepFailure{iteration, failure->property, failure->op_index,
                        format_scenario(cfg, iteration, cur, *failure)};
}

std::vector<RouteKey> generate_keys(const SweepConfig& cfg, unsigned iteration) {
    std::mt19937_64 rng = rng_for(cfg.seed, iteration);
    std::size_t n = 1 + rng() % cfg.routes;
    std::set<RouteKey, KeyLess> seen;
    while (seen.size() < n)
        seen.insert(
            RouteKey{random_prefix(rng, cfg.width_dest), random_prefix(rng, cfg.width_src)});
    return std::vector<RouteKey>(seen.begin(), seen.end());
}

std::optional<SweepFailure> run_keyset_iteration(const SweepConfig& cfg, unsigned iteration) {
    auto violated = [&](const std::vector<RouteKey>& ks) {
        return is_ambiguous(ks, cfg.width_dest, cfg.width_src) ==
               is_weakly_complete(ks, cfg.width_dest, cfg.width_src);
    };
    std::vector<RouteKey> keys = generate_keys(cfg, iteration);
    if (!violated(keys)) return std::nullopt;

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < keys.size(); i++) {
            std::vector<RouteKey> candidate = keys;
            candidate.erase(candidate.begin() + i);
            if (!candidate.empty() && violated(candidate)) {
                keys = std::move(candidate);
                progress = true;
                break;
            }
        }
    }
    std::string scenario = "# reproduction: ambiguity and weak completeness agreed\n# seed " +
                           std::to_string(cfg.seed) + " iteration " + std::to_string(iteration) +
                           "\nuniverse " + std::to_string(cfg.width_dest) + ' ' +
                           std::to_string(cfg.width_src) + '\n';
    for (const RouteKey& k : keys) scenario += "add " + k.to_string() + " via x\n";
    return SweepFailure{iteration, "ambiguity", unsigned(keys.size() - 1), scenario};
}

std::optional<SweepFailure> run_iteration(const SweepConfig& cfg, unsigned iteration) {
    return cfg.mode == SweepConfig::Mode::Ops ? run_ops_iteration(cfg, iteration)
                                              : run_keyset_iteration(cfg, iteration);
}

SweepResult assemble(const SweepConfig& cfg, std::vector<std::optional<SweepFailure>> slots) {
    SweepResult res;
    res.iterations = cfg.iterations;
    for (std::optional<SweepFailure>& slot : slots) {
        if (!slot) continue;
        res.failures++;
        res.failures_by_property[slot->property]++;
        res.details.push_back(std::move(*slot));
    }
    std::string r = cfg.mode == SweepConfig::Mode::Ops ? "mode ops\n" : "mode keysets\n";
    r += "universe " + std::to_string(cfg.width_dest) + ' ' + std::to_string(cfg.width_src) +
         '\n';
    r += "iterations " + std::to_string(cfg.iterations) + '\n';
    r += "seed " + std::to_string(cfg.seed) + '\n';
    r += "routes " + std::to_string(cfg.routes) + '\n';
    if (cfg.mode == SweepConfig::Mode::Ops) {
        r += "ops-per-iteration " + std::to_string(cfg.ops) + '\n';
        r += "checks complete rebuild zones lookup\n";
    } else {
        r += "checks ambiguity-weak-completeness\n";
    }
    if (cfg.inject_fault) r += "fault-injection on\n";
    r += "failures " + std::to_string(res.failures) + '\n';
    for (const SweepFailure& f : res.details) {
        r += "failure iteration " + std::to_string(f.iteration) + " property " + f.property +
             " op " + std::to_string(f.op_index) + '\n';
        r += f.scenario;
        r += "end failure\n";
    }
    res.report = std::move(r);
    return res;
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    check_widths(cfg);
    std::vector<std::optional<SweepFailure>> slots(cfg.iterations);
#ifdef _OPENMP
    int jobs = int(cfg.jobs == 0 ? 1 : cfg.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int i = 0; i < int(cfg.iterations); i++)
        slots[std::size_t(i)] = run_iteration(cfg, unsigned(i));
#else
    for (unsigned i = 0; i < cfg.iterations; i++) slots[i] = run_iteration(cfg, i);
#endif
    return assemble(cfg, std::move(slots));
}

SweepResult run_sweep_serial(const SweepConfig& cfg) {
    check_widths(cfg);
    std::vector<std::optional<SweepFailure>> slots(cfg.iterations);
    for (unsigned i = 0; i < cfg.iterations; i++) slots[i] = run_iteration(cfg, i);
    return assemble(cfg, std::move(slots));
}

RunResult replay_scenario(const std::string& text, unsigned width_dest, unsigned width_src,
                          bool inject_fault) {
    FibScenario sc;
    try {
        sc = parse_fib_scenario(text, width_dest, width_src);
    } catch (const ParseError& e) {
        return {2, "", e.what()};
    }
    std::vector<OpRecord> ops;
    for (const FibCommand& fc : sc.cmds) {
        switch (fc.kind) {
        case FibCommand::Kind::Add:
            ops.push_back({OpRecord::Kind::Add, *fc.key, *fc.nh});
            break;
        case FibCommand::Kind::Del:
            ops.push_back({OpRecord::Kind::Del, *fc.key, {}});
            break;
        case FibCommand::Kind::Change:
            ops.push_back({OpRecord::Kind::Change, *fc.key, *fc.nh});
            break;
        default:
            break; // output commands have no effect on the checks
        }
    }
    SweepConfig cfg;
    cfg.width_dest = sc.width_dest;
    cfg.width_src = sc.width_src;
    cfg.inject_fault = inject_fault;
    try {
        check_widths(cfg);
    } catch (const ContractViolation& e) {
        return {2, "", e.what()};
    }
    if (auto f = apply_and_check(ops, cfg))
        return {1, "replay failure: property " + f->property + " at op " +
                       std::to_string(f->op_index) + '\n',
                ""};
    return {0, "replay ok: " + std::to_string(ops.size()) + " ops, all checks passed\n", ""};
}

} // namespace ssr
