#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ssr/sweep.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int finish(const ssr::RunResult& r) {
    std::cout << r.output;
    if (!r.error.empty()) std::cerr << r.error << '\n';
    return r.exit_code;
}

int compare_golden(const std::string& got, const std::string& want) {
    if (got == want) return 0;
    std::istringstream g(got), w(want);
    std::string gl, wl;
    int line = 0;
    while (true) {
        line++;
        bool has_g = bool(std::getline(g, gl));
        bool has_w = bool(std::getline(w, wl));
        if (!has_g && !has_w) break;
        if (gl != wl || has_g != has_w) {
            std::cerr << "golden mismatch at line " << line << "\nexpected: "
                      << (has_w ? wl : "<end>") << "\ngot:      " << (has_g ? gl : "<end>")
                      << '\n';
            return 1;
        }
    }
    std::cerr << "golden mismatch: trailing difference\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"source-specific routing toolkit"};
    app.require_subcommand(1);

    std::string fib_file, fib_backend = "dest-first", fib_golden;
    bool fib_log = false;
    unsigned fib_wd = 4, fib_ws = 4;
    CLI::App* fib = app.add_subcommand("fib", "drive a forwarding table from a scenario file");
    fib->add_option("file", fib_file, "scenario file")->required();
    fib->add_option("--backend", fib_backend, "lookup ordering")
        ->check(CLI::IsMember({"dest-first", "source-first"}));
    fib->add_flag("--log-ops", fib_log, "print each table operation");
    fib->add_option("--golden", fib_golden, "compare output against this file");
    fib->add_option("--width-dest", fib_wd, "dest address width when no universe line");
    fib->add_option("--width-src", fib_ws, "src address width when no universe line");

    std::string sim_file;
    unsigned sim_rounds = 100, sim_wd = 4, sim_ws = 4;
    CLI::App* sim = app.add_subcommand("sim", "run a route propagation scenario");
    sim->add_option("file", sim_file, "scenario file")->required();
    sim->add_option("--max-rounds", sim_rounds, "convergence budget");
    sim->add_option("--width-dest", sim_wd, "dest address width when no universe line");
    sim->add_option("--width-src", sim_ws, "src address width when no universe line");

    ssr::SweepConfig cfg;
    std::string check_mode = "ops", replay_file;
    CLI::App* check = app.add_subcommand("check", "randomized oracle sweep");
    check->add_option("--mode", check_mode, "what to sample")
        ->check(CLI::IsMember({"ops", "keysets"}));
    check->add_option("--width-dest", cfg.width_dest, "dest address width");
    check->add_option("--width-src", cfg.width_src, "src address width");
    check->add_option("--routes", cfg.routes, "table size to hover around");
    check->add_option("--ops", cfg.ops, "mutations per iteration");
    check->add_option("--seed", cfg.seed, "base seed");
    check->add_option("--iterations", cfg.iterations, "independent iterations");
    check->add_option("--jobs", cfg.jobs, "worker threads");
    check->add_flag("--inject-fault", cfg.inject_fault,
                    "corrupt a nexthop to prove the checks bite");
    check->add_option("--replay", replay_file, "re-check a reproduction scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (fib->parsed()) {
        auto text = read_file(fib_file);
        if (!text) {
            std::cerr << "cannot read " << fib_file << '\n';
            return 2;
        }
        ssr::FibScenario sc;
        try {
            sc = ssr::parse_fib_scenario(*text, fib_wd, fib_ws);
        } catch (const ssr::ParseError& e) {
            std::cerr << e.what() << '\n';
            return 2;
        } catch (const ssr::ContractViolation& e) {
            std::cerr << e.what() << '\n';
            return 2;
        }
        ssr::Ordering backend = fib_backend == "dest-first" ? ssr::Ordering::DestFirst
                                                            : ssr::Ordering::SourceFirst;
        ssr::RunResult r = ssr::run_fib_scenario(sc, backend, fib_log);
        int code = finish(r);
        if (code != 0 || fib_golden.empty()) return code;
        auto want = read_file(fib_golden);
        if (!want) {
            std::cerr << "cannot read " << fib_golden << '\n';
            return 2;
        }
        return compare_golden(r.output, *want);
    }

    if (sim->parsed()) {
        auto text = read_file(sim_file);
        if (!text) {
            std::cerr << "cannot read " << sim_file << '\n';
            return 2;
        }
        return finish(ssr::run_sim_scenario(*text, sim_wd, sim_ws, sim_rounds));
    }

    if (!replay_file.empty()) {
        auto text = read_file(replay_file);
        if (!text) {
            std::cerr << "cannot read " << replay_file << '\n';
            return 2;
        }
        return finish(
            ssr::replay_scenario(*text, cfg.width_dest, cfg.width_src, cfg.inject_fault));
    }

    cfg.mode = check_mode == "ops" ? ssr::SweepConfig::Mode::Ops
                                   : ssr::SweepConfig::Mode::Keysets;
    try {
        ssr::SweepResult res = ssr::run_sweep(cfg);
        std::cout << res.report;
        return res.failures == 0 ? 0 : 1;
    } catch (const ssr::ContractViolation& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
