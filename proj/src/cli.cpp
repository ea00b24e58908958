#include "dioph/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dioph/resources.hpp"
#include "dioph/rng.hpp"
#include "dioph/simulator.hpp"

namespace dioph {
namespace {

struct RunConfig {
    std::string input;
    std::string out;
    std::string backend = "hybrid";
    std::string steps = "auto";
    std::string mode = "bbht";
    std::string kind = "general";
    uint64_t seed = 0;
    uint32_t max_qubits = kDefaultQubitCap;
    uint64_t max_domain = kDefaultDomainCap;
    uint64_t budget = 3;
    uint64_t count = 1500;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open input file " + path, 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_artifact(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file " + path);
    out << content;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

SimLimits limits_of(const RunConfig& cfg) {
    SimLimits limits;
    limits.qubit_cap = cfg.max_qubits;
    limits.domain_cap = cfg.max_domain;
    return limits;
}

std::string assignment_text(const DiophantineSystem& sys, const Assignment& x) {
    std::ostringstream out;
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) out << ' ';
        out << sys.var_names[i] << '=' << x[i];
    }
    return out.str();
}

uint64_t search_space(const DiophantineSystem& sys) {
    uint64_t nw = uint64_t(sys.var_count()) * sys.bits;
    if (nw > 62) throw cap_error("search space exceeds 2^62 states");
    return uint64_t(1) << nw;
}

std::string cost_text(const DiophantineSystem& sys, const OracleBundle& bundle) {
    std::ostringstream out;
    out << "system: n=" << sys.var_count() << " m=" << sys.equation_count()
        << " d=" << sys.degree() << " w=" << sys.bits << "\n";
    out << "search space: 2^" << sys.var_count() * sys.bits << " states\n";
    out << "lambda: " << lambda_penalty(sys) << "\n";

    QubitModel model = qubit_count_model(sys);
    out << "qubits: " << model.total << "\n";
    out << "  search: " << model.search_term << "\n";
    out << "  accumulator: " << model.accumulator_term << "\n";
    out << "  products: " << model.product_term << "\n";
    out << "  counter: " << model.counter_term << "\n";
    out << "  ancillas: " << model.ancilla_term << "\n";

    Census census = gate_census(bundle.iteration);
    out << "gates: " << census.total.total() << "\n";
    out << "  x: " << census.total.x << "  h: " << census.total.h
        << "  cnot: " << census.total.cnot << "  ccx: " << census.total.toffoli << "\n";

    CostReport report = toffoli_equiv_cost(bundle.iteration);
    for (const auto& [arity, n] : report.mcx_histogram)
        out << "  mcx[" << arity << "]: " << n << "\n";
    out << "toffoli_equiv: " << report.toffoli_equiv.to_string() << "\n";
    out << "sections:\n";
    for (const auto& [label, cost] : report.section_costs)
        out << "  " << label << ": " << cost.to_string() << "\n";

    ClassicalCostEstimate classical = classical_cost_estimate(sys);
    out << "classical cost order: " << wide_to_string(classical.cost_order) << "\n";
    return out.str();
}

int cmd_synth(const RunConfig& cfg) {
    DiophantineSystem sys = parse_system(read_file(cfg.input));
    OracleBundle bundle = synth_grover_iteration(sys);
    std::string circuit_text = serialize(bundle.iteration);
    if (cfg.out.empty()) {
        std::cout << circuit_text;
    } else {
        write_artifact(cfg.out, circuit_text);
        std::cout << "circuit: " << cfg.out << " (" << bundle.iteration.gates.size()
                  << " gates)\n";
    }
    std::cout << cost_text(sys, bundle);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    DiophantineSystem sys = parse_system(read_file(cfg.input));
    OracleBundle bundle = synth_grover_iteration(sys);
    if (bundle.plan.total > 64)
        throw cap_error("plan needs " + std::to_string(bundle.plan.total) +
                        " qubits, classical emulation caps at 64");
    uint64_t domain = search_space(sys);

    if (domain <= cfg.max_domain) {
        OracleScan scan = scan_oracle(bundle);
        if (!scan.garbage_free) {
            std::cout << "verification failed: garbage left on basis state "
                      << scan.first_bad_input << "\n";
            return kExitVerification;
        }
        auto sols = brute_force_solve(sys, cfg.max_domain);
        std::vector<uint64_t> expected;
        expected.reserve(sols.size());
        for (const auto& s : sols) expected.push_back(pack_assignment(bundle.plan, s));
        std::sort(expected.begin(), expected.end());
        if (scan.marked != expected) {
            // First counterexample: smallest state in the symmetric difference.
            std::vector<uint64_t> extra, missing;
            std::set_difference(scan.marked.begin(), scan.marked.end(), expected.begin(),
                                expected.end(), std::back_inserter(extra));
            std::set_difference(expected.begin(), expected.end(), scan.marked.begin(),
                                scan.marked.end(), std::back_inserter(missing));
            if (!extra.empty() && (missing.empty() || extra.front() < missing.front()))
                std::cout << "verification failed: basis state " << extra.front()
                          << " marked but not a solution\n";
            else
                std::cout << "verification failed: solution basis state " << missing.front()
                          << " not marked\n";
            return kExitVerification;
        }
        std::cout << "marked set = brute-force set (" << expected.size() << " states)\n";
        std::cout << "garbage-free: yes (" << domain << " basis states)\n";
        return kExitOk;
    }

    // Domain over the exhaustive cap: randomized spot checks.
    const uint64_t samples = 4096;
    CompiledCircuit cc = compile_for_emulation(bundle.oracle);
    std::mt19937_64 rng(cfg.seed);
    for (uint64_t i = 0; i < samples; ++i) {
        uint64_t x = uniform_below(rng, domain);
        int phase = 1;
        uint64_t out = run_compiled(cc, x, phase);
        if (out != x) {
            std::cout << "verification failed: garbage left on basis state " << x << "\n";
            return kExitVerification;
        }
        bool expected = satisfies(sys, unpack_assignment(bundle.plan, x));
        if ((phase < 0) != expected) {
            std::cout << "verification failed: basis state " << x
                      << (expected ? " not marked\n" : " marked but not a solution\n");
            return kExitVerification;
        }
    }
    std::cout << "randomized check passed (" << samples << " samples, seed " << cfg.seed
              << ")\n";
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
    DiophantineSystem sys = parse_system(read_file(cfg.input));
    OracleBundle bundle = synth_grover_iteration(sys);
    uint64_t domain = search_space(sys);

    uint32_t steps = 0;
    if (cfg.steps == "auto") {
        uint64_t chosen;
        if (domain <= cfg.max_domain) {
            uint64_t marked = brute_force_solve(sys, cfg.max_domain).size();
            chosen = marked ? calibrated_depth(marked, domain) : optimal_iterations(domain, 1);
        } else {
            chosen = optimal_iterations(domain, 1);
        }
        steps = static_cast<uint32_t>(chosen);
    } else {
        try {
            size_t used = 0;
            unsigned long v = std::stoul(cfg.steps, &used);
            if (used != cfg.steps.size()) throw std::invalid_argument(cfg.steps);
            steps = static_cast<uint32_t>(v);
        } catch (const std::exception&) {
            throw parse_error("--steps expects a number or 'auto', got " + cfg.steps, 0, 0);
        }
    }

    Backend backend = cfg.backend == "dense" ? Backend::Dense : Backend::Hybrid;
    AmplificationTrace trace = grover_trace(bundle, steps, backend, limits_of(cfg));
    std::string csv = trace_to_csv(trace);
    if (cfg.out.empty()) {
        std::cout << csv;
        return kExitOk;
    }
    write_artifact(cfg.out, csv);
    auto peak = std::max_element(trace.success_probability.begin(),
                                 trace.success_probability.end());
    std::cout << "backend: " << backend_name(trace.backend) << "\n";
    std::cout << "steps: " << steps << "\n";
    std::cout << "peak: " << fmt(*peak) << " at step "
              << (peak - trace.success_probability.begin()) << "\n";
    std::cout << "trace: " << cfg.out << "\n";
    return kExitOk;
}

int cmd_solve(const RunConfig& cfg) {
    DiophantineSystem sys = parse_system(read_file(cfg.input));
    SearchOptions opts;
    opts.budget_multiplier = cfg.budget;
    opts.limits = limits_of(cfg);

    if (cfg.mode == "enumerate") {
        EnumerationResult result = enumerate_all(sys, cfg.seed, opts);
        for (const auto& x : result.solutions)
            std::cout << "solution: " << assignment_text(sys, x) << "\n";
        std::cout << "count: " << result.solutions.size() << "\n";
        std::cout << "queries: " << result.total_queries << "\n";
        std::cout << "searches: " << result.searches << "\n";
        return kExitOk;
    }

    SearchResult result = cfg.mode == "calibrated" ? calibrated_search(sys, cfg.seed, opts)
                                                   : bbht_search(sys, cfg.seed, opts);
    if (result.solution) {
        std::cout << "solution: " << assignment_text(sys, *result.solution) << "\n";
        std::cout << "queries: " << result.queries << "\n";
        return kExitOk;
    }
    std::cout << "no solution found within budget (" << result.queries << " queries)\n";
    return kExitBudget;
}

int cmd_resources(const RunConfig& cfg) {
    DiophantineSystem sys = parse_system(read_file(cfg.input));
    OracleBundle bundle = synth_grover_iteration(sys);
    std::cout << cost_text(sys, bundle);
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    SweepConfig config;
    config.seed = cfg.seed;
    config.count = cfg.count;
    if (cfg.kind == "linear")
        config.kind = SweepKind::Linear;
    else if (cfg.kind == "quadratic")
        config.kind = SweepKind::Quadratic;
    else if (cfg.kind == "qubit-width")
        config.kind = SweepKind::QubitWidth;
    else
        config.kind = SweepKind::General;

    SweepResult result = sweep_and_fit(config);
    std::string csv = sweep_to_csv(result.rows);

    std::ostringstream fits;
    switch (config.kind) {
        case SweepKind::General:
        case SweepKind::Quadratic:
            fits << "fit: exponent=" << fmt(result.global_fit.slope)
                 << " r2=" << fmt(result.global_fit.r_squared) << " (log-log cost vs qubits, "
                 << result.rows.size() << " rows)\n";
            break;
        case SweepKind::Linear:
            for (const auto& [weight, fit] : result.stratum_fits)
                fits << "stratum weight=" << weight << ": slope=" << fmt(fit.slope)
                     << " r2=" << fmt(fit.r_squared) << "\n";
            break;
        case SweepKind::QubitWidth:
            fits << "fit: slope=" << fmt(result.global_fit.slope)
                 << " intercept=" << fmt(result.global_fit.intercept)
                 << " r2=" << fmt(result.global_fit.r_squared)
                 << " (qubits vs (n + d(d+1)/2) * w)\n";
            break;
    }

    if (cfg.out.empty()) {
        std::cout << csv;
        std::istringstream lines(fits.str());
        std::string line;
        while (std::getline(lines, line)) std::cout << "# " << line << "\n";
    } else {
        write_artifact(cfg.out, csv);
        std::cout << fits.str();
        std::cout << "rows: " << result.rows.size() << " -> " << cfg.out << "\n";
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"compiler and simulator for bounded Diophantine feasibility search"};
    app.name("dioph");
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input, "system description (.dioph)")->required();
    };
    auto add_caps = [&](CLI::App* sub) {
        sub->add_option("--max-qubits", cfg.max_qubits, "dense state-vector qubit cap")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-domain", cfg.max_domain, "brute-force / exhaustive-scan cap")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* synth = app.add_subcommand("synth", "emit the search circuit and its cost");
    add_input(synth);
    synth->add_option("--out", cfg.out, "write circuit text here instead of stdout");

    CLI::App* verify = app.add_subcommand("verify", "check the circuit against brute force");
    add_input(verify);
    add_caps(verify);
    verify->add_option("--seed", cfg.seed, "sampling seed for domains over the cap");

    CLI::App* simulate = app.add_subcommand("simulate", "trace success probability per step");
    add_input(simulate);
    add_caps(simulate);
    simulate->add_option("--backend", cfg.backend, "state-vector backend")
        ->check(CLI::IsMember({"dense", "hybrid"}));
    simulate->add_option("--steps", cfg.steps, "iteration count, or 'auto' to calibrate");
    simulate->add_option("--out", cfg.out, "write the CSV trace here");

    CLI::App* solve = app.add_subcommand("solve", "search for satisfying assignments");
    add_input(solve);
    add_caps(solve);
    solve->add_option("--mode", cfg.mode, "search schedule")
        ->check(CLI::IsMember({"bbht", "calibrated", "enumerate"}));
    solve->add_option("--seed", cfg.seed, "measurement seed")->required();
    solve->add_option("--budget", cfg.budget, "query budget multiplier on ceil(sqrt(|D|))")
        ->check(CLI::PositiveNumber);

    CLI::App* resources = app.add_subcommand("resources", "qubit and gate cost report");
    add_input(resources);

    CLI::App* sweep = app.add_subcommand("sweep", "instance sweep with fitted scaling");
    sweep->add_option("--kind", cfg.kind, "sweep family")
        ->check(CLI::IsMember({"general", "linear", "quadratic", "qubit-width"}));
    sweep->add_option("--seed", cfg.seed, "instance generator seed")->required();
    sweep->add_option("--count", cfg.count, "instance count (general kind)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", cfg.out, "write the CSV here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(synth)) return cmd_synth(cfg);
        if (app.got_subcommand(verify)) return cmd_verify(cfg);
        if (app.got_subcommand(simulate)) return cmd_simulate(cfg);
        if (app.got_subcommand(solve)) return cmd_solve(cfg);
        if (app.got_subcommand(resources)) return cmd_resources(cfg);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
        return kExitUsage;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const verification_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const circuit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const synth_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace dioph
