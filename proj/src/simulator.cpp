#include "dioph/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "dioph/rng.hpp"
#include "dioph/threads.hpp"

namespace dioph {

StateVector make_zero_state(std::vector<uint32_t> qubits, uint32_t qubit_cap) {
    if (qubits.size() > qubit_cap)
        throw cap_error("state of " + std::to_string(qubits.size()) +
                        " qubits exceeds cap of " + std::to_string(qubit_cap));
    StateVector s;
    s.qubits = std::move(qubits);
    s.amps.assign(size_t(1) << s.qubits.size(), {0.0, 0.0});
    s.amps[0] = {1.0, 0.0};
    return s;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct LocalGate {
    uint64_t ctrl_mask = 0;
    uint64_t ctrl_value = 0;
    uint64_t target = 0;
    bool is_phase = false;
    bool is_h = false;
};

LocalGate localize(const Gate& g, const std::vector<int>& pos) {
    auto local = [&](uint32_t q) {
        if (q >= pos.size() || pos[q] < 0)
            throw circuit_error("gate touches a qubit outside the simulated subset");
        return uint64_t(1) << pos[q];
    };
    LocalGate lg;
    lg.target = local(g.target);
    for (const auto& ctl : g.controls) {
        uint64_t bit = local(ctl.qubit);
        lg.ctrl_mask |= bit;
        if (!ctl.anti) lg.ctrl_value |= bit;
    }
    lg.is_phase = g.kind == GateKind::Mcz;
    lg.is_h = g.kind == GateKind::H;
    return lg;
}

} // namespace

void run_circuit(const Circuit& c, StateVector& state) {
    std::vector<int> pos(c.qubit_count, -1);
    for (size_t i = 0; i < state.qubits.size(); ++i) {
        if (state.qubits[i] >= c.qubit_count)
            throw circuit_error("state qubit outside circuit");
        pos[state.qubits[i]] = static_cast<int>(i);
    }
    size_t dim = state.amps.size();
    for (const auto& g : c.gates) {
        LocalGate lg = localize(g, pos);
        if (lg.is_h) {
            for (uint64_t i = 0; i < dim; ++i) {
                if (i & lg.target) continue;
                auto a0 = state.amps[i];
                auto a1 = state.amps[i | lg.target];
                state.amps[i] = (a0 + a1) * kInvSqrt2;
                state.amps[i | lg.target] = (a0 - a1) * kInvSqrt2;
            }
        } else if (lg.is_phase) {
            for (uint64_t i = 0; i < dim; ++i)
                if ((i & lg.ctrl_mask) == lg.ctrl_value && (i & lg.target))
                    state.amps[i] = -state.amps[i];
        } else {
            for (uint64_t i = 0; i < dim; ++i) {
                if (i & lg.target) continue;
                if ((i & lg.ctrl_mask) != lg.ctrl_value) continue;
                std::swap(state.amps[i], state.amps[i | lg.target]);
            }
        }
    }
}

double state_norm(const StateVector& state) {
    double n = 0;
    for (const auto& a : state.amps) n += std::norm(a);
    return std::sqrt(n);
}

namespace {

/// Oracle phases for every search-register basis state, from one classical
/// emulation of the synthesized oracle circuit per state. Checks that the
/// non-search registers return to zero.
std::vector<int8_t> oracle_phases(const OracleBundle& bundle) {
    const RegisterPlan& plan = bundle.plan;
    if (plan.total > 64)
        throw cap_error("hybrid oracle emulation supports at most 64 qubits");
    uint32_t nw = plan.var_count * plan.bits;
    CompiledCircuit cc = compile_for_emulation(bundle.oracle);
    std::vector<int8_t> phases(size_t(1) << nw);
    std::atomic<uint64_t> first_bad{phases.size()};
    parallel_chunks(phases.size(), [&](uint32_t, uint64_t begin, uint64_t end) {
        for (uint64_t x = begin; x < end; ++x) {
            int phase = 1;
            uint64_t out = run_compiled(cc, x, phase);
            if (out != x) {
                uint64_t seen = first_bad.load();
                while (x < seen && !first_bad.compare_exchange_weak(seen, x)) {
                }
                return;
            }
            phases[x] = static_cast<int8_t>(phase);
        }
    });
    if (first_bad.load() != phases.size())
        throw verification_error("oracle left garbage for search pattern " +
                                 std::to_string(first_bad.load()));
    return phases;
}

std::vector<uint64_t> solution_codes(const OracleBundle& bundle, const SimLimits& limits) {
    auto sols = brute_force_solve(bundle.system, limits.domain_cap);
    std::vector<uint64_t> codes;
    codes.reserve(sols.size());
    for (const auto& s : sols) codes.push_back(pack_assignment(bundle.plan, s));
    std::sort(codes.begin(), codes.end());
    // Excluded patterns are not counted as successes.
    std::vector<uint64_t> out;
    std::set_difference(codes.begin(), codes.end(), bundle.excluded.begin(),
                        bundle.excluded.end(), std::back_inserter(out));
    return out;
}

/// In-place hybrid Grover iteration: phase kick then reflection. The gate
/// realization of the diffusion carries a global -1, mirrored here so both
/// backends produce identical amplitudes.
void hybrid_step(std::vector<std::complex<double>>& amps, const std::vector<int8_t>& phases) {
    std::complex<double> sum = 0;
    for (size_t i = 0; i < amps.size(); ++i) {
        if (phases[i] < 0) amps[i] = -amps[i];
        sum += amps[i];
    }
    std::complex<double> mean = sum / double(amps.size());
    for (auto& a : amps) a = a - 2.0 * mean;
}

double mass_on(const std::vector<std::complex<double>>& amps,
               const std::vector<uint64_t>& codes) {
    double p = 0;
    for (uint64_t code : codes) p += std::norm(amps[code]);
    return p;
}

AmplificationTrace dense_trace(const OracleBundle& bundle, uint32_t steps,
                               const SimLimits& limits) {
    const RegisterPlan& plan = bundle.plan;
    uint32_t nw = plan.var_count * plan.bits;
    std::vector<uint32_t> all(plan.total);
    for (uint32_t q = 0; q < plan.total; ++q) all[q] = q;
    StateVector state = make_zero_state(std::move(all), limits.qubit_cap);

    uint64_t domain = uint64_t(1) << nw;
    double amp = 1.0 / std::sqrt(double(domain));
    std::fill(state.amps.begin(), state.amps.end(), std::complex<double>{0.0, 0.0});
    for (uint64_t x = 0; x < domain; ++x) state.amps[x] = amp; // search bits are the low bits

    auto codes = solution_codes(bundle, limits);
    AmplificationTrace trace;
    trace.backend = Backend::Dense;
    trace.success_probability.push_back(mass_on(state.amps, codes));
    for (uint32_t t = 0; t < steps; ++t) {
        run_circuit(bundle.iteration, state);
        trace.success_probability.push_back(mass_on(state.amps, codes));
    }
    return trace;
}

AmplificationTrace hybrid_trace(const OracleBundle& bundle, uint32_t steps,
                                const SimLimits& limits) {
    uint32_t nw = bundle.plan.var_count * bundle.plan.bits;
    if (nw > limits.qubit_cap)
        throw cap_error("search register wider than the state-vector cap");
    auto phases = oracle_phases(bundle);
    auto codes = solution_codes(bundle, limits);
    uint64_t domain = uint64_t(1) << nw;
    std::vector<std::complex<double>> amps(domain, 1.0 / std::sqrt(double(domain)));
    AmplificationTrace trace;
    trace.backend = Backend::Hybrid;
    trace.success_probability.push_back(mass_on(amps, codes));
    for (uint32_t t = 0; t < steps; ++t) {
        hybrid_step(amps, phases);
        trace.success_probability.push_back(mass_on(amps, codes));
    }
    return trace;
}

} // namespace

AmplificationTrace grover_trace(const OracleBundle& bundle, uint32_t steps, Backend backend,
                                const SimLimits& limits) {
    if (backend == Backend::Dense) {
        if (bundle.plan.total > limits.qubit_cap)
            throw cap_error("plan needs " + std::to_string(bundle.plan.total) +
                            " qubits, dense cap is " + std::to_string(limits.qubit_cap));
        return dense_trace(bundle, steps, limits);
    }
    return hybrid_trace(bundle, steps, limits);
}

std::string trace_to_csv(const AmplificationTrace& trace) {
    std::ostringstream out;
    out << "step,success_probability,backend\n";
    char buf[64];
    for (size_t i = 0; i < trace.success_probability.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", trace.success_probability[i]);
        out << i << ',' << buf << ',' << backend_name(trace.backend) << '\n';
    }
    return out.str();
}

uint64_t optimal_iterations(uint64_t domain, uint64_t marked) {
    if (marked == 0 || marked > domain)
        throw domain_error("marked count must be in [1, domain]");
    double ratio = double(domain) / double(marked);
    return static_cast<uint64_t>(std::floor(0.25 * M_PI * std::sqrt(ratio)));
}

uint64_t calibrated_depth(uint64_t marked_estimate, uint64_t domain) {
    if (marked_estimate == 0 || marked_estimate > domain)
        throw domain_error("marked estimate must be in [1, domain]");
    double theta = std::asin(std::sqrt(double(marked_estimate) / double(domain)));
    return static_cast<uint64_t>(std::floor(M_PI / (4.0 * theta)));
}

namespace {

uint64_t isqrt_ceil(uint64_t v) {
    uint64_t r = static_cast<uint64_t>(std::ceil(std::sqrt(double(v))));
    while (r > 0 && (r - 1) * (r - 1) >= v) --r;
    while (r * r < v) ++r;
    return r;
}

struct HybridSearcher {
    const OracleBundle* bundle;
    std::vector<int8_t> phases;
    uint64_t domain;

    explicit HybridSearcher(const OracleBundle& b)
        : bundle(&b), phases(oracle_phases(b)),
          domain(uint64_t(1) << (b.plan.var_count * b.plan.bits)) {}

    /// Runs j iterations from the uniform state and samples one basis state.
    uint64_t run_and_measure(uint64_t j, std::mt19937_64& rng) const {
        std::vector<std::complex<double>> amps(domain, 1.0 / std::sqrt(double(domain)));
        for (uint64_t t = 0; t < j; ++t) hybrid_step(amps, phases);
        double total = 0;
        for (const auto& a : amps) total += std::norm(a);
        double r = uniform01(rng) * total;
        double acc = 0;
        for (uint64_t i = 0; i < domain; ++i) {
            acc += std::norm(amps[i]);
            if (r < acc) return i;
        }
        return domain - 1;
    }
};

/// Shared search loop: grows the iteration ceiling by 6/5 per failed attempt.
template <typename Verify>
SearchResult bbht_core(const HybridSearcher& searcher, std::mt19937_64& rng, uint64_t budget,
                       Verify&& verify) {
    SearchResult result;
    double t_ceiling = 1.0;
    double sqrt_domain = std::sqrt(double(searcher.domain));
    for (;;) {
        if (result.queries >= budget) {
            result.budget_exhausted = true;
            return result;
        }
        uint64_t floor_t = static_cast<uint64_t>(std::floor(t_ceiling));
        uint64_t count = floor_t < t_ceiling ? floor_t + 1 : floor_t;
        if (count == 0) count = 1;
        uint64_t j = uniform_below(rng, count);
        result.queries += j;
        uint64_t code = searcher.run_and_measure(j, rng);
        if (verify(code)) {
            result.solution = unpack_assignment(searcher.bundle->plan, code);
            return result;
        }
        t_ceiling = std::min(t_ceiling * 1.2, sqrt_domain);
    }
}

} // namespace

SearchResult bbht_search(const DiophantineSystem& sys, uint64_t seed,
                         const SearchOptions& opts) {
    OracleBundle bundle = synth_grover_iteration(sys);
    uint32_t nw = bundle.plan.var_count * bundle.plan.bits;
    if (nw > opts.limits.qubit_cap)
        throw cap_error("search register wider than the state-vector cap");
    HybridSearcher searcher(bundle);
    std::mt19937_64 rng(seed);
    uint64_t budget = opts.budget_multiplier * isqrt_ceil(searcher.domain);
    return bbht_core(searcher, rng, budget, [&](uint64_t code) {
        return satisfies(sys, unpack_assignment(bundle.plan, code));
    });
}

SearchResult calibrated_search(const DiophantineSystem& sys, uint64_t seed,
                               const SearchOptions& opts) {
    OracleBundle bundle = synth_grover_iteration(sys);
    uint32_t nw = bundle.plan.var_count * bundle.plan.bits;
    if (nw > opts.limits.qubit_cap)
        throw cap_error("search register wider than the state-vector cap");
    uint64_t domain = uint64_t(1) << nw;
    if (domain > opts.limits.domain_cap)
        throw cap_error("calibration needs a brute-force count; domain exceeds cap");
    auto sols = brute_force_solve(sys, opts.limits.domain_cap);
    SearchResult result;
    if (sols.empty()) {
        result.budget_exhausted = true;
        return result;
    }
    uint64_t depth = calibrated_depth(sols.size(), domain);
    HybridSearcher searcher(bundle);
    std::mt19937_64 rng(seed);
    uint64_t budget = opts.budget_multiplier * isqrt_ceil(domain);
    for (;;) {
        if (result.queries >= budget) {
            result.budget_exhausted = true;
            return result;
        }
        result.queries += depth > 0 ? depth : 1;
        uint64_t code = searcher.run_and_measure(depth, rng);
        Assignment x = unpack_assignment(bundle.plan, code);
        if (satisfies(sys, x)) {
            result.solution = x;
            return result;
        }
    }
}

EnumerationResult enumerate_all(const DiophantineSystem& sys, uint64_t seed,
                                const SearchOptions& opts) {
    OracleBundle bundle = synth_grover_iteration(sys);
    uint32_t nw = bundle.plan.var_count * bundle.plan.bits;
    if (nw > opts.limits.qubit_cap)
        throw cap_error("search register wider than the state-vector cap");
    std::mt19937_64 rng(seed);
    EnumerationResult result;
    for (;;) {
        HybridSearcher searcher(bundle);
        uint64_t budget = opts.budget_multiplier * isqrt_ceil(searcher.domain);
        auto excluded = bundle.excluded;
        SearchResult one = bbht_core(searcher, rng, budget, [&](uint64_t code) {
            if (std::binary_search(excluded.begin(), excluded.end(), code)) return false;
            return satisfies(sys, unpack_assignment(bundle.plan, code));
        });
        result.total_queries += one.queries;
        ++result.searches;
        if (!one.solution) {
            result.complete = true;
            break;
        }
        result.solutions.push_back(*one.solution);
        bundle = augment_exclude(bundle, *one.solution);
    }
    std::sort(result.solutions.begin(), result.solutions.end());
    return result;
}

} // namespace dioph
