#include "dioph/oracle.hpp"

#include <algorithm>

#include "dioph/threads.hpp"

namespace dioph {

void emit_ineq_check(Circuit& c, const RegisterPlan& plan) {
    uint32_t sign_bit = plan.accumulator.qubit(plan.accumulator.width - 1);
    Span r = plan.counter;
    for (uint32_t k = r.width; k-- > 0;) {
        std::vector<Control> controls;
        controls.push_back(Control{sign_bit, true});
        for (uint32_t i = 0; i < k; ++i) controls.push_back(Control{r.qubit(i), false});
        c.mcx(std::move(controls), r.qubit(k));
    }
}

Circuit synth_ineq_check(const RegisterPlan& plan) {
    Circuit c;
    c.qubit_count = plan.total;
    emit_ineq_check(c, plan);
    validate(c);
    return c;
}

Circuit synth_constraint_pair(const Polynomial& f, const RegisterPlan& plan,
                              const std::string& label_prefix) {
    Circuit c;
    c.qubit_count = plan.total;
    Circuit eval_pos = synth_poly_eval(f, plan);
    Circuit eval_neg = synth_poly_eval(negate(f), plan);
    Circuit count = synth_ineq_check(plan);

    c.append_as_section(label_prefix + "_eval_pos", eval_pos);
    c.append_as_section(label_prefix + "_count_pos", count);
    c.append_as_section(label_prefix + "_uneval_pos", inverse(eval_pos));
    c.append_as_section(label_prefix + "_eval_neg", eval_neg);
    c.append_as_section(label_prefix + "_count_neg", count);
    c.append_as_section(label_prefix + "_uneval_neg", inverse(eval_neg));
    validate(c);
    return c;
}

namespace {

/// Controls matching a packed search-register pattern, anti on zero bits.
std::vector<Control> pattern_controls(const RegisterPlan& plan, uint64_t code) {
    std::vector<Control> controls;
    uint32_t nw = plan.var_count * plan.bits;
    for (uint32_t b = 0; b < nw; ++b)
        controls.push_back(Control{b, ((code >> b) & 1) == 0});
    return controls;
}

} // namespace

Circuit synth_oracle(const DiophantineSystem& sys, const RegisterPlan& plan,
                     const std::vector<uint64_t>& excluded) {
    Circuit c;
    c.qubit_count = plan.total;

    Circuit tally;
    tally.qubit_count = plan.total;
    for (uint32_t j = 0; j < sys.equation_count(); ++j)
        tally.concat(synth_constraint_pair(sys.equations[j], plan,
                                           "eq" + std::to_string(j + 1)));
    c.concat(tally);

    // Exclusion kicks: flipping the counter's low bit moves 2m to 2m+1, so a
    // previously marked pattern no longer triggers the phase gate; no
    // unmarked pattern can reach 2m because their tallies stay below 2m.
    Circuit kicks;
    kicks.qubit_count = plan.total;
    for (uint64_t code : excluded)
        kicks.mcx(pattern_controls(plan, code), plan.counter.qubit(0));
    if (!kicks.gates.empty()) c.append_as_section("exclusions", kicks);

    // Phase flip when the counter reads exactly 2m.
    uint64_t want = uint64_t(2) * sys.equation_count();
    uint32_t target_bit = 0;
    for (uint32_t i = 0; i < plan.counter.width; ++i)
        if ((want >> i) & 1) target_bit = i;
    std::vector<Control> phase_controls;
    for (uint32_t i = 0; i < plan.counter.width; ++i) {
        if (i == target_bit) continue;
        phase_controls.push_back(Control{plan.counter.qubit(i), ((want >> i) & 1) == 0});
    }
    Circuit phase;
    phase.qubit_count = plan.total;
    phase.mcz(std::move(phase_controls), plan.counter.qubit(target_bit));
    c.append_as_section("phase", phase);

    if (!kicks.gates.empty()) c.append_as_section("exclusions_mirror", inverse(kicks));

    Circuit untally = inverse(tally);
    c.concat(untally);
    validate(c);
    return c;
}

Circuit synth_diffusion(const RegisterPlan& plan) {
    Circuit c;
    c.qubit_count = plan.total;
    c.begin_section("diffusion");
    uint32_t nw = plan.var_count * plan.bits;
    for (uint32_t q = 0; q < nw; ++q) c.h(q);
    for (uint32_t q = 0; q < nw; ++q) c.x(q);
    if (nw == 1) {
        // Plain Z on the single search qubit.
        c.h(0);
        c.x(0);
        c.h(0);
    } else {
        std::vector<Control> controls;
        for (uint32_t q = 0; q + 1 < nw; ++q) controls.push_back(Control{q, false});
        c.mcz(std::move(controls), nw - 1);
    }
    for (uint32_t q = 0; q < nw; ++q) c.x(q);
    for (uint32_t q = 0; q < nw; ++q) c.h(q);
    validate(c);
    return c;
}

OracleBundle synth_grover_iteration(const DiophantineSystem& sys,
                                    const std::vector<uint64_t>& excluded) {
    OracleBundle bundle;
    bundle.system = sys;
    bundle.plan = plan_registers(sys);
    bundle.excluded = excluded;
    std::sort(bundle.excluded.begin(), bundle.excluded.end());
    bundle.excluded.erase(std::unique(bundle.excluded.begin(), bundle.excluded.end()),
                          bundle.excluded.end());
    bundle.oracle = synth_oracle(sys, bundle.plan, bundle.excluded);
    bundle.diffusion = synth_diffusion(bundle.plan);
    bundle.iteration = bundle.oracle;
    bundle.iteration.concat(bundle.diffusion);
    return bundle;
}

OracleBundle augment_exclude(const OracleBundle& bundle, const Assignment& x) {
    std::vector<uint64_t> excluded = bundle.excluded;
    excluded.push_back(pack_assignment(bundle.plan, x));
    return synth_grover_iteration(bundle.system, excluded);
}

OracleScan scan_oracle(const OracleBundle& bundle) {
    const RegisterPlan& plan = bundle.plan;
    if (plan.total > 64)
        throw circuit_error("oracle scan supports at most 64 qubits");
    uint32_t nw = plan.var_count * plan.bits;
    CompiledCircuit cc = compile_for_emulation(bundle.oracle);
    uint64_t total = uint64_t(1) << nw;

    struct ChunkScan {
        std::vector<uint64_t> marked;
        bool garbage_free = true;
        uint64_t first_bad_input = 0;
    };
    std::vector<ChunkScan> chunks(worker_count());
    parallel_chunks(total, [&](uint32_t ci, uint64_t begin, uint64_t end) {
        ChunkScan& out = chunks[ci];
        for (uint64_t x = begin; x < end; ++x) {
            int phase = 1;
            uint64_t after = run_compiled(cc, x, phase);
            if (after != x) {
                out.garbage_free = false;
                out.first_bad_input = x;
                return;
            }
            if (phase < 0) out.marked.push_back(x);
        }
    });

    OracleScan scan;
    for (const auto& c : chunks) {
        if (!c.garbage_free && scan.garbage_free) {
            scan.garbage_free = false;
            scan.first_bad_input = c.first_bad_input;
        }
        if (scan.garbage_free)
            scan.marked.insert(scan.marked.end(), c.marked.begin(), c.marked.end());
    }
    if (!scan.garbage_free) scan.marked.clear();
    return scan;
}

} // namespace dioph
