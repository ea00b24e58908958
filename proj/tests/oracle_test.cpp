#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "dioph/oracle.hpp"
#include "dioph/resources.hpp"
#include "dioph/rng.hpp"
#include "helpers.hpp"

using namespace dioph;

namespace {

std::vector<uint64_t> brute_force_codes(const DiophantineSystem& sys,
                                        const RegisterPlan& plan) {
    std::vector<uint64_t> codes;
    for (const Assignment& x : brute_force_solve(sys))
        codes.push_back(pack_assignment(plan, x));
    std::sort(codes.begin(), codes.end());
    return codes;
}

} // namespace

TEST_CASE("inequality check increments on a clear sign bit") {
    DiophantineSystem sys = test::one_var("eq x = 0", 3);
    RegisterPlan plan = plan_registers(sys);
    Circuit c = synth_ineq_check(plan);
    validate(c);
    CompiledCircuit cc = compile_for_emulation(c);
    Span f = plan.accumulator;
    Span r = plan.counter;
    Int flo = -(Int(1) << (f.width - 1)), fhi = (Int(1) << (f.width - 1)) - 1;
    for (Int fv : {flo, Int(-3), Int(-1), Int(0), Int(1), Int(5), fhi}) {
        for (uint64_t rv = 0; rv + 1 < (uint64_t(1) << r.width); ++rv) {
            uint64_t in = test::set_window(0, f, fv);
            in |= rv << r.offset;
            int phase = 1;
            uint64_t out = run_compiled(cc, in, phase);
            uint64_t r_out = (out >> r.offset) & ((uint64_t(1) << r.width) - 1);
            CHECK(r_out == rv + (fv >= 0 ? 1 : 0));
            CHECK(test::window_value(out, f) == fv); // accumulator untouched
            CHECK(phase == 1);
        }
    }
}

TEST_CASE("constraint pair adds one plus the satisfaction bit") {
    DiophantineSystem sys = test::one_var("eq x^2 - 2 x = 0", 3); // roots 0, 2
    RegisterPlan plan = plan_registers(sys);
    Circuit c = synth_constraint_pair(sys.equations[0], plan);
    validate(c);
    CompiledCircuit cc = compile_for_emulation(c);
    Span r = plan.counter;
    for (Int xv = -4; xv <= 3; ++xv) {
        uint64_t in = test::set_window(0, plan.var_span(0), xv);
        int phase = 1;
        uint64_t out = run_compiled(cc, in, phase);
        uint64_t r_out = (out >> r.offset) & ((uint64_t(1) << r.width) - 1);
        bool sat = (xv * xv - 2 * xv) == 0;
        CHECK(r_out == 1u + (sat ? 1u : 0u));
        // Everything except the counter is restored.
        CHECK((out & ~(((uint64_t(1) << r.width) - 1) << r.offset)) == in);
    }
}

TEST_CASE("oracle marks exactly the brute-force solutions of the example") {
    OracleBundle bundle = synth_grover_iteration(test::three_quadrics());
    OracleScan scan = scan_oracle(bundle);
    CHECK(scan.garbage_free);
    CHECK(scan.marked == brute_force_codes(bundle.system, bundle.plan));
    REQUIRE(scan.marked.size() == 1);
    CHECK(unpack_assignment(bundle.plan, scan.marked[0]) == Assignment{3, 2, 1});
}

TEST_CASE("oracle of an unsatisfiable system marks nothing") {
    OracleBundle bundle = synth_grover_iteration(test::one_var("eq x^2 = 2", 3));
    OracleScan scan = scan_oracle(bundle);
    CHECK(scan.garbage_free);
    CHECK(scan.marked.empty());
}

TEST_CASE("oracle of a tautology marks the whole domain") {
    DiophantineSystem sys = parse_system("vars x\nbits 2\neq x - x = 0\n");
    OracleBundle bundle = synth_grover_iteration(sys);
    OracleScan scan = scan_oracle(bundle);
    CHECK(scan.garbage_free);
    CHECK(scan.marked.size() == 4);
}

TEST_CASE("oracle agreement holds across random small systems") {
    std::mt19937_64 rng(71);
    int built = 0;
    for (int trial = 0; trial < 60 && built < 20; ++trial) {
        uint32_t n = 1 + static_cast<uint32_t>(uniform_below(rng, 2));
        uint32_t w = 2 + static_cast<uint32_t>(uniform_below(rng, 2));
        uint32_t d = 1 + static_cast<uint32_t>(uniform_below(rng, 3));
        uint32_t m = 1 + static_cast<uint32_t>(uniform_below(rng, 2));
        InstanceShape shape;
        shape.var_count = n;
        shape.degree = d;
        shape.n_value = uint64_t(1) << w;
        shape.equation_count = m;
        shape.coeff_max = 7;
        DiophantineSystem sys = random_instance(shape, mix_seed(500, trial));
        RegisterPlan plan = plan_registers(sys);
        if (plan.total > 34) continue;
        ++built;
        OracleBundle bundle = synth_grover_iteration(sys);
        OracleScan scan = scan_oracle(bundle);
        CHECK(scan.garbage_free);
        CHECK(scan.marked == brute_force_codes(sys, plan));
    }
    CHECK(built >= 10);
}

TEST_CASE("exclusions knock individual solutions out of the marked set") {
    DiophantineSystem sys = test::one_var("eq x^2 = 4", 3); // solutions -2, 2
    OracleBundle bundle = synth_grover_iteration(sys);

    OracleBundle minus = augment_exclude(bundle, {-2});
    OracleScan scan = scan_oracle(minus);
    CHECK(scan.garbage_free);
    REQUIRE(scan.marked.size() == 1);
    CHECK(unpack_assignment(minus.plan, scan.marked[0]) == Assignment{2});

    OracleBundle none = augment_exclude(minus, {2});
    CHECK(scan_oracle(none).marked.empty());
    CHECK(none.excluded.size() == 2);

    // Excluding a non-solution changes nothing.
    OracleBundle same = augment_exclude(bundle, {1});
    CHECK(scan_oracle(same).marked == scan_oracle(bundle).marked);
}

TEST_CASE("diffusion reflects about the uniform state") {
    // Builds the operator's matrix column by column with a local gate-by-gate
    // simulator (H applied densely, everything else as permutation+phase).
    DiophantineSystem sys = test::one_var("eq x = 1", 2);
    RegisterPlan plan = plan_registers(sys);
    Circuit d = synth_diffusion(plan);
    validate(d);

    // Build the matrix column by column with a small dense simulator over
    // the full plan width restricted to search-register inputs.
    uint32_t nw = plan.search_span().width;
    uint64_t dim = uint64_t(1) << nw;
    std::vector<std::vector<std::complex<double>>> cols(dim);
    for (uint64_t b = 0; b < dim; ++b) {
        std::vector<std::complex<double>> amp(uint64_t(1) << plan.total);
        amp[b] = 1.0;
        for (const Gate& g : d.gates) {
            if (g.kind == GateKind::H) {
                uint64_t bit = uint64_t(1) << g.target;
                double s = 1.0 / std::sqrt(2.0);
                for (uint64_t i = 0; i < amp.size(); ++i) {
                    if (i & bit) continue;
                    auto a0 = amp[i], a1 = amp[i | bit];
                    amp[i] = s * (a0 + a1);
                    amp[i | bit] = s * (a0 - a1);
                }
                continue;
            }
            CompiledCircuit one;
            Circuit tmp;
            tmp.qubit_count = d.qubit_count;
            tmp.add(g);
            one = compile_for_emulation(tmp);
            std::vector<std::complex<double>> next(amp.size());
            for (uint64_t i = 0; i < amp.size(); ++i) {
                if (amp[i] == std::complex<double>(0.0)) continue;
                int phase = 1;
                uint64_t j = run_compiled(one, i, phase);
                next[j] += double(phase) * amp[i];
            }
            amp.swap(next);
        }
        cols[b].assign(amp.begin(), amp.begin() + dim);
        // Nothing may leak off the search register.
        for (uint64_t i = dim; i < amp.size(); ++i) CHECK(std::abs(amp[i]) < 1e-12);
    }

    // Expect -(2|u><u| - I): diagonal 1 - 2/dim, off-diagonal -2/dim.
    double off = -2.0 / double(dim);
    for (uint64_t i = 0; i < dim; ++i)
        for (uint64_t j = 0; j < dim; ++j) {
            double want = (i == j) ? 1.0 + off : off;
            CHECK(std::abs(cols[j][i] - want) < 1e-9);
        }
}

TEST_CASE("synthesis is deterministic") {
    DiophantineSystem sys = test::three_quadrics();
    OracleBundle a = synth_grover_iteration(sys);
    OracleBundle b = synth_grover_iteration(sys);
    CHECK(serialize(a.iteration) == serialize(b.iteration));
    CHECK(serialize(a.oracle) == serialize(b.oracle));
}

TEST_CASE("oracle phase flip shows up only on solutions") {
    DiophantineSystem sys = test::one_var("eq x^2 = 4", 3);
    OracleBundle bundle = synth_grover_iteration(sys);
    CompiledCircuit cc = compile_for_emulation(bundle.oracle);
    for (uint64_t code = 0; code < 8; ++code) {
        Assignment x = unpack_assignment(bundle.plan, code);
        int phase = 1;
        uint64_t out = run_compiled(cc, code, phase);
        CHECK(out == code);
        CHECK(phase == (satisfies(sys, x) ? -1 : 1));
    }
}
