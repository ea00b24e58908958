#include <doctest.h>

#include <algorithm>

#include "dioph/circuit.hpp"
#include "dioph/rng.hpp"

using namespace dioph;

namespace {

Bits bits_of(uint64_t code, uint32_t n) {
    Bits b(n, 0);
    for (uint32_t i = 0; i < n; ++i) b[i] = (code >> i) & 1;
    return b;
}

uint64_t code_of(const Bits& b) {
    uint64_t code = 0;
    for (uint32_t i = 0; i < b.size(); ++i)
        if (b[i]) code |= uint64_t(1) << i;
    return code;
}

/// Random X/CNOT/Toffoli/MCX circuit. Phase-free so both emulators apply.
Circuit random_permutation_circuit(std::mt19937_64& rng, uint32_t qubits, uint32_t gates) {
    Circuit c;
    c.qubit_count = qubits;
    for (uint32_t g = 0; g < gates; ++g) {
        uint32_t t = static_cast<uint32_t>(uniform_below(rng, qubits));
        switch (uniform_below(rng, 4)) {
        case 0:
            c.x(t);
            break;
        case 1: {
            uint32_t a = static_cast<uint32_t>(uniform_below(rng, qubits));
            if (a == t) a = (a + 1) % qubits;
            c.cnot(a, t);
            break;
        }
        case 2: {
            uint32_t a = static_cast<uint32_t>(uniform_below(rng, qubits));
            uint32_t b = static_cast<uint32_t>(uniform_below(rng, qubits));
            if (a == t) a = (a + 1) % qubits;
            if (b == t || b == a) b = (std::max(a, t) + 1) % qubits;
            if (b == t || b == a) break;
            c.toffoli(a, b, t);
            break;
        }
        default: {
            std::vector<Control> ctrls;
            uint32_t want = 1 + static_cast<uint32_t>(uniform_below(rng, 3));
            for (uint32_t q = 0; q < qubits && ctrls.size() < want; ++q) {
                if (q == t) continue;
                if (uniform_below(rng, 2)) ctrls.push_back({q, uniform_below(rng, 2) == 0});
            }
            if (ctrls.empty()) ctrls.push_back({(t + 1) % qubits, false});
            c.mcx(std::move(ctrls), t);
            break;
        }
        }
    }
    return c;
}

} // namespace

TEST_CASE("gate validation rejects malformed circuits") {
    Circuit c;
    c.qubit_count = 3;
    c.cnot(0, 1);
    validate(c);

    Circuit dup = c;
    dup.mcx({{0, false}, {0, true}}, 2);
    CHECK_THROWS_AS(validate(dup), circuit_error);

    Circuit self_ctl = c;
    self_ctl.mcx({{2, false}}, 2);
    CHECK_THROWS_AS(validate(self_ctl), circuit_error);

    Circuit range = c;
    range.x(3);
    CHECK_THROWS_AS(validate(range), circuit_error);

    Circuit ctl_range = c;
    ctl_range.cnot(7, 0);
    CHECK_THROWS_AS(validate(ctl_range), circuit_error);

    Circuit empty_mcx = c;
    empty_mcx.mcx({}, 0);
    CHECK_THROWS_AS(validate(empty_mcx), circuit_error);

    Circuit anti_cnot = c;
    anti_cnot.add(Gate{GateKind::Cnot, 1, {Control{0, true}}});
    CHECK_THROWS_AS(validate(anti_cnot), circuit_error);
}

TEST_CASE("classical emulation applies controls and anti-controls") {
    Circuit c;
    c.qubit_count = 4;
    c.x(0);                              // 0001
    c.cnot(0, 1);                        // 0011
    c.toffoli(0, 1, 2);                  // 0111
    c.mcx({{3, true}, {2, false}}, 0);   // anti on empty bit 3 fires: 0110
    Bits out = emulate_classical(c, bits_of(0, 4));
    CHECK(code_of(out) == 0b0110);

    // Anti-control does not fire once the qubit is set.
    Circuit c2;
    c2.qubit_count = 2;
    c2.x(0);
    c2.mcx({{0, true}}, 1);
    CHECK(code_of(emulate_classical(c2, bits_of(0, 2))) == 0b01);

    Circuit h;
    h.qubit_count = 1;
    h.h(0);
    CHECK_THROWS_AS(emulate_classical(h, bits_of(0, 1)), circuit_error);

    CHECK_THROWS_AS(emulate_classical(c, bits_of(0, 3)), circuit_error);
}

TEST_CASE("inverse reverses a circuit exactly") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        Circuit c = random_permutation_circuit(rng, 6, 40);
        Circuit inv = inverse(c);
        CHECK(inverse(inv) == c);
        for (uint64_t s = 0; s < 64; s += 7) {
            Bits mid = emulate_classical(c, bits_of(s, 6));
            Bits back = emulate_classical(inv, mid);
            CHECK(code_of(back) == s);
        }
    }
}

TEST_CASE("sections partition the gate list") {
    Circuit c;
    c.qubit_count = 2;
    c.x(0);
    c.begin_section("middle");
    c.cnot(0, 1);
    c.x(1);
    c.begin_section("tail");
    c.x(0);
    auto secs = c.resolved_sections();
    REQUIRE(secs.size() == 3);
    CHECK(secs[0].label == "main");
    CHECK(secs[0].begin == 0);
    CHECK(secs[0].end == 1);
    CHECK(secs[1].label == "middle");
    CHECK(secs[1].end == 3);
    CHECK(secs[2].label == "tail");
    CHECK(secs[2].end == 4);

    Circuit other;
    other.qubit_count = 2;
    other.x(1);
    c.append_as_section("extra", other);
    CHECK(c.gates.size() == 5);
    CHECK(c.resolved_sections().back().label == "extra");

    // Inverse mirrors the section order.
    auto mirrored = inverse(c).resolved_sections();
    CHECK(mirrored.front().label == "extra");
    CHECK(mirrored.back().label == "main");
}

TEST_CASE("census counts per section sum to the total") {
    Circuit c;
    c.qubit_count = 5;
    c.begin_section("a");
    c.x(0);
    c.h(1);
    c.cnot(0, 1);
    c.begin_section("b");
    c.toffoli(0, 1, 2);
    c.mcx({{0, false}, {1, false}, {2, true}}, 3);
    c.mcz({{0, false}}, 4);
    Census census = gate_census(c);
    CHECK(census.total.x == 1);
    CHECK(census.total.h == 1);
    CHECK(census.total.cnot == 1);
    CHECK(census.total.toffoli == 1);
    CHECK(census.total.mcx_by_controls.at(3) == 1);
    CHECK(census.total.mcz_by_controls.at(1) == 1);
    CHECK(census.total.total() == 6);
    REQUIRE(census.sections.size() == 2);
    CensusCounts sum;
    for (const auto& [label, counts] : census.sections) sum += counts;
    CHECK(sum == census.total);
}

TEST_CASE("serialization round-trips byte for byte") {
    std::mt19937_64 rng(17);
    Circuit c = random_permutation_circuit(rng, 7, 50);
    c.begin_section("coda");
    c.mcz({{0, false}, {3, true}}, 6);
    c.h(2);
    std::string text = serialize(c);
    Circuit back = deserialize(text);
    CHECK(back == c);
    CHECK(back.resolved_sections().size() == c.resolved_sections().size());
    CHECK(serialize(back) == text);
}

TEST_CASE("deserialization rejects malformed text") {
    CHECK_THROWS_AS(deserialize(""), circuit_error);
    CHECK_THROWS_AS(deserialize("qubits 2\nFOO 0\n"), circuit_error);
    CHECK_THROWS_AS(deserialize("qubits 2\nCNOT 0\n"), circuit_error);
    CHECK_THROWS_AS(deserialize("qubits 2\nX 5\n"), circuit_error);
    CHECK_THROWS_AS(deserialize("X 0\n"), circuit_error); // header missing
}

TEST_CASE("compiled emulation matches the reference emulator") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        uint32_t qubits = 3 + static_cast<uint32_t>(uniform_below(rng, 10));
        Circuit c = random_permutation_circuit(rng, qubits, 60);
        CompiledCircuit cc = compile_for_emulation(c);
        for (int probe = 0; probe < 50; ++probe) {
            uint64_t s = uniform_below(rng, uint64_t(1) << qubits);
            int phase = 1;
            uint64_t fast = run_compiled(cc, s, phase);
            CHECK(phase == 1);
            CHECK(fast == code_of(emulate_classical(c, bits_of(s, qubits))));
        }
    }
}

TEST_CASE("compiled emulation tracks symbolic phase flips") {
    Circuit c;
    c.qubit_count = 2;
    c.x(0);
    c.mcz({{0, false}}, 1); // fires iff bit0 set and bit1 set
    CompiledCircuit cc = compile_for_emulation(c);

    int phase = 1;
    uint64_t out = run_compiled(cc, 0b10, phase);
    CHECK(out == 0b11);
    CHECK(phase == -1);

    phase = 1;
    out = run_compiled(cc, 0b00, phase);
    CHECK(out == 0b01);
    CHECK(phase == 1);

    Circuit h;
    h.qubit_count = 1;
    h.h(0);
    CHECK_THROWS_AS(compile_for_emulation(h), circuit_error);
}

TEST_CASE("phase-free circuits permute the basis") {
    std::mt19937_64 rng(31);
    Circuit c = random_permutation_circuit(rng, 10, 80);
    CompiledCircuit cc = compile_for_emulation(c);
    std::vector<uint8_t> hit(1u << 10, 0);
    for (uint64_t s = 0; s < (1u << 10); ++s) {
        int phase = 1;
        uint64_t out = run_compiled(cc, s, phase);
        REQUIRE(out < (1u << 10));
        ++hit[out];
    }
    for (uint64_t s = 0; s < (1u << 10); ++s) CHECK(hit[s] == 1);
}
