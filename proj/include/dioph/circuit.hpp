#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dioph/ints.hpp"
#include "dioph/poly.hpp"

namespace dioph {

enum class GateKind : uint8_t { X, H, Cnot, Toffoli, Mcx, Mcz };

struct Control {
    uint32_t qubit = 0;
    bool anti = false; // anti-control fires on |0>

    bool operator==(const Control& o) const { return qubit == o.qubit && anti == o.anti; }
};

/// Every gate has one target. Cnot/Toffoli carry 1/2 positive controls;
/// Mcx/Mcz carry >= 1 controls of either polarity.
struct Gate {
    GateKind kind = GateKind::X;
    uint32_t target = 0;
    std::vector<Control> controls;

    bool operator==(const Gate& o) const {
        return kind == o.kind && target == o.target && controls == o.controls;
    }
};

struct Section {
    std::string label; // whitespace-free
    size_t begin = 0;
    size_t end = 0; // exclusive
};

class circuit_error : public std::runtime_error {
public:
    explicit circuit_error(const std::string& what) : std::runtime_error(what) {}
};

/// Flat gate list plus a section partition. Sections always cover
/// [0, gates.size()) without gaps or overlap; unlabeled spans get "main".
struct Circuit {
    uint32_t qubit_count = 0;
    std::vector<Gate> gates;
    std::vector<Section> sections;

    void add(Gate g);
    void x(uint32_t t);
    void h(uint32_t t);
    void cnot(uint32_t c, uint32_t t);
    void toffoli(uint32_t c1, uint32_t c2, uint32_t t);
    void mcx(std::vector<Control> controls, uint32_t t);
    void mcz(std::vector<Control> controls, uint32_t t);

    /// Opens a section at the current gate index; closed by the next
    /// begin_section or automatically at the final gate.
    void begin_section(const std::string& label);
    /// Appends all of other's gates as one section named label.
    void append_as_section(const std::string& label, const Circuit& other);
    /// Appends other, keeping its section labels.
    void concat(const Circuit& other);

    /// Section view with gaps filled; empty sections dropped.
    std::vector<Section> resolved_sections() const;

    bool operator==(const Circuit& o) const {
        return qubit_count == o.qubit_count && gates == o.gates;
    }
};

/// Validates targets/controls in range, control lists well-formed
/// (no duplicates, target not a control), section partition sane.
void validate(const Circuit& c);

/// Reversed gate order. Every supported gate is self-inverse, so this is the
/// exact inverse. Sections are mirrored with labels preserved.
Circuit inverse(const Circuit& c);

using Bits = std::vector<uint8_t>; // one 0/1 entry per qubit

/// Applies the permutation part of the circuit to a classical basis state.
/// Throws circuit_error on H or Mcz gates.
Bits emulate_classical(const Circuit& c, const Bits& input);

/// Per-kind gate totals. Mcx/Mcz are histogrammed by control count.
struct CensusCounts {
    uint64_t x = 0, h = 0, cnot = 0, toffoli = 0;
    std::map<uint32_t, uint64_t> mcx_by_controls;
    std::map<uint32_t, uint64_t> mcz_by_controls;

    uint64_t total() const;
    CensusCounts& operator+=(const CensusCounts& o);
    bool operator==(const CensusCounts& o) const;
};

struct Census {
    CensusCounts total;
    std::vector<std::pair<std::string, CensusCounts>> sections; // in section order
};

Census gate_census(const Circuit& c);

/// Text form:
///   qubits N
///   section <label> <begin> <end>
///   X t | H t | CNOT c t | CCX c1 c2 t | MCX [+|-]c ... t | MCZ [+|-]c ... t
std::string serialize(const Circuit& c);
Circuit deserialize(const std::string& text);

// --- fast classical emulation over <= 64 qubits ---

/// Circuit compiled to mask triples for basis-state emulation.
/// Phase gates (Mcz) are kept symbolically; H is rejected.
struct CompiledCircuit {
    struct Step {
        uint64_t ctrl_mask = 0;  // which bits must match
        uint64_t ctrl_value = 0; // expected pattern (anti-controls expect 0)
        uint64_t flip = 0;       // target bit for X-like gates, 0 for Mcz
        uint64_t phase_bit = 0;  // target bit for Mcz, 0 otherwise
    };
    uint32_t qubit_count = 0;
    std::vector<Step> steps;
};

CompiledCircuit compile_for_emulation(const Circuit& c);

/// Runs the compiled circuit on a basis state. Returns the output state and
/// multiplies phase by -1 for every Mcz whose condition held.
uint64_t run_compiled(const CompiledCircuit& cc, uint64_t state, int& phase);

} // namespace dioph
