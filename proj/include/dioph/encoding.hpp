#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dioph/poly.hpp"

namespace dioph {

/// Contiguous block of qubits [offset, offset + width).
struct Span {
    uint32_t offset = 0;
    uint32_t width = 0;

    uint32_t end() const { return offset + width; }
    uint32_t qubit(uint32_t i) const { return offset + i; }
    bool contains(uint32_t q) const { return q >= offset && q < end(); }
    bool operator==(const Span& o) const { return offset == o.offset && width == o.width; }
};

/// MSB-first two's complement bitstring of length width.
/// Throws domain_error when the value does not fit.
std::string encode_twos_complement(Int value, uint32_t width);

/// Inverse of encode_twos_complement.
Int decode_twos_complement(const std::string& bits);

/// Qubit layout for one system. Little-endian within every span (bit 0 of a
/// register = lowest qubit index). Main registers tile [0, main_end);
/// recycled ancillas occupy [main_end, total).
struct RegisterPlan {
    uint32_t var_count = 0;
    uint32_t bits = 0;          // w, per-variable width
    std::vector<Span> vars;     // search register S, one span per variable
    Span accumulator;           // F, polynomial value register
    std::vector<Span> products; // D_l for degrees 2..d-1; products[i] has width (i+2)*w
    Span counter;               // R, satisfied-constraint counter
    uint32_t carry = 0;         // adder carry-in ancilla
    uint32_t square_anc = 0;    // control staging ancilla for self-products
    Span sign_ext;              // sign-extension staging for shifted addends
    Span mcx_scratch;           // decomposition scratch for counter-increment gates
    uint32_t main_end = 0;      // end of the S|F|D|R block
    uint32_t total = 0;

    Span var_span(uint32_t i) const { return vars.at(i); }
    /// Span of D_degree (degree in [2, d-1]).
    Span product_span(uint32_t degree) const { return products.at(degree - 2); }
    Span search_span() const { return Span{0, var_count * bits}; }
};

/// Builds the register plan for a validated system.
/// Accumulator width = ceil(log2(max_j sum_a |c_a| N^{deg a})) + 1 headroom,
/// counter width = ceil(log2(2m + 1)).
RegisterPlan plan_registers(const DiophantineSystem& sys);

uint32_t total_qubits(const RegisterPlan& plan);

/// Packs an assignment into the search register, little-endian per variable.
/// Bit k of the result = qubit k of the plan's search span.
uint64_t pack_assignment(const RegisterPlan& plan, const Assignment& x);

/// Inverse of pack_assignment.
Assignment unpack_assignment(const RegisterPlan& plan, uint64_t code);

} // namespace dioph
