#include "dioph/encoding.hpp"

#include <algorithm>

namespace dioph {

std::string encode_twos_complement(Int value, uint32_t width) {
    if (width < 1 || width > 63)
        throw domain_error("encoding width out of range");
    Int lo = -(Int(1) << (width - 1));
    Int hi = (Int(1) << (width - 1)) - 1;
    if (value < lo || value > hi)
        throw domain_error("value " + std::to_string(value) + " does not fit in " +
                           std::to_string(width) + " bits");
    uint64_t u = static_cast<uint64_t>(value) & ((uint64_t(1) << width) - 1);
    std::string bits(width, '0');
    for (uint32_t i = 0; i < width; ++i)
        if ((u >> i) & 1) bits[width - 1 - i] = '1';
    return bits;
}

Int decode_twos_complement(const std::string& bits) {
    uint32_t width = static_cast<uint32_t>(bits.size());
    if (width < 1 || width > 63)
        throw domain_error("encoding width out of range");
    uint64_t u = 0;
    for (uint32_t i = 0; i < width; ++i) {
        char c = bits[width - 1 - i];
        if (c != '0' && c != '1')
            throw domain_error("bitstring contains a character other than 0/1");
        if (c == '1') u |= uint64_t(1) << i;
    }
    if ((u >> (width - 1)) & 1)
        return static_cast<Int>(u) - (Int(1) << width);
    return static_cast<Int>(u);
}

namespace {

/// Largest |f_j(x)| bound over the domain: sum_t |c_t| * N^{deg t}.
Wide magnitude_bound(const Polynomial& eq, uint32_t bits) {
    Wide n_value = Wide(1) << bits;
    Wide sum = 0;
    for (const auto& t : eq.terms)
        sum = wide_add(sum, wide_mul(wide_abs(t.coeff), wide_pow(n_value, t.degree())));
    return sum;
}

/// Set bit positions of |c|, ascending.
std::vector<uint32_t> coeff_bit_positions(Int coeff) {
    std::vector<uint32_t> out;
    uint64_t mag = static_cast<uint64_t>(coeff < 0 ? -coeff : coeff);
    for (uint32_t p = 0; mag >> p; ++p)
        if ((mag >> p) & 1) out.push_back(p);
    return out;
}

/// Widest sign-extension staging any shifted addition in this system needs.
/// Mirrors the decomposition the synthesizer emits: degree-1 and degree-2
/// terms add a w-bit variable into F at shift v+p; degree >= 3 cascades add
/// D_(l-1) into D_l at shift v, then D_(k-1) into F at shift v+p.
uint32_t sign_extension_need(const DiophantineSystem& sys, uint32_t acc_width) {
    uint32_t w = sys.bits;
    uint32_t need = 0;
    auto consider = [&](uint32_t target_w, uint32_t shift, uint32_t src_w) {
        if (target_w >= shift + src_w)
            need = std::max(need, target_w - shift - src_w);
    };
    for (const auto& eq : sys.equations) {
        for (const auto& t : eq.terms) {
            uint32_t k = t.degree();
            if (k == 0) continue;
            auto positions = coeff_bit_positions(t.coeff);
            if (k <= 2) {
                for (uint32_t p : positions) consider(acc_width, p, w);
            } else {
                consider(uint32_t(2) * w, 0, w); // first cascade stage
                for (uint32_t l = 3; l < k; ++l) consider(l * w, 0, (l - 1) * w);
                for (uint32_t p : positions) consider(acc_width, p, (k - 1) * w);
            }
        }
    }
    return need;
}

} // namespace

RegisterPlan plan_registers(const DiophantineSystem& sys) {
    validate(sys);
    RegisterPlan plan;
    plan.var_count = sys.var_count();
    plan.bits = sys.bits;

    uint32_t cursor = 0;
    for (uint32_t i = 0; i < plan.var_count; ++i) {
        plan.vars.push_back(Span{cursor, plan.bits});
        cursor += plan.bits;
    }

    Wide worst = 1;
    for (const auto& eq : sys.equations)
        worst = std::max(worst, magnitude_bound(eq, sys.bits));
    uint32_t acc_width = ceil_log2(worst) + 1; // +1 so -f never saturates the sign bit
    if (acc_width < 2) acc_width = 2;
    plan.accumulator = Span{cursor, acc_width};
    cursor += acc_width;

    uint32_t degree = sys.degree();
    if (degree >= 3) {
        for (uint32_t l = 2; l <= degree - 1; ++l) {
            plan.products.push_back(Span{cursor, l * plan.bits});
            cursor += l * plan.bits;
        }
    }

    uint32_t m = sys.equation_count();
    uint32_t counter_width = ceil_log2(Wide(2) * m + 1);
    plan.counter = Span{cursor, counter_width};
    cursor += counter_width;
    plan.main_end = cursor;

    plan.carry = cursor++;
    plan.square_anc = cursor++;
    uint32_t ext = sign_extension_need(sys, acc_width);
    plan.sign_ext = Span{cursor, ext};
    cursor += ext;
    // Counter increments are the widest multi-controlled writes the oracle
    // emits outside the symbolic phase gates; provision their ladder scratch.
    uint32_t scratch = counter_width > 2 ? counter_width - 2 : 0;
    plan.mcx_scratch = Span{cursor, scratch};
    cursor += scratch;

    plan.total = cursor;
    return plan;
}

uint32_t total_qubits(const RegisterPlan& plan) { return plan.total; }

uint64_t pack_assignment(const RegisterPlan& plan, const Assignment& x) {
    if (x.size() != plan.var_count)
        throw domain_error("assignment arity mismatch");
    uint64_t code = 0;
    uint64_t mask = (uint64_t(1) << plan.bits) - 1;
    for (uint32_t i = 0; i < plan.var_count; ++i) {
        Int lo = -(Int(1) << (plan.bits - 1));
        Int hi = (Int(1) << (plan.bits - 1)) - 1;
        if (x[i] < lo || x[i] > hi)
            throw domain_error("assignment value out of domain");
        uint64_t u = static_cast<uint64_t>(x[i]) & mask;
        code |= u << plan.vars[i].offset;
    }
    return code;
}

Assignment unpack_assignment(const RegisterPlan& plan, uint64_t code) {
    Assignment x(plan.var_count);
    uint64_t mask = (uint64_t(1) << plan.bits) - 1;
    for (uint32_t i = 0; i < plan.var_count; ++i) {
        uint64_t u = (code >> plan.vars[i].offset) & mask;
        if ((u >> (plan.bits - 1)) & 1)
            x[i] = static_cast<Int>(u) - (Int(1) << plan.bits);
        else
            x[i] = static_cast<Int>(u);
    }
    return x;
}

ClassicalCostEstimate classical_cost_estimate(const DiophantineSystem& sys) {
    ClassicalCostEstimate est;
    est.register_width = total_qubits(plan_registers(sys));
    Wide q = est.register_width;
    est.cost_order = wide_mul(wide_mul(q, q), static_cast<Wide>(lambda_penalty(sys)));
    return est;
}

} // namespace dioph
