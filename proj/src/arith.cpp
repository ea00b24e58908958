#include "dioph/arith.hpp"

#include <algorithm>

namespace dioph {

namespace {

std::vector<uint32_t> span_qubits(Span s) {
    std::vector<uint32_t> out(s.width);
    for (uint32_t i = 0; i < s.width; ++i) out[i] = s.offset + i;
    return out;
}

std::vector<uint32_t> coeff_bits(Int coeff) {
    std::vector<uint32_t> out;
    uint64_t mag = static_cast<uint64_t>(coeff < 0 ? -coeff : coeff);
    for (uint32_t p = 0; mag >> p; ++p)
        if ((mag >> p) & 1) out.push_back(p);
    return out;
}

void emit_cnot_or_toffoli(Circuit& c, std::optional<uint32_t> ctl, uint32_t from, uint32_t to) {
    if (ctl)
        c.toffoli(*ctl, from, to);
    else
        c.cnot(from, to);
}

} // namespace

void emit_cdkm(Circuit& c, const std::vector<uint32_t>& addend,
               const std::vector<uint32_t>& target, uint32_t carry,
               std::optional<uint32_t> control) {
    if (addend.size() != target.size())
        throw synth_error("adder operands must have equal width");
    if (addend.empty())
        throw synth_error("adder operands are empty");
    size_t k = addend.size();
    // MAJ ladder; after stage i the addend qubit i holds the carry into i+1.
    for (size_t i = 0; i < k; ++i) {
        uint32_t prev = i == 0 ? carry : addend[i - 1];
        emit_cnot_or_toffoli(c, control, addend[i], target[i]);
        c.cnot(addend[i], prev);
        c.toffoli(prev, target[i], addend[i]);
    }
    // UMA ladder restores carries and writes the sum bits.
    for (size_t i = k; i-- > 0;) {
        uint32_t prev = i == 0 ? carry : addend[i - 1];
        c.toffoli(prev, target[i], addend[i]);
        c.cnot(addend[i], prev);
        emit_cnot_or_toffoli(c, control, prev, target[i]);
    }
}

Circuit synth_cdkm_add(Span a, Span b, uint32_t carry_in,
                       std::optional<uint32_t> controlled_by, uint32_t qubit_count) {
    if (a.width != b.width)
        throw synth_error("adder operands must have equal width");
    Circuit c;
    c.qubit_count = qubit_count;
    emit_cdkm(c, span_qubits(a), span_qubits(b), carry_in, controlled_by);
    validate(c);
    return c;
}

void emit_shifted_accumulate(Circuit& c, const RegisterPlan& plan, const AccumulateSpec& spec) {
    uint32_t src_w = spec.source.width;
    if (spec.target.width < spec.shift + src_w)
        throw synth_error("shift plus source width exceeds target width");
    uint32_t ext = spec.target.width - spec.shift - src_w;
    if (ext > plan.sign_ext.width)
        throw synth_error("sign-extension staging too narrow for this addition");
    if (spec.control) {
        uint32_t q = *spec.control;
        if (spec.source.contains(q) || spec.target.contains(q))
            throw synth_error("accumulate control overlaps an operand");
    }

    std::vector<uint32_t> addend = span_qubits(spec.source);
    uint32_t msb = spec.source.offset + src_w - 1;
    for (uint32_t i = 0; i < ext; ++i) addend.push_back(plan.sign_ext.qubit(i));

    std::vector<uint32_t> window;
    for (uint32_t i = spec.shift; i < spec.target.width; ++i)
        window.push_back(spec.target.qubit(i));

    // Stage the sign copies; bits below the shift contribute only a carry of
    // (subtract ? 1 : 0) into the window, realized through the carry ancilla.
    for (uint32_t i = 0; i < ext; ++i) c.cnot(msb, plan.sign_ext.qubit(i));
    if (spec.subtract) {
        for (uint32_t q : addend) c.x(q);
        c.x(plan.carry);
    }
    emit_cdkm(c, addend, window, plan.carry, spec.control);
    if (spec.subtract) {
        c.x(plan.carry);
        for (uint32_t q : addend) c.x(q);
    }
    for (uint32_t i = 0; i < ext; ++i) c.cnot(msb, plan.sign_ext.qubit(i));
}

Circuit synth_shifted_accumulate(const RegisterPlan& plan, const AccumulateSpec& spec) {
    Circuit c;
    c.qubit_count = plan.total;
    emit_shifted_accumulate(c, plan, spec);
    validate(c);
    return c;
}

void emit_scalar_accumulate(Circuit& c, const RegisterPlan& plan, Span x, Int coeff) {
    if (coeff == 0) throw synth_error("zero coefficient");
    for (uint32_t p : coeff_bits(coeff)) {
        AccumulateSpec spec;
        spec.source = x;
        spec.target = plan.accumulator;
        spec.shift = p;
        spec.subtract = coeff < 0;
        emit_shifted_accumulate(c, plan, spec);
    }
}

Circuit synth_scalar_accumulate(const RegisterPlan& plan, Span x, Int coeff) {
    Circuit c;
    c.qubit_count = plan.total;
    emit_scalar_accumulate(c, plan, x, coeff);
    validate(c);
    return c;
}

void emit_square_accumulate(Circuit& c, const RegisterPlan& plan, Span x, Int coeff) {
    if (coeff == 0) throw synth_error("zero coefficient");
    uint32_t w = x.width;
    auto bits = coeff_bits(coeff);
    for (uint32_t v = 0; v < w; ++v) {
        // The control bit lives inside the operand register, so its value is
        // staged on the ancilla for the duration of the stage.
        c.cnot(x.qubit(v), plan.square_anc);
        bool sign_stage = v == w - 1;
        for (uint32_t p : bits) {
            AccumulateSpec spec;
            spec.source = x;
            spec.target = plan.accumulator;
            spec.shift = v + p;
            spec.subtract = sign_stage != (coeff < 0);
            spec.control = plan.square_anc;
            emit_shifted_accumulate(c, plan, spec);
        }
        c.cnot(x.qubit(v), plan.square_anc);
    }
}

Circuit synth_square_accumulate(const RegisterPlan& plan, Span x, Int coeff) {
    Circuit c;
    c.qubit_count = plan.total;
    emit_square_accumulate(c, plan, x, coeff);
    validate(c);
    return c;
}

void emit_cross_accumulate(Circuit& c, const RegisterPlan& plan, Span xi, Span xj, Int coeff) {
    if (coeff == 0) throw synth_error("zero coefficient");
    if (xi.offset == xj.offset) throw synth_error("cross product needs distinct registers");
    uint32_t w = xi.width;
    auto bits = coeff_bits(coeff);
    for (uint32_t v = 0; v < w; ++v) {
        bool sign_stage = v == w - 1;
        for (uint32_t p : bits) {
            AccumulateSpec spec;
            spec.source = xj;
            spec.target = plan.accumulator;
            spec.shift = v + p;
            spec.subtract = sign_stage != (coeff < 0);
            spec.control = xi.qubit(v);
            emit_shifted_accumulate(c, plan, spec);
        }
    }
}

Circuit synth_cross_accumulate(const RegisterPlan& plan, Span xi, Span xj, Int coeff) {
    Circuit c;
    c.qubit_count = plan.total;
    emit_cross_accumulate(c, plan, xi, xj, coeff);
    validate(c);
    return c;
}

namespace {

/// One cascade stage target += signed(source) * signed_bit_expansion(ctl_reg):
/// w controlled shifted additions, subtracting on the control's sign bit.
/// When the control register IS the source (self-product), controls are
/// staged through the ancilla.
void emit_product_stage(Circuit& c, const RegisterPlan& plan, Span ctl_reg, Span source,
                        Span target) {
    uint32_t w = ctl_reg.width;
    bool mediated = ctl_reg.offset == source.offset;
    for (uint32_t v = 0; v < w; ++v) {
        uint32_t control = ctl_reg.qubit(v);
        if (mediated) {
            c.cnot(control, plan.square_anc);
            control = plan.square_anc;
        }
        AccumulateSpec spec;
        spec.source = source;
        spec.target = target;
        spec.shift = v;
        spec.subtract = v == w - 1;
        spec.control = control;
        emit_shifted_accumulate(c, plan, spec);
        if (mediated) c.cnot(ctl_reg.qubit(v), plan.square_anc);
    }
}

} // namespace

void emit_monomial_product(Circuit& c, const RegisterPlan& plan, const Monomial& m) {
    uint32_t k = m.degree();
    if (k < 3) throw synth_error("product cascade is for degree >= 3 monomials");
    // Expand the exponent vector into a factor list, repeated per multiplicity.
    std::vector<Span> factors;
    for (uint32_t i = 0; i < m.exponents.size(); ++i)
        for (uint32_t e = 0; e < m.exponents[i]; ++e) factors.push_back(plan.var_span(i));

    Circuit compute;
    compute.qubit_count = plan.total;
    emit_product_stage(compute, plan, factors[1], factors[0], plan.product_span(2));
    for (uint32_t l = 3; l < k; ++l)
        emit_product_stage(compute, plan, factors[l - 1], plan.product_span(l - 1),
                           plan.product_span(l));

    c.gates.insert(c.gates.end(), compute.gates.begin(), compute.gates.end());

    // Utilize: accumulator += coeff * D_(k-1) * last factor.
    Span last = factors[k - 1];
    Span product = plan.product_span(k - 1);
    auto bits = coeff_bits(m.coeff);
    for (uint32_t v = 0; v < last.width; ++v) {
        bool sign_stage = v == last.width - 1;
        for (uint32_t p : bits) {
            AccumulateSpec spec;
            spec.source = product;
            spec.target = plan.accumulator;
            spec.shift = v + p;
            spec.subtract = sign_stage != (m.coeff < 0);
            spec.control = last.qubit(v);
            emit_shifted_accumulate(c, plan, spec);
        }
    }

    Circuit un = inverse(compute);
    c.gates.insert(c.gates.end(), un.gates.begin(), un.gates.end());
}

Circuit synth_monomial_product(const RegisterPlan& plan, const Monomial& m) {
    Circuit c;
    c.qubit_count = plan.total;
    emit_monomial_product(c, plan, m);
    validate(c);
    return c;
}

Circuit synth_poly_eval(const Polynomial& f, const RegisterPlan& plan) {
    Circuit c;
    c.qubit_count = plan.total;
    Int constant = f.constant_term();
    if (constant != 0) {
        std::string bits = encode_twos_complement(constant, plan.accumulator.width);
        for (uint32_t i = 0; i < plan.accumulator.width; ++i)
            if (bits[plan.accumulator.width - 1 - i] == '1') c.x(plan.accumulator.qubit(i));
    }
    for (const auto& t : f.terms) {
        uint32_t k = t.degree();
        if (k == 0) continue;
        if (k == 1) {
            for (uint32_t i = 0; i < t.exponents.size(); ++i)
                if (t.exponents[i] == 1)
                    emit_scalar_accumulate(c, plan, plan.var_span(i), t.coeff);
        } else if (k == 2) {
            int first = -1, second = -1;
            for (uint32_t i = 0; i < t.exponents.size(); ++i) {
                if (t.exponents[i] == 0) continue;
                if (first < 0)
                    first = static_cast<int>(i);
                else
                    second = static_cast<int>(i);
            }
            if (second < 0)
                emit_square_accumulate(c, plan, plan.var_span(uint32_t(first)), t.coeff);
            else
                emit_cross_accumulate(c, plan, plan.var_span(uint32_t(first)),
                                      plan.var_span(uint32_t(second)), t.coeff);
        } else {
            emit_monomial_product(c, plan, t);
        }
    }
    validate(c);
    return c;
}

} // namespace dioph
