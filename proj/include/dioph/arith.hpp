#pragma once

#include <optional>

#include "dioph/circuit.hpp"
#include "dioph/encoding.hpp"

namespace dioph {

class synth_error : public std::runtime_error {
public:
    explicit synth_error(const std::string& what) : std::runtime_error(what) {}
};

/// One in-place addition target += (+/-) sign_extended(source) * 2^shift,
/// optionally under a single control qubit.
struct AccumulateSpec {
    Span source;
    Span target;
    uint32_t shift = 0;
    bool subtract = false;
    std::optional<uint32_t> control;
};

/// Ripple-carry adder, b <- (a + b + carry_in) mod 2^w, a and carry restored.
/// MAJ/UMA ladder with a single carry ancilla. The controlled form converts
/// exactly the gates that write into b to Toffolis; the carry ladder then
/// cancels on its own when the control is off.
Circuit synth_cdkm_add(Span a, Span b, uint32_t carry_in,
                       std::optional<uint32_t> controlled_by, uint32_t qubit_count);

/// Core emitters append onto an existing circuit sized to the plan.
void emit_cdkm(Circuit& c, const std::vector<uint32_t>& addend,
               const std::vector<uint32_t>& target, uint32_t carry,
               std::optional<uint32_t> control);

/// target += (+/-) sign_extended(source) * 2^shift. The addend is assembled
/// from the source qubits plus staged copies of the source sign bit; staging
/// and any subtract inversions are uncomputed in place.
void emit_shifted_accumulate(Circuit& c, const RegisterPlan& plan, const AccumulateSpec& spec);
Circuit synth_shifted_accumulate(const RegisterPlan& plan, const AccumulateSpec& spec);

/// accumulator += c * x, one shifted addition per set bit of |c|.
void emit_scalar_accumulate(Circuit& c, const RegisterPlan& plan, Span x, Int coeff);
Circuit synth_scalar_accumulate(const RegisterPlan& plan, Span x, Int coeff);

/// accumulator += a * x^2. Stage v is controlled by bit v of x through the
/// staging ancilla; the stage on the sign bit subtracts (weight -2^(w-1)),
/// folded with the coefficient sign.
void emit_square_accumulate(Circuit& c, const RegisterPlan& plan, Span x, Int coeff);
Circuit synth_square_accumulate(const RegisterPlan& plan, Span x, Int coeff);

/// accumulator += b * xi * xj for disjoint variable registers, controls taken
/// directly from xi.
void emit_cross_accumulate(Circuit& c, const RegisterPlan& plan, Span xi, Span xj, Int coeff);
Circuit synth_cross_accumulate(const RegisterPlan& plan, Span xi, Span xj, Int coeff);

/// Degree >= 3 monomial via compute / utilize / uncompute: partial products
/// cascade through the D registers, the coefficient-weighted product is added
/// into the accumulator, then the cascade is reversed.
void emit_monomial_product(Circuit& c, const RegisterPlan& plan, const Monomial& m);
Circuit synth_monomial_product(const RegisterPlan& plan, const Monomial& m);

/// Full evaluation operator U_f: |x>|0>_F -> |x>|f(x) mod 2^width>_F.
/// Constant term as an X layer, then monomials in canonical order.
Circuit synth_poly_eval(const Polynomial& f, const RegisterPlan& plan);

} // namespace dioph
