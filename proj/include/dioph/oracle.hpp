#pragma once

#include "dioph/arith.hpp"

namespace dioph {

/// Counter increment conditioned on accumulator >= 0 (sign bit clear).
/// Ripple of multi-controlled X gates from the counter's top bit down, so
/// every bit sees its ripple condition before lower bits change.
Circuit synth_ineq_check(const RegisterPlan& plan);
void emit_ineq_check(Circuit& c, const RegisterPlan& plan);

/// Satisfaction tally for one equation: counter += 1 + [f(x) == 0], built as
/// two inequality checks, f >= 0 and -f >= 0, each evaluated and uncomputed.
Circuit synth_constraint_pair(const Polynomial& f, const RegisterPlan& plan,
                              const std::string& label_prefix = "eq");

/// Phase oracle: tallies all equations, flips the phase of states whose
/// counter reads 2m (all constraints satisfied twice), then untallies.
/// Excluded search-register patterns are knocked out of the marked set by
/// paired counter kicks around the phase gate.
Circuit synth_oracle(const DiophantineSystem& sys, const RegisterPlan& plan,
                     const std::vector<uint64_t>& excluded = {});

/// Reflection about the uniform superposition over the search register,
/// up to a global phase.
Circuit synth_diffusion(const RegisterPlan& plan);

struct OracleBundle {
    DiophantineSystem system;
    RegisterPlan plan;
    std::vector<uint64_t> excluded; // packed search-register codes, sorted
    Circuit oracle;
    Circuit diffusion;
    Circuit iteration; // oracle followed by diffusion
};

OracleBundle synth_grover_iteration(const DiophantineSystem& sys,
                                    const std::vector<uint64_t>& excluded = {});

/// New bundle whose oracle no longer marks the given assignment.
OracleBundle augment_exclude(const OracleBundle& bundle, const Assignment& x);

/// Classical scan of the oracle over every search-register basis state.
struct OracleScan {
    std::vector<uint64_t> marked;       // codes with phase -1, ascending
    bool garbage_free = true;           // every run returned non-search qubits to 0
    uint64_t first_bad_input = 0;       // valid when !garbage_free
};

/// Emulates the synthesized oracle on all 2^(n*w) basis states.
/// Requires plan.total <= 64.
OracleScan scan_oracle(const OracleBundle& bundle);

} // namespace dioph
