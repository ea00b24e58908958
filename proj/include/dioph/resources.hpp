#pragma once

#include <numeric>

#include "dioph/oracle.hpp"

namespace dioph {

/// Exact rational for Toffoli-equivalent totals (T pairs contribute 1/7).
struct Ratio {
    long long num = 0;
    long long den = 1;

    Ratio() = default;
    Ratio(long long n) : num(n), den(1) {}
    Ratio(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    Ratio operator+(const Ratio& o) const { return Ratio(num * o.den + o.num * den, den * o.den); }
    Ratio& operator+=(const Ratio& o) { return *this = *this + o; }
    bool operator==(const Ratio& o) const { return num == o.num && den == o.den; }
    bool is_integer() const { return den == 1; }
    double to_double() const { return double(num) / double(den); }
    std::string to_string() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

/// Toffoli-equivalent cost of one multi-controlled X (or Z) by control count:
/// 0 below two controls, 1 at two, 2n-3 above.
uint64_t mcx_cost(uint32_t controls);

/// (t + t_dagger) / 7 Toffoli equivalents.
Ratio t_rotation_cost(uint64_t t_count, uint64_t t_dagger_count);

struct CostReport {
    uint64_t qubits = 0;
    uint64_t ccx_count = 0;                       // plain two-control Toffolis
    uint64_t t_count = 0, t_dagger_count = 0;     // always zero for this gate set
    std::map<uint32_t, uint64_t> mcx_histogram;   // MCX and MCZ merged, by control count
    Ratio toffoli_equiv;
    std::vector<std::pair<std::string, Ratio>> section_costs;
};

/// toffoli_equiv = sum mcx_cost(arity) + ccx + (t + t_dagger)/7.
/// Clifford gates (X, H, CNOT, single-control MCX) cost nothing.
CostReport toffoli_equiv_cost(const Circuit& c, uint64_t qubits = 0);

struct QubitModel {
    uint64_t search_term = 0;      // n * w
    uint64_t accumulator_term = 0; // ceil(log2 max_j sum |c| N^deg)
    uint64_t product_term = 0;     // sum of l*w for l in [2, d-1]
    uint64_t counter_term = 0;     // ceil(log2(2m+1))
    uint64_t ancilla_term = 0;     // headroom + carry + staging block
    uint64_t total = 0;
};

/// Closed-form width model, evaluated term by term from the system alone;
/// total always equals total_qubits(plan_registers(sys)).
QubitModel qubit_count_model(const DiophantineSystem& sys);

struct InstanceShape {
    uint32_t var_count = 1;
    uint32_t degree = 1;
    uint64_t n_value = 8; // domain modulus, power of two
    uint32_t equation_count = 1;
    Int coeff_min = 1;
    Int coeff_max = 15;
    uint32_t max_terms = 3; // non-constant monomials per equation
};

/// Deterministic random system with at least one monomial of degree exactly
/// `degree`; duplicate exponent vectors are redrawn, zero coefficients rerolled.
DiophantineSystem random_instance(const InstanceShape& shape, uint64_t seed);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);
LinearFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

struct SweepRow {
    uint64_t instance_id = 0;
    uint64_t seed = 0;
    uint32_t n = 0, d = 0;
    uint64_t n_value = 0;
    uint32_t m = 0;
    uint64_t lambda = 0;
    uint64_t sum_hamming = 0;
    uint64_t q_planned = 0;
    uint64_t q_model = 0;
    uint64_t ccx = 0;
    uint64_t mcx_toffoli_equiv = 0;
    Ratio total_toffoli_equiv;
    uint64_t hamming_stratum = 0; // linear sweeps: coefficient weight class
};

enum class SweepKind { General, Linear, Quadratic, QubitWidth };

struct SweepConfig {
    SweepKind kind = SweepKind::General;
    uint64_t count = 1500;
    uint64_t seed = 1;
    uint32_t max_vars = 7;
    uint32_t max_degree = 7;
    uint32_t min_bits = 2, max_bits = 6;
    uint32_t max_equations = 1; // the scaling family varies structure, not system size
    Int coeff_max = 15;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// General/Quadratic: log-log cost vs qubits. Linear: one fit per
    /// Hamming stratum keyed by weight. QubitWidth: q vs (n + d(d+1)/2) * w.
    LinearFit global_fit;
    std::map<uint64_t, LinearFit> stratum_fits;
};

SweepResult sweep_and_fit(const SweepConfig& config);

/// Header: instance_id,seed,n,d,N,m,lambda,sum_hamming,q_planned,q_model,ccx,
/// mcx_toffoli_equiv,total_toffoli_equiv
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

} // namespace dioph
