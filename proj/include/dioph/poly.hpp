#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dioph/ints.hpp"

namespace dioph {

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, size_t line, size_t column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line(line), column(column) {}
    size_t line;
    size_t column;
};

class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

class limit_error : public std::runtime_error {
public:
    explicit limit_error(const std::string& what) : std::runtime_error(what) {}
};

/// One term c * prod_i x_i^e_i. exponents has one entry per system variable.
struct Monomial {
    Int coeff = 0;
    std::vector<uint32_t> exponents;

    uint32_t degree() const {
        uint32_t d = 0;
        for (uint32_t e : exponents) d += e;
        return d;
    }
    bool is_constant() const { return degree() == 0; }
};

/// Multivariate integer polynomial in canonical form: terms sorted by
/// (degree, exponent vector), no duplicate exponent vectors, no zero
/// coefficients. The constant term, when present, is terms.front().
struct Polynomial {
    uint32_t var_count = 0;
    std::vector<Monomial> terms;

    uint32_t degree() const;
    Int constant_term() const;
    bool operator==(const Polynomial& other) const;
};

/// Sorts, merges duplicate exponent vectors, drops zero coefficients.
Polynomial canonicalize(uint32_t var_count, std::vector<Monomial> terms);

/// Polynomial with every coefficient negated.
Polynomial negate(const Polynomial& p);

using Assignment = std::vector<Int>;

/// System of equations f_j(x) = 0 over x in [-2^(bits-1), 2^(bits-1)-1]^n.
struct DiophantineSystem {
    std::vector<std::string> var_names;
    uint32_t bits = 0;
    std::vector<Polynomial> equations;

    uint32_t var_count() const { return static_cast<uint32_t>(var_names.size()); }
    uint32_t equation_count() const { return static_cast<uint32_t>(equations.size()); }
    uint32_t degree() const;
    Int domain_min() const { return -(Int(1) << (bits - 1)); }
    Int domain_max() const { return (Int(1) << (bits - 1)) - 1; }
    /// |D| = 2^(n*bits). Throws limit_error beyond 2^63.
    uint64_t domain_size() const;

    bool operator==(const DiophantineSystem& other) const;
};

/// Checks structural validity: nonzero variable count, 1 <= bits <= 16,
/// at least one equation, consistent exponent vector lengths, degree and
/// coefficient limits. Throws limit_error / domain_error.
void validate(const DiophantineSystem& sys);

/// Parses the textual system format:
///   # comment
///   vars x y z
///   bits 3
///   eq 3 x^2 + 2 y^2 + 5 z^2 = 40
/// Statements end at newline or ';'. '*' between factors is optional.
/// Every equation is normalized to f - rhs = 0.
DiophantineSystem parse_system(const std::string& text);

/// Canonical text form; parse_system(to_text(sys)) == sys.
std::string to_text(const DiophantineSystem& sys);

/// Exact evaluation of one polynomial. Throws overflow_error instead of wrapping.
Wide evaluate(const Polynomial& p, const Assignment& x);

/// True iff every equation evaluates to zero.
bool satisfies(const DiophantineSystem& sys, const Assignment& x);

inline constexpr uint64_t kDefaultDomainCap = uint64_t(1) << 26;

/// Exhaustive solution enumeration in lexicographic assignment order.
/// Throws domain_error when |D| exceeds the cap.
std::vector<Assignment> brute_force_solve(const DiophantineSystem& sys,
                                          uint64_t domain_cap = kDefaultDomainCap);

uint32_t hamming_weight(Wide value);

/// Lambda = sum over all monomials of (degree + hamming_weight(|coeff|)).
/// Constant terms count as degree 0 plus their coefficient weight.
uint64_t lambda_penalty(const DiophantineSystem& sys);

struct ClassicalCostEstimate {
    uint32_t register_width = 0; // classical bit budget, equals the quantum qubit count
    Wide cost_order = 0;         // register_width^2 * lambda
};

/// Classical evaluation cost model; register_width matches the quantum plan.
ClassicalCostEstimate classical_cost_estimate(const DiophantineSystem& sys);

} // namespace dioph
