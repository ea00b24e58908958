#pragma once

#include <complex>
#include <optional>

#include "dioph/oracle.hpp"

namespace dioph {

class cap_error : public std::runtime_error {
public:
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

class verification_error : public std::runtime_error {
public:
    explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr uint32_t kDefaultQubitCap = 26;

/// Amplitudes over an ordered qubit subset; basis index bit k corresponds to
/// qubits[k]. Size is always 2^qubits.size().
struct StateVector {
    std::vector<uint32_t> qubits;
    std::vector<std::complex<double>> amps;
};

/// |0...0> over the given qubits. Throws cap_error past the qubit cap.
StateVector make_zero_state(std::vector<uint32_t> qubits, uint32_t qubit_cap = kDefaultQubitCap);

/// Applies every gate in order. Gate qubits must belong to the state's subset.
void run_circuit(const Circuit& c, StateVector& state);

double state_norm(const StateVector& state);

enum class Backend { Dense, Hybrid };

inline const char* backend_name(Backend b) { return b == Backend::Dense ? "dense" : "hybrid"; }

struct AmplificationTrace {
    std::vector<double> success_probability; // index = iteration count, 0-based
    Backend backend = Backend::Hybrid;
};

struct SimLimits {
    uint32_t qubit_cap = kDefaultQubitCap;       // dense backend width cap
    uint64_t domain_cap = kDefaultDomainCap;     // brute-force / hybrid width cap
};

/// Success probability after 0..steps Grover iterations.
/// Dense: full-width state vector through the synthesized circuit.
/// Hybrid: amplitudes over the search register only; per-state oracle phases
/// come from classically emulating the synthesized oracle once per basis
/// state, diffusion is applied as the exact reflection map.
AmplificationTrace grover_trace(const OracleBundle& bundle, uint32_t steps, Backend backend,
                                const SimLimits& limits = {});

std::string trace_to_csv(const AmplificationTrace& trace);

/// floor(pi/4 * sqrt(domain / marked)).
uint64_t optimal_iterations(uint64_t domain, uint64_t marked);

/// floor(pi / (4 * asin(sqrt(marked_estimate / domain)))).
uint64_t calibrated_depth(uint64_t marked_estimate, uint64_t domain);

struct SearchOptions {
    uint64_t budget_multiplier = 3; // total oracle queries allowed = mult * ceil(sqrt(|D|))
    SimLimits limits;
};

struct SearchResult {
    std::optional<Assignment> solution;
    uint64_t queries = 0;
    bool budget_exhausted = false;
};

/// Randomized exponential-profile search: run j ~ U[0, T) iterations, measure,
/// verify classically; T grows by 6/5 per failure, capped at sqrt(|D|).
SearchResult bbht_search(const DiophantineSystem& sys, uint64_t seed,
                         const SearchOptions& opts = {});

/// Fixed-depth variant: every attempt runs calibrated_depth(M, |D|)
/// iterations with M taken from brute force, so the domain must fit the cap.
/// A depth-zero attempt is charged one query.
SearchResult calibrated_search(const DiophantineSystem& sys, uint64_t seed,
                               const SearchOptions& opts = {});

struct EnumerationResult {
    std::vector<Assignment> solutions; // lexicographically sorted
    uint64_t total_queries = 0;
    uint64_t searches = 0;
    bool complete = false; // final full-budget search found nothing
};

/// Repeated search with exclusion of each found solution until a full-budget
/// search comes back empty.
EnumerationResult enumerate_all(const DiophantineSystem& sys, uint64_t seed,
                                const SearchOptions& opts = {});

} // namespace dioph
