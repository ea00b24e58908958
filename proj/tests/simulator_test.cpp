#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dioph/rng.hpp"
#include "dioph/simulator.hpp"
#include "helpers.hpp"

using namespace dioph;

TEST_CASE("iteration count formulas") {
    CHECK(optimal_iterations(512, 1) == 17);
    CHECK(optimal_iterations(4, 1) == 1);
    CHECK(optimal_iterations(1024, 4) == 12);
    CHECK(optimal_iterations(2, 1) == 1);
    CHECK(optimal_iterations(1, 1) == 0);
    CHECK_THROWS_AS(optimal_iterations(512, 0), domain_error);

    CHECK(calibrated_depth(1, 512) == 17);
    CHECK(calibrated_depth(1, 4) == 1);
    CHECK(calibrated_depth(4, 4) == 0); // everything marked, measuring now wins
    CHECK(calibrated_depth(2, 8) == 1);
}

TEST_CASE("amplification follows the rotation law on a single solution") {
    DiophantineSystem sys = test::one_var("eq x = 3", 3);
    OracleBundle bundle = synth_grover_iteration(sys);
    AmplificationTrace trace = grover_trace(bundle, 25, Backend::Hybrid);
    REQUIRE(trace.success_probability.size() == 26);
    double theta = std::asin(std::sqrt(1.0 / 8.0));
    for (uint32_t t = 0; t <= 25; ++t) {
        double want = std::pow(std::sin((2.0 * t + 1.0) * theta), 2.0);
        CHECK(std::abs(trace.success_probability[t] - want) < 1e-9);
    }
    CHECK(trace.success_probability[0] == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("dense and hybrid backends agree step by step") {
    DiophantineSystem sys = test::one_var("eq x^2 = 4", 2);
    OracleBundle bundle = synth_grover_iteration(sys);
    REQUIRE(bundle.plan.total <= kDefaultQubitCap);
    AmplificationTrace dense = grover_trace(bundle, 8, Backend::Dense);
    AmplificationTrace hybrid = grover_trace(bundle, 8, Backend::Hybrid);
    REQUIRE(dense.success_probability.size() == hybrid.success_probability.size());
    for (size_t t = 0; t < dense.success_probability.size(); ++t)
        CHECK(std::abs(dense.success_probability[t] - hybrid.success_probability[t]) < 1e-12);
}

TEST_CASE("dense backend refuses plans past the qubit cap") {
    OracleBundle bundle = synth_grover_iteration(test::three_quadrics()); // 34 qubits
    CHECK_THROWS_AS(grover_trace(bundle, 1, Backend::Dense), cap_error);
    CHECK_THROWS_AS(make_zero_state(std::vector<uint32_t>(30, 0), 26), cap_error);
}

TEST_CASE("state vector norm is preserved by the iteration") {
    DiophantineSystem sys = test::one_var("eq x^2 = 1", 2);
    OracleBundle bundle = synth_grover_iteration(sys);
    std::vector<uint32_t> qubits(bundle.plan.total);
    for (uint32_t q = 0; q < bundle.plan.total; ++q) qubits[q] = q;
    StateVector state = make_zero_state(qubits);
    for (uint32_t q = 0; q < bundle.plan.search_span().width; ++q) {
        Circuit h;
        h.qubit_count = bundle.plan.total;
        h.h(q);
        run_circuit(h, state);
    }
    CHECK(state_norm(state) == doctest::Approx(1.0).epsilon(1e-12));
    run_circuit(bundle.iteration, state);
    CHECK(state_norm(state) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace csv has one row per iteration count") {
    AmplificationTrace trace;
    trace.backend = Backend::Dense;
    trace.success_probability = {0.125, 0.5};
    std::string csv = trace_to_csv(trace);
    CHECK(csv.find("step,success_probability,backend") == 0);
    CHECK(csv.find("0,0.125") != std::string::npos);
    CHECK(csv.find("1,0.5") != std::string::npos);
    CHECK(csv.find("dense") != std::string::npos);
}

TEST_CASE("randomized search finds the planted solution for every seed") {
    DiophantineSystem sys = test::three_quadrics();
    uint64_t domain = sys.domain_size();
    uint64_t root = static_cast<uint64_t>(std::ceil(std::sqrt(double(domain))));
    // The attempt in flight when the budget line is crossed may finish.
    uint64_t hard_cap = 3 * root + root;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        SearchResult r = bbht_search(sys, seed);
        REQUIRE(r.solution.has_value());
        CHECK(*r.solution == Assignment{3, 2, 1});
        CHECK_FALSE(r.budget_exhausted);
        CHECK(r.queries >= 1);
        CHECK(r.queries <= hard_cap);
    }
}

TEST_CASE("randomized search exhausts its budget on unsatisfiable systems") {
    DiophantineSystem sys = test::one_var("eq x^2 = 2", 3);
    SearchResult r = bbht_search(sys, 9);
    CHECK_FALSE(r.solution.has_value());
    CHECK(r.budget_exhausted);
    uint64_t budget = 3 * static_cast<uint64_t>(std::ceil(std::sqrt(8.0)));
    CHECK(r.queries >= budget);
}

TEST_CASE("search results are reproducible per seed") {
    DiophantineSystem sys = test::one_var("eq x^2 = 4", 4);
    SearchResult a = bbht_search(sys, 12345);
    SearchResult b = bbht_search(sys, 12345);
    REQUIRE(a.solution.has_value());
    REQUIRE(b.solution.has_value());
    CHECK(*a.solution == *b.solution);
    CHECK(a.queries == b.queries);
}

TEST_CASE("calibrated search reaches the example solution at fixed depth") {
    SearchResult r = calibrated_search(test::three_quadrics(), 7);
    REQUIRE(r.solution.has_value());
    CHECK(*r.solution == Assignment{3, 2, 1});
    CHECK(r.queries % 17 == 0); // every attempt costs exactly the fixed depth

    SearchResult none = calibrated_search(test::one_var("eq x^2 = 2", 3), 7);
    CHECK_FALSE(none.solution.has_value());
    CHECK(none.budget_exhausted);
}

TEST_CASE("enumeration recovers the full solution set") {
    DiophantineSystem sys = test::one_var("eq x^2 = 4", 3);
    EnumerationResult r = enumerate_all(sys, 3);
    CHECK(r.complete);
    REQUIRE(r.solutions.size() == 2);
    CHECK(r.solutions[0] == Assignment{-2});
    CHECK(r.solutions[1] == Assignment{2});
    CHECK(r.searches >= 3); // two hits plus the closing empty search
    CHECK(r.total_queries > 0);

    EnumerationResult none = enumerate_all(test::one_var("eq x^2 = 2", 3), 3);
    CHECK(none.complete);
    CHECK(none.solutions.empty());
    CHECK(none.searches == 1);
}

TEST_CASE("enumeration matches brute force on random instances") {
    std::mt19937_64 rng(88);
    for (int trial = 0; trial < 8; ++trial) {
        uint32_t w = 2 + static_cast<uint32_t>(uniform_below(rng, 2));
        Int a = uniform_range(rng, 1, 3);
        Int b = uniform_range(rng, -4, 4);
        std::string sign = b < 0 ? " - " : " + ";
        DiophantineSystem sys = test::one_var(
            "eq " + std::to_string(a) + " x^2" + sign + std::to_string(std::abs(b)) + " x = 0",
            w);
        auto expect = brute_force_solve(sys);
        EnumerationResult r = enumerate_all(sys, mix_seed(7, trial));
        CHECK(r.complete);
        CHECK(r.solutions == expect);
    }
}

TEST_CASE("oracle scan failures surface as verification errors") {
    // Deliberately corrupt a bundle: drop the final uncompute section so the
    // counter keeps its tally, leaving garbage on non-search qubits.
    OracleBundle bundle = synth_grover_iteration(test::one_var("eq x = 1", 2));
    Circuit& oracle = bundle.oracle;
    REQUIRE(oracle.gates.size() > 4);
    oracle.gates.resize(oracle.gates.size() / 2);
    oracle.sections.clear();
    bundle.iteration = oracle;
    bundle.iteration.concat(bundle.diffusion);
    CHECK_THROWS_AS(grover_trace(bundle, 2, Backend::Hybrid), verification_error);
}
