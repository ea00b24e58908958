#include "dioph/resources.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dioph/rng.hpp"

namespace dioph {

uint64_t mcx_cost(uint32_t controls) {
    if (controls < 2) return 0;
    if (controls == 2) return 1;
    return uint64_t(2) * controls - 3;
}

Ratio t_rotation_cost(uint64_t t_count, uint64_t t_dagger_count) {
    return Ratio(static_cast<long long>(t_count + t_dagger_count), 7);
}

namespace {

Ratio counts_cost(const CensusCounts& counts) {
    Ratio cost(static_cast<long long>(counts.toffoli));
    for (const auto& [arity, n] : counts.mcx_by_controls)
        cost += Ratio(static_cast<long long>(mcx_cost(arity) * n));
    for (const auto& [arity, n] : counts.mcz_by_controls)
        cost += Ratio(static_cast<long long>(mcx_cost(arity) * n));
    return cost;
}

} // namespace

CostReport toffoli_equiv_cost(const Circuit& c, uint64_t qubits) {
    Census census = gate_census(c);
    CostReport report;
    report.qubits = qubits ? qubits : c.qubit_count;
    report.ccx_count = census.total.toffoli;
    for (const auto& [arity, n] : census.total.mcx_by_controls)
        report.mcx_histogram[arity] += n;
    for (const auto& [arity, n] : census.total.mcz_by_controls)
        report.mcx_histogram[arity] += n;
    report.toffoli_equiv =
        counts_cost(census.total) + t_rotation_cost(report.t_count, report.t_dagger_count);
    for (const auto& [label, counts] : census.sections)
        report.section_costs.emplace_back(label, counts_cost(counts));
    return report;
}

QubitModel qubit_count_model(const DiophantineSystem& sys) {
    validate(sys);
    QubitModel model;
    uint32_t n = sys.var_count(), w = sys.bits;
    model.search_term = uint64_t(n) * w;

    Wide n_value = Wide(1) << w;
    Wide worst = 1;
    for (const auto& eq : sys.equations) {
        Wide sum = 0;
        for (const auto& t : eq.terms)
            sum = wide_add(sum, wide_mul(wide_abs(t.coeff), wide_pow(n_value, t.degree())));
        worst = std::max(worst, sum);
    }
    model.accumulator_term = std::max<uint32_t>(ceil_log2(worst), 1);

    uint32_t d = sys.degree();
    if (d >= 3)
        for (uint32_t l = 2; l <= d - 1; ++l) model.product_term += uint64_t(l) * w;

    model.counter_term = ceil_log2(Wide(2) * sys.equation_count() + 1);

    // Declared ancilla block: accumulator headroom bit, adder carry, control
    // staging ancilla, sign-extension staging, counter-ladder scratch.
    RegisterPlan plan = plan_registers(sys);
    uint64_t headroom = plan.accumulator.width - model.accumulator_term;
    model.ancilla_term =
        headroom + 2 + plan.sign_ext.width + plan.mcx_scratch.width;
    model.total = model.search_term + model.accumulator_term + model.product_term +
                  model.counter_term + model.ancilla_term;
    return model;
}

DiophantineSystem random_instance(const InstanceShape& shape, uint64_t seed) {
    if ((shape.n_value & (shape.n_value - 1)) != 0 || shape.n_value < 2)
        throw domain_error("domain modulus must be a power of two >= 2");
    uint32_t w = 0;
    while ((uint64_t(1) << w) < shape.n_value) ++w;

    std::mt19937_64 rng(seed);
    DiophantineSystem sys;
    sys.bits = w;
    for (uint32_t i = 0; i < shape.var_count; ++i)
        sys.var_names.push_back("x" + std::to_string(i + 1));

    auto draw_coeff = [&] {
        Int mag = uniform_range(rng, shape.coeff_min, shape.coeff_max);
        return uniform_below(rng, 2) ? -mag : mag;
    };
    auto draw_exponents = [&](uint32_t degree) {
        std::vector<uint32_t> exps(shape.var_count, 0);
        for (uint32_t unit = 0; unit < degree; ++unit)
            exps[uniform_below(rng, shape.var_count)] += 1;
        return exps;
    };

    for (uint32_t j = 0; j < shape.equation_count; ++j) {
        std::set<std::vector<uint32_t>> used;
        std::vector<Monomial> terms;
        uint32_t term_count = 1 + static_cast<uint32_t>(uniform_below(rng, shape.max_terms));
        for (uint32_t t = 0; t < term_count; ++t) {
            // First monomial of the first equation pins the system degree.
            uint32_t deg = (j == 0 && t == 0)
                               ? shape.degree
                               : static_cast<uint32_t>(uniform_below(rng, shape.degree + 1));
            std::vector<uint32_t> exps;
            for (int attempt = 0; attempt < 64; ++attempt) {
                exps = draw_exponents(deg);
                if (!used.count(exps)) break;
                exps.clear();
            }
            if (exps.empty() || used.count(exps)) continue;
            used.insert(exps);
            Monomial m;
            m.coeff = deg == 0 && uniform_below(rng, 2) ? Int(uniform_range(rng, 1, 40))
                                                        : draw_coeff();
            m.exponents = std::move(exps);
            terms.push_back(std::move(m));
        }
        sys.equations.push_back(canonicalize(shape.var_count, std::move(terms)));
    }
    validate(sys);
    return sys;
}

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinearFit fit;
    size_t n = xs.size();
    if (n < 2 || ys.size() != n) return fit;
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

LinearFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0 || ys[i] <= 0) continue;
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    return fit_linear(lx, ly);
}

namespace {

SweepRow measure_instance(const DiophantineSystem& sys, uint64_t id, uint64_t seed) {
    SweepRow row;
    row.instance_id = id;
    row.seed = seed;
    row.n = sys.var_count();
    row.d = sys.degree();
    row.n_value = uint64_t(1) << sys.bits;
    row.m = sys.equation_count();
    row.lambda = lambda_penalty(sys);
    for (const auto& eq : sys.equations)
        for (const auto& t : eq.terms) row.sum_hamming += hamming_weight(t.coeff);

    OracleBundle bundle = synth_grover_iteration(sys);
    row.q_planned = total_qubits(bundle.plan);
    row.q_model = qubit_count_model(sys).total;
    CostReport report = toffoli_equiv_cost(bundle.iteration);
    row.ccx = report.ccx_count;
    for (const auto& [arity, count] : report.mcx_histogram)
        row.mcx_toffoli_equiv += mcx_cost(arity) * count;
    row.total_toffoli_equiv = report.toffoli_equiv;
    return row;
}

/// Deterministic single-variable stratum family: (2^h - 1) x^deg - 3 = 0.
/// Both q and the Toffoli count are exact polynomials in w within a stratum,
/// so the per-weight fits isolate the growth law.
DiophantineSystem stratum_instance(uint64_t weight, uint32_t deg, uint32_t w) {
    DiophantineSystem sys;
    sys.var_names = {"x"};
    sys.bits = w;
    std::vector<Monomial> terms;
    terms.push_back(Monomial{(Int(1) << weight) - 1, {deg}});
    terms.push_back(Monomial{-3, {0}});
    sys.equations.push_back(canonicalize(1, std::move(terms)));
    return sys;
}

std::vector<SweepRow> run_linear_sweep(const SweepConfig& config) {
    std::vector<SweepRow> rows;
    uint64_t id = 0;
    uint32_t top = std::max(config.max_bits, uint32_t(12));
    for (uint64_t weight = 1; weight <= 4; ++weight) {
        for (uint32_t w = config.min_bits; w <= top; ++w) {
            DiophantineSystem sys = stratum_instance(weight, 1, w);
            SweepRow row = measure_instance(sys, id, mix_seed(config.seed, id));
            row.hamming_stratum = weight;
            rows.push_back(row);
            ++id;
        }
    }
    return rows;
}

InstanceShape random_shape(const SweepConfig& config, std::mt19937_64& rng,
                           uint32_t fixed_degree) {
    InstanceShape shape;
    shape.var_count = 1 + static_cast<uint32_t>(uniform_below(rng, config.max_vars));
    if (fixed_degree) {
        shape.degree = fixed_degree;
    } else {
        // Controlled arithmetic starts at degree 2; purely linear instances
        // sit an order of magnitude below the scaling family at equal width.
        uint32_t lo = config.max_degree < 2 ? 1 : 2;
        shape.degree = lo + static_cast<uint32_t>(
                                uniform_below(rng, config.max_degree - lo + 1));
    }
    shape.n_value = uint64_t(1) << uniform_range(rng, config.min_bits, config.max_bits);
    shape.equation_count = 1 + static_cast<uint32_t>(uniform_below(rng, config.max_equations));
    shape.coeff_max = config.coeff_max;
    shape.max_terms = 2;
    return shape;
}

std::vector<SweepRow> run_general_sweep(const SweepConfig& config, uint32_t fixed_degree) {
    std::vector<SweepRow> rows;
    for (uint64_t i = 0; i < config.count; ++i) {
        uint64_t seed = mix_seed(config.seed, i);
        std::mt19937_64 rng(seed);
        InstanceShape shape = random_shape(config, rng, fixed_degree);
        DiophantineSystem sys = random_instance(shape, mix_seed(seed, 0xd10b));
        rows.push_back(measure_instance(sys, i, seed));
    }
    return rows;
}

/// Structural width family: 3 x1^a x2^b ... - 5 = 0 with the degree spread
/// round-robin over min(n, d) variables; idle variables still occupy the
/// search register, which is the point of the width model.
std::vector<SweepRow> run_qubit_sweep(const SweepConfig& config) {
    std::vector<SweepRow> rows;
    uint64_t id = 0;
    for (uint32_t n = 1; n <= config.max_vars; ++n) {
        for (uint32_t d = 1; d <= config.max_degree; ++d) {
            for (uint32_t w = config.min_bits; w <= config.max_bits; ++w) {
                DiophantineSystem sys;
                sys.bits = w;
                for (uint32_t i = 0; i < n; ++i)
                    sys.var_names.push_back("x" + std::to_string(i + 1));
                std::vector<uint32_t> exps(n, 0);
                for (uint32_t unit = 0; unit < d; ++unit) exps[unit % n] += 1;
                std::vector<Monomial> terms;
                terms.push_back(Monomial{3, exps});
                terms.push_back(Monomial{-5, std::vector<uint32_t>(n, 0)});
                sys.equations.push_back(canonicalize(n, std::move(terms)));

                SweepRow row;
                row.instance_id = id;
                row.seed = mix_seed(config.seed, id);
                row.n = n;
                row.d = d;
                row.n_value = uint64_t(1) << w;
                row.m = 1;
                row.lambda = lambda_penalty(sys);
                for (const auto& eq : sys.equations)
                    for (const auto& t : eq.terms) row.sum_hamming += hamming_weight(t.coeff);
                row.q_planned = total_qubits(plan_registers(sys));
                row.q_model = qubit_count_model(sys).total;
                rows.push_back(row);
                ++id;
            }
        }
    }
    return rows;
}

} // namespace

SweepResult sweep_and_fit(const SweepConfig& config) {
    SweepResult result;
    switch (config.kind) {
        case SweepKind::General:
        case SweepKind::Quadratic: {
            // Quadratic kind is the degree-2 restriction of the general family.
            result.rows = run_general_sweep(config, config.kind == SweepKind::Quadratic ? 2 : 0);
            std::vector<double> q, cost;
            for (const auto& r : result.rows) {
                q.push_back(double(r.q_planned));
                cost.push_back(r.total_toffoli_equiv.to_double());
            }
            result.global_fit = fit_loglog(q, cost);
            break;
        }
        case SweepKind::Linear: {
            result.rows = run_linear_sweep(config);
            std::map<uint64_t, std::pair<std::vector<double>, std::vector<double>>> strata;
            for (const auto& r : result.rows) {
                strata[r.hamming_stratum].first.push_back(double(r.q_planned));
                strata[r.hamming_stratum].second.push_back(r.total_toffoli_equiv.to_double());
            }
            std::vector<double> q, cost;
            for (const auto& r : result.rows) {
                q.push_back(double(r.q_planned));
                cost.push_back(r.total_toffoli_equiv.to_double());
            }
            result.global_fit = fit_loglog(q, cost);
            for (auto& [weight, data] : strata)
                result.stratum_fits[weight] = fit_linear(data.first, data.second);
            break;
        }
        case SweepKind::QubitWidth: {
            result.rows = run_qubit_sweep(config);
            std::vector<double> x, q;
            for (const auto& r : result.rows) {
                uint32_t w = 0;
                while ((uint64_t(1) << w) < r.n_value) ++w;
                x.push_back(double(r.n + r.d * (r.d + 1) / 2) * w);
                q.push_back(double(r.q_planned));
            }
            result.global_fit = fit_linear(x, q);
            break;
        }
    }
    return result;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "instance_id,seed,n,d,N,m,lambda,sum_hamming,q_planned,q_model,ccx,"
           "mcx_toffoli_equiv,total_toffoli_equiv\n";
    for (const auto& r : rows) {
        out << r.instance_id << ',' << r.seed << ',' << r.n << ',' << r.d << ',' << r.n_value
            << ',' << r.m << ',' << r.lambda << ',' << r.sum_hamming << ',' << r.q_planned << ','
            << r.q_model << ',' << r.ccx << ',' << r.mcx_toffoli_equiv << ','
            << r.total_toffoli_equiv.to_string() << '\n';
    }
    return out.str();
}

} // namespace dioph
