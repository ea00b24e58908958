#include "dioph/circuit.hpp"

#include <algorithm>
#include <sstream>

namespace dioph {

void Circuit::add(Gate g) { gates.push_back(std::move(g)); }

void Circuit::x(uint32_t t) { add(Gate{GateKind::X, t, {}}); }
void Circuit::h(uint32_t t) { add(Gate{GateKind::H, t, {}}); }
void Circuit::cnot(uint32_t c, uint32_t t) { add(Gate{GateKind::Cnot, t, {Control{c, false}}}); }
void Circuit::toffoli(uint32_t c1, uint32_t c2, uint32_t t) {
    add(Gate{GateKind::Toffoli, t, {Control{c1, false}, Control{c2, false}}});
}
void Circuit::mcx(std::vector<Control> controls, uint32_t t) {
    add(Gate{GateKind::Mcx, t, std::move(controls)});
}
void Circuit::mcz(std::vector<Control> controls, uint32_t t) {
    add(Gate{GateKind::Mcz, t, std::move(controls)});
}

void Circuit::begin_section(const std::string& label) {
    if (!sections.empty() && sections.back().end == SIZE_MAX)
        sections.back().end = gates.size();
    sections.push_back(Section{label, gates.size(), SIZE_MAX});
}

void Circuit::append_as_section(const std::string& label, const Circuit& other) {
    begin_section(label);
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    sections.back().end = gates.size();
}

void Circuit::concat(const Circuit& other) {
    if (!sections.empty() && sections.back().end == SIZE_MAX)
        sections.back().end = gates.size();
    size_t offset = gates.size();
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    for (const auto& s : other.resolved_sections())
        sections.push_back(Section{s.label, s.begin + offset, s.end + offset});
}

std::vector<Section> Circuit::resolved_sections() const {
    std::vector<Section> out;
    size_t cursor = 0;
    auto fill_gap = [&](size_t upto) {
        if (upto > cursor) out.push_back(Section{"main", cursor, upto});
        cursor = std::max(cursor, upto);
    };
    for (const auto& s : sections) {
        size_t end = s.end == SIZE_MAX ? gates.size() : s.end;
        fill_gap(s.begin);
        if (end > s.begin) out.push_back(Section{s.label, s.begin, end});
        cursor = std::max(cursor, end);
    }
    fill_gap(gates.size());
    return out;
}

void validate(const Circuit& c) {
    auto check_qubit = [&](uint32_t q) {
        if (q >= c.qubit_count)
            throw circuit_error("qubit index " + std::to_string(q) + " out of range");
    };
    for (const auto& g : c.gates) {
        check_qubit(g.target);
        size_t expect_min = 0, expect_max = 0;
        switch (g.kind) {
            case GateKind::X:
            case GateKind::H: expect_min = expect_max = 0; break;
            case GateKind::Cnot: expect_min = expect_max = 1; break;
            case GateKind::Toffoli: expect_min = expect_max = 2; break;
            case GateKind::Mcx:
            case GateKind::Mcz: expect_min = 1; expect_max = SIZE_MAX; break;
        }
        if (g.controls.size() < expect_min || g.controls.size() > expect_max)
            throw circuit_error("control count invalid for gate kind");
        for (size_t i = 0; i < g.controls.size(); ++i) {
            check_qubit(g.controls[i].qubit);
            if (g.controls[i].qubit == g.target)
                throw circuit_error("gate controls its own target");
            if ((g.kind == GateKind::Cnot || g.kind == GateKind::Toffoli) && g.controls[i].anti)
                throw circuit_error("CNOT/CCX controls are positive; use MCX for anti-controls");
            for (size_t j = i + 1; j < g.controls.size(); ++j)
                if (g.controls[i].qubit == g.controls[j].qubit)
                    throw circuit_error("duplicate control qubit");
        }
    }
    size_t cursor = 0;
    for (const auto& s : c.resolved_sections()) {
        if (s.begin != cursor || s.end < s.begin || s.end > c.gates.size())
            throw circuit_error("sections do not partition the gate list");
        cursor = s.end;
    }
    if (cursor != c.gates.size())
        throw circuit_error("sections do not cover the gate list");
}

Circuit inverse(const Circuit& c) {
    Circuit inv;
    inv.qubit_count = c.qubit_count;
    inv.gates.assign(c.gates.rbegin(), c.gates.rend());
    size_t n = c.gates.size();
    auto sections = c.resolved_sections();
    for (auto it = sections.rbegin(); it != sections.rend(); ++it)
        inv.sections.push_back(Section{it->label, n - it->end, n - it->begin});
    return inv;
}

Bits emulate_classical(const Circuit& c, const Bits& input) {
    if (input.size() != c.qubit_count)
        throw circuit_error("input width mismatch");
    Bits state = input;
    for (const auto& g : c.gates) {
        if (g.kind == GateKind::H || g.kind == GateKind::Mcz)
            throw circuit_error("circuit is not a classical permutation");
        bool fire = true;
        for (const auto& ctl : g.controls) {
            bool v = state[ctl.qubit] != 0;
            if (v == ctl.anti) {
                fire = false;
                break;
            }
        }
        if (fire) state[g.target] ^= 1;
    }
    return state;
}

uint64_t CensusCounts::total() const {
    uint64_t t = x + h + cnot + toffoli;
    for (const auto& [k, v] : mcx_by_controls) t += v;
    for (const auto& [k, v] : mcz_by_controls) t += v;
    return t;
}

CensusCounts& CensusCounts::operator+=(const CensusCounts& o) {
    x += o.x;
    h += o.h;
    cnot += o.cnot;
    toffoli += o.toffoli;
    for (const auto& [k, v] : o.mcx_by_controls) mcx_by_controls[k] += v;
    for (const auto& [k, v] : o.mcz_by_controls) mcz_by_controls[k] += v;
    return *this;
}

bool CensusCounts::operator==(const CensusCounts& o) const {
    return x == o.x && h == o.h && cnot == o.cnot && toffoli == o.toffoli &&
           mcx_by_controls == o.mcx_by_controls && mcz_by_controls == o.mcz_by_controls;
}

Census gate_census(const Circuit& c) {
    Census census;
    auto count_into = [](CensusCounts& counts, const Gate& g) {
        switch (g.kind) {
            case GateKind::X: ++counts.x; break;
            case GateKind::H: ++counts.h; break;
            case GateKind::Cnot: ++counts.cnot; break;
            case GateKind::Toffoli: ++counts.toffoli; break;
            case GateKind::Mcx: ++counts.mcx_by_controls[uint32_t(g.controls.size())]; break;
            case GateKind::Mcz: ++counts.mcz_by_controls[uint32_t(g.controls.size())]; break;
        }
    };
    for (const auto& s : c.resolved_sections()) {
        CensusCounts counts;
        for (size_t i = s.begin; i < s.end; ++i) count_into(counts, c.gates[i]);
        census.total += counts;
        census.sections.emplace_back(s.label, std::move(counts));
    }
    return census;
}

std::string serialize(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.qubit_count << '\n';
    for (const auto& s : c.resolved_sections())
        out << "section " << s.label << ' ' << s.begin << ' ' << s.end << '\n';
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::X: out << "X " << g.target; break;
            case GateKind::H: out << "H " << g.target; break;
            case GateKind::Cnot: out << "CNOT " << g.controls[0].qubit << ' ' << g.target; break;
            case GateKind::Toffoli:
                out << "CCX " << g.controls[0].qubit << ' ' << g.controls[1].qubit << ' '
                    << g.target;
                break;
            case GateKind::Mcx:
            case GateKind::Mcz:
                out << (g.kind == GateKind::Mcx ? "MCX" : "MCZ");
                for (const auto& ctl : g.controls)
                    out << ' ' << (ctl.anti ? '-' : '+') << ctl.qubit;
                out << ' ' << g.target;
                break;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

uint32_t parse_index(const std::string& tok, size_t line_no) {
    try {
        size_t used = 0;
        unsigned long v = std::stoul(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return static_cast<uint32_t>(v);
    } catch (const std::exception&) {
        throw circuit_error("bad index '" + tok + "' on line " + std::to_string(line_no));
    }
}

Control parse_control(const std::string& tok, size_t line_no) {
    if (tok.empty()) throw circuit_error("empty control token on line " + std::to_string(line_no));
    if (tok[0] == '+') return Control{parse_index(tok.substr(1), line_no), false};
    if (tok[0] == '-') return Control{parse_index(tok.substr(1), line_no), true};
    return Control{parse_index(tok, line_no), false};
}

} // namespace

Circuit deserialize(const std::string& text) {
    Circuit c;
    bool saw_qubits = false;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_tokens(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;
        const std::string& op = tokens[0];
        if (op == "qubits") {
            if (tokens.size() != 2) throw circuit_error("malformed qubits line");
            c.qubit_count = parse_index(tokens[1], line_no);
            saw_qubits = true;
        } else if (op == "section") {
            if (tokens.size() != 4) throw circuit_error("malformed section line");
            c.sections.push_back(Section{tokens[1], parse_index(tokens[2], line_no),
                                         parse_index(tokens[3], line_no)});
        } else if (op == "X" || op == "H") {
            if (tokens.size() != 2) throw circuit_error("malformed gate on line " + std::to_string(line_no));
            Gate g{op == "X" ? GateKind::X : GateKind::H, parse_index(tokens[1], line_no), {}};
            c.add(std::move(g));
        } else if (op == "CNOT") {
            if (tokens.size() != 3) throw circuit_error("malformed CNOT on line " + std::to_string(line_no));
            c.cnot(parse_index(tokens[1], line_no), parse_index(tokens[2], line_no));
        } else if (op == "CCX") {
            if (tokens.size() != 4) throw circuit_error("malformed CCX on line " + std::to_string(line_no));
            c.toffoli(parse_index(tokens[1], line_no), parse_index(tokens[2], line_no),
                      parse_index(tokens[3], line_no));
        } else if (op == "MCX" || op == "MCZ") {
            if (tokens.size() < 3) throw circuit_error("malformed gate on line " + std::to_string(line_no));
            std::vector<Control> controls;
            for (size_t i = 1; i + 1 < tokens.size(); ++i)
                controls.push_back(parse_control(tokens[i], line_no));
            uint32_t target = parse_index(tokens.back(), line_no);
            if (op == "MCX")
                c.mcx(std::move(controls), target);
            else
                c.mcz(std::move(controls), target);
        } else {
            throw circuit_error("unknown directive '" + op + "' on line " + std::to_string(line_no));
        }
    }
    if (!saw_qubits) throw circuit_error("missing qubits header");
    validate(c);
    return c;
}

CompiledCircuit compile_for_emulation(const Circuit& c) {
    if (c.qubit_count > 64)
        throw circuit_error("compiled emulation supports at most 64 qubits");
    CompiledCircuit cc;
    cc.qubit_count = c.qubit_count;
    cc.steps.reserve(c.gates.size());
    for (const auto& g : c.gates) {
        if (g.kind == GateKind::H)
            throw circuit_error("circuit is not a classical permutation");
        CompiledCircuit::Step s;
        for (const auto& ctl : g.controls) {
            s.ctrl_mask |= uint64_t(1) << ctl.qubit;
            if (!ctl.anti) s.ctrl_value |= uint64_t(1) << ctl.qubit;
        }
        if (g.kind == GateKind::Mcz)
            s.phase_bit = uint64_t(1) << g.target;
        else
            s.flip = uint64_t(1) << g.target;
        cc.steps.push_back(s);
    }
    return cc;
}

uint64_t run_compiled(const CompiledCircuit& cc, uint64_t state, int& phase) {
    for (const auto& s : cc.steps) {
        if ((state & s.ctrl_mask) != s.ctrl_value) continue;
        if (s.phase_bit) {
            if (state & s.phase_bit) phase = -phase;
        } else {
            state ^= s.flip;
        }
    }
    return state;
}

} // namespace dioph
