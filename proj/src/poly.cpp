#include "dioph/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace dioph {

namespace {

constexpr uint32_t kMaxVars = 12;
constexpr uint32_t kMaxBits = 16;
constexpr uint32_t kMaxDegree = 12;
constexpr Int kMaxCoeffMagnitude = Int(1) << 40;

bool monomial_order(const Monomial& a, const Monomial& b) {
    uint32_t da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exponents < b.exponents;
}

} // namespace

uint32_t Polynomial::degree() const {
    uint32_t d = 0;
    for (const auto& t : terms) d = std::max(d, t.degree());
    return d;
}

Int Polynomial::constant_term() const {
    for (const auto& t : terms)
        if (t.is_constant()) return t.coeff;
    return 0;
}

bool Polynomial::operator==(const Polynomial& other) const {
    if (var_count != other.var_count || terms.size() != other.terms.size()) return false;
    for (size_t i = 0; i < terms.size(); ++i)
        if (terms[i].coeff != other.terms[i].coeff ||
            terms[i].exponents != other.terms[i].exponents)
            return false;
    return true;
}

Polynomial canonicalize(uint32_t var_count, std::vector<Monomial> terms) {
    std::map<std::vector<uint32_t>, Int> merged;
    for (auto& t : terms) {
        if (t.exponents.size() != var_count)
            throw limit_error("monomial exponent vector has wrong length");
        merged[t.exponents] += t.coeff;
    }
    Polynomial p;
    p.var_count = var_count;
    for (auto& [exps, coeff] : merged) {
        if (coeff == 0) continue;
        Monomial m;
        m.coeff = coeff;
        m.exponents = exps;
        p.terms.push_back(std::move(m));
    }
    std::sort(p.terms.begin(), p.terms.end(), monomial_order);
    return p;
}

Polynomial negate(const Polynomial& p) {
    Polynomial q = p;
    for (auto& t : q.terms) t.coeff = -t.coeff;
    return q;
}

uint32_t DiophantineSystem::degree() const {
    uint32_t d = 0;
    for (const auto& eq : equations) d = std::max(d, eq.degree());
    return d;
}

uint64_t DiophantineSystem::domain_size() const {
    uint64_t total_bits = uint64_t(var_count()) * bits;
    if (total_bits >= 63)
        throw limit_error("domain size exceeds 2^62");
    return uint64_t(1) << total_bits;
}

bool DiophantineSystem::operator==(const DiophantineSystem& other) const {
    return var_names == other.var_names && bits == other.bits && equations == other.equations;
}

void validate(const DiophantineSystem& sys) {
    if (sys.var_names.empty())
        throw limit_error("system declares no variables");
    if (sys.var_names.size() > kMaxVars)
        throw limit_error("variable count exceeds limit of " + std::to_string(kMaxVars));
    if (sys.bits < 1 || sys.bits > kMaxBits)
        throw limit_error("bit width must be in [1, " + std::to_string(kMaxBits) + "]");
    if (sys.equations.empty())
        throw limit_error("system has no equations");
    for (const auto& eq : sys.equations) {
        if (eq.var_count != sys.var_count())
            throw limit_error("equation variable count mismatch");
        if (eq.degree() > kMaxDegree)
            throw limit_error("degree exceeds limit of " + std::to_string(kMaxDegree));
        for (const auto& t : eq.terms) {
            if (t.coeff == 0)
                throw limit_error("canonical polynomial holds a zero coefficient");
            if (t.coeff >= kMaxCoeffMagnitude || t.coeff <= -kMaxCoeffMagnitude)
                throw limit_error("coefficient magnitude exceeds limit");
        }
    }
}

// ---------------------------------------------------------------------------
// Parser. Hand-rolled recursive descent over a token stream; error positions
// are 1-based (line, column).

namespace {

enum class TokKind { Ident, Number, Plus, Minus, Star, Caret, Equals, End, Eof };

struct Token {
    TokKind kind;
    std::string text;
    Int value = 0;
    size_t line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws_and_comments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = TokKind::Eof;
            return t;
        }
        char c = text_[pos_];
        if (c == '\n' || c == ';') {
            advance();
            t.kind = TokKind::End;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                t.text.push_back(text_[pos_]);
                advance();
            }
            t.kind = TokKind::Ident;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Wide v = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                v = v * 10 + (text_[pos_] - '0');
                if (v > kMaxCoeffMagnitude)
                    throw parse_error("integer literal too large", t.line, t.col);
                t.text.push_back(text_[pos_]);
                advance();
            }
            t.kind = TokKind::Number;
            t.value = static_cast<Int>(v);
            return t;
        }
        advance();
        switch (c) {
            case '+': t.kind = TokKind::Plus; return t;
            case '-': t.kind = TokKind::Minus; return t;
            case '*': t.kind = TokKind::Star; return t;
            case '^': t.kind = TokKind::Caret; return t;
            case '=': t.kind = TokKind::Equals; return t;
            default:
                throw parse_error(std::string("unexpected character '") + c + "'", t.line, t.col);
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    size_t line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { shift(); }

    DiophantineSystem parse() {
        DiophantineSystem sys;
        bool saw_vars = false, saw_bits = false;
        while (cur_.kind != TokKind::Eof) {
            if (cur_.kind == TokKind::End) {
                shift();
                continue;
            }
            expect(TokKind::Ident, "statement keyword");
            if (cur_.text == "vars") {
                if (saw_vars) fail("duplicate vars statement");
                shift();
                while (cur_.kind == TokKind::Ident) {
                    for (const auto& v : sys.var_names)
                        if (v == cur_.text) fail("duplicate variable '" + cur_.text + "'");
                    sys.var_names.push_back(cur_.text);
                    shift();
                }
                if (sys.var_names.empty()) fail("vars statement lists no variables");
                saw_vars = true;
                end_statement();
            } else if (cur_.text == "bits") {
                if (saw_bits) fail("duplicate bits statement");
                shift();
                expect(TokKind::Number, "bit width");
                if (cur_.value < 1 || cur_.value > kMaxBits) fail("bit width out of range");
                sys.bits = static_cast<uint32_t>(cur_.value);
                shift();
                saw_bits = true;
                end_statement();
            } else if (cur_.text == "eq") {
                if (!saw_vars) fail("eq before vars statement");
                shift();
                sys.equations.push_back(parse_equation(sys));
            } else {
                fail("unknown statement '" + cur_.text + "'");
            }
        }
        if (!saw_vars) fail("missing vars statement");
        if (!saw_bits) fail("missing bits statement");
        if (sys.equations.empty()) fail("system has no equations");
        validate(sys);
        return sys;
    }

private:
    Polynomial parse_equation(const DiophantineSystem& sys) {
        std::vector<Monomial> terms = parse_terms(sys);
        expect(TokKind::Equals, "'='");
        shift();
        // Right-hand side: a single optionally signed integer, folded into f.
        bool neg = false;
        if (cur_.kind == TokKind::Minus) {
            neg = true;
            shift();
        } else if (cur_.kind == TokKind::Plus) {
            shift();
        }
        expect(TokKind::Number, "right-hand side integer");
        Int rhs = neg ? -cur_.value : cur_.value;
        shift();
        end_statement();
        if (rhs != 0) {
            Monomial m;
            m.coeff = -rhs;
            m.exponents.assign(sys.var_count(), 0);
            terms.push_back(std::move(m));
        }
        return canonicalize(sys.var_count(), std::move(terms));
    }

    std::vector<Monomial> parse_terms(const DiophantineSystem& sys) {
        std::vector<Monomial> terms;
        bool first = true;
        for (;;) {
            Int sign = 1;
            if (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
                sign = cur_.kind == TokKind::Minus ? -1 : 1;
                shift();
            } else if (!first) {
                break;
            }
            terms.push_back(parse_term(sys, sign));
            first = false;
        }
        if (terms.empty()) fail("equation has no left-hand side terms");
        return terms;
    }

    Monomial parse_term(const DiophantineSystem& sys, Int sign) {
        Monomial m;
        m.coeff = sign;
        m.exponents.assign(sys.var_count(), 0);
        bool saw_factor = false;
        if (cur_.kind == TokKind::Number) {
            m.coeff *= cur_.value;
            saw_factor = true;
            shift();
            if (cur_.kind == TokKind::Star) shift();
        }
        while (cur_.kind == TokKind::Ident) {
            size_t idx = var_index(sys, cur_.text);
            shift();
            uint32_t exp = 1;
            if (cur_.kind == TokKind::Caret) {
                shift();
                expect(TokKind::Number, "exponent");
                if (cur_.value < 1 || cur_.value > kMaxDegree) fail("exponent out of range");
                exp = static_cast<uint32_t>(cur_.value);
                shift();
            }
            m.exponents[idx] += exp;
            saw_factor = true;
            if (cur_.kind == TokKind::Star) shift();
        }
        if (!saw_factor) fail("expected coefficient or variable");
        return m;
    }

    size_t var_index(const DiophantineSystem& sys, const std::string& name) {
        for (size_t i = 0; i < sys.var_names.size(); ++i)
            if (sys.var_names[i] == name) return i;
        fail("unknown variable '" + name + "'");
        return 0; // unreachable
    }

    void end_statement() {
        if (cur_.kind == TokKind::End) {
            shift();
        } else if (cur_.kind != TokKind::Eof) {
            fail("unexpected trailing tokens");
        }
    }

    void expect(TokKind k, const std::string& what) {
        if (cur_.kind != k) fail("expected " + what);
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw parse_error(msg, cur_.line, cur_.col);
    }

    void shift() { cur_ = lex_.next(); }

    Lexer lex_;
    Token cur_;
};

} // namespace

DiophantineSystem parse_system(const std::string& text) {
    Parser p(text);
    return p.parse();
}

std::string to_text(const DiophantineSystem& sys) {
    std::ostringstream out;
    out << "vars";
    for (const auto& v : sys.var_names) out << ' ' << v;
    out << "\nbits " << sys.bits << '\n';
    for (const auto& eq : sys.equations) {
        out << "eq ";
        // Highest-degree terms first for readability.
        std::vector<const Monomial*> terms;
        for (const auto& t : eq.terms) terms.push_back(&t);
        std::reverse(terms.begin(), terms.end());
        bool first = true;
        for (const auto* t : terms) {
            Int c = t->coeff;
            if (first) {
                if (c < 0) out << "- ";
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            Int mag = c < 0 ? -c : c;
            bool has_vars = !t->is_constant();
            if (mag != 1 || !has_vars) out << mag << (has_vars ? " " : "");
            bool first_var = true;
            for (uint32_t i = 0; i < eq.var_count; ++i) {
                if (t->exponents[i] == 0) continue;
                if (!first_var) out << ' ';
                out << sys.var_names[i];
                if (t->exponents[i] > 1) out << '^' << t->exponents[i];
                first_var = false;
            }
            first = false;
        }
        if (eq.terms.empty()) out << '0';
        out << " = 0\n";
    }
    return out.str();
}

Wide evaluate(const Polynomial& p, const Assignment& x) {
    if (x.size() != p.var_count)
        throw domain_error("assignment arity mismatch");
    Wide sum = 0;
    for (const auto& t : p.terms) {
        Wide term = t.coeff;
        for (uint32_t i = 0; i < p.var_count; ++i)
            for (uint32_t e = 0; e < t.exponents[i]; ++e)
                term = wide_mul(term, x[i]);
        sum = wide_add(sum, term);
    }
    return sum;
}

bool satisfies(const DiophantineSystem& sys, const Assignment& x) {
    for (const auto& eq : sys.equations)
        if (evaluate(eq, x) != 0) return false;
    return true;
}

std::vector<Assignment> brute_force_solve(const DiophantineSystem& sys, uint64_t domain_cap) {
    validate(sys);
    uint64_t domain = sys.domain_size();
    if (domain > domain_cap)
        throw domain_error("domain size " + std::to_string(domain) +
                           " exceeds enumeration cap " + std::to_string(domain_cap));
    uint32_t n = sys.var_count();
    Int lo = sys.domain_min(), hi = sys.domain_max();
    std::vector<Assignment> solutions;
    Assignment x(n, lo);
    for (;;) {
        if (satisfies(sys, x)) solutions.push_back(x);
        // Odometer increment, last variable fastest, keeps lexicographic order.
        uint32_t i = n;
        while (i > 0) {
            --i;
            if (x[i] < hi) {
                ++x[i];
                for (uint32_t j = i + 1; j < n; ++j) x[j] = lo;
                break;
            }
            if (i == 0) return solutions;
        }
    }
}

uint32_t hamming_weight(Wide value) {
    Wide v = wide_abs(value);
    uint32_t count = 0;
    while (v > 0) {
        count += static_cast<uint32_t>(v & 1);
        v >>= 1;
    }
    return count;
}

uint64_t lambda_penalty(const DiophantineSystem& sys) {
    uint64_t lambda = 0;
    for (const auto& eq : sys.equations)
        for (const auto& t : eq.terms)
            lambda += t.degree() + hamming_weight(t.coeff);
    return lambda;
}

} // namespace dioph
