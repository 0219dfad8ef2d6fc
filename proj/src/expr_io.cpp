#include "diffinv/expr_io.hpp"

#include <algorithm>
#include <cctype>

#include "diffinv/error.hpp"

namespace diffinv {

namespace {

struct Parser {
    const std::string& s;
    const VarSet& vars;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }

    Rat parse() {
        Rat e = expr();
        if (!eof()) fail("unexpected trailing input");
        return e;
    }

    Rat expr() {
        Rat acc = term();
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Rat term() {
        Rat acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                size_t at = pos;
                Rat d = unary();
                if (d.is_zero()) throw parse_error("division by zero", at);
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    Rat unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Rat power() {
        Rat base = atom();
        if (accept('^')) {
            size_t at = pos;
            skip_ws();
            if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
                throw parse_error("expected positive integer exponent", at);
            unsigned long n = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                n = n * 10 + (unsigned long)(s[pos] - '0');
                if (n > 1000000ul) throw parse_error("exponent too large", at);
                ++pos;
            }
            return base.pow((int)n);
        }
        return base;
    }

    Rat atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            Rat e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            return Rat(vars, qq_parse(s.substr(start, pos - start)));
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            auto idx = vars.index_of(name);
            if (!idx) throw parse_error("unknown variable '" + name + "'", start);
            return Rat::variable(vars, *idx);
        }
        fail("expected number, variable or '('");
    }
};

// Terms printed in descending grlex order.
std::vector<std::pair<Exp, QQ>> sorted_terms(const Poly& p) {
    std::vector<std::pair<Exp, QQ>> v(p.terms().begin(), p.terms().end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        unsigned ta = exp_total(a.first), tb = exp_total(b.first);
        if (ta != tb) return ta > tb;
        return a.first > b.first;
    });
    return v;
}

std::string monomial_string(const VarSet& vs, const Exp& e) {
    std::string out;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += vs.name(i);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out;
}

std::string coeff_string(const QQ& c) {
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

} // namespace

Rat parse_expr(const std::string& text, const VarSet& vars) {
    Parser p{text, vars};
    return p.parse();
}

std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : sorted_terms(p)) {
        QQ a = abs(c);
        if (first) {
            out += sign(c) < 0 ? "-" : "";
            first = false;
        } else {
            out += sign(c) < 0 ? " - " : " + ";
        }
        std::string mono = monomial_string(p.vars(), e);
        if (mono.empty()) {
            out += coeff_string(a);
        } else if (a == 1) {
            out += mono;
        } else {
            out += coeff_string(a) + "*" + mono;
        }
    }
    return out;
}

std::string to_string(const Rat& r) {
    if (r.is_poly()) return to_string(r.num());
    return "(" + to_string(r.num()) + ")/(" + to_string(r.den()) + ")";
}

} // namespace diffinv
