#pragma once

// Small scalar expression language used in problem files: +,-,*,/,^ with
// standard precedence (^ right-associative, binding tighter than unary
// minus), parentheses, single-argument calls, numeric literals, and the
// fixed role variables t, tau, x, v, T, xT.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracvar/errors.hpp"

namespace fracvar::exprlang {

enum class BuiltinFn : std::uint8_t { sin, cos, exp, ln, sqrt, abs, gammafn };

inline constexpr std::array<std::string_view, 7> kBuiltinNames = {
    "sin", "cos", "exp", "ln", "sqrt", "abs", "gammafn"};

/// The fixed variable roles. Anything else parses fine but can never be
/// bound, so evaluating it is an error.
inline constexpr std::array<std::string_view, 6> kRoleNames = {"t", "tau", "x",
                                                               "v", "T", "xT"};

inline int role_slot(std::string_view name) {
    for (std::size_t i = 0; i < kRoleNames.size(); ++i)
        if (kRoleNames[i] == name) return static_cast<int>(i);
    return -1;
}

struct VarBindings {
    std::array<double, 6> values{};
    std::array<bool, 6> bound{};

    VarBindings& set(std::string_view name, double v) {
        int s = role_slot(name);
        if (s < 0) throw InputError("unknown variable role '" + std::string(name) + "'");
        values[static_cast<std::size_t>(s)] = v;
        bound[static_cast<std::size_t>(s)] = true;
        return *this;
    }
};

class Expr {
  public:
    enum class Kind : std::uint8_t { number, variable, add, sub, mul, div, pow, neg, call };

    struct Node {
        Kind kind;
        BuiltinFn fn{};     // call
        double value = 0.0; // number
        int a = -1, b = -1; // children
        int var = -1;       // index into var_names_
        std::uint32_t pos = 0;
    };

    static Expr parse(std::string_view source);

    double eval(const VarBindings& b) const { return eval_node(root_, b); }

    std::string pretty() const { return render(root_, 0); }

    bool references(std::string_view name) const {
        for (const Node& n : nodes_)
            if (n.kind == Kind::variable && var_names_[static_cast<std::size_t>(n.var)] == name)
                return true;
        return false;
    }

    bool equals(const Expr& o) const { return equal_nodes(*this, root_, o, o.root_); }

    const std::string& source() const { return source_; }

    // Programmatic composition (used for 1-alpha order transforms and
    // trajectory differences; never produces negative literals).
    static Expr number(double v) {
        Expr e;
        e.nodes_.push_back(Node{Kind::number, {}, v, -1, -1, -1, 0});
        e.root_ = 0;
        e.source_ = e.pretty();
        return e;
    }
    static Expr variable(std::string_view name) {
        Expr e;
        e.var_names_.emplace_back(name);
        e.var_slots_.push_back(role_slot(name));
        e.nodes_.push_back(Node{Kind::variable, {}, 0.0, -1, -1, 0, 0});
        e.root_ = 0;
        e.source_ = e.pretty();
        return e;
    }
    static Expr binary(char op, const Expr& lhs, const Expr& rhs) {
        Expr e = lhs;
        int a = e.root_;
        int b = e.append(rhs);
        Kind k;
        switch (op) {
            case '+': k = Kind::add; break;
            case '-': k = Kind::sub; break;
            case '*': k = Kind::mul; break;
            case '/': k = Kind::div; break;
            case '^': k = Kind::pow; break;
            default: throw InputError("unknown operator in Expr::binary");
        }
        e.nodes_.push_back(Node{k, {}, 0.0, a, b, -1, 0});
        e.root_ = static_cast<int>(e.nodes_.size()) - 1;
        e.source_ = e.pretty();
        return e;
    }

  private:
    std::vector<Node> nodes_;
    std::vector<std::string> var_names_;
    std::vector<int> var_slots_;
    int root_ = -1;
    std::string source_;

    friend class Parser;

    int append(const Expr& o) {
        int node_off = static_cast<int>(nodes_.size());
        int var_off = static_cast<int>(var_names_.size());
        for (const auto& nm : o.var_names_) var_names_.push_back(nm);
        for (int s : o.var_slots_) var_slots_.push_back(s);
        for (Node n : o.nodes_) {
            if (n.a >= 0) n.a += node_off;
            if (n.b >= 0) n.b += node_off;
            if (n.var >= 0) n.var += var_off;
            nodes_.push_back(n);
        }
        return o.root_ + node_off;
    }

    static bool equal_nodes(const Expr& x, int i, const Expr& y, int j) {
        const Node& a = x.nodes_[static_cast<std::size_t>(i)];
        const Node& b = y.nodes_[static_cast<std::size_t>(j)];
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Kind::number: return a.value == b.value;
            case Kind::variable:
                return x.var_names_[static_cast<std::size_t>(a.var)] ==
                       y.var_names_[static_cast<std::size_t>(b.var)];
            case Kind::neg: return equal_nodes(x, a.a, y, b.a);
            case Kind::call:
                return a.fn == b.fn && equal_nodes(x, a.a, y, b.a);
            default:
                return equal_nodes(x, a.a, y, b.a) && equal_nodes(x, a.b, y, b.b);
        }
    }

    [[noreturn]] void eval_fail(int i, const std::string& what) const {
        throw EvalError(what + " in '" + render(i, 0) + "'");
    }

    double eval_node(int i, const VarBindings& bind) const {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        double r;
        switch (n.kind) {
            case Kind::number: return n.value;
            case Kind::variable: {
                int slot = var_slots_[static_cast<std::size_t>(n.var)];
                if (slot < 0 || !bind.bound[static_cast<std::size_t>(slot)])
                    eval_fail(i, "unbound variable '" +
                                     var_names_[static_cast<std::size_t>(n.var)] + "'");
                return bind.values[static_cast<std::size_t>(slot)];
            }
            case Kind::add: r = eval_node(n.a, bind) + eval_node(n.b, bind); break;
            case Kind::sub: r = eval_node(n.a, bind) - eval_node(n.b, bind); break;
            case Kind::mul: r = eval_node(n.a, bind) * eval_node(n.b, bind); break;
            case Kind::div: {
                double num = eval_node(n.a, bind), den = eval_node(n.b, bind);
                if (den == 0.0) eval_fail(i, "division by zero");
                r = num / den;
                break;
            }
            case Kind::pow: r = std::pow(eval_node(n.a, bind), eval_node(n.b, bind)); break;
            case Kind::neg: r = -eval_node(n.a, bind); break;
            case Kind::call: {
                double x = eval_node(n.a, bind);
                switch (n.fn) {
                    case BuiltinFn::sin: r = std::sin(x); break;
                    case BuiltinFn::cos: r = std::cos(x); break;
                    case BuiltinFn::exp: r = std::exp(x); break;
                    case BuiltinFn::ln:
                        if (x <= 0.0) eval_fail(i, "ln of non-positive value");
                        r = std::log(x);
                        break;
                    case BuiltinFn::sqrt:
                        if (x < 0.0) eval_fail(i, "sqrt of negative value");
                        r = std::sqrt(x);
                        break;
                    case BuiltinFn::abs: r = std::fabs(x); break;
                    case BuiltinFn::gammafn:
                        if (x <= 0.0) eval_fail(i, "gammafn of non-positive value");
                        r = std::tgamma(x);
                        break;
                    default: eval_fail(i, "unknown function");
                }
                break;
            }
            default: eval_fail(i, "malformed expression");
        }
        if (!std::isfinite(r)) eval_fail(i, "non-finite result");
        return r;
    }

    static int prec_of(Kind k) {
        switch (k) {
            case Kind::add:
            case Kind::sub: return 1;
            case Kind::mul:
            case Kind::div: return 2;
            case Kind::neg: return 3;
            case Kind::pow: return 4;
            default: return 5;
        }
    }

    std::string render(int i, int) const {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        auto child = [&](int c, bool wrap) {
            std::string s = render(c, 0);
            return wrap ? "(" + s + ")" : s;
        };
        auto cp = [&](int c) { return prec_of(nodes_[static_cast<std::size_t>(c)].kind); };
        auto is_neg = [&](int c) { return nodes_[static_cast<std::size_t>(c)].kind == Kind::neg; };
        switch (n.kind) {
            case Kind::number: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                return std::string(buf);
            }
            case Kind::variable: return var_names_[static_cast<std::size_t>(n.var)];
            case Kind::add:
                return child(n.a, cp(n.a) < 1) + "+" + child(n.b, cp(n.b) <= 1 || is_neg(n.b));
            case Kind::sub:
                return child(n.a, cp(n.a) < 1) + "-" + child(n.b, cp(n.b) <= 1 || is_neg(n.b));
            case Kind::mul:
                return child(n.a, cp(n.a) < 2) + "*" + child(n.b, cp(n.b) <= 2 || is_neg(n.b));
            case Kind::div:
                return child(n.a, cp(n.a) < 2) + "/" + child(n.b, cp(n.b) <= 2 || is_neg(n.b));
            case Kind::pow:
                return child(n.a, cp(n.a) <= 4) + "^" + child(n.b, cp(n.b) < 4);
            case Kind::neg: return "-" + child(n.a, cp(n.a) < 3 || is_neg(n.a));
            case Kind::call:
                return std::string(kBuiltinNames[static_cast<std::size_t>(n.fn)]) + "(" +
                       render(n.a, 0) + ")";
        }
        return "?";
    }
};

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        Expr e;
        e.source_ = std::string(src_);
        skip_ws();
        e.root_ = parse_additive(e);
        skip_ws();
        if (pos_ != src_.size())
            fail("end of input or an operator");
        return e;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        throw ParseError("syntax error at byte " + std::to_string(pos_) + ": expected " +
                             expected,
                         pos_, expected);
    }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool peek(char c) const { return pos_ < src_.size() && src_[pos_] == c; }

    bool take(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    int push(Expr& e, Expr::Node n) {
        e.nodes_.push_back(n);
        return static_cast<int>(e.nodes_.size()) - 1;
    }

    int parse_additive(Expr& e) {
        int lhs = parse_multiplicative(e);
        for (;;) {
            skip_ws();
            std::uint32_t at = static_cast<std::uint32_t>(pos_);
            if (take('+')) {
                skip_ws();
                int rhs = parse_multiplicative(e);
                lhs = push(e, {Expr::Kind::add, {}, 0.0, lhs, rhs, -1, at});
            } else if (take('-')) {
                skip_ws();
                int rhs = parse_multiplicative(e);
                lhs = push(e, {Expr::Kind::sub, {}, 0.0, lhs, rhs, -1, at});
            } else {
                return lhs;
            }
        }
    }

    int parse_multiplicative(Expr& e) {
        int lhs = parse_unary(e);
        for (;;) {
            skip_ws();
            std::uint32_t at = static_cast<std::uint32_t>(pos_);
            if (take('*')) {
                skip_ws();
                int rhs = parse_unary(e);
                lhs = push(e, {Expr::Kind::mul, {}, 0.0, lhs, rhs, -1, at});
            } else if (take('/')) {
                skip_ws();
                int rhs = parse_unary(e);
                lhs = push(e, {Expr::Kind::div, {}, 0.0, lhs, rhs, -1, at});
            } else {
                return lhs;
            }
        }
    }

    int parse_unary(Expr& e) {
        skip_ws();
        std::uint32_t at = static_cast<std::uint32_t>(pos_);
        if (take('-')) {
            int c = parse_unary(e);
            return push(e, {Expr::Kind::neg, {}, 0.0, c, -1, -1, at});
        }
        return parse_power(e);
    }

    int parse_power(Expr& e) {
        int base = parse_primary(e);
        skip_ws();
        std::uint32_t at = static_cast<std::uint32_t>(pos_);
        if (take('^')) {
            skip_ws();
            int exp = parse_unary(e); // right-associative, exponent may be negated
            return push(e, {Expr::Kind::pow, {}, 0.0, base, exp, -1, at});
        }
        return base;
    }

    int parse_primary(Expr& e) {
        skip_ws();
        std::uint32_t at = static_cast<std::uint32_t>(pos_);
        if (take('(')) {
            int inner = parse_additive(e);
            skip_ws();
            if (!take(')')) fail("')'");
            return inner;
        }
        if (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                   src_[pos_] == '.'))
            return parse_number(e, at);
        if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
                                   src_[pos_] == '_'))
            return parse_ident(e, at);
        fail("number, identifier, '(' or '-'");
    }

    int parse_number(Expr& e, std::uint32_t at) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (take('.'))
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // 'e' belongs to something else; not part of the number
            }
        }
        std::string text(src_.substr(start, pos_ - start));
        if (text.empty() || text == ".") {
            pos_ = start;
            fail("number");
        }
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            pos_ = start;
            fail("number");
        }
        return push(e, {Expr::Kind::number, {}, v, -1, -1, -1, at});
    }

    int parse_ident(Expr& e, std::uint32_t at) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        skip_ws();
        if (peek('(')) {
            int fn = -1;
            for (std::size_t i = 0; i < kBuiltinNames.size(); ++i)
                if (kBuiltinNames[i] == name) fn = static_cast<int>(i);
            if (fn < 0) {
                pos_ = start;
                throw ParseError("unknown function '" + name + "' at byte " +
                                     std::to_string(start),
                                 start, "a known function name");
            }
            take('(');
            int arg = parse_additive(e);
            skip_ws();
            if (!take(')')) fail("')'");
            return push(e, {Expr::Kind::call, static_cast<BuiltinFn>(fn), 0.0, arg, -1, -1, at});
        }
        int var_id = -1;
        for (std::size_t i = 0; i < e.var_names_.size(); ++i)
            if (e.var_names_[i] == name) var_id = static_cast<int>(i);
        if (var_id < 0) {
            e.var_names_.push_back(name);
            e.var_slots_.push_back(role_slot(name));
            var_id = static_cast<int>(e.var_names_.size()) - 1;
        }
        return push(e, {Expr::Kind::variable, {}, 0.0, -1, -1, var_id, at});
    }
};

inline Expr Expr::parse(std::string_view source) { return Parser(source).run(); }

} // namespace fracvar::exprlang
