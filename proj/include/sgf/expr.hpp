#ifndef SGF_EXPR_HPP
#define SGF_EXPR_HPP

// Small expression language for scalar functions of (x, y):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' intliteral)?
//   atom   := number | 'x' | 'y' | '(' expr ')' | ident '(' expr ')'
// with ident in {sin, cos, exp, sqrt}. Gradients come from forward-mode
// dual numbers carrying both partials at once.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <memory>
#include <sstream>
#include <string>

#include "sgf/errors.hpp"

namespace sgf {

struct Dual2 {
    double v = 0.0;   // value
    double dx = 0.0;  // d/dx
    double dy = 0.0;  // d/dy

    friend Dual2 operator+(const Dual2& a, const Dual2& b) {
        return {a.v + b.v, a.dx + b.dx, a.dy + b.dy};
    }
    friend Dual2 operator-(const Dual2& a, const Dual2& b) {
        return {a.v - b.v, a.dx - b.dx, a.dy - b.dy};
    }
    friend Dual2 operator-(const Dual2& a) { return {-a.v, -a.dx, -a.dy}; }
    friend Dual2 operator*(const Dual2& a, const Dual2& b) {
        return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
    }
    friend Dual2 operator/(const Dual2& a, const Dual2& b) {
        const double inv = 1.0 / b.v;
        const double q = a.v * inv;
        return {q, (a.dx - q * b.dx) * inv, (a.dy - q * b.dy) * inv};
    }
};

inline Dual2 dual_sin(const Dual2& a) {
    const double c = std::cos(a.v);
    return {std::sin(a.v), c * a.dx, c * a.dy};
}
inline Dual2 dual_cos(const Dual2& a) {
    const double s = -std::sin(a.v);
    return {std::cos(a.v), s * a.dx, s * a.dy};
}
inline Dual2 dual_exp(const Dual2& a) {
    const double e = std::exp(a.v);
    return {e, e * a.dx, e * a.dy};
}
inline Dual2 dual_sqrt(const Dual2& a) {
    const double r = std::sqrt(a.v);
    const double d = 0.5 / r;
    return {r, d * a.dx, d * a.dy};
}
inline Dual2 dual_pow(Dual2 base, int n) {
    // n >= 0 by the grammar
    Dual2 acc{1.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) acc = acc * base;
    return acc;
}

struct parse_error : domain_error {
    parse_error(const std::string& msg, size_t offset)
        : domain_error(msg + " (at byte " + std::to_string(offset) + ")"), where(offset) {}
    size_t where;
};

class Expr {
public:
    enum class Kind : std::uint8_t { Num, VarX, VarY, Add, Sub, Mul, Div, Neg, Pow, Call };
    enum class Fn : std::uint8_t { Sin, Cos, Exp, Sqrt };

    static Expr parse(const std::string& src);

    double eval(double x, double y) const { return eval_dual(x, y).v; }
    Dual2 eval_dual(double x, double y) const { return root_->eval({x, 1.0, 0.0}, {y, 0.0, 1.0}); }

    std::string print() const {
        std::ostringstream os;
        os.precision(17);
        root_->print(os);
        return os.str();
    }

private:
    struct Node {
        Kind kind;
        double num = 0.0;
        int ipow = 0;
        Fn fn = Fn::Sin;
        std::shared_ptr<const Node> a, b;

        Dual2 eval(const Dual2& x, const Dual2& y) const {
            switch (kind) {
                case Kind::Num: return {num, 0.0, 0.0};
                case Kind::VarX: return x;
                case Kind::VarY: return y;
                case Kind::Add: return a->eval(x, y) + b->eval(x, y);
                case Kind::Sub: return a->eval(x, y) - b->eval(x, y);
                case Kind::Mul: return a->eval(x, y) * b->eval(x, y);
                case Kind::Div: return a->eval(x, y) / b->eval(x, y);
                case Kind::Neg: return -a->eval(x, y);
                case Kind::Pow: return dual_pow(a->eval(x, y), ipow);
                case Kind::Call:
                    switch (fn) {
                        case Fn::Sin: return dual_sin(a->eval(x, y));
                        case Fn::Cos: return dual_cos(a->eval(x, y));
                        case Fn::Exp: return dual_exp(a->eval(x, y));
                        case Fn::Sqrt: return dual_sqrt(a->eval(x, y));
                    }
            }
            return {};
        }

        // Fully parenthesized, so the printed form reparses to the same tree.
        void print(std::ostream& os) const {
            switch (kind) {
                case Kind::Num: os << num; break;
                case Kind::VarX: os << 'x'; break;
                case Kind::VarY: os << 'y'; break;
                case Kind::Add: os << '('; a->print(os); os << " + "; b->print(os); os << ')'; break;
                case Kind::Sub: os << '('; a->print(os); os << " - "; b->print(os); os << ')'; break;
                case Kind::Mul: os << '('; a->print(os); os << " * "; b->print(os); os << ')'; break;
                case Kind::Div: os << '('; a->print(os); os << " / "; b->print(os); os << ')'; break;
                case Kind::Neg: os << "(-"; a->print(os); os << ')'; break;
                case Kind::Pow: os << '('; a->print(os); os << '^' << ipow << ')'; break;
                case Kind::Call:
                    switch (fn) {
                        case Fn::Sin: os << "sin"; break;
                        case Fn::Cos: os << "cos"; break;
                        case Fn::Exp: os << "exp"; break;
                        case Fn::Sqrt: os << "sqrt"; break;
                    }
                    os << '(';
                    a->print(os);
                    os << ')';
                    break;
            }
        }
    };

    using NodePtr = std::shared_ptr<const Node>;

    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    static NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    class Parser {
    public:
        explicit Parser(const std::string& src) : src_(src) {}

        NodePtr run() {
            NodePtr e = expr();
            skip_ws();
            if (pos_ != src_.size())
                throw parse_error("unexpected trailing input; expected operator or end", pos_);
            return e;
        }

    private:
        void skip_ws() {
            while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
        }

        bool eat(char c) {
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }

        char peek() {
            skip_ws();
            return pos_ < src_.size() ? src_[pos_] : '\0';
        }

        NodePtr expr() {
            NodePtr lhs = term();
            for (;;) {
                if (eat('+')) lhs = make(Kind::Add, lhs, term());
                else if (eat('-')) lhs = make(Kind::Sub, lhs, term());
                else return lhs;
            }
        }

        NodePtr term() {
            NodePtr lhs = factor();
            for (;;) {
                if (eat('*')) lhs = make(Kind::Mul, lhs, factor());
                else if (eat('/')) lhs = make(Kind::Div, lhs, factor());
                else return lhs;
            }
        }

        NodePtr factor() {
            if (eat('-')) return make(Kind::Neg, factor());
            return power();
        }

        NodePtr power() {
            NodePtr base = atom();
            if (eat('^')) {
                skip_ws();
                const size_t start = pos_;
                int n = 0;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    n = n * 10 + (src_[pos_++] - '0');
                if (pos_ == start)
                    throw parse_error("expected integer literal after '^'", pos_);
                auto node = make(Kind::Pow, base);
                const_cast<Node*>(node.get())->ipow = n;
                return node;
            }
            return base;
        }

        NodePtr atom() {
            skip_ws();
            if (pos_ >= src_.size())
                throw parse_error("expected number, 'x', 'y', '(' or function name", pos_);
            const char c = src_[pos_];
            if (c == '(') {
                ++pos_;
                NodePtr e = expr();
                if (!eat(')')) throw parse_error("expected ')'", pos_);
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
            if (std::isalpha(static_cast<unsigned char>(c))) return ident();
            throw parse_error(std::string("unexpected character '") + c +
                                  "'; expected number, 'x', 'y', '(' or function name",
                              pos_);
        }

        NodePtr number() {
            const size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            // exponent part, e.g. 1e-3
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t p = pos_ + 1;
                if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
                if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                    pos_ = p;
                    while (pos_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                }
            }
            double val = 0.0;
            try {
                val = std::stod(src_.substr(start, pos_ - start));
            } catch (const std::exception&) {
                throw parse_error("malformed number literal", start);
            }
            auto node = make(Kind::Num);
            const_cast<Node*>(node.get())->num = val;
            return node;
        }

        NodePtr ident() {
            const size_t start = pos_;
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            const std::string name = src_.substr(start, pos_ - start);
            if (name == "x") return make(Kind::VarX);
            if (name == "y") return make(Kind::VarY);
            Fn fn;
            if (name == "sin") fn = Fn::Sin;
            else if (name == "cos") fn = Fn::Cos;
            else if (name == "exp") fn = Fn::Exp;
            else if (name == "sqrt") fn = Fn::Sqrt;
            else throw parse_error("unknown identifier '" + name + "'", start);
            if (!eat('(')) throw parse_error("expected '(' after function name", pos_);
            NodePtr arg = expr();
            if (!eat(')')) throw parse_error("expected ')'", pos_);
            auto node = make(Kind::Call, arg);
            const_cast<Node*>(node.get())->fn = fn;
            return node;
        }

        const std::string& src_;
        size_t pos_ = 0;
    };

    NodePtr root_;
};

inline Expr Expr::parse(const std::string& src) { return Expr(Parser(src).run()); }

}  // namespace sgf

#endif
