#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>

#include "hcx/error.hpp"

namespace hcx {

/// Compiled arithmetic expression in x and y.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | primary
///   primary := number | 'x' | 'y' | ('exp' | 'sin') '(' expr ')' | '(' expr ')'
class Expression {
public:
    static Expression parse(const std::string& text) {
        Parser p{text, 0};
        Expression e;
        e.source_ = text;
        e.root_ = p.expr();
        p.skip();
        if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
        return e;
    }

    double operator()(double x, double y = 0.0) const {
        require(root_ != nullptr, ErrorCode::InvalidArgument, "evaluating an empty expression");
        return eval(*root_, x, y);
    }
    const std::string& source() const noexcept { return source_; }

private:
    enum class Op { Number, X, Y, Add, Sub, Mul, Div, Neg, Exp, Sin };
    struct Node {
        Op op;
        double value = 0.0;
        std::shared_ptr<const Node> lhs, rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    static NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr, double v = 0.0) {
        return std::make_shared<const Node>(Node{op, v, std::move(l), std::move(r)});
    }

    static double eval(const Node& n, double x, double y) {
        switch (n.op) {
            case Op::Number: return n.value;
            case Op::X: return x;
            case Op::Y: return y;
            case Op::Add: return eval(*n.lhs, x, y) + eval(*n.rhs, x, y);
            case Op::Sub: return eval(*n.lhs, x, y) - eval(*n.rhs, x, y);
            case Op::Mul: return eval(*n.lhs, x, y) * eval(*n.rhs, x, y);
            case Op::Div: return eval(*n.lhs, x, y) / eval(*n.rhs, x, y);
            case Op::Neg: return -eval(*n.lhs, x, y);
            case Op::Exp: return std::exp(eval(*n.lhs, x, y));
            case Op::Sin: return std::sin(eval(*n.lhs, x, y));
        }
        return 0.0;
    }

    struct Parser {
        const std::string& s;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& what) const {
            throw Error(ErrorCode::ParseError, "expression '" + s + "' at " + std::to_string(pos) + ": " + what);
        }
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool accept(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!accept(c)) fail(std::string("expected '") + c + "'");
        }

        NodePtr expr() {
            NodePtr l = term();
            for (;;) {
                if (accept('+')) l = make(Op::Add, l, term());
                else if (accept('-')) l = make(Op::Sub, l, term());
                else return l;
            }
        }
        NodePtr term() {
            NodePtr l = unary();
            for (;;) {
                if (accept('*')) l = make(Op::Mul, l, unary());
                else if (accept('/')) l = make(Op::Div, l, unary());
                else return l;
            }
        }
        NodePtr unary() {
            if (accept('-')) return make(Op::Neg, unary());
            if (accept('+')) return unary();
            return primary();
        }
        NodePtr primary() {
            skip();
            if (pos >= s.size()) fail("unexpected end of input");
            if (accept('(')) {
                NodePtr e = expr();
                expect(')');
                return e;
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const char* begin = s.c_str() + pos;
                char* end = nullptr;
                const double v = std::strtod(begin, &end);
                if (end == begin) fail("bad number");
                for (const char* q = begin; q != end; ++q)
                    if (*q == 'x' || *q == 'X') fail("hexadecimal literals are not supported");
                pos += static_cast<std::size_t>(end - begin);
                return make(Op::Number, nullptr, nullptr, v);
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t end = pos;
                while (end < s.size() && std::isalnum(static_cast<unsigned char>(s[end]))) ++end;
                const std::string word = s.substr(pos, end - pos);
                pos = end;
                if (word == "x") return make(Op::X);
                if (word == "y") return make(Op::Y);
                if (word == "exp" || word == "sin") {
                    expect('(');
                    NodePtr arg = expr();
                    expect(')');
                    return make(word == "exp" ? Op::Exp : Op::Sin, arg);
                }
                pos -= word.size();
                fail("unknown identifier '" + word + "'");
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }
    };

    std::string source_;
    NodePtr root_;
};

}  // namespace hcx
