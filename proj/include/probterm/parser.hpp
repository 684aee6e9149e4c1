// Lexer and recursive-descent parser for the loop language.
//
// Statements are line-based: everything before the `while` line is the
// initialization section, everything after it is the loop body; indentation
// is not significant and `#` starts a comment. `**` binds tighter than
// unary minus, which binds tighter than `*`/`/`, which bind tighter than
// `+`/`-`; `**` is right-associative.
#pragma once

#include "probterm/ast.hpp"
#include "probterm/diagnostics.hpp"

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace probterm {

inline const std::array<std::string_view, 11>& distribution_names() {
    static const std::array<std::string_view, 11> names = {
        "uniform", "gauss",         "laplace",     "bernoulli", "binomial", "geometric",
        "hypergeometric", "exponential", "beta", "chi-squared", "rayleigh"};
    return names;
}

namespace detail {

struct Token {
    enum class Kind {
        Ident, Nat, Assign, Plus, Minus, Star, Slash, Power, Less, Greater,
        Colon, Comma, Semicolon, At, LParen, RParen, Newline, End
    };
    Kind kind;
    std::string text;
    SourcePos pos;
};

class Lexer {
  public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                out.push_back({Token::Kind::Newline, "\n", here()});
                advance();
                continue;
            }
            if (c == '\r' || c == ' ' || c == '\t') {
                advance();
                continue;
            }
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                continue;
            }
            SourcePos p = here();
            if (isalpha(static_cast<unsigned char>(c))) {
                std::string ident;
                while (pos_ < src_.size() && isalnum(static_cast<unsigned char>(src_[pos_]))) {
                    ident += src_[pos_];
                    advance();
                }
                out.push_back({Token::Kind::Ident, ident, p});
                continue;
            }
            if (isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    num += src_[pos_];
                    advance();
                }
                if (pos_ < src_.size() && src_[pos_] == '.')
                    throw SyntaxError(here(), "decimal literals are not supported; use a fraction like 1/4");
                out.push_back({Token::Kind::Nat, num, p});
                continue;
            }
            switch (c) {
                case '=': push_single(out, Token::Kind::Assign, p); break;
                case '+': push_single(out, Token::Kind::Plus, p); break;
                case '-': push_single(out, Token::Kind::Minus, p); break;
                case '*':
                    advance();
                    if (pos_ < src_.size() && src_[pos_] == '*') {
                        advance();
                        out.push_back({Token::Kind::Power, "**", p});
                    } else {
                        out.push_back({Token::Kind::Star, "*", p});
                    }
                    break;
                case '/': push_single(out, Token::Kind::Slash, p); break;
                case '<': push_single(out, Token::Kind::Less, p); break;
                case '>': push_single(out, Token::Kind::Greater, p); break;
                case ':': push_single(out, Token::Kind::Colon, p); break;
                case ',': push_single(out, Token::Kind::Comma, p); break;
                case ';': push_single(out, Token::Kind::Semicolon, p); break;
                case '@': push_single(out, Token::Kind::At, p); break;
                case '(': push_single(out, Token::Kind::LParen, p); break;
                case ')': push_single(out, Token::Kind::RParen, p); break;
                default:
                    throw SyntaxError(p, std::string("unexpected character '") + c + "'");
            }
        }
        out.push_back({Token::Kind::End, "", here()});
        return out;
    }

  private:
    SourcePos here() const { return {line_, col_}; }
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void push_single(std::vector<Token>& out, Token::Kind k, SourcePos p) {
        out.push_back({k, std::string(1, src_[pos_]), p});
        advance();
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    RawProgram run() {
        RawProgram prog;
        bool seen_while = false;
        while (!at(Token::Kind::End)) {
            if (at(Token::Kind::Newline)) {
                next();
                continue;
            }
            if (at_ident("while")) {
                if (seen_while)
                    throw SyntaxError(peek().pos, "only a single loop per program is supported");
                prog.guard = parse_while_line();
                seen_while = true;
                continue;
            }
            RawAssign a = parse_assignment(seen_while);
            (seen_while ? prog.body : prog.init).push_back(std::move(a));
        }
        if (!seen_while) throw SyntaxError(peek().pos, "expected a 'while' loop");
        if (prog.body.empty())
            throw SyntaxError(peek().pos, "loop body must contain at least one assignment");
        return prog;
    }

  private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(idx_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() { return toks_[std::min(idx_++, toks_.size() - 1)]; }
    bool at(Token::Kind k) const { return peek().kind == k; }
    bool at_ident(std::string_view name) const {
        return at(Token::Kind::Ident) && peek().text == name;
    }
    const Token& expect(Token::Kind k, const std::string& what) {
        if (!at(k)) throw SyntaxError(peek().pos, "expected " + what + ", found '" + peek().text + "'");
        return next();
    }
    void end_line(const std::string& ctx) {
        if (at(Token::Kind::End)) return;
        if (!at(Token::Kind::Newline))
            throw SyntaxError(peek().pos, "unexpected '" + peek().text + "' after " + ctx);
        next();
    }

    RawGuard parse_while_line() {
        RawGuard g;
        g.pos = peek().pos;
        next(); // while
        g.lhs = parse_expr(0);
        if (at(Token::Kind::Less)) {
            g.cop = '<';
        } else if (at(Token::Kind::Greater)) {
            g.cop = '>';
        } else {
            throw SyntaxError(peek().pos, "expected '<' or '>' in loop guard");
        }
        next();
        g.rhs = parse_expr(0);
        expect(Token::Kind::Colon, "':' after loop guard");
        end_line("loop guard");
        return g;
    }

    RawAssign parse_assignment(bool in_body) {
        RawAssign a;
        const Token& target = expect(Token::Kind::Ident, "a variable name");
        if (target.text == "while")
            throw SyntaxError(target.pos, "'while' cannot be assigned");
        a.target = target.text;
        a.pos = target.pos;
        expect(Token::Kind::Assign, "'='");
        if (at_ident("RV") && peek(1).kind == Token::Kind::LParen) {
            a.is_draw = true;
            a.draw = parse_draw();
            end_line("distribution draw");
            return a;
        }
        a.branches = parse_branches(in_body);
        end_line("assignment");
        return a;
    }

    RawDraw parse_draw() {
        RawDraw d;
        next(); // RV
        next(); // (
        const Token& name = expect(Token::Kind::Ident, "a distribution name");
        d.dist_name = name.text;
        d.dist_pos = name.pos;
        // "chi-squared" is the one hyphenated name in the grammar
        if (d.dist_name == "chi" && at(Token::Kind::Minus) &&
            peek(1).kind == Token::Kind::Ident && peek(1).text == "squared") {
            next();
            next();
            d.dist_name = "chi-squared";
        }
        bool known = false;
        for (auto n : distribution_names()) known = known || n == d.dist_name;
        if (!known) throw UnknownDistribution(name.pos, d.dist_name);
        while (at(Token::Kind::Comma)) {
            next();
            d.params.push_back(parse_expr(0));
        }
        expect(Token::Kind::RParen, "')'");
        return d;
    }

    // <branches> ::= <poly> | <poly> @ <const>; <branches>
    // The trailing alternative carries no probability; it receives the
    // remainder. A single alternative is a plain assignment.
    std::vector<RawBranch> parse_branches(bool in_body) {
        std::vector<RawBranch> out;
        for (;;) {
            RawBranch b;
            b.value = parse_expr(0);
            if (at(Token::Kind::At)) {
                if (!in_body)
                    throw SyntaxError(peek().pos,
                                      "probabilistic branching is only allowed in the loop body");
                next();
                b.prob = parse_expr(0);
                out.push_back(std::move(b));
                expect(Token::Kind::Semicolon, "';' and a trailing alternative");
                continue;
            }
            out.push_back(std::move(b));
            return out;
        }
    }

    static int binary_prec(Token::Kind k) {
        switch (k) {
            case Token::Kind::Plus:
            case Token::Kind::Minus: return 1;
            case Token::Kind::Star:
            case Token::Kind::Slash: return 2;
            case Token::Kind::Power: return 4;
            default: return -1;
        }
    }

    ExprPtr parse_expr(int min_prec) {
        ExprPtr lhs = parse_unary();
        for (;;) {
            int prec = binary_prec(peek().kind);
            if (prec < 0 || prec < min_prec) return lhs;
            Token op = next();
            // '**' is right-associative, the rest left-associative
            int next_min = prec == 4 ? prec : prec + 1;
            ExprPtr rhs = parse_expr(next_min);
            Expr::Kind k;
            switch (op.kind) {
                case Token::Kind::Plus: k = Expr::Kind::Add; break;
                case Token::Kind::Minus: k = Expr::Kind::Sub; break;
                case Token::Kind::Star: k = Expr::Kind::Mul; break;
                case Token::Kind::Slash: k = Expr::Kind::Div; break;
                default: k = Expr::Kind::Pow; break;
            }
            lhs = Expr::make_binary(k, lhs, rhs, op.pos);
        }
    }

    ExprPtr parse_unary() {
        if (at(Token::Kind::Minus)) {
            SourcePos p = peek().pos;
            next();
            // unary minus binds looser than '**': -x**2 is -(x**2)
            ExprPtr operand = parse_expr(3);
            return Expr::make_unary(operand, p);
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (at(Token::Kind::Nat)) {
            Token t = next();
            return Expr::make_nat(Int(t.text), t.pos);
        }
        if (at(Token::Kind::Ident)) {
            Token t = next();
            if (t.text == "RV")
                throw SyntaxError(t.pos, "RV(...) draws may only appear alone on the right-hand side");
            return Expr::make_name(t.text, t.pos);
        }
        throw SyntaxError(peek().pos, "expected a number or a name, found '" + peek().text + "'");
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

} // namespace detail

// Parses one program. Throws SyntaxError / UnknownDistribution on input
// outside the grammar.
inline RawProgram parse_program(std::string_view source) {
    detail::Lexer lexer(source);
    detail::Parser parser(lexer.run());
    return parser.run();
}

} // namespace probterm
