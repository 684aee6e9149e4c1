// Raw syntax trees, mirroring the grammar productions one to one. Name
// classification (program variable vs. symbolic constant) happens later,
// during validation, because the grammar cannot distinguish the two.
#pragma once

#include "probterm/diagnostics.hpp"
#include "probterm/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace probterm {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Nat, Name, Neg, Add, Sub, Mul, Div, Pow };
    Kind kind;
    SourcePos pos;
    Int nat;          // Kind::Nat
    std::string name; // Kind::Name
    ExprPtr lhs, rhs; // binary; Neg uses lhs only

    static ExprPtr make_nat(Int v, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Nat;
        e->nat = std::move(v);
        e->pos = p;
        return e;
    }
    static ExprPtr make_name(std::string n, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Name;
        e->name = std::move(n);
        e->pos = p;
        return e;
    }
    static ExprPtr make_unary(ExprPtr operand, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Neg;
        e->lhs = std::move(operand);
        e->pos = p;
        return e;
    }
    static ExprPtr make_binary(Kind k, ExprPtr l, ExprPtr r, SourcePos p) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        e->pos = p;
        return e;
    }
};

struct RawDraw {
    std::string dist_name;
    SourcePos dist_pos;
    std::vector<ExprPtr> params;
};

struct RawBranch {
    ExprPtr value;
    ExprPtr prob; // null for the trailing branch (implicit remainder)
};

struct RawAssign {
    std::string target;
    SourcePos pos;
    bool is_draw = false;
    RawDraw draw;                   // when is_draw
    std::vector<RawBranch> branches; // otherwise; single entry = plain assignment
};

struct RawGuard {
    ExprPtr lhs;
    char cop = '>';
    ExprPtr rhs;
    SourcePos pos;
};

struct RawProgram {
    std::vector<RawAssign> init;
    RawGuard guard;
    std::vector<RawAssign> body;
};

} // namespace probterm
