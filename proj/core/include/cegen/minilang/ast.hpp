#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cegen::minilang {

struct Span {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;  // [begin, end) character offsets
};

enum class TypeKind : std::uint8_t { Int, Bool, Str, Record, Unknown };

/// Static type. `Unknown` only appears transiently while analyzing a program
/// prefix whose rightmost expression may still grow; it never survives a
/// successful full check.
struct Type {
    TypeKind kind = TypeKind::Unknown;
    int record = -1;  // index into Program::records when kind == Record

    static Type int_() { return {TypeKind::Int, -1}; }
    static Type bool_() { return {TypeKind::Bool, -1}; }
    static Type str_() { return {TypeKind::Str, -1}; }
    static Type record_(int idx) { return {TypeKind::Record, idx}; }
    static Type unknown() { return {TypeKind::Unknown, -1}; }

    bool is(TypeKind k) const { return kind == k; }
    bool known() const { return kind != TypeKind::Unknown; }
    friend bool operator==(const Type&, const Type&) = default;
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* binop_spelling(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind : std::uint8_t {
        IntLit, BoolLit, StrLit, VarRef, FieldAccess, MethodCall, New, Binary, Paren
    };
    Kind kind;
    Span span;
    Type type;

    std::int64_t int_value = 0;
    bool bool_value = false;
    std::string str_value;        // string literal contents, without quotes
    std::string name;             // VarRef / member / record name
    BinOp op = BinOp::Add;
    ExprPtr lhs;                  // Binary lhs; receiver for member ops; Paren inner
    ExprPtr rhs;                  // Binary rhs
    std::vector<ExprPtr> args;    // MethodCall / New
    int member_index = -1;        // resolved field/method index
    int record_index = -1;        // receiver record / New target
    Span member_span;             // the member name lexeme itself
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
    std::vector<StmtPtr> stmts;
    Span span;
};

struct Stmt {
    enum class Kind : std::uint8_t { Decl, Assign, Assert, Return, If };
    Kind kind;
    Span span;

    Type decl_type;          // Decl
    std::string name;        // Decl / Assign target
    ExprPtr value;           // Decl / Assign / Assert / Return
    ExprPtr cond;            // If
    Block then_block;        // If
    Block else_block;        // If
    bool has_else = false;
};

struct Param {
    std::string name;
    Type type;
};

struct Field {
    std::string name;
    Type type;
    Span span;
};

struct Method {
    std::string name;
    Type return_type;
    std::vector<Param> params;
    Block body;
    Span span;
};

struct RecordDecl {
    std::string name;
    std::vector<Field> fields;
    std::vector<Method> methods;
    Span span;

    // Fields and methods share one member namespace.
    int find_field(const std::string& n) const;
    int find_method(const std::string& n) const;
};

struct FuncDecl {
    std::string name;
    Type return_type;
    std::vector<Param> params;
    Block body;
    Span span;
};

struct Program {
    std::vector<RecordDecl> records;
    std::vector<FuncDecl> functions;
    int main_index = -1;

    const FuncDecl& main() const { return functions.at(static_cast<std::size_t>(main_index)); }
};

}  // namespace cegen::minilang
