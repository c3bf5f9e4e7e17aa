#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cegen/minilang/ast.hpp"
#include "cegen/minilang/lexer.hpp"

namespace cegen::minilang {

struct Diag {
    std::uint32_t pos = 0;
    std::string message;
};

/// Result of the static check: lexing, parsing, name resolution, typing, and
/// the all-paths-return rule, in one pass.
struct CheckResult {
    std::shared_ptr<const Program> program;  // null when invalid
    std::optional<Diag> diagnostic;

    bool valid() const { return program != nullptr; }
};

CheckResult check(std::string_view text);

/// What the grammar and the symbol tables allow as the next lexeme at the end
/// of a committed prefix. Fixed lexemes live in `mask`; identifier classes
/// carry their candidate pools.
struct Expected {
    std::uint64_t mask = 0;  // bit per Lex value

    bool ident_use = false;     // in-scope value name
    bool ident_binder = false;  // fresh name being introduced
    bool ident_type = false;    // record name used as a type
    bool ident_new = false;     // record name after 'new'
    bool member = false;        // member of `member_names`' owner
    bool member_receiver_known = true;
    std::vector<std::string> member_names;  // empty for receivers without members

    void add(Lex k) { mask |= std::uint64_t{1} << static_cast<unsigned>(k); }
    bool has(Lex k) const { return (mask >> static_cast<unsigned>(k)) & 1; }
    bool any() const {
        return mask != 0 || ident_use || ident_binder || ident_type || ident_new || member;
    }
};

struct ScopeVar {
    std::string name;
    Type type;
    bool assignable = false;  // params and locals; record fields are read-only
};

/// Incremental analysis of text[0..caret). The committed lexemes are parsed
/// and checked exactly as `check` would; the trailing extendable piece is
/// reported as the boundary for the caller to interpret.
struct PrefixAnalysis {
    enum class Status { Dead, Alive };
    Status status = Status::Alive;
    Diag reason;  // when Dead

    Expected expected;
    Boundary boundary;
    std::vector<ScopeVar> scope_vars;       // innermost-last
    std::vector<std::string> record_names;  // records declared so far
    bool complete_program = false;  // committed region alone is a valid program

    bool dead() const { return status == Status::Dead; }
};

PrefixAnalysis analyze_prefix(std::string_view text);

const char* type_name(const Type& t, const Program* prog);

}  // namespace cegen::minilang
