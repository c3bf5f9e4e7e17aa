#include "cegen/minilang/check.hpp"

#include <cassert>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace cegen::minilang {

namespace {

constexpr Lex kExprStartFixed[] = {Lex::IntLit, Lex::StrLit, Lex::KwTrue, Lex::KwFalse,
                                   Lex::KwNew, Lex::LParen};
constexpr Lex kTypeKeywords[] = {Lex::KwInt, Lex::KwBool, Lex::KwStr};

struct Level {
    std::initializer_list<Lex> ops;
};

// Lowest binding first.
const Level kLevels[] = {
    {{Lex::OrOr}},
    {{Lex::AndAnd}},
    {{Lex::Eq, Lex::Ne}},
    {{Lex::Lt, Lex::Le, Lex::Gt, Lex::Ge}},
    {{Lex::Plus, Lex::Minus}},
    {{Lex::Star, Lex::Slash}},
};

BinOp binop_of(Lex k) {
    switch (k) {
        case Lex::Plus: return BinOp::Add;
        case Lex::Minus: return BinOp::Sub;
        case Lex::Star: return BinOp::Mul;
        case Lex::Slash: return BinOp::Div;
        case Lex::Eq: return BinOp::Eq;
        case Lex::Ne: return BinOp::Ne;
        case Lex::Lt: return BinOp::Lt;
        case Lex::Le: return BinOp::Le;
        case Lex::Gt: return BinOp::Gt;
        case Lex::Ge: return BinOp::Ge;
        case Lex::AndAnd: return BinOp::And;
        case Lex::OrOr: return BinOp::Or;
        default: assert(false); return BinOp::Add;
    }
}

class Parser {
public:
    Parser(std::string_view text, LexMode mode) : mode_(mode), text_size_(text.size()) {
        lexed_ = lex(text, mode);
    }

    CheckResult run_complete() {
        CheckResult result;
        if (lexed_.error) {
            result.diagnostic = Diag{lexed_.error->pos, lexed_.error->message};
            return result;
        }
        try {
            parse_program();
            result.program = std::move(program_);
        } catch (const Fatal&) {
            result.diagnostic = diag_;
        }
        return result;
    }

    PrefixAnalysis run_prefix() {
        PrefixAnalysis out;
        out.boundary = lexed_.boundary;
        if (lexed_.error) {
            out.status = PrefixAnalysis::Status::Dead;
            out.reason = Diag{lexed_.error->pos, lexed_.error->message};
            return out;
        }
        try {
            parse_program();
            // Parsed every committed lexeme as a whole program.
            out.complete_program = true;
            snapshot(out);
        } catch (const Incomplete&) {
            snapshot(out);
        } catch (const Fatal&) {
            out.status = PrefixAnalysis::Status::Dead;
            out.reason = diag_;
        }
        return out;
    }

private:
    struct Incomplete {};
    struct Fatal {};

    LexMode mode_;
    std::size_t text_size_ = 0;
    LexOutput lexed_;
    std::size_t pos_ = 0;

    std::shared_ptr<Program> program_ = std::make_shared<Program>();
    Diag diag_;
    Expected exp_;

    // Symbol tables.
    std::unordered_map<std::string, int> record_index_;
    std::unordered_map<std::string, int> function_index_;
    std::vector<std::vector<ScopeVar>> scopes_;
    Type current_return_ = Type::unknown();
    bool seen_function_ = false;

    // ---- cursor ---------------------------------------------------------

    bool has(std::size_t k = 0) const { return pos_ + k < lexed_.lexemes.size(); }
    const Lexeme& peek(std::size_t k = 0) const { return lexed_.lexemes[pos_ + k]; }
    const Lexeme& advance() { return lexed_.lexemes[pos_++]; }
    bool at_end() const { return pos_ == lexed_.lexemes.size(); }

    [[noreturn]] void fatal(std::uint32_t p, std::string msg) {
        diag_ = Diag{p, std::move(msg)};
        throw Fatal{};
    }
    [[noreturn]] void fatal_here(std::string msg) {
        fatal(has() ? peek().begin : end_pos(), std::move(msg));
    }
    std::uint32_t end_pos() const {
        return lexed_.lexemes.empty() ? 0 : lexed_.lexemes.back().end;
    }

    /// Committed input ran out. In prefix mode the accumulated expectations
    /// describe what could come next; in complete mode this is an error.
    [[noreturn]] void end_of_input(const char* what) {
        if (mode_ == LexMode::Prefix) throw Incomplete{};
        fatal(static_cast<std::uint32_t>(text_size_),
              std::string("unexpected end of input, expected ") + what);
    }

    void need(Lex k, const char* what) {
        if (!has()) {
            exp_.add(k);
            end_of_input(what);
        }
        if (peek().kind != k) {
            fatal(peek().begin, std::string("expected ") + what + ", found " +
                                    lex_name(peek().kind));
        }
        ++pos_;
    }

    // ---- expectation helpers ---------------------------------------------

    void want(Lex k) { exp_.add(k); }
    void want_type_starts() {
        for (Lex k : kTypeKeywords) exp_.add(k);
        exp_.ident_type = true;
    }
    void want_expr_starts() {
        for (Lex k : kExprStartFixed) exp_.add(k);
        exp_.ident_use = true;
    }
    void want_binder() { exp_.ident_binder = true; }
    void want_member(const Type& receiver) {
        exp_.member = true;
        exp_.member_receiver_known = receiver.known();
        if (receiver.is(TypeKind::Record)) {
            const RecordDecl& r = program_->records[static_cast<std::size_t>(receiver.record)];
            for (const Field& f : r.fields) exp_.member_names.push_back(f.name);
            for (const Method& m : r.methods) exp_.member_names.push_back(m.name);
        }
    }

    void snapshot(PrefixAnalysis& out) {
        out.expected = exp_;
        for (const auto& frame : scopes_)
            for (const ScopeVar& v : frame) out.scope_vars.push_back(v);
        for (const RecordDecl& r : program_->records) out.record_names.push_back(r.name);
    }

    // ---- scopes ------------------------------------------------------------

    void push_scope() { scopes_.emplace_back(); }
    void pop_scope() { scopes_.pop_back(); }

    const ScopeVar* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
            for (const ScopeVar& v : *it)
                if (v.name == name) return &v;
        return nullptr;
    }

    void declare(const std::string& name, Type t, bool assignable, std::uint32_t pos) {
        if (lookup(name)) fatal(pos, "'" + name + "' is already in scope");
        if (record_index_.count(name) || function_index_.count(name))
            fatal(pos, "'" + name + "' conflicts with a top-level declaration");
        scopes_.back().push_back(ScopeVar{name, t, assignable});
    }

    // ---- types ---------------------------------------------------------------

    std::string describe(const Type& t) const { return type_name(t, program_.get()); }

    Type parse_type() {
        if (!has()) {
            want_type_starts();
            end_of_input("a type");
        }
        const Lexeme& lx = advance();
        switch (lx.kind) {
            case Lex::KwInt: return Type::int_();
            case Lex::KwBool: return Type::bool_();
            case Lex::KwStr: return Type::str_();
            case Lex::Ident: {
                auto it = record_index_.find(lx.text);
                if (it == record_index_.end())
                    fatal(lx.begin, "unknown type '" + lx.text + "'");
                return Type::record_(it->second);
            }
            default:
                fatal(lx.begin, std::string("expected a type, found ") + lex_name(lx.kind));
        }
    }

    // ---- program -----------------------------------------------------------

    void parse_program() {
        while (true) {
            if (!has()) {
                want_type_starts();
                if (!seen_function_) want(Lex::KwRecord);
                if (mode_ == LexMode::Complete) break;
                // Prefix mode: a complete program must already have main.
                if (!seen_function_ || program_->main_index < 0) throw Incomplete{};
                return;
            }
            if (peek().kind == Lex::KwRecord) {
                if (seen_function_)
                    fatal(peek().begin, "record declarations must precede functions");
                parse_record();
            } else {
                parse_function();
                seen_function_ = true;
            }
        }
        if (!seen_function_) fatal(end_pos(), "program has no function declarations");
        if (program_->main_index < 0) fatal(end_pos(), "program has no 'main' function");
    }

    void parse_record() {
        const Lexeme& kw = advance();  // 'record'
        if (!has()) {
            want_binder();
            end_of_input("record name");
        }
        if (peek().kind != Lex::Ident) fatal_here("expected record name");
        const Lexeme& name = advance();
        if (record_index_.count(name.text) || function_index_.count(name.text))
            fatal(name.begin, "duplicate top-level name '" + name.text + "'");

        record_index_.emplace(name.text, static_cast<int>(program_->records.size()));
        program_->records.push_back(RecordDecl{});
        RecordDecl& rec = program_->records.back();
        rec.name = name.text;
        rec.span.begin = kw.begin;
        const int rec_idx = static_cast<int>(program_->records.size() - 1);

        need(Lex::LBrace, "'{'");
        bool methods_started = false;
        while (true) {
            if (!has()) {
                want(Lex::RBrace);
                want_type_starts();
                end_of_input("a member declaration or '}'");
            }
            if (peek().kind == Lex::RBrace) {
                rec.span.end = advance().end;
                return;
            }
            Type member_type = parse_type();
            if (!has()) {
                want_binder();
                end_of_input("member name");
            }
            if (peek().kind != Lex::Ident) fatal_here("expected member name");
            const Lexeme& member_name = advance();
            if (rec.find_field(member_name.text) >= 0 || rec.find_method(member_name.text) >= 0)
                fatal(member_name.begin,
                      "duplicate member '" + member_name.text + "' in record '" + rec.name + "'");

            if (!has()) {
                if (!methods_started) want(Lex::Semi);
                want(Lex::LParen);
                end_of_input("';' or '('");
            }
            if (peek().kind == Lex::Semi) {
                if (methods_started)
                    fatal(peek().begin, "fields must precede methods in a record");
                const Lexeme& semi = advance();
                rec.fields.push_back(Field{member_name.text, member_type,
                                           Span{member_name.begin, semi.end}});
                continue;
            }
            if (peek().kind != Lex::LParen) fatal_here("expected ';' or '('");
            methods_started = true;

            Method m;
            m.name = member_name.text;
            m.return_type = member_type;
            m.span.begin = member_name.begin;
            parse_params(m.params, /*is_main=*/false);

            // Declare the signature before the body so methods can recurse.
            rec.methods.push_back(std::move(m));
            Method& stored = rec.methods.back();

            push_scope();  // record fields, readable by bare name
            for (const Field& f : rec.fields)
                scopes_.back().push_back(ScopeVar{f.name, f.type, false});
            push_scope();  // parameters
            for (const Param& p : stored.params) {
                if (lookup_in_frame(scopes_.back(), p.name) ||
                    lookup_in_frame(scopes_[scopes_.size() - 2], p.name))
                    fatal(member_name.begin, "parameter '" + p.name + "' collides with a field");
                scopes_.back().push_back(ScopeVar{p.name, p.type, true});
            }
            current_return_ = stored.return_type;
            (void)rec_idx;
            parse_body_block(stored.body, "method '" + rec.name + "." + stored.name + "'");
            pop_scope();
            pop_scope();
            stored.span.end = stored.body.span.end;
        }
    }

    static const ScopeVar* lookup_in_frame(const std::vector<ScopeVar>& frame,
                                           const std::string& name) {
        for (const ScopeVar& v : frame)
            if (v.name == name) return &v;
        return nullptr;
    }

    void parse_function() {
        Type ret = parse_type();
        if (!has()) {
            want_binder();
            end_of_input("function name");
        }
        if (peek().kind != Lex::Ident) fatal_here("expected function name");
        const Lexeme& name = advance();
        if (record_index_.count(name.text) || function_index_.count(name.text))
            fatal(name.begin, "duplicate top-level name '" + name.text + "'");

        FuncDecl fn;
        fn.name = name.text;
        fn.return_type = ret;
        fn.span.begin = name.begin;
        const bool is_main = name.text == "main";
        parse_params(fn.params, is_main);

        function_index_.emplace(fn.name, static_cast<int>(program_->functions.size()));
        program_->functions.push_back(std::move(fn));
        FuncDecl& stored = program_->functions.back();
        if (is_main) program_->main_index = static_cast<int>(program_->functions.size() - 1);

        push_scope();
        for (const Param& p : stored.params)
            declare(p.name, p.type, true, name.begin);
        current_return_ = stored.return_type;
        parse_body_block(stored.body, "function '" + stored.name + "'");
        pop_scope();
        stored.span.end = stored.body.span.end;
    }

    void parse_params(std::vector<Param>& out, bool is_main) {
        need(Lex::LParen, "'('");
        if (!has()) {
            want(Lex::RParen);
            if (!is_main) want_type_starts();
            end_of_input("parameter list or ')'");
        }
        if (peek().kind == Lex::RParen) {
            ++pos_;
            return;
        }
        if (is_main) fatal(peek().begin, "'main' takes no parameters");
        while (true) {
            Type t = parse_type();
            if (!has()) {
                want_binder();
                end_of_input("parameter name");
            }
            if (peek().kind != Lex::Ident) fatal_here("expected parameter name");
            const Lexeme& pname = advance();
            for (const Param& p : out)
                if (p.name == pname.text)
                    fatal(pname.begin, "duplicate parameter '" + pname.text + "'");
            if (record_index_.count(pname.text) || function_index_.count(pname.text))
                fatal(pname.begin, "'" + pname.text + "' conflicts with a top-level declaration");
            out.push_back(Param{pname.text, t});
            if (!has()) {
                want(Lex::Comma);
                want(Lex::RParen);
                end_of_input("',' or ')'");
            }
            if (peek().kind == Lex::Comma) {
                ++pos_;
                continue;
            }
            if (peek().kind == Lex::RParen) {
                ++pos_;
                return;
            }
            fatal_here("expected ',' or ')'");
        }
    }

    /// Function or method body; enforces the all-paths-return rule at the
    /// closing brace.
    void parse_body_block(Block& out, const std::string& owner) {
        parse_block(out);
        if (!block_returns(out))
            fatal(out.span.end > 0 ? out.span.end - 1 : 0,
                  "not all paths through " + owner + " return a value");
    }

    void parse_block(Block& out) {
        need(Lex::LBrace, "'{'");
        out.span.begin = lexed_.lexemes[pos_ - 1].begin;
        push_scope();
        while (true) {
            if (!has()) {
                want_stmt_starts();
                want(Lex::RBrace);
                end_of_input("a statement or '}'");
            }
            if (peek().kind == Lex::RBrace) {
                out.span.end = advance().end;
                pop_scope();
                return;
            }
            out.stmts.push_back(parse_stmt());
        }
    }

    void want_stmt_starts() {
        want(Lex::KwAssert);
        want(Lex::KwReturn);
        want(Lex::KwIf);
        for (Lex k : kTypeKeywords) want(k);
        exp_.ident_type = true;  // declaration with a record type
        exp_.ident_use = true;   // assignment target
    }

    StmtPtr parse_stmt() {
        const Lexeme& first = peek();
        switch (first.kind) {
            case Lex::KwAssert: return parse_assert();
            case Lex::KwReturn: return parse_return();
            case Lex::KwIf: return parse_if();
            case Lex::KwInt:
            case Lex::KwBool:
            case Lex::KwStr:
                return parse_decl();
            case Lex::Ident: {
                // Declaration with record type, or assignment.
                if (!has(1)) {
                    const ScopeVar* var = lookup(first.text);
                    if (var) {
                        if (var->assignable) want(Lex::Assign);
                    } else if (record_index_.count(first.text)) {
                        want_binder();
                    } else {
                        fatal(first.begin, "unknown identifier '" + first.text + "'");
                    }
                    ++pos_;
                    end_of_input("'=' or a declaration");
                }
                if (peek(1).kind == Lex::Ident) return parse_decl();
                if (peek(1).kind == Lex::Assign) return parse_assign();
                fatal(peek(1).begin,
                      "expected '=' or a declared name after '" + first.text + "'");
            }
            default:
                fatal(first.begin,
                      std::string("expected a statement, found ") + lex_name(first.kind));
        }
    }

    StmtPtr parse_decl() {
        auto stmt = std::make_unique<Stmt>();
        stmt->kind = Stmt::Kind::Decl;
        stmt->span.begin = peek().begin;
        stmt->decl_type = parse_type();
        if (!has()) {
            want_binder();
            end_of_input("variable name");
        }
        if (peek().kind != Lex::Ident) fatal_here("expected variable name");
        const Lexeme& name = advance();
        stmt->name = name.text;
        need(Lex::Assign, "'='");
        stmt->value = parse_expr();
        need(Lex::Semi, "';'");
        stmt->span.end = lexed_.lexemes[pos_ - 1].end;
        if (stmt->value->type.known() && !(stmt->value->type == stmt->decl_type))
            fatal(stmt->value->span.begin, "cannot initialize '" + stmt->name + "' of type " +
                                               describe(stmt->decl_type) + " with a value of type " +
                                               describe(stmt->value->type));
        declare(stmt->name, stmt->decl_type, true, name.begin);
        return stmt;
    }

    StmtPtr parse_assign() {
        auto stmt = std::make_unique<Stmt>();
        stmt->kind = Stmt::Kind::Assign;
        const Lexeme& name = advance();
        stmt->span.begin = name.begin;
        stmt->name = name.text;
        const ScopeVar* var = lookup(name.text);
        if (!var) fatal(name.begin, "unknown identifier '" + name.text + "'");
        if (!var->assignable)
            fatal(name.begin, "cannot assign to '" + name.text + "'");
        const Type target = var->type;
        need(Lex::Assign, "'='");
        stmt->value = parse_expr();
        need(Lex::Semi, "';'");
        stmt->span.end = lexed_.lexemes[pos_ - 1].end;
        if (stmt->value->type.known() && !(stmt->value->type == target))
            fatal(stmt->value->span.begin, "cannot assign a value of type " +
                                               describe(stmt->value->type) + " to '" + name.text +
                                               "' of type " + describe(target));
        return stmt;
    }

    StmtPtr parse_assert() {
        auto stmt = std::make_unique<Stmt>();
        stmt->kind = Stmt::Kind::Assert;
        stmt->span.begin = advance().begin;  // 'assert'
        stmt->value = parse_expr();
        need(Lex::Semi, "';'");
        stmt->span.end = lexed_.lexemes[pos_ - 1].end;
        if (stmt->value->type.known() && !stmt->value->type.is(TypeKind::Bool))
            fatal(stmt->value->span.begin,
                  "'assert' needs a bool, got " + describe(stmt->value->type));
        return stmt;
    }

    StmtPtr parse_return() {
        auto stmt = std::make_unique<Stmt>();
        stmt->kind = Stmt::Kind::Return;
        stmt->span.begin = advance().begin;  // 'return'
        if (!has()) {
            // 'return;' never type-checks (there is no void), so only an
            // expression can follow here.
            want_expr_starts();
            end_of_input("a return value");
        }
        if (peek().kind == Lex::Semi)
            fatal(peek().begin, "functions must return a value");
        stmt->value = parse_expr();
        need(Lex::Semi, "';'");
        stmt->span.end = lexed_.lexemes[pos_ - 1].end;
        if (stmt->value->type.known() && !(stmt->value->type == current_return_))
            fatal(stmt->value->span.begin, "return type mismatch: expected " +
                                               describe(current_return_) + ", got " +
                                               describe(stmt->value->type));
        return stmt;
    }

    StmtPtr parse_if() {
        auto stmt = std::make_unique<Stmt>();
        stmt->kind = Stmt::Kind::If;
        stmt->span.begin = advance().begin;  // 'if'
        need(Lex::LParen, "'('");
        stmt->cond = parse_expr();
        need(Lex::RParen, "')'");
        if (stmt->cond->type.known() && !stmt->cond->type.is(TypeKind::Bool))
            fatal(stmt->cond->span.begin,
                  "'if' condition needs a bool, got " + describe(stmt->cond->type));
        parse_block(stmt->then_block);
        stmt->span.end = stmt->then_block.span.end;
        if (!has()) {
            want(Lex::KwElse);
            return stmt;  // the enclosing loop reports end-of-input
        }
        if (peek().kind == Lex::KwElse) {
            ++pos_;
            stmt->has_else = true;
            parse_block(stmt->else_block);
            stmt->span.end = stmt->else_block.span.end;
        }
        return stmt;
    }

    static bool stmt_returns(const Stmt& s) {
        if (s.kind == Stmt::Kind::Return) return true;
        if (s.kind == Stmt::Kind::If)
            return s.has_else && block_returns(s.then_block) && block_returns(s.else_block);
        return false;
    }
    static bool block_returns(const Block& b) {
        for (const StmtPtr& s : b.stmts)
            if (stmt_returns(*s)) return true;
        return false;
    }

    // ---- expressions ---------------------------------------------------------

    ExprPtr parse_expr() { return parse_binary(0); }

    ExprPtr parse_binary(std::size_t level) {
        if (level >= std::size(kLevels)) return parse_postfix();
        ExprPtr lhs = parse_binary(level + 1);
        while (true) {
            if (!has()) {
                for (Lex k : kLevels[level].ops) want(k);
                return lhs;
            }
            bool matched = false;
            for (Lex k : kLevels[level].ops)
                if (peek().kind == k) matched = true;
            if (!matched) return lhs;
            const Lexeme& op_lx = advance();
            BinOp op = binop_of(op_lx.kind);
            check_lhs_operand(*lhs, op, op_lx.begin);
            ExprPtr rhs = parse_binary(level + 1);
            lhs = combine(std::move(lhs), op, std::move(rhs), op_lx.begin);
        }
    }

    /// The left operand is committed once its operator is; reject impossible
    /// combinations before even seeing the right side.
    void check_lhs_operand(const Expr& lhs, BinOp op, std::uint32_t pos) {
        const Type& t = lhs.type;
        if (!t.known()) return;
        switch (op) {
            case BinOp::Add:
                if (!t.is(TypeKind::Int) && !t.is(TypeKind::Str))
                    fatal(pos, "'+' needs int or str operands, got " + describe(t));
                break;
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Div:
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge:
                if (!t.is(TypeKind::Int))
                    fatal(pos, std::string("'") + binop_spelling(op) + "' needs int operands, got " +
                                   describe(t));
                break;
            case BinOp::Eq:
            case BinOp::Ne:
                if (t.is(TypeKind::Record))
                    fatal(pos, "records cannot be compared");
                break;
            case BinOp::And:
            case BinOp::Or:
                if (!t.is(TypeKind::Bool))
                    fatal(pos, std::string("'") + binop_spelling(op) + "' needs bool operands, got " +
                                   describe(t));
                break;
        }
    }

    ExprPtr combine(ExprPtr lhs, BinOp op, ExprPtr rhs, std::uint32_t op_pos) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Binary;
        e->op = op;
        e->span = Span{lhs->span.begin, rhs->span.end};
        if (!lhs->type.known() || !rhs->type.known()) {
            e->type = Type::unknown();
        } else {
            const Type& a = lhs->type;
            const Type& b = rhs->type;
            switch (op) {
                case BinOp::Add:
                    if (a.is(TypeKind::Int) && b.is(TypeKind::Int)) e->type = Type::int_();
                    else if (a.is(TypeKind::Str) && b.is(TypeKind::Str)) e->type = Type::str_();
                    else
                        fatal(op_pos, "'+' operand types differ: " + describe(a) + " vs " +
                                          describe(b));
                    break;
                case BinOp::Sub:
                case BinOp::Mul:
                case BinOp::Div:
                    if (!b.is(TypeKind::Int))
                        fatal(op_pos, std::string("'") + binop_spelling(op) +
                                          "' needs int operands, got " + describe(b));
                    e->type = Type::int_();
                    break;
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge:
                    if (!b.is(TypeKind::Int))
                        fatal(op_pos, std::string("'") + binop_spelling(op) +
                                          "' needs int operands, got " + describe(b));
                    e->type = Type::bool_();
                    break;
                case BinOp::Eq:
                case BinOp::Ne:
                    if (b.is(TypeKind::Record)) fatal(op_pos, "records cannot be compared");
                    if (!(a == b))
                        fatal(op_pos, "cannot compare " + describe(a) + " with " + describe(b));
                    e->type = Type::bool_();
                    break;
                case BinOp::And:
                case BinOp::Or:
                    if (!b.is(TypeKind::Bool))
                        fatal(op_pos, std::string("'") + binop_spelling(op) +
                                          "' needs bool operands, got " + describe(b));
                    e->type = Type::bool_();
                    break;
            }
        }
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (true) {
            if (!has()) {
                want(Lex::Dot);
                return e;
            }
            if (peek().kind != Lex::Dot) return e;
            const Lexeme& dot = advance();
            if (!e->type.known()) {
                // Unreachable in practice: a committed '.' implies a committed,
                // fully typed receiver. Stay safe anyway.
                want_member(Type::unknown());
                end_of_input("a member name");
            }
            if (!has()) {
                want_member(e->type);
                end_of_input("a member name");
            }
            if (peek().kind != Lex::Ident) fatal_here("expected a member name");
            if (!e->type.is(TypeKind::Record))
                fatal(dot.begin, describe(e->type) + " has no members");
            const Lexeme& member = advance();
            const RecordDecl& rec =
                program_->records[static_cast<std::size_t>(e->type.record)];

            int fidx = rec.find_field(member.text);
            if (fidx >= 0) {
                auto access = std::make_unique<Expr>();
                access->kind = Expr::Kind::FieldAccess;
                access->span = Span{e->span.begin, member.end};
                access->name = member.text;
                access->member_index = fidx;
                access->member_span = Span{member.begin, member.end};
                access->record_index = e->type.record;
                access->type = rec.fields[static_cast<std::size_t>(fidx)].type;
                access->lhs = std::move(e);
                e = std::move(access);
                continue;
            }
            int midx = rec.find_method(member.text);
            if (midx < 0)
                fatal(member.begin,
                      "'" + member.text + "' is not a member of record '" + rec.name + "'");

            auto call = std::make_unique<Expr>();
            call->kind = Expr::Kind::MethodCall;
            call->name = member.text;
            call->member_index = midx;
            call->member_span = Span{member.begin, member.end};
            call->record_index = e->type.record;
            call->span.begin = e->span.begin;
            call->lhs = std::move(e);
            const Method& method = rec.methods[static_cast<std::size_t>(midx)];
            if (!has()) {
                want(Lex::LParen);
                end_of_input("'(' (methods must be called)");
            }
            if (peek().kind != Lex::LParen)
                fatal(peek().begin, "method '" + member.text + "' must be called");
            std::vector<Type> param_types;
            for (const Param& p : method.params) param_types.push_back(p.type);
            parse_args(call->args, param_types, "method '" + rec.name + "." + method.name + "'");
            call->span.end = lexed_.lexemes[pos_ - 1].end;
            call->type = method.return_type;
            e = std::move(call);
        }
    }

    void parse_args(std::vector<ExprPtr>& out, const std::vector<Type>& params,
                    const std::string& what) {
        need(Lex::LParen, "'('");
        if (!has()) {
            if (params.empty()) want(Lex::RParen);
            else want_expr_starts();
            end_of_input("arguments");
        }
        if (peek().kind == Lex::RParen) {
            if (!params.empty())
                fatal(peek().begin, what + " expects " + std::to_string(params.size()) +
                                        " argument(s), got 0");
            ++pos_;
            return;
        }
        if (params.empty())
            fatal(peek().begin, what + " expects no arguments");
        std::size_t idx = 0;
        while (true) {
            ExprPtr arg = parse_expr();
            if (!has()) {
                if (idx + 1 < params.size()) want(Lex::Comma);
                if (idx + 1 == params.size()) want(Lex::RParen);
                end_of_input("',' or ')'");
            }
            const Lexeme& next = peek();
            if (next.kind == Lex::Comma) {
                if (idx + 1 >= params.size())
                    fatal(next.begin, what + " expects only " + std::to_string(params.size()) +
                                          " argument(s)");
                check_arg(*arg, params[idx], what, idx);
                out.push_back(std::move(arg));
                ++pos_;
                ++idx;
                continue;
            }
            if (next.kind == Lex::RParen) {
                if (idx + 1 != params.size())
                    fatal(next.begin, what + " expects " + std::to_string(params.size()) +
                                          " argument(s), got " + std::to_string(idx + 1));
                check_arg(*arg, params[idx], what, idx);
                out.push_back(std::move(arg));
                ++pos_;
                return;
            }
            fatal(next.begin, "expected ',' or ')'");
        }
    }

    void check_arg(const Expr& arg, const Type& param, const std::string& what, std::size_t idx) {
        if (arg.type.known() && !(arg.type == param))
            fatal(arg.span.begin, "argument " + std::to_string(idx + 1) + " of " + what +
                                      " expects " + describe(param) + ", got " +
                                      describe(arg.type));
    }

    ExprPtr parse_primary() {
        if (!has()) {
            want_expr_starts();
            end_of_input("an expression");
        }
        const Lexeme& lx = advance();
        auto e = std::make_unique<Expr>();
        e->span = Span{lx.begin, lx.end};
        switch (lx.kind) {
            case Lex::IntLit: {
                e->kind = Expr::Kind::IntLit;
                e->type = Type::int_();
                auto [ptr, ec] = std::from_chars(lx.text.data(), lx.text.data() + lx.text.size(),
                                                 e->int_value);
                if (ec != std::errc{} || ptr != lx.text.data() + lx.text.size())
                    fatal(lx.begin, "integer literal out of range");
                return e;
            }
            case Lex::KwTrue:
            case Lex::KwFalse:
                e->kind = Expr::Kind::BoolLit;
                e->type = Type::bool_();
                e->bool_value = lx.kind == Lex::KwTrue;
                return e;
            case Lex::StrLit:
                e->kind = Expr::Kind::StrLit;
                e->type = Type::str_();
                e->str_value = lx.text.substr(1, lx.text.size() - 2);
                return e;
            case Lex::Ident: {
                const ScopeVar* var = lookup(lx.text);
                if (!var) {
                    if (record_index_.count(lx.text))
                        fatal(lx.begin, "'" + lx.text + "' is a type, not a value");
                    fatal(lx.begin, "unknown identifier '" + lx.text + "'");
                }
                e->kind = Expr::Kind::VarRef;
                e->name = lx.text;
                e->type = var->type;
                return e;
            }
            case Lex::KwNew: {
                e->kind = Expr::Kind::New;
                if (!has()) {
                    exp_.ident_new = true;
                    end_of_input("a record name");
                }
                if (peek().kind != Lex::Ident) fatal_here("expected a record name after 'new'");
                const Lexeme& rname = advance();
                auto it = record_index_.find(rname.text);
                if (it == record_index_.end())
                    fatal(rname.begin, "unknown record '" + rname.text + "'");
                e->record_index = it->second;
                e->name = rname.text;
                const RecordDecl& rec =
                    program_->records[static_cast<std::size_t>(it->second)];
                std::vector<Type> field_types;
                for (const Field& f : rec.fields) field_types.push_back(f.type);
                parse_args(e->args, field_types, "'new " + rec.name + "'");
                e->span.end = lexed_.lexemes[pos_ - 1].end;
                e->type = Type::record_(it->second);
                return e;
            }
            case Lex::LParen: {
                e->kind = Expr::Kind::Paren;
                e->lhs = parse_expr();
                need(Lex::RParen, "')'");
                e->span.end = lexed_.lexemes[pos_ - 1].end;
                e->type = e->lhs->type;
                return e;
            }
            default:
                fatal(lx.begin,
                      std::string("expected an expression, found ") + lex_name(lx.kind));
        }
    }
};

}  // namespace

int RecordDecl::find_field(const std::string& n) const {
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i].name == n) return static_cast<int>(i);
    return -1;
}

int RecordDecl::find_method(const std::string& n) const {
    for (std::size_t i = 0; i < methods.size(); ++i)
        if (methods[i].name == n) return static_cast<int>(i);
    return -1;
}

const char* binop_spelling(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

const char* type_name(const Type& t, const Program* prog) {
    switch (t.kind) {
        case TypeKind::Int: return "int";
        case TypeKind::Bool: return "bool";
        case TypeKind::Str: return "str";
        case TypeKind::Unknown: return "<pending>";
        case TypeKind::Record:
            if (prog && t.record >= 0 &&
                t.record < static_cast<int>(prog->records.size()))
                return prog->records[static_cast<std::size_t>(t.record)].name.c_str();
            return "<record>";
    }
    return "?";
}

CheckResult check(std::string_view text) {
    Parser p(text, LexMode::Complete);
    return p.run_complete();
}

PrefixAnalysis analyze_prefix(std::string_view text) {
    Parser p(text, LexMode::Prefix);
    return p.run_prefix();
}

}  // namespace cegen::minilang
