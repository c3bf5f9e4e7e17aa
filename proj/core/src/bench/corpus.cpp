#include "cegen/bench/corpus.hpp"

#include <algorithm>
#include <cassert>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cegen/minilang/check.hpp"
#include "cegen/minilang/interp.hpp"

namespace cegen::bench {

namespace fs = std::filesystem;
using minilang::BinOp;
using minilang::Block;
using minilang::Expr;
using minilang::Program;
using minilang::Span;
using minilang::Stmt;
using minilang::Type;

std::string BugCase::buggy_text() const {
    return splice(SourceBuffer(source), hunk, buggy_hunk).text();
}

std::vector<SeedProgram> load_seed_dir(const std::string& dir) {
    std::vector<SeedProgram> seeds;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".mini") continue;
        SeedProgram seed;
        seed.name = entry.path().stem().string();
        std::ifstream in(entry.path());
        std::stringstream ss;
        ss << in.rdbuf();
        seed.text = ss.str();

        fs::path sidecar = entry.path();
        sidecar.replace_extension(".hidden");
        if (fs::exists(sidecar)) {
            std::ifstream hin(sidecar);
            std::string line;
            while (std::getline(hin, line)) {
                while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                    line.pop_back();
                if (!line.empty()) seed.hidden_asserts.push_back(line);
            }
        }
        seeds.push_back(std::move(seed));
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const SeedProgram& a, const SeedProgram& b) { return a.name < b.name; });
    if (seeds.empty()) throw std::runtime_error("no .mini seeds in " + dir);
    return seeds;
}

namespace {

// ---- mutation site collection ------------------------------------------------

struct OpSwapSite {
    const Expr* node;
    std::vector<BinOp> alternatives;
};
struct IdentSubSite {
    const Expr* node;
    std::vector<std::string> alternatives;
};
struct LitSite {
    const Expr* node;
};
struct CallSwapSite {
    const Expr* node;
    std::vector<std::string> alternatives;
};
struct NegateSite {
    const Stmt* node;  // If statement
};

struct Sites {
    std::vector<std::pair<OpSwapSite, Span>> ops;       // site, enclosing stmt span
    std::vector<std::pair<IdentSubSite, Span>> idents;
    std::vector<std::pair<LitSite, Span>> lits;
    std::vector<std::pair<CallSwapSite, Span>> calls;
    std::vector<std::pair<NegateSite, Span>> negates;
};

std::vector<BinOp> op_alternatives(BinOp op, const Type& operand) {
    using enum BinOp;
    switch (op) {
        case Add:
        case Sub:
        case Mul:
        case Div:
            if (!operand.is(minilang::TypeKind::Int)) return {};  // str '+' has no peer
            {
                std::vector<BinOp> all = {Add, Sub, Mul, Div};
                all.erase(std::remove(all.begin(), all.end(), op), all.end());
                return all;
            }
        case Lt:
        case Le:
        case Gt:
        case Ge: {
            std::vector<BinOp> all = {Lt, Le, Gt, Ge};
            all.erase(std::remove(all.begin(), all.end(), op), all.end());
            return all;
        }
        case Eq: return {Ne};
        case Ne: return {Eq};
        case And: return {Or};
        case Or: return {And};
    }
    return {};
}

class SiteCollector {
public:
    SiteCollector(const Program& prog, Sites& out) : prog_(prog), out_(out) {}

    void collect() {
        for (const auto& rec : prog_.records) {
            for (const auto& method : rec.methods) {
                scope_.clear();
                for (const auto& f : rec.fields) scope_.emplace_back(f.name, f.type);
                for (const auto& p : method.params) scope_.emplace_back(p.name, p.type);
                walk_block(method.body);
            }
        }
    }

private:
    const Program& prog_;
    Sites& out_;
    std::vector<std::pair<std::string, Type>> scope_;

    void walk_block(const Block& block) {
        const std::size_t scope_mark = scope_.size();
        for (const auto& stmt : block.stmts) walk_stmt(*stmt);
        scope_.resize(scope_mark);
    }

    void walk_stmt(const Stmt& stmt) {
        switch (stmt.kind) {
            case Stmt::Kind::Decl:
                walk_expr(*stmt.value, stmt.span);
                scope_.emplace_back(stmt.name, stmt.decl_type);
                break;
            case Stmt::Kind::Assign:
            case Stmt::Kind::Assert:
            case Stmt::Kind::Return:
                walk_expr(*stmt.value, stmt.span);
                break;
            case Stmt::Kind::If: {
                // The hunk of a condition mutation is the whole if statement;
                // regenerating just the condition would leave an easier cloze.
                walk_expr(*stmt.cond, stmt.span);
                out_.negates.push_back({NegateSite{&stmt}, stmt.span});
                walk_block(stmt.then_block);
                if (stmt.has_else) walk_block(stmt.else_block);
                break;
            }
        }
    }

    void walk_expr(const Expr& e, const Span& stmt_span) {
        switch (e.kind) {
            case Expr::Kind::Binary: {
                auto alts = op_alternatives(e.op, e.lhs->type);
                if (!alts.empty())
                    out_.ops.push_back({OpSwapSite{&e, std::move(alts)}, stmt_span});
                walk_expr(*e.lhs, stmt_span);
                walk_expr(*e.rhs, stmt_span);
                break;
            }
            case Expr::Kind::VarRef: {
                std::vector<std::string> alts;
                for (const auto& [name, type] : scope_)
                    if (name != e.name && type == e.type) alts.push_back(name);
                if (!alts.empty())
                    out_.idents.push_back({IdentSubSite{&e, std::move(alts)}, stmt_span});
                break;
            }
            case Expr::Kind::IntLit:
                out_.lits.push_back({LitSite{&e}, stmt_span});
                break;
            case Expr::Kind::MethodCall: {
                const auto& rec = prog_.records[static_cast<std::size_t>(e.record_index)];
                const auto& current = rec.methods[static_cast<std::size_t>(e.member_index)];
                std::vector<std::string> alts;
                for (const auto& m : rec.methods) {
                    if (m.name == current.name) continue;
                    if (!(m.return_type == current.return_type)) continue;
                    if (m.params.size() != current.params.size()) continue;
                    bool same = true;
                    for (std::size_t i = 0; i < m.params.size(); ++i)
                        same &= m.params[i].type == current.params[i].type;
                    if (same) alts.push_back(m.name);
                }
                if (!alts.empty())
                    out_.calls.push_back({CallSwapSite{&e, std::move(alts)}, stmt_span});
                walk_expr(*e.lhs, stmt_span);
                for (const auto& a : e.args) walk_expr(*a, stmt_span);
                break;
            }
            case Expr::Kind::FieldAccess:
            case Expr::Kind::Paren:
                walk_expr(*e.lhs, stmt_span);
                break;
            case Expr::Kind::New:
                for (const auto& a : e.args) walk_expr(*a, stmt_span);
                break;
            default: break;
        }
    }
};

std::string replace_span(const std::string& text, Span span, const std::string& replacement) {
    return text.substr(0, span.begin) + replacement + text.substr(span.end);
}

/// One candidate edit: the enclosing statement span and the statement's new
/// text with the edit applied.
struct Edit {
    Span stmt_span;
    std::string buggy_stmt;
};

std::optional<Edit> pick_edit(const std::string& source, const Sites& sites, Rng& rng) {
    // Kinds that actually have sites, in a fixed order.
    enum Kind { Op, Ident, Lit, Call, Negate };
    std::vector<Kind> kinds;
    if (!sites.ops.empty()) kinds.push_back(Op);
    if (!sites.idents.empty()) kinds.push_back(Ident);
    if (!sites.lits.empty()) kinds.push_back(Lit);
    if (!sites.calls.empty()) kinds.push_back(Call);
    if (!sites.negates.empty()) kinds.push_back(Negate);
    if (kinds.empty()) return std::nullopt;

    Kind kind = kinds[rng.next_below(kinds.size())];
    auto stmt_text = [&](Span s) { return source.substr(s.begin, s.end - s.begin); };
    auto within = [&](Span stmt, Span inner) {
        return Span{inner.begin - stmt.begin, inner.end - stmt.begin};
    };

    switch (kind) {
        case Op: {
            const auto& [site, stmt_span] = sites.ops[rng.next_below(sites.ops.size())];
            BinOp alt = site.alternatives[rng.next_below(site.alternatives.size())];
            // The operator lexeme sits between the operand spans.
            const Expr& e = *site.node;
            std::string stmt = stmt_text(stmt_span);
            std::size_t op_begin = e.lhs->span.end - stmt_span.begin;
            std::size_t op_end = e.rhs->span.begin - stmt_span.begin;
            std::string middle = stmt.substr(op_begin, op_end - op_begin);
            auto pos = middle.find(binop_spelling(e.op));
            if (pos == std::string::npos) return std::nullopt;
            middle.replace(pos, std::string(binop_spelling(e.op)).size(),
                           binop_spelling(alt));
            return Edit{stmt_span, stmt.substr(0, op_begin) + middle + stmt.substr(op_end)};
        }
        case Ident: {
            const auto& [site, stmt_span] = sites.idents[rng.next_below(sites.idents.size())];
            const std::string& alt =
                site.alternatives[rng.next_below(site.alternatives.size())];
            Span rel = within(stmt_span, site.node->span);
            std::string stmt = stmt_text(stmt_span);
            return Edit{stmt_span, replace_span(stmt, rel, alt)};
        }
        case Lit: {
            const auto& [site, stmt_span] = sites.lits[rng.next_below(sites.lits.size())];
            std::int64_t v = site.node->int_value;
            std::int64_t nv = v == 0 ? 1 : (rng.next_below(2) == 0 ? v - 1 : v + 1);
            if (nv < 0) nv = v + 1;
            Span rel = within(stmt_span, site.node->span);
            std::string stmt = stmt_text(stmt_span);
            return Edit{stmt_span, replace_span(stmt, rel, std::to_string(nv))};
        }
        case Call: {
            const auto& [site, stmt_span] = sites.calls[rng.next_below(sites.calls.size())];
            const std::string& alt =
                site.alternatives[rng.next_below(site.alternatives.size())];
            Span rel = within(stmt_span, site.node->member_span);
            std::string stmt = stmt_text(stmt_span);
            return Edit{stmt_span, replace_span(stmt, rel, alt)};
        }
        case Negate: {
            const auto& [site, stmt_span] = sites.negates[rng.next_below(sites.negates.size())];
            Span rel = within(stmt_span, site.node->cond->span);
            std::string stmt = stmt_text(stmt_span);
            std::string cond = stmt.substr(rel.begin, rel.end - rel.begin);
            return Edit{stmt_span, replace_span(stmt, rel, "(" + cond + ") == false")};
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<BugCase> mutate(const SeedProgram& seed, Rng& rng, int max_attempts) {
    minilang::CheckResult checked = minilang::check(seed.text);
    if (!checked.valid())
        throw std::invalid_argument("seed '" + seed.name + "' does not check: " +
                                    checked.diagnostic->message);
    if (!minilang::run_tests(*checked.program).all_pass())
        throw std::invalid_argument("seed '" + seed.name + "' does not pass its own asserts");

    Sites sites;
    SiteCollector(*checked.program, sites).collect();

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::optional<Edit> edit = pick_edit(seed.text, sites, rng);
        if (!edit) return std::nullopt;

        std::string reference = seed.text.substr(edit->stmt_span.begin,
                                                 edit->stmt_span.end - edit->stmt_span.begin);
        if (edit->buggy_stmt == reference) continue;

        std::string buggy =
            replace_span(seed.text, edit->stmt_span, edit->buggy_stmt);
        minilang::CheckResult mutated = minilang::check(buggy);
        // Mutations are type-preserving by construction.
        assert(mutated.valid());
        if (!mutated.valid()) continue;
        if (minilang::run_tests(*mutated.program).all_pass()) continue;  // not exposed

        BugCase bug;
        bug.source = seed.text;
        bug.hunk = HunkRange{edit->stmt_span.begin, edit->stmt_span.end};
        bug.buggy_hunk = edit->buggy_stmt;
        bug.reference_fix = reference;
        bug.hidden_asserts = seed.hidden_asserts;
        return bug;
    }
    return std::nullopt;
}

std::vector<BugCase> build_corpus(const std::vector<SeedProgram>& seeds, int count, Rng& rng) {
    std::vector<BugCase> corpus;
    int failures = 0;
    for (int i = 0; static_cast<int>(corpus.size()) < count; ++i) {
        if (failures > count * 10 + 100) break;  // seeds exhausted
        const SeedProgram& seed = seeds[static_cast<std::size_t>(i) % seeds.size()];
        std::optional<BugCase> bug = mutate(seed, rng);
        if (!bug) {
            ++failures;
            continue;
        }
        bug->id = seed.name + "-" + std::to_string(corpus.size());
        corpus.push_back(std::move(*bug));
    }
    return corpus;
}

void save_corpus(const std::string& path, const std::vector<BugCase>& corpus) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BugCase& b : corpus) {
        arr.push_back({{"id", b.id},
                       {"source", b.source},
                       {"hunk", {b.hunk.start, b.hunk.end}},
                       {"buggy_hunk", b.buggy_hunk},
                       {"reference_fix", b.reference_fix},
                       {"hidden_asserts", b.hidden_asserts}});
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << arr.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<BugCase> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json arr;
    try {
        in >> arr;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("corpus " + path + " is not valid JSON: " + e.what());
    }
    if (!arr.is_array()) throw std::runtime_error("corpus " + path + " is not a JSON array");
    std::vector<BugCase> corpus;
    for (const auto& item : arr) {
        BugCase b;
        b.id = item.at("id").get<std::string>();
        b.source = item.at("source").get<std::string>();
        b.hunk.start = item.at("hunk").at(0).get<std::size_t>();
        b.hunk.end = item.at("hunk").at(1).get<std::size_t>();
        b.buggy_hunk = item.at("buggy_hunk").get<std::string>();
        b.reference_fix = item.at("reference_fix").get<std::string>();
        for (const auto& h : item.at("hidden_asserts"))
            b.hidden_asserts.push_back(h.get<std::string>());
        corpus.push_back(std::move(b));
    }
    return corpus;
}

}  // namespace cegen::bench
