#include "cegen/engine/minilang_engine.hpp"

#include <set>
#include <stdexcept>

#include "cegen/minilang/check.hpp"
#include "cegen/minilang/lexer.hpp"

namespace cegen::engine {

namespace {

using minilang::Boundary;
using minilang::Expected;
using minilang::Lex;
using minilang::PrefixAnalysis;

bool fuses_with_suffix(const SourceBuffer& buf, std::size_t caret) {
    if (caret >= buf.size()) return false;
    char c = buf.at(caret);
    // A suggestion inserted at the caret sits flush against the suffix; these
    // characters would merge with a trailing word, operator, or string.
    return minilang::is_ident_char(c) || c == '=' || c == '&' || c == '|' || c == '"';
}

/// Candidate full lexemes the boundary word/operator could still become,
/// drawn from what the grammar and symbol tables allow at this position.
std::set<std::string> word_candidates(const PrefixAnalysis& a) {
    std::set<std::string> out;
    const Expected& e = a.expected;
    const std::string& w = a.boundary.text;
    auto consider = [&](std::string_view full) {
        if (full.size() >= w.size() && full.substr(0, w.size()) == w)
            out.insert(std::string(full));
    };
    for (unsigned k = 0; k < 64; ++k) {
        if (!(e.mask >> k & 1)) continue;
        std::string_view sp = minilang::lex_spelling(static_cast<Lex>(k));
        if (!sp.empty()) consider(sp);
    }
    if (e.ident_use)
        for (const auto& v : a.scope_vars) consider(v.name);
    if (e.ident_type || e.ident_new)
        for (const auto& r : a.record_names) consider(r);
    if (e.member)
        for (const auto& m : e.member_names) consider(m);
    return out;
}

CompletionResult from_candidates(const std::set<std::string>& candidates, std::size_t strip,
                                 bool fusion_risk) {
    std::vector<std::string> suffixes;
    for (const std::string& c : candidates) {
        std::string tail = c.substr(strip);
        if (tail.empty()) return CompletionResult::unknown();  // already complete here
        suffixes.push_back(std::move(tail));
    }
    if (suffixes.empty()) return CompletionResult::none();
    if (fusion_risk) return CompletionResult::unknown();
    return CompletionResult::of(std::move(suffixes));
}

}  // namespace

CompletionResult MiniLangEngine::complete(const SourceBuffer& buf, std::size_t caret) {
    if (caret > buf.size()) throw std::out_of_range("complete: caret out of range");

    PrefixAnalysis a = minilang::analyze_prefix(buf.view().substr(0, caret));
    if (a.dead()) return CompletionResult::none();

    const Expected& e = a.expected;
    const bool fusion_risk = fuses_with_suffix(buf, caret);

    switch (a.boundary.kind) {
        case Boundary::Kind::None: {
            if (!e.any()) return CompletionResult::none();
            // Member access is the one boundary-free position with an
            // enumerable follow set: right after `recv.`.
            const bool member_only = e.member && e.mask == 0 && !e.ident_use &&
                                     !e.ident_binder && !e.ident_type && !e.ident_new;
            if (member_only) {
                if (!e.member_receiver_known) return CompletionResult::unknown();
                if (e.member_names.empty()) return CompletionResult::none();
                if (fusion_risk) return CompletionResult::unknown();
                return CompletionResult::of(e.member_names);
            }
            return CompletionResult::unknown();
        }
        case Boundary::Kind::Word: {
            if (e.ident_binder) return CompletionResult::unknown();
            if (e.member && !e.member_receiver_known) return CompletionResult::unknown();
            return from_candidates(word_candidates(a), a.boundary.text.size(), fusion_risk);
        }
        case Boundary::Kind::OpPartial: {
            std::set<std::string> candidates;
            const std::string& o = a.boundary.text;
            for (unsigned k = 0; k < 64; ++k) {
                if (!(e.mask >> k & 1)) continue;
                std::string_view sp = minilang::lex_spelling(static_cast<Lex>(k));
                if (sp.size() >= o.size() && sp.substr(0, o.size()) == o)
                    candidates.insert(std::string(sp));
            }
            return from_candidates(candidates, o.size(), fusion_risk);
        }
        case Boundary::Kind::Number:
            return e.has(Lex::IntLit) ? CompletionResult::unknown() : CompletionResult::none();
        case Boundary::Kind::StrPartial:
            return e.has(Lex::StrLit) ? CompletionResult::unknown() : CompletionResult::none();
    }
    return CompletionResult::unknown();
}

}  // namespace cegen::engine
