#include "cegen/minilang/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_map>

namespace cegen::minilang {

namespace {

const std::unordered_map<std::string_view, Lex> kKeywords = {
    {"record", Lex::KwRecord}, {"int", Lex::KwInt},       {"bool", Lex::KwBool},
    {"str", Lex::KwStr},       {"assert", Lex::KwAssert}, {"return", Lex::KwReturn},
    {"if", Lex::KwIf},         {"else", Lex::KwElse},     {"new", Lex::KwNew},
    {"true", Lex::KwTrue},     {"false", Lex::KwFalse},
};

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

}  // namespace

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

const char* lex_name(Lex k) {
    switch (k) {
        case Lex::KwRecord: return "'record'";
        case Lex::KwInt: return "'int'";
        case Lex::KwBool: return "'bool'";
        case Lex::KwStr: return "'str'";
        case Lex::KwAssert: return "'assert'";
        case Lex::KwReturn: return "'return'";
        case Lex::KwIf: return "'if'";
        case Lex::KwElse: return "'else'";
        case Lex::KwNew: return "'new'";
        case Lex::KwTrue: return "'true'";
        case Lex::KwFalse: return "'false'";
        case Lex::Ident: return "identifier";
        case Lex::IntLit: return "integer literal";
        case Lex::StrLit: return "string literal";
        case Lex::LParen: return "'('";
        case Lex::RParen: return "')'";
        case Lex::LBrace: return "'{'";
        case Lex::RBrace: return "'}'";
        case Lex::Semi: return "';'";
        case Lex::Comma: return "','";
        case Lex::Dot: return "'.'";
        case Lex::Assign: return "'='";
        case Lex::Plus: return "'+'";
        case Lex::Minus: return "'-'";
        case Lex::Star: return "'*'";
        case Lex::Slash: return "'/'";
        case Lex::Eq: return "'=='";
        case Lex::Ne: return "'!='";
        case Lex::Lt: return "'<'";
        case Lex::Le: return "'<='";
        case Lex::Gt: return "'>'";
        case Lex::Ge: return "'>='";
        case Lex::AndAnd: return "'&&'";
        case Lex::OrOr: return "'||'";
    }
    return "?";
}

std::string_view lex_spelling(Lex k) {
    switch (k) {
        case Lex::KwRecord: return "record";
        case Lex::KwInt: return "int";
        case Lex::KwBool: return "bool";
        case Lex::KwStr: return "str";
        case Lex::KwAssert: return "assert";
        case Lex::KwReturn: return "return";
        case Lex::KwIf: return "if";
        case Lex::KwElse: return "else";
        case Lex::KwNew: return "new";
        case Lex::KwTrue: return "true";
        case Lex::KwFalse: return "false";
        case Lex::LParen: return "(";
        case Lex::RParen: return ")";
        case Lex::LBrace: return "{";
        case Lex::RBrace: return "}";
        case Lex::Semi: return ";";
        case Lex::Comma: return ",";
        case Lex::Dot: return ".";
        case Lex::Assign: return "=";
        case Lex::Plus: return "+";
        case Lex::Minus: return "-";
        case Lex::Star: return "*";
        case Lex::Slash: return "/";
        case Lex::Eq: return "==";
        case Lex::Ne: return "!=";
        case Lex::Lt: return "<";
        case Lex::Le: return "<=";
        case Lex::Gt: return ">";
        case Lex::Ge: return ">=";
        case Lex::AndAnd: return "&&";
        case Lex::OrOr: return "||";
        default: return {};
    }
}

LexOutput lex(std::string_view text, LexMode mode) {
    LexOutput out;
    const std::size_t n = text.size();
    std::size_t i = 0;

    auto fail = [&](std::size_t pos, std::string msg) {
        out.error = LexDiag{static_cast<std::uint32_t>(pos), std::move(msg)};
    };
    auto push = [&](Lex k, std::size_t b, std::size_t e) {
        out.lexemes.push_back(
            Lexeme{k, std::string(text.substr(b, e - b)), static_cast<std::uint32_t>(b),
                   static_cast<std::uint32_t>(e)});
    };

    while (i < n) {
        char c = text[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        std::size_t b = i;

        if (is_ident_start(c)) {
            while (i < n && is_ident_char(text[i])) ++i;
            std::string_view word = text.substr(b, i - b);
            if (i == n && mode == LexMode::Prefix) {
                out.boundary = {Boundary::Kind::Word, std::string(word),
                                static_cast<std::uint32_t>(b)};
                return out;
            }
            auto kw = kKeywords.find(word);
            push(kw == kKeywords.end() ? Lex::Ident : kw->second, b, i);
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i < n && is_ident_start(text[i])) {
                fail(i, "identifier character directly after a number");
                return out;
            }
            if (i == n && mode == LexMode::Prefix) {
                out.boundary = {Boundary::Kind::Number, std::string(text.substr(b, i - b)),
                                static_cast<std::uint32_t>(b)};
                return out;
            }
            push(Lex::IntLit, b, i);
            continue;
        }

        if (c == '"') {
            ++i;
            while (i < n && text[i] != '"' && text[i] != '\n') ++i;
            if (i < n && text[i] == '"') {
                ++i;
                push(Lex::StrLit, b, i);
                continue;
            }
            if (i < n && text[i] == '\n') {
                fail(i, "newline inside string literal");
                return out;
            }
            // Ran off the end of the text.
            if (mode == LexMode::Prefix) {
                out.boundary = {Boundary::Kind::StrPartial, std::string(text.substr(b)),
                                static_cast<std::uint32_t>(b)};
                return out;
            }
            fail(b, "unterminated string literal");
            return out;
        }

        auto two = [&](char second, Lex pair, Lex single) {
            if (i + 1 < n && text[i + 1] == second) {
                push(pair, b, i + 2);
                i += 2;
                return;
            }
            if (i + 1 == n && mode == LexMode::Prefix) {
                // '=', '<', '>' at the very end may still grow into '==' etc.
                out.boundary = {Boundary::Kind::OpPartial, std::string(1, c),
                                static_cast<std::uint32_t>(b)};
                i = n;
                return;
            }
            push(single, b, i + 1);
            ++i;
        };

        switch (c) {
            case '(': push(Lex::LParen, b, b + 1); ++i; break;
            case ')': push(Lex::RParen, b, b + 1); ++i; break;
            case '{': push(Lex::LBrace, b, b + 1); ++i; break;
            case '}': push(Lex::RBrace, b, b + 1); ++i; break;
            case ';': push(Lex::Semi, b, b + 1); ++i; break;
            case ',': push(Lex::Comma, b, b + 1); ++i; break;
            case '.': push(Lex::Dot, b, b + 1); ++i; break;
            case '+': push(Lex::Plus, b, b + 1); ++i; break;
            case '-': push(Lex::Minus, b, b + 1); ++i; break;
            case '*': push(Lex::Star, b, b + 1); ++i; break;
            case '/': push(Lex::Slash, b, b + 1); ++i; break;
            case '=': two('=', Lex::Eq, Lex::Assign); break;
            case '<': two('=', Lex::Le, Lex::Lt); break;
            case '>': two('=', Lex::Ge, Lex::Gt); break;
            case '!':
                if (i + 1 < n && text[i + 1] == '=') {
                    push(Lex::Ne, b, i + 2);
                    i += 2;
                } else if (i + 1 == n && mode == LexMode::Prefix) {
                    out.boundary = {Boundary::Kind::OpPartial, "!", static_cast<std::uint32_t>(b)};
                    i = n;
                } else {
                    fail(b, "'!' is only valid as part of '!='");
                    return out;
                }
                break;
            case '&':
                if (i + 1 < n && text[i + 1] == '&') {
                    push(Lex::AndAnd, b, i + 2);
                    i += 2;
                } else if (i + 1 == n && mode == LexMode::Prefix) {
                    out.boundary = {Boundary::Kind::OpPartial, "&", static_cast<std::uint32_t>(b)};
                    i = n;
                } else {
                    fail(b, "'&' is only valid as part of '&&'");
                    return out;
                }
                break;
            case '|':
                if (i + 1 < n && text[i + 1] == '|') {
                    push(Lex::OrOr, b, i + 2);
                    i += 2;
                } else if (i + 1 == n && mode == LexMode::Prefix) {
                    out.boundary = {Boundary::Kind::OpPartial, "|", static_cast<std::uint32_t>(b)};
                    i = n;
                } else {
                    fail(b, "'|' is only valid as part of '||'");
                    return out;
                }
                break;
            default:
                fail(b, std::string("character '") + c + "' cannot start a lexeme");
                return out;
        }
    }
    return out;
}

}  // namespace cegen::minilang
